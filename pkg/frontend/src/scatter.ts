import { HULL_FILL, NEUTRAL } from "./colors.js";
import type { LayoutResponse } from "./types.js";

const SVG_NS = "http://www.w3.org/2000/svg";
const W = 1000;
const H = 1000;
const MARGIN = 40;
const PICK_RADIUS = 12; // px, for the hover tooltip

export type ColorOf = (componentId: number) => string;

interface Placed {
  index: number;
  x: number; // view coords after the fit transform
  y: number;
}

/**
 * 2D projection panel: every point as a dot, highlighted components wrapped
 * in their convex hulls (muted fill, component-colored outline). Wheel zooms
 * around the cursor, dragging pans, hovering shows the point id.
 *
 * All geometry (coords, hulls) comes from the server; this view only maps
 * data space to screen space.
 */
export class ScatterView {
  readonly el: HTMLElement;
  readonly svg: SVGSVGElement;
  readonly tooltip: HTMLElement;

  private scene: SVGGElement;
  private placed: Placed[] = [];
  private lastLayout: LayoutResponse | null = null;
  private k = 1;
  private tx = 0;
  private ty = 0;
  private dragging: { x: number; y: number } | null = null;

  constructor(doc: Document = document) {
    this.el = doc.createElement("div");
    this.el.className = "scatter";
    this.svg = doc.createElementNS(SVG_NS, "svg") as SVGSVGElement;
    this.svg.setAttribute("viewBox", `0 0 ${W} ${H}`);
    this.scene = doc.createElementNS(SVG_NS, "g") as SVGGElement;
    this.svg.appendChild(this.scene);
    this.tooltip = doc.createElement("div");
    this.tooltip.className = "tooltip";
    this.tooltip.style.display = "none";
    this.el.appendChild(this.svg);
    this.el.appendChild(this.tooltip);

    this.svg.addEventListener("wheel", (ev) => this.onWheel(ev as WheelEvent));
    this.svg.addEventListener("mousedown", (ev) => {
      this.dragging = { x: ev.clientX, y: ev.clientY };
    });
    this.svg.addEventListener("mouseup", () => (this.dragging = null));
    this.svg.addEventListener("mouseleave", () => {
      this.dragging = null;
      this.tooltip.style.display = "none";
    });
    this.svg.addEventListener("mousemove", (ev) => this.onMove(ev as MouseEvent));
  }

  render(layout: LayoutResponse | null, colorOf: ColorOf): void {
    const doc = this.el.ownerDocument;
    this.scene.replaceChildren();
    this.placed = [];
    this.lastLayout = layout;
    if (layout === null || layout.n === 0) return;

    // uniform fit of the data bounds into the margined viewport
    let xMin = Infinity, xMax = -Infinity, yMin = Infinity, yMax = -Infinity;
    for (const [x, y] of layout.coords) {
      if (x < xMin) xMin = x;
      if (x > xMax) xMax = x;
      if (y < yMin) yMin = y;
      if (y > yMax) yMax = y;
    }
    const span = Math.max(xMax - xMin, yMax - yMin) || 1;
    const s = (Math.min(W, H) - 2 * MARGIN) / span;
    const px = (x: number) => MARGIN + (x - xMin) * s;
    // flip y so "up" in data space is up on screen
    const py = (y: number) => H - MARGIN - (y - yMin) * s;

    for (const comp of layout.components) {
      if (comp.hull.length < 2) continue;
      const poly = doc.createElementNS(SVG_NS, "polygon");
      const pts = comp.hull.map(([x, y]) => `${px(x)},${py(y)}`).join(" ");
      poly.setAttribute("points", pts);
      poly.setAttribute("class", "hull");
      poly.setAttribute("data-comp", String(comp.id));
      poly.setAttribute("fill", HULL_FILL);
      poly.setAttribute("stroke", colorOf(comp.id));
      poly.setAttribute("stroke-width", "3");
      this.scene.appendChild(poly);
    }

    for (let i = 0; i < layout.n; i++) {
      const [x, y] = layout.coords[i];
      const cid = layout.component_of[i];
      const dot = doc.createElementNS(SVG_NS, "circle");
      dot.setAttribute("cx", String(px(x)));
      dot.setAttribute("cy", String(py(y)));
      dot.setAttribute("r", "4");
      dot.setAttribute("class", "pt");
      dot.setAttribute("data-index", String(i));
      if (cid !== null) dot.setAttribute("data-comp", String(cid));
      dot.setAttribute("fill", cid === null ? NEUTRAL : colorOf(cid));
      this.scene.appendChild(dot);
      this.placed.push({ index: i, x: px(x), y: py(y) });
    }
    this.applyTransform();
  }

  resetView(): void {
    this.k = 1;
    this.tx = 0;
    this.ty = 0;
    this.applyTransform();
  }

  private applyTransform(): void {
    this.scene.setAttribute(
      "transform", `translate(${this.tx} ${this.ty}) scale(${this.k})`);
  }

  /** Viewport pixel position of the mouse, in viewBox units. */
  private local(ev: MouseEvent): { x: number; y: number } {
    const rect = this.svg.getBoundingClientRect();
    const sx = rect.width > 0 ? W / rect.width : 1;
    const sy = rect.height > 0 ? H / rect.height : 1;
    return { x: (ev.clientX - rect.left) * sx, y: (ev.clientY - rect.top) * sy };
  }

  private onWheel(ev: WheelEvent): void {
    ev.preventDefault();
    const { x, y } = this.local(ev);
    const factor = Math.exp(-ev.deltaY * 0.002);
    const k2 = Math.min(50, Math.max(0.2, this.k * factor));
    // keep the point under the cursor fixed while scaling
    this.tx = x - ((x - this.tx) / this.k) * k2;
    this.ty = y - ((y - this.ty) / this.k) * k2;
    this.k = k2;
    this.applyTransform();
  }

  private onMove(ev: MouseEvent): void {
    if (this.dragging) {
      const rect = this.svg.getBoundingClientRect();
      const sx = rect.width > 0 ? W / rect.width : 1;
      this.tx += (ev.clientX - this.dragging.x) * sx;
      this.ty += (ev.clientY - this.dragging.y) * sx;
      this.dragging = { x: ev.clientX, y: ev.clientY };
      this.applyTransform();
      return;
    }
    const { x, y } = this.local(ev);
    // nearest point in scene space
    const dx = (x - this.tx) / this.k;
    const dy = (y - this.ty) / this.k;
    let best: Placed | null = null;
    let bestD2 = (PICK_RADIUS / this.k) ** 2;
    for (const p of this.placed) {
      const d2 = (p.x - dx) ** 2 + (p.y - dy) ** 2;
      if (d2 < bestD2) {
        bestD2 = d2;
        best = p;
      }
    }
    if (best === null) {
      this.tooltip.style.display = "none";
      return;
    }
    this.tooltip.textContent = this.describe(best.index);
    this.tooltip.style.display = "block";
    this.tooltip.style.left = `${ev.clientX + 12}px`;
    this.tooltip.style.top = `${ev.clientY + 12}px`;
  }

  private describe(index: number): string {
    const cid = this.lastLayout?.component_of[index];
    return cid === null || cid === undefined
      ? `point ${index}`
      : `point ${index} | component ${cid}`;
  }
}
