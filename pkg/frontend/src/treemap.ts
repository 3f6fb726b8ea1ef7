import { GRAY } from "./colors.js";
import type { TreemapRect } from "./types.js";

const SVG_NS = "http://www.w3.org/2000/svg";
const SIZE = 1000; // rects arrive in the unit square; scale up for crisper attrs

export type ColorOf = (componentId: number) => string;

/**
 * Nested treemap of the simplified hierarchy. Component-of-interest boxes
 * are clickable and toggle selection; structural boxes (root, retained
 * interior nodes, outlier residue) are translucent gray and inert.
 */
export class TreemapView {
  readonly el: SVGSVGElement;
  onToggle: (componentId: number) => void = () => {};

  constructor(doc: Document = document) {
    this.el = doc.createElementNS(SVG_NS, "svg") as SVGSVGElement;
    this.el.setAttribute("viewBox", `0 0 ${SIZE} ${SIZE}`);
    this.el.setAttribute("class", "treemap");
    this.el.addEventListener("click", (ev) => {
      const target = ev.target as Element | null;
      if (!target || !target.classList.contains("selectable")) return;
      const id = target.getAttribute("data-node");
      if (id !== null) this.onToggle(Number(id));
    });
  }

  render(rects: TreemapRect[], selection: ReadonlySet<number>, colorOf: ColorOf): void {
    const doc = this.el.ownerDocument;
    this.el.replaceChildren();

    if (rects.length === 0) {
      const msg = doc.createElementNS(SVG_NS, "text");
      msg.setAttribute("x", String(SIZE / 2));
      msg.setAttribute("y", String(SIZE / 2));
      msg.setAttribute("text-anchor", "middle");
      msg.setAttribute("class", "empty-state");
      msg.textContent = "no hierarchy yet: upload a dataset and build its tree";
      this.el.appendChild(msg);
      return;
    }

    // parents first so nested children paint on top
    const ordered = [...rects].sort((a, b) => a.depth - b.depth);
    for (const r of ordered) {
      const box = doc.createElementNS(SVG_NS, "rect");
      box.setAttribute("x", String(r.x * SIZE));
      box.setAttribute("y", String(r.y * SIZE));
      box.setAttribute("width", String(Math.max(0, r.w * SIZE)));
      box.setAttribute("height", String(Math.max(0, r.h * SIZE)));
      box.setAttribute("data-node", String(r.node));
      box.setAttribute("data-depth", String(r.depth));

      if (r.component_of_interest) {
        const selected = selection.has(r.node);
        box.setAttribute("class", selected ? "coi selectable selected" : "coi selectable");
        box.setAttribute("fill", colorOf(r.node));
        box.setAttribute("stroke", selected ? "#1a1a1a" : "#ffffff");
        box.setAttribute("stroke-width", selected ? "6" : "2");
      } else {
        box.setAttribute("class", r.outlier ? "frame outlier" : "frame");
        box.setAttribute("fill", GRAY);
        box.setAttribute("fill-opacity", "0.25");
        box.setAttribute("stroke", "#ffffff");
        box.setAttribute("stroke-width", "2");
        if (r.outlier) box.setAttribute("stroke-dasharray", "8 4");
        box.setAttribute("pointer-events", "none");
      }

      const title = doc.createElementNS(SVG_NS, "title");
      const pers = r.persistence === null ? "inf" : r.persistence.toPrecision(4);
      title.textContent = `node ${r.node} | size ${r.size} | persistence ${pers}`;
      box.appendChild(title);
      this.el.appendChild(box);
    }
  }
}
