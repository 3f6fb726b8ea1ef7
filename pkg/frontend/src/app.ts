import { ServiceApi } from "./api.js";
import { componentColor, persistenceColor, persistenceExtent } from "./colors.js";
import { ScatterView } from "./scatter.js";
import { downloadPng } from "./snapshot.js";
import { Explorer, ExplorerState } from "./state.js";
import { TreemapView } from "./treemap.js";
import type { ColorMode, MstRequest } from "./types.js";

export interface App {
  explorer: Explorer;
  treemap: TreemapView;
  scatter: ScatterView;
  root: HTMLElement;
}

function el<K extends keyof HTMLElementTagNameMap>(
  doc: Document, tag: K, className?: string, text?: string,
): HTMLElementTagNameMap[K] {
  const node = doc.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

/**
 * The one color rule shared by both views, so treemap boxes, hulls, and
 * points can never disagree about a component:
 * - "persistence" mode colors by the sequential scale (gray = infinite);
 * - "component" mode (and "label", which has nothing to key on with this
 *   wire format) colors categorically by id.
 */
export function makeColorOf(
  state: ExplorerState,
): (componentId: number) => string {
  if (state.colorMode === "persistence") {
    const rects = state.hierarchy?.treemap ?? [];
    const persOf = new Map<number, number | null>(
      rects.map((r) => [r.node, r.persistence]));
    const [lo, hi] = persistenceExtent(rects.map((r) => r.persistence));
    return (id) => persistenceColor(persOf.get(id) ?? null, lo, hi);
  }
  return componentColor;
}

/** Build the whole explorer UI under `root` and wire it to the service. */
export function mountApp(root: HTMLElement, client: ServiceApi): App {
  const doc = root.ownerDocument;
  const explorer = new Explorer(client);
  const treemap = new TreemapView(doc);
  const scatter = new ScatterView(doc);

  // controls
  const bar = el(doc, "div", "controls");
  const fileInput = el(doc, "input") as HTMLInputElement;
  fileInput.type = "file";
  fileInput.accept = ".csv,.fvecs";
  const methodSel = el(doc, "select") as HTMLSelectElement;
  for (const m of ["exact", "approx"]) {
    const opt = el(doc, "option", undefined, m) as HTMLOptionElement;
    opt.value = m;
    methodSel.appendChild(opt);
  }
  const seedInput = el(doc, "input") as HTMLInputElement;
  seedInput.type = "number";
  seedInput.value = "0";
  seedInput.title = "seed (approx tree)";
  const buildBtn = el(doc, "button", "build", "upload + build") as HTMLButtonElement;

  const etaInput = el(doc, "input", "eta") as HTMLInputElement;
  etaInput.type = "text";
  etaInput.placeholder = "eta: count or % (default 1%)";
  const etaBtn = el(doc, "button", undefined, "apply") as HTMLButtonElement;

  const modeSel = el(doc, "select", "mode") as HTMLSelectElement;
  for (const m of ["persistence", "component", "label"] as ColorMode[]) {
    const opt = el(doc, "option", undefined, m) as HTMLOptionElement;
    opt.value = m;
    if (m === "label") {
      opt.disabled = true; // this wire format carries no point labels
      opt.title = "dataset has no labels";
    }
    modeSel.appendChild(opt);
  }

  const snapBtn = el(doc, "button", "snapshot", "png") as HTMLButtonElement;
  snapBtn.title = "download the current views as a PNG";

  const status = el(doc, "span", "status", "no dataset");
  const errorBox = el(doc, "div", "error");
  errorBox.style.display = "none";

  bar.append(fileInput, methodSel, seedInput, buildBtn,
    etaInput, etaBtn, modeSel, snapBtn, status);

  const panels = el(doc, "div", "panels");
  const left = el(doc, "div", "panel");
  left.append(el(doc, "h2", undefined, "hierarchy"), treemap.el);
  const right = el(doc, "div", "panel");
  right.append(el(doc, "h2", undefined, "projection"), scatter.el);
  panels.append(left, right);
  root.append(bar, errorBox, panels);

  // interactions
  treemap.onToggle = (id) => void explorer.toggle(id);
  etaBtn.addEventListener("click", () => void explorer.setEta(etaInput.value.trim()));
  etaInput.addEventListener("keydown", (ev) => {
    if ((ev as KeyboardEvent).key === "Enter") void explorer.setEta(etaInput.value.trim());
  });
  modeSel.addEventListener("change", () =>
    explorer.setColorMode(modeSel.value as ColorMode));
  snapBtn.addEventListener("click", () => {
    downloadPng(doc, [treemap.el, scatter.svg]).catch((err) => {
      errorBox.textContent = err instanceof Error ? err.message : String(err);
      errorBox.style.display = "block";
    });
  });

  buildBtn.addEventListener("click", () => {
    const file = fileInput.files?.[0];
    if (!file) {
      errorBox.textContent = "choose a .csv or .fvecs file first";
      errorBox.style.display = "block";
      return;
    }
    buildBtn.disabled = true;
    void (async () => {
      try {
        const format = file.name.endsWith(".fvecs") ? "fvecs" : "csv";
        const up = await client.uploadDataset(file, file.name, format);
        const body: MstRequest = methodSel.value === "approx"
          ? { method: "approx", seed: Number(seedInput.value) || 0 }
          : { method: "exact" };
        await client.computeMst(up.dataset_id, body);
        status.textContent = `${up.dataset_id}: n=${up.n} d=${up.d}`;
        await explorer.openDataset(up.dataset_id);
        scatter.resetView();
      } catch (err) {
        errorBox.textContent = err instanceof Error ? err.message : String(err);
        errorBox.style.display = "block";
      } finally {
        buildBtn.disabled = false;
      }
    })();
  });

  // rendering
  explorer.onChange((state) => {
    const colorOf = makeColorOf(state);
    treemap.render(state.hierarchy?.treemap ?? [], state.selection, colorOf);
    scatter.render(state.layout, colorOf);
    errorBox.textContent = state.error ?? "";
    errorBox.style.display = state.error ? "block" : "none";
    if (state.hierarchy) {
      const coi = state.hierarchy.hierarchy.components_of_interest.length;
      const sel = state.selection.size;
      const busy = state.busy ? " | working..." : "";
      status.textContent =
        `${state.datasetId} | eta=${state.hierarchy.eta} | ${coi} components | ${sel} selected${busy}`;
    }
  });

  // initial empty render
  treemap.render([], new Set(), componentColor);
  scatter.render(null, componentColor);

  return { explorer, treemap, scatter, root };
}
