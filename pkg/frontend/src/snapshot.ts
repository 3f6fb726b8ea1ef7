const SVG_NS = "http://www.w3.org/2000/svg";
const PANEL = 1000; // panels share the same square viewBox

/**
 * One standalone SVG document with the given panels side by side on a white
 * background, cloned from the live views so it can be serialized.
 */
export function composeSvg(doc: Document, panels: SVGSVGElement[]): SVGSVGElement {
  const out = doc.createElementNS(SVG_NS, "svg") as SVGSVGElement;
  out.setAttribute("xmlns", SVG_NS);
  out.setAttribute("width", String(PANEL * panels.length));
  out.setAttribute("height", String(PANEL));
  out.setAttribute("viewBox", `0 0 ${PANEL * panels.length} ${PANEL}`);
  const bg = doc.createElementNS(SVG_NS, "rect");
  bg.setAttribute("width", "100%");
  bg.setAttribute("height", "100%");
  bg.setAttribute("fill", "#ffffff");
  out.appendChild(bg);
  panels.forEach((panel, i) => {
    const slot = doc.createElementNS(SVG_NS, "g");
    slot.setAttribute("transform", `translate(${i * PANEL} 0)`);
    for (const child of [...panel.childNodes]) {
      slot.appendChild(child.cloneNode(true));
    }
    out.appendChild(slot);
  });
  return out;
}

/** Rasterize the composed views and hand the PNG to the browser as a download. */
export function downloadPng(
  doc: Document, panels: SVGSVGElement[], filename = "topoproj.png",
): Promise<void> {
  const markup = new XMLSerializer().serializeToString(composeSvg(doc, panels));
  const url = `data:image/svg+xml;charset=utf-8,${encodeURIComponent(markup)}`;
  return new Promise((resolve, reject) => {
    const img = new Image();
    img.onload = () => {
      const canvas = doc.createElement("canvas");
      canvas.width = PANEL * panels.length;
      canvas.height = PANEL;
      const ctx = canvas.getContext("2d");
      if (!ctx) {
        reject(new Error("canvas is not available here; cannot export a PNG"));
        return;
      }
      ctx.drawImage(img, 0, 0);
      const link = doc.createElement("a");
      link.href = canvas.toDataURL("image/png");
      link.download = filename;
      link.click();
      resolve();
    };
    img.onerror = () => reject(new Error("could not rasterize the views"));
    img.src = url;
  });
}
