import { describe, expect, it } from "vitest";

import { composeSvg } from "../src/snapshot.js";

const SVG_NS = "http://www.w3.org/2000/svg";

function panelWith(text: string): SVGSVGElement {
  const svg = document.createElementNS(SVG_NS, "svg") as SVGSVGElement;
  svg.setAttribute("viewBox", "0 0 1000 1000");
  const t = document.createElementNS(SVG_NS, "text");
  t.textContent = text;
  svg.appendChild(t);
  return svg;
}

describe("composeSvg", () => {
  it("lays the panels out side by side on a white background", () => {
    const out = composeSvg(document, [panelWith("left"), panelWith("right")]);
    expect(out.getAttribute("width")).toBe("2000");
    expect(out.getAttribute("height")).toBe("1000");
    expect(out.getAttribute("viewBox")).toBe("0 0 2000 1000");
    const slots = [...out.children].filter((c) => c.tagName === "g");
    expect(slots.map((g) => g.getAttribute("transform")))
      .toEqual(["translate(0 0)", "translate(1000 0)"]);
    expect(slots.map((g) => g.textContent)).toEqual(["left", "right"]);
    expect(out.querySelector("rect")?.getAttribute("fill")).toBe("#ffffff");
  });

  it("clones the view content instead of moving it", () => {
    const panel = panelWith("live");
    composeSvg(document, [panel]);
    expect(panel.childNodes.length).toBe(1);
  });

  it("serializes into a standalone svg document", () => {
    const markup = new XMLSerializer().serializeToString(
      composeSvg(document, [panelWith("x")]));
    expect(markup.startsWith("<svg")).toBe(true);
    expect(markup).toContain(`xmlns="${SVG_NS}"`);
  });
});
