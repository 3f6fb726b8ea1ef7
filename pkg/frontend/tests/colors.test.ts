import { describe, expect, it } from "vitest";

import {
  GRAY,
  componentColor,
  persistenceColor,
  persistenceExtent,
  sequential,
} from "../src/colors.js";

describe("sequential scale", () => {
  it("hits the ramp endpoints", () => {
    expect(sequential(0)).toBe("#f7fbff");
    expect(sequential(1)).toBe("#08306b");
  });

  it("clamps out-of-range inputs", () => {
    expect(sequential(-3)).toBe(sequential(0));
    expect(sequential(7)).toBe(sequential(1));
  });

  it("is monotone in darkness", () => {
    const lum = (c: string) =>
      parseInt(c.slice(1, 3), 16) + parseInt(c.slice(3, 5), 16) + parseInt(c.slice(5, 7), 16);
    let prev = Infinity;
    for (const t of [0, 0.25, 0.5, 0.75, 1]) {
      const l = lum(sequential(t));
      expect(l).toBeLessThanOrEqual(prev);
      prev = l;
    }
  });
});

describe("persistenceColor", () => {
  it("maps infinite persistence (null) to gray", () => {
    expect(persistenceColor(null, 0, 10)).toBe(GRAY);
  });

  it("maps the range ends to the scale ends", () => {
    expect(persistenceColor(2, 2, 8)).toBe(sequential(0));
    expect(persistenceColor(8, 2, 8)).toBe(sequential(1));
  });

  it("degenerate range uses the middle of the scale", () => {
    expect(persistenceColor(5, 5, 5)).toBe(sequential(0.5));
  });
});

describe("persistenceExtent", () => {
  it("ignores nulls and empty input", () => {
    expect(persistenceExtent([null, 3, 1, null, 7])).toEqual([1, 7]);
    expect(persistenceExtent([null, null])).toEqual([0, 0]);
    expect(persistenceExtent([])).toEqual([0, 0]);
  });
});

describe("componentColor", () => {
  it("is stable per id and always a hex color", () => {
    for (const id of [0, 1, 17, 999, 12345]) {
      expect(componentColor(id)).toBe(componentColor(id));
      expect(componentColor(id)).toMatch(/^#[0-9a-f]{6}$/);
    }
  });
});
