/* One color source for both views: the treemap box of a selected component
   and its hull/points in the projection must always use the same color, so
   everything funnels through componentColor(). */

// Infinite persistence (the root) and anything unknowable.
export const GRAY = "#9e9e9e";

// Neutral for points outside any highlighted component.
export const NEUTRAL = "#c3c8cf";

// Muted fill for hull polygons; stroke carries the component color.
export const HULL_FILL = "rgba(120, 120, 120, 0.15)";

// Categorical palette, cycled by component id order of appearance.
const PALETTE = [
  "#4e79a7", "#f28e2b", "#59a45e", "#e15759", "#b07aa1",
  "#76b7b2", "#edc948", "#ff9da7", "#9c755f", "#bab0ac",
];

/**
 * Stable color for a component id. Ids are arbitrary merge-node numbers, so
 * the assignment hashes the id instead of relying on dense indices.
 */
export function componentColor(id: number): string {
  return PALETTE[Math.abs(id) % PALETTE.length];
}

function lerp(a: number, b: number, t: number): number {
  return a + (b - a) * t;
}

function hex(channel: number): string {
  return Math.round(channel).toString(16).padStart(2, "0");
}

// Light-to-dark single-hue ramp (sequential, colorblind-safe blues).
const RAMP: [number, number, number][] = [
  [247, 251, 255],
  [107, 174, 214],
  [8, 48, 107],
];

/** Sequential scale over t in [0, 1]; out-of-range values clamp. */
export function sequential(t: number): string {
  const x = Math.min(1, Math.max(0, t)) * (RAMP.length - 1);
  const i = Math.min(RAMP.length - 2, Math.floor(x));
  const f = x - i;
  const [r0, g0, b0] = RAMP[i];
  const [r1, g1, b1] = RAMP[i + 1];
  return `#${hex(lerp(r0, r1, f))}${hex(lerp(g0, g1, f))}${hex(lerp(b0, b1, f))}`;
}

/**
 * Color for a persistence value given the finite range in view.
 * null (infinite persistence) is always gray.
 */
export function persistenceColor(
  persistence: number | null,
  min: number,
  max: number,
): string {
  if (persistence === null) return GRAY;
  if (max <= min) return sequential(0.5);
  return sequential((persistence - min) / (max - min));
}

/** Finite persistence extent of a rect list, for scale domains. */
export function persistenceExtent(values: (number | null)[]): [number, number] {
  let min = Infinity;
  let max = -Infinity;
  for (const v of values) {
    if (v === null) continue;
    if (v < min) min = v;
    if (v > max) max = v;
  }
  if (min > max) return [0, 0];
  return [min, max];
}
