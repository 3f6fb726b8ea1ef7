"""Squarified treemap over the simplified merge hierarchy.

Each retained component that survived simplification becomes a box whose
area is proportional to its point count; nesting follows the hierarchy.
The root occupies the unit square. Sub-threshold leftovers inside a parent
can optionally be surfaced as a single marked residue box so small
components stay selectable in a UI.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .filtration import MergeTree, SimplifiedTree


@dataclass(frozen=True)
class TreemapRect:
    node: int
    x: float
    y: float
    w: float
    h: float
    depth: int
    persistence: float
    size: int
    component_of_interest: bool
    outlier: bool = False

    def to_json(self) -> dict:
        pers = None if math.isinf(self.persistence) else self.persistence
        out = {
            "node": self.node,
            "x": self.x,
            "y": self.y,
            "w": self.w,
            "h": self.h,
            "depth": self.depth,
            "persistence": pers,
            "size": self.size,
            "component_of_interest": self.component_of_interest,
        }
        if self.outlier:
            out["outlier"] = True
        return out


def _worst(row: list[float], side: float) -> float:
    """Worst aspect ratio if `row` areas are laid out along `side`."""
    s = sum(row)
    if s <= 0.0 or side <= 0.0:
        return math.inf
    s2 = s * s
    w2 = side * side
    return max(w2 * max(row) / s2, s2 / (w2 * min(row)))


def _squarify(areas, x, y, w, h):
    """Pack `areas` (in order) into the rect; returns (rects, leftover).

    Classic row-building: grow the current row while that improves the
    worst aspect ratio, then commit it along the shorter side of the
    remaining rect. The leftover rect after the final row is returned so
    callers can place a residue box there.
    """
    rects = []
    i = 0
    while i < len(areas):
        side = min(w, h)
        row = [areas[i]]
        i += 1
        while i < len(areas) and _worst(row + [areas[i]], side) <= _worst(row, side):
            row.append(areas[i])
            i += 1
        s = sum(row)
        if s <= 0.0 or w <= 0.0 or h <= 0.0:
            rects.extend((x, y, 0.0, 0.0) for _ in row)
            continue
        if w >= h:
            t = s / h
            cy = y
            for a in row:
                ah = a / t
                rects.append((x, cy, t, ah))
                cy += ah
            x += t
            w -= t
        else:
            t = s / w
            cx = x
            for a in row:
                aw = a / t
                rects.append((cx, y, aw, t))
                cx += aw
            y += t
            h -= t
    return rects, (x, y, max(w, 0.0), max(h, 0.0))


def treemap_layout(
    simplified: SimplifiedTree,
    tree: MergeTree,
    padding: float = 0.0,
    outlier_boxes: bool = False,
) -> list[TreemapRect]:
    """Nested squarified boxes for the retained hierarchy.

    A node gets a box when it is retained and either is the root or meets
    the size threshold. Children are packed inside their parent (inset by
    `padding * min(w, h)` per side) in descending size order, ties by id.
    """
    if not 0.0 <= padding < 0.2:
        raise ValueError(f"padding must be in [0, 0.2), got {padding}")
    eta = simplified.eta
    retained = simplified.retained
    coi = set(int(c) for c in simplified.components_of_interest)
    root = tree.root
    rects: list[TreemapRect] = []

    def boxed_children(node: int) -> list[int]:
        a, b = int(tree.child_a[node]), int(tree.child_b[node])
        if a < 0 or not retained[a]:
            return []
        kids = [c for c in (a, b) if int(tree.size[c]) >= eta]
        kids.sort(key=lambda c: (-int(tree.size[c]), c))
        return kids

    def recurse(node: int, x: float, y: float, w: float, h: float, depth: int):
        death = float(tree.death[node])
        pers = math.inf if math.isinf(death) else death - float(tree.birth[node])
        rects.append(TreemapRect(
            node, x, y, w, h, depth, pers, int(tree.size[node]), node in coi))
        kids = boxed_children(node)
        a = int(tree.child_a[node])
        has_retained_kids = a >= 0 and retained[a]
        if not has_retained_kids:
            return
        pad = padding * min(w, h)
        ix, iy, iw, ih = x + pad, y + pad, w - 2.0 * pad, h - 2.0 * pad
        total = int(tree.size[node])
        inner_area = iw * ih
        areas = [int(tree.size[c]) / total * inner_area for c in kids]
        sub, leftover = _squarify(areas, ix, iy, iw, ih)
        for c, (cx, cy, cw, ch) in zip(kids, sub):
            recurse(c, cx, cy, cw, ch, depth + 1)
        residue = total - sum(int(tree.size[c]) for c in kids)
        if outlier_boxes and residue > 0:
            lx, ly, lw, lh = leftover if kids else (ix, iy, iw, ih)
            rects.append(TreemapRect(
                node, lx, ly, lw, lh, depth + 1, 0.0, residue, False, outlier=True))

    recurse(root, 0.0, 0.0, 1.0, 1.0, 0)
    return rects


def treemap_json(rects: list[TreemapRect]) -> list[dict]:
    return [r.to_json() for r in rects]
