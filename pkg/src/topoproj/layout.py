"""2D placement driven by ascending MST edges, with per-component scaling.

Every point starts at the origin as its own component. Each edge places the
two merging components into opposite half-planes separated by the edge's
weight: the lower one is rotated so a hull vertex near the edge endpoint sits
at y = 0 with the rest of its points below, the upper one symmetrically at
y = l, both anchors on the same vertical. Rigid motions keep every distance
inside a component intact, so the minimum distance across the gap is exactly
the edge weight, which is what makes the output's MST weights replicate the
input's. Components of interest are magnified the moment the sweep finishes
assembling them.
"""

import math
import warnings
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from .data import PointSet
from .mst import SpanningTree


class LayoutError(ValueError):
    pass


@dataclass
class ScalingParams:
    c: float = 2.0
    alpha_max: float = math.inf

    def __post_init__(self):
        if self.c < 1.0:
            raise ValueError(f"c must be >= 1, got {self.c}")
        if self.alpha_max < 1.0:
            raise ValueError(f"alpha_max must be >= 1, got {self.alpha_max}")


@dataclass
class PlacedComponent:
    """Working state of one live component during the sweep."""

    ids: np.ndarray
    hull: np.ndarray


@dataclass
class Layout2D:
    coords: np.ndarray
    component_of: np.ndarray
    applied_scale: dict
    hulls: dict
    sizes: dict
    l_max: float

    @property
    def n(self) -> int:
        return self.coords.shape[0]

    def to_json(self) -> dict:
        comps = []
        for c in sorted(self.applied_scale):
            comps.append({
                "id": int(c),
                "alpha": float(self.applied_scale[c]),
                "hull": [[float(x), float(y)] for x, y in self.hulls[c]],
                "size": int(self.sizes[c]),
            })
        return {
            "n": self.n,
            "coords": [[float(x), float(y)] for x, y in self.coords],
            "component_of": [None if c < 0 else int(c) for c in self.component_of],
            "components": comps,
            "l_max": float(self.l_max),
        }


def _cross(o, a, b) -> float:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def convex_hull(points) -> np.ndarray:
    """Counter-clockwise convex hull by monotone chain.

    Degenerate inputs degrade gracefully: one point (or all coincident) gives
    a single vertex, collinear sets give the two extreme vertices.
    """
    pts = np.asarray(points, np.float64)
    if pts.ndim != 2 or pts.shape[1] != 2:
        raise ValueError("expected an (m, 2) array of 2D points")
    if pts.shape[0] == 0:
        raise ValueError("need at least one point")
    order = np.lexsort((pts[:, 1], pts[:, 0]))
    pts = pts[order]
    keep = np.ones(len(pts), bool)
    keep[1:] = np.any(pts[1:] != pts[:-1], axis=1)
    pts = pts[keep]
    m = len(pts)
    if m <= 2:
        return pts.copy()
    lower = []
    for p in pts:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper = []
    for p in pts[::-1]:
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return np.array(lower[:-1] + upper[:-1])


def _anchor_transform(hull: np.ndarray, p_coord: np.ndarray, l: float, top: bool):
    """Rigid motion sending the component into its half-plane.

    Picks the hull vertex nearest to the merge endpoint, rotates the hull
    edge leaving that vertex onto the x-axis (oriented so the polygon's
    interior lands below for the bottom component, above for the top one),
    then translates the anchor to (0, 0) or (0, l).
    """
    d2 = np.sum((hull - p_coord) ** 2, axis=1)
    k = int(np.argmin(d2))
    q = hull[k]
    if len(hull) == 1:
        rot = np.eye(2)
    else:
        e = hull[(k + 1) % len(hull)] - q
        norm = math.hypot(e[0], e[1])
        ux, uy = e[0] / norm, e[1] / norm
        if top:
            rot = np.array([[ux, uy], [-uy, ux]])
        else:
            rot = np.array([[-ux, -uy], [uy, -ux]])
    q_rot = rot @ q
    shift = np.array([0.0, l]) - q_rot if top else -q_rot
    return rot, shift


_CLAMP_SLACK = 1e-12


def place_components(ca: PlacedComponent, cb: PlacedComponent, pa_coord, pb_coord,
                     l: float):
    """Transforms placing ca below y=0 and cb above y=l, anchors aligned.

    Returns (rot_a, shift_a, rot_b, shift_b); the caller applies them as
    p @ rot.T + shift. pa_coord/pb_coord are the current coordinates of the
    merge edge's endpoints inside each component.
    """
    if l < 0:
        raise LayoutError(f"negative merge length {l}")
    rot_a, shift_a = _anchor_transform(ca.hull, np.asarray(pa_coord, np.float64), l, top=False)
    rot_b, shift_b = _anchor_transform(cb.hull, np.asarray(pb_coord, np.float64), l, top=True)
    return rot_a, shift_a, rot_b, shift_b


def _apply(coords: np.ndarray, rot: np.ndarray, shift: np.ndarray) -> np.ndarray:
    return coords @ rot.T + shift


def _clamp_low(ys: np.ndarray) -> None:
    # rotation residue only; genuine violations are caught by verify mode
    np.minimum(ys, 0.0, out=ys, where=ys <= _CLAMP_SLACK)


def _clamp_high(ys: np.ndarray, l: float) -> None:
    np.maximum(ys, l, out=ys, where=ys >= l - _CLAMP_SLACK)


def scale_component(coords: np.ndarray, l_avg: float, l_max: float,
                    params: ScalingParams) -> float:
    """Magnify a completed component about its centroid.

    The factor is min(c * l_max / l_avg, alpha_max); a component with no
    positive internal edge length (singletons, coincident points) would give
    an unbounded factor, so it is clamped with a warning.
    """
    if l_avg <= 0:
        alpha = params.alpha_max if math.isfinite(params.alpha_max) else 1.0
        warnings.warn(f"component has no positive internal edge length; alpha clamped to {alpha}")
    else:
        alpha = min(params.c * l_max / l_avg, params.alpha_max)
    center = coords.mean(axis=0)
    coords[:] = center + alpha * (coords - center)
    return alpha


def _min_cross_d2(a: np.ndarray, b: np.ndarray) -> float:
    best = math.inf
    for p in a:
        d2 = np.sum((b - p) ** 2, axis=1)
        best = min(best, float(d2.min()))
    return best


def topomap_project(ps: Union[PointSet, np.ndarray, int], tree: SpanningTree,
                    components: Optional[np.ndarray] = None,
                    params: Optional[ScalingParams] = None,
                    verify: bool = False) -> Layout2D:
    """Run the full placement sweep and return the 2D layout.

    components is the per-point component assignment (-1 outside, as produced
    by components_point_map); None or all -1 is the plain mode with the exact
    weight-preservation guarantee. With verify=True every merge is audited by
    an exhaustive cross-pair scan (quadratic; meant for small inputs).
    """
    if isinstance(ps, PointSet):
        n = ps.n
    elif isinstance(ps, (int, np.integer)):
        n = int(ps)
    else:
        n = np.asarray(ps).shape[0]
    if n != tree.n:
        raise ValueError(f"tree spans {tree.n} points, got {n}")
    params = params or ScalingParams()
    comp_of = np.full(n, -1, np.int64) if components is None else np.asarray(components, np.int64)
    if comp_of.shape != (n,):
        raise ValueError("components must assign every point")

    # Internal edges of each highlighted component: both endpoints inside.
    # The component is fully assembled right after its last internal edge.
    comp_ids = [int(c) for c in np.unique(comp_of) if c >= 0]
    l_avg = {}
    trigger = {}
    members = {c: np.flatnonzero(comp_of == c) for c in comp_ids}
    for c in comp_ids:
        inside = np.flatnonzero((comp_of[tree.us] == c) & (comp_of[tree.vs] == c))
        if len(inside) != len(members[c]) - 1:
            raise ValueError(f"component {c} is not a connected block of the tree")
        if len(inside):
            l_avg[c] = float(np.mean(tree.ws[inside]))
            trigger[c] = int(inside[-1])
        else:
            l_avg[c] = 0.0
            trigger[c] = -1  # singleton: complete before any edge

    coords = np.zeros((n, 2))
    applied = {}
    by_trigger = {}
    for c in comp_ids:
        if trigger[c] < 0:
            applied[c] = scale_component(coords[members[c]], l_avg[c], tree.l_max, params)
        else:
            by_trigger.setdefault(trigger[c], []).append(c)

    uf = list(range(n))

    def find(x):
        while uf[x] != x:
            uf[x] = uf[uf[x]]
            x = uf[x]
        return x

    comp = {i: PlacedComponent(np.array([i], np.int64), coords[i:i + 1].copy())
            for i in range(n)}
    for k in range(n - 1):
        u, v, w = int(tree.us[k]), int(tree.vs[k]), float(tree.ws[k])
        ra, rb = find(u), find(v)
        if ra == rb:
            raise LayoutError(f"edge {k} ({u},{v}) closes a cycle")
        a, b = comp.pop(ra), comp.pop(rb)
        rot_a, shift_a, rot_b, shift_b = place_components(a, b, coords[u], coords[v], w)
        moved_a = _apply(coords[a.ids], rot_a, shift_a)
        _clamp_low(moved_a[:, 1])
        coords[a.ids] = moved_a
        moved_b = _apply(coords[b.ids], rot_b, shift_b)
        _clamp_high(moved_b[:, 1], w)
        coords[b.ids] = moved_b
        if verify:
            gap = math.sqrt(_min_cross_d2(coords[a.ids], coords[b.ids]))
            if abs(gap - w) > 1e-9:
                raise LayoutError(
                    f"merge {k}: cross-component gap {gap!r} != edge weight {w!r}")
        ids = np.concatenate([a.ids, b.ids])
        hull = convex_hull(np.vstack([_apply(a.hull, rot_a, shift_a),
                                      _apply(b.hull, rot_b, shift_b)]))
        uf[rb] = ra
        merged = PlacedComponent(ids, hull)
        comp[ra] = merged
        for c in by_trigger.get(k, ()):
            if len(ids) != len(members[c]):
                raise LayoutError(f"component {c} not assembled in one block at edge {k}")
            block = coords[ids]
            applied[c] = scale_component(block, l_avg[c], tree.l_max, params)
            coords[ids] = block
            merged.hull = convex_hull(block)

    hulls = {c: convex_hull(coords[members[c]]) for c in comp_ids}
    sizes = {c: len(members[c]) for c in comp_ids}
    return Layout2D(coords, comp_of.copy(), applied, hulls, sizes, tree.l_max)
