"""Exact Euclidean minimum spanning trees and MSTs of explicit graphs.

The exact path is a dense O(n^2) Prim scan; adequate at the scales this
package targets and trivially deterministic. Edges are canonicalized to
u < v and sorted by (w, u, v) so identical inputs serialize identically.
"""

import json
from dataclasses import dataclass, field
from typing import NamedTuple, Union

import numpy as np

from . import kernels
from .data import PointSet


class WeightedEdge(NamedTuple):
    u: int
    v: int
    w: float


@dataclass
class SpanningTree:
    """Spanning tree over points 0..n-1, edges sorted ascending by (w, u, v)."""

    n: int
    us: np.ndarray
    vs: np.ndarray
    ws: np.ndarray
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.us = np.asarray(self.us, np.int64)
        self.vs = np.asarray(self.vs, np.int64)
        self.ws = np.asarray(self.ws, np.float64)
        if self.n < 1:
            raise ValueError("tree needs at least one point")
        if not (len(self.us) == len(self.vs) == len(self.ws) == self.n - 1):
            raise ValueError(f"spanning tree over {self.n} points needs {self.n - 1} edges")
        if np.any(self.ws < 0):
            raise ValueError("negative edge weight")
        if np.any(self.us == self.vs):
            raise ValueError("self-loop edge")
        if len(self.us) and (min(self.us.min(), self.vs.min()) < 0
                             or max(self.us.max(), self.vs.max()) >= self.n):
            raise ValueError("edge endpoint out of range")
        # normalize to the canonical form the rest of the pipeline assumes
        lo = np.minimum(self.us, self.vs)
        hi = np.maximum(self.us, self.vs)
        order = np.lexsort((hi, lo, self.ws))
        self.us = lo[order]
        self.vs = hi[order]
        self.ws = self.ws[order]

    @property
    def total_weight(self) -> float:
        return float(np.sum(self.ws))

    @property
    def l_max(self) -> float:
        return float(self.ws[-1]) if len(self.ws) else 0.0

    @property
    def edges(self) -> list:
        return [WeightedEdge(int(u), int(v), float(w)) for u, v, w in zip(self.us, self.vs, self.ws)]

    def to_text(self) -> str:
        return "".join(f"{u} {v} {w!r}\n" for u, v, w in self.edges)

    @classmethod
    def from_text(cls, text: str, n: int = 0, meta: dict = None) -> "SpanningTree":
        us, vs, ws = [], [], []
        for line in text.strip().splitlines():
            a, b, w = line.split()
            us.append(int(a))
            vs.append(int(b))
            ws.append(float(w))
        count = n or (len(us) + 1)
        return cls(count, np.asarray(us), np.asarray(vs), np.asarray(ws), meta or {})

    def to_json(self) -> dict:
        out = {
            "n": self.n,
            "total_weight": self.total_weight,
            "edges": [[int(u), int(v), float(w)] for u, v, w in zip(self.us, self.vs, self.ws)],
        }
        if self.meta:
            out["meta"] = self.meta
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "SpanningTree":
        edges = obj["edges"]
        us = np.asarray([e[0] for e in edges], np.int64)
        vs = np.asarray([e[1] for e in edges], np.int64)
        ws = np.asarray([e[2] for e in edges], np.float64)
        return cls(obj["n"], us, vs, ws, obj.get("meta", {}))

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8") as f:
            json.dump(self.to_json(), f, indent=None, separators=(",", ":"))
            f.write("\n")

    @classmethod
    def load(cls, path) -> "SpanningTree":
        with open(path, encoding="utf-8") as f:
            return cls.from_json(json.load(f))


@dataclass
class Forest:
    """Disconnected result of an MST pass: per-component memberships and edges."""

    n: int
    membership: np.ndarray
    components: list
    edges_us: np.ndarray
    edges_vs: np.ndarray
    edges_ws: np.ndarray

    @property
    def n_components(self) -> int:
        return len(self.components)


def _canonical_edges(points, us, vs, ws=None):
    us = np.asarray(us, np.int64)
    vs = np.asarray(vs, np.int64)
    lo = np.minimum(us, vs)
    hi = np.maximum(us, vs)
    if ws is None:
        k = kernels.get_backend()
        ws = k.pair_dists(points, lo, hi)
    order = np.lexsort((hi, lo, ws))
    return lo[order], hi[order], np.asarray(ws)[order]


def exact_emst(ps: Union[PointSet, np.ndarray]) -> SpanningTree:
    """Exact Euclidean MST via the dense Prim scan.

    Weights are recomputed by the shared pair-distance kernel so that exact
    and approximate trees weigh identical edges identically.
    """
    coords = ps.coords if isinstance(ps, PointSet) else np.ascontiguousarray(ps, np.float64)
    n = coords.shape[0]
    if n == 1:
        return SpanningTree(1, np.empty(0, np.int64), np.empty(0, np.int64), np.empty(0), {"method": "exact"})
    k = kernels.get_backend()
    us, vs = k.prim_mst(coords)
    lo, hi, ws = _canonical_edges(coords, us, vs)
    return SpanningTree(n, lo, hi, ws, {"method": "exact"})


def mst_of_graph(n: int, us, vs, ws) -> Union[SpanningTree, Forest]:
    """Kruskal over an explicit edge list; a Forest if the graph is disconnected.

    Edges are deduplicated after canonicalizing to u < v and processed in
    (w, u, v) order, which fixes tie behavior.
    """
    us = np.asarray(us, np.int64)
    vs = np.asarray(vs, np.int64)
    ws = np.asarray(ws, np.float64)
    if np.any(us == vs):
        raise ValueError("self-loop in edge list")
    if len(us) and (us.max() >= n or vs.max() >= n or us.min() < 0 or vs.min() < 0):
        raise ValueError("edge endpoint out of range")
    lo = np.minimum(us, vs)
    hi = np.maximum(us, vs)
    _, uniq = np.unique(lo * np.int64(n) + hi, return_index=True)
    lo, hi, ws = lo[uniq], hi[uniq], ws[uniq]
    order = np.lexsort((hi, lo, ws))
    lo, hi, ws = lo[order], hi[order], ws[order]
    k = kernels.get_backend()
    keep, labels = k.kruskal_scan(n, lo, hi)
    lo, hi, ws = lo[keep], hi[keep], ws[keep]
    roots, membership = np.unique(labels, return_inverse=True)
    if len(roots) == 1:
        return SpanningTree(n, lo, hi, ws)
    components = [np.flatnonzero(membership == c) for c in range(len(roots))]
    return Forest(n, membership, components, lo, hi, ws)
