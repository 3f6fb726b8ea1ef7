"""Graph-based approximate nearest neighbor index and approximate MST.

Builds the pruned proximity graph with a two-pass schedule (first pass at
alpha = 1.0, final pass at the requested alpha), then extracts the MST of the
symmetrized graph. If pruning left the graph disconnected, connectivity is
repaired with exact nearest cross pairs, greedily smallest first; such edges
are recorded as bridges in the tree provenance.
"""

import json
import math
import warnings
from dataclasses import dataclass, field
from typing import Tuple, Union

import numpy as np

from . import kernels
from .data import PointSet
from .mst import Forest, SpanningTree, mst_of_graph


@dataclass
class VamanaParams:
    alpha: float = 1.3
    L: int = 100
    R: int = 100
    passes: int = 2

    def __post_init__(self):
        if self.alpha < 1.0:
            raise ValueError(f"alpha must be >= 1.0, got {self.alpha}")
        if self.R < 1:
            raise ValueError(f"R must be >= 1, got {self.R}")
        if self.L < self.R:
            raise ValueError(f"L must be >= R, got L={self.L} R={self.R}")
        if self.passes < 1:
            raise ValueError(f"passes must be >= 1, got {self.passes}")


@dataclass
class VamanaGraph:
    """Directed bounded-degree graph: adj[i, :deg[i]] are out-neighbors of i."""

    n: int
    params: VamanaParams
    medoid: int
    adj: np.ndarray
    deg: np.ndarray
    seed: int = 0

    def out_neighbors(self, i: int) -> np.ndarray:
        return self.adj[i, : self.deg[i]].astype(np.int64)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "params": {
                "alpha": self.params.alpha,
                "L": self.params.L,
                "R": self.params.R,
                "passes": self.params.passes,
            },
            "seed": self.seed,
            "medoid": self.medoid,
            "adjacency": [self.out_neighbors(i).tolist() for i in range(self.n)],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "VamanaGraph":
        n = obj["n"]
        params = VamanaParams(**obj["params"])
        cap = max(params.R + 1, max((len(a) for a in obj["adjacency"]), default=1))
        adj = np.zeros((n, cap), np.int32)
        deg = np.zeros(n, np.int32)
        for i, nbrs in enumerate(obj["adjacency"]):
            adj[i, : len(nbrs)] = nbrs
            deg[i] = len(nbrs)
        return cls(n, params, obj["medoid"], adj, deg, obj.get("seed", 0))

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8") as f:
            json.dump(self.to_json(), f, separators=(",", ":"))
            f.write("\n")


def _coords(ps: Union[PointSet, np.ndarray]) -> np.ndarray:
    return ps.coords if isinstance(ps, PointSet) else np.ascontiguousarray(ps, np.float64)


def _random_regular_init(rng, n: int, r: int) -> Tuple[np.ndarray, np.ndarray]:
    cap = r + 2
    adj = np.zeros((n, cap), np.int32)
    deg = np.zeros(n, np.int32)
    for v in range(n):
        picks = np.empty(0, np.int64)
        while picks.size < r:
            draw = rng.integers(0, n - 1, size=2 * r + 8)
            draw = np.unique(draw)
            picks = draw if picks.size == 0 else np.unique(np.concatenate([picks, draw]))
        picks = picks[:r]
        picks = np.where(picks >= v, picks + 1, picks)
        adj[v, :r] = picks
        deg[v] = r
    return adj, deg


def medoid(ps: Union[PointSet, np.ndarray], seed: int = 0, sample_size: int = 1000) -> int:
    """Point minimizing summed distance to a seeded random sample (ties: lowest id)."""
    coords = _coords(ps)
    n = coords.shape[0]
    rng = np.random.default_rng(seed)
    size = min(n, sample_size)
    sample = np.sort(rng.choice(n, size=size, replace=False))
    k = kernels.get_backend()
    return int(k.medoid_scan(coords, sample))


def greedy_search(graph: VamanaGraph, ps: Union[PointSet, np.ndarray], query, k: int,
                  L: int = None) -> Tuple[list, list]:
    """Beam search from the medoid.

    Returns (k best (id, distance) pairs, expanded (id, distance) list in
    expansion order). The pool keeps the L closest seen so far; the search
    stops when all of them have been expanded.
    """
    coords = _coords(ps)
    if graph.n == 0 or coords.shape[0] == 0:
        raise ValueError("empty graph")
    L = graph.params.L if L is None else L
    if k > L:
        raise ValueError(f"k must be <= L, got k={k} L={L}")
    q = np.ascontiguousarray(np.asarray(query, np.float64).ravel())
    if q.shape[0] != coords.shape[1]:
        raise ValueError(f"dimension mismatch: query {q.shape[0]}, points {coords.shape[1]}")
    kb = kernels.get_backend()
    beam_ids, beam_d2, vis_ids, vis_d2 = kb.greedy_search(
        coords, graph.adj, graph.deg, graph.medoid, q, L
    )
    best = [(int(i), float(math.sqrt(d))) for i, d in zip(beam_ids[:k], beam_d2[:k])]
    visited = [(int(i), float(math.sqrt(d))) for i, d in zip(vis_ids, vis_d2)]
    return best, visited


def robust_prune(ps: Union[PointSet, np.ndarray], center: int, candidates,
                 alpha: float, R: int) -> list:
    """Occlusion-pruned neighbor selection.

    candidates: iterable of (id, distance-to-center) pairs, center excluded.
    Keeps the nearest remaining candidate p and drops any v with
    alpha * d(p, v) <= d(center, v); stops at R selections.
    """
    if alpha < 1.0:
        raise ValueError(f"alpha must be >= 1.0, got {alpha}")
    coords = _coords(ps)
    ids = np.asarray([c[0] for c in candidates], np.int64)
    if np.any(ids == center):
        raise ValueError("candidates must exclude the center point")
    d2 = np.asarray([float(c[1]) ** 2 for c in candidates], np.float64)
    kb = kernels.get_backend()
    sel = kb.robust_prune(coords, center, ids, d2, alpha * alpha, R)
    return [int(x) for x in sel]


def build_vamana(ps: Union[PointSet, np.ndarray], params: VamanaParams = None,
                 seed: int = 0) -> VamanaGraph:
    """Build the graph: random R-regular start, then per-pass search + prune.

    Points are visited in a fresh seeded permutation each pass; every chosen
    neighbor gets the reverse edge, re-pruned when its list exceeds R.
    """
    coords = _coords(ps)
    params = params or VamanaParams()
    n = coords.shape[0]
    r_eff = params.R
    if r_eff > n - 1:
        r_eff = max(1, n - 1)
        warnings.warn(f"R={params.R} clamped to {r_eff} for n={n}")
    rng = np.random.default_rng(seed)
    if n == 1:
        return VamanaGraph(1, params, 0, np.zeros((1, 2), np.int32), np.zeros(1, np.int32), seed)
    adj, deg = _random_regular_init(rng, n, r_eff)
    size = min(n, 1000)
    sample = np.sort(rng.choice(n, size=size, replace=False))
    kb = kernels.get_backend()
    start = int(kb.medoid_scan(coords, sample))

    L, R = params.L, r_eff
    cap = adj.shape[1]
    adj_d2 = np.zeros((n, cap), np.float64)
    clean = np.zeros(n, np.uint8)
    kb.init_adj_cache(coords, adj, deg, adj_d2)
    stamp = np.zeros(n, np.int64)
    beam_ids = np.empty(L, np.int64)
    beam_d2 = np.empty(L, np.float64)
    beam_exp = np.empty(L, np.bool_)
    vis_ids = np.empty(n, np.int64)
    vis_d2 = np.empty(n, np.float64)
    cand_cap = n + cap
    cand_ids = np.empty(cand_cap, np.int64)
    cand_d2 = np.empty(cand_cap, np.float64)
    cand_order = np.empty(cand_cap, np.int64)
    cand_tmp = np.empty(cand_cap, np.int64)
    cand_alive = np.empty(cand_cap, np.bool_)
    sel = np.empty(R + 1, np.int64)
    sel_d2 = np.empty(R + 1, np.float64)
    rev_ids = np.empty(cap + 1, np.int64)
    rev_d2 = np.empty(cap + 1, np.float64)
    rev_order = np.empty(cap + 1, np.int64)
    rev_tmp = np.empty(cap + 1, np.int64)
    rev_alive = np.empty(cap + 1, np.bool_)
    rev_sel = np.empty(R + 1, np.int64)
    rev_sel_d2 = np.empty(R + 1, np.float64)
    tail_ids = np.empty(cap + 1, np.int64)
    tail_d2 = np.empty(cap + 1, np.float64)
    nbr_ids = np.empty(cap, np.int64)
    nbr_d2 = np.empty(cap, np.float64)

    token = 0
    for p in range(params.passes):
        alpha = params.alpha if p == params.passes - 1 else 1.0
        alpha2 = alpha * alpha
        order = rng.permutation(n)
        token = kb.vamana_pass(
            coords, adj, adj_d2, deg, clean, order, start, L, alpha2, R, token, stamp,
            beam_ids, beam_d2, beam_exp, vis_ids, vis_d2,
            cand_ids, cand_d2, cand_order, cand_tmp, cand_alive, sel, sel_d2,
            rev_ids, rev_d2, rev_order, rev_tmp, rev_alive, rev_sel, rev_sel_d2,
            tail_ids, tail_d2, nbr_ids, nbr_d2,
        )
    return VamanaGraph(n, params, start, adj, deg, seed)


def symmetrize_edges(graph: VamanaGraph) -> Tuple[np.ndarray, np.ndarray]:
    """Undirected edge list (u < v, deduplicated) of the directed graph."""
    n = graph.n
    counts = graph.deg.astype(np.int64)
    src = np.repeat(np.arange(n, dtype=np.int64), counts)
    mask = np.arange(graph.adj.shape[1])[None, :] < counts[:, None]
    dst = graph.adj[mask].astype(np.int64)
    lo = np.minimum(src, dst)
    hi = np.maximum(src, dst)
    keys = np.unique(lo * np.int64(n) + hi)
    return keys // n, keys % n


def amst(ps: Union[PointSet, np.ndarray], params: VamanaParams = None, seed: int = 0,
         graph: VamanaGraph = None) -> SpanningTree:
    """Approximate Euclidean MST: Kruskal over the symmetrized graph.

    Component gaps (rare) are bridged by exact nearest cross pairs, added
    smallest first; bridges are listed in tree.meta["bridges"].
    """
    coords = _coords(ps)
    n = coords.shape[0]
    params = params or VamanaParams()
    if graph is None:
        graph = build_vamana(coords, params, seed)
    if n == 1:
        return SpanningTree(1, np.empty(0, np.int64), np.empty(0, np.int64), np.empty(0),
                            {"method": "amst", "seed": seed, "bridges": []})
    kb = kernels.get_backend()
    us, vs = symmetrize_edges(graph)
    ws = kb.pair_dists(coords, us, vs)
    result = mst_of_graph(n, us, vs, ws)
    bridges = []
    if isinstance(result, Forest):
        comps = [np.asarray(c, np.int64) for c in result.components]
        eu = list(result.edges_us)
        ev = list(result.edges_vs)
        ew = list(result.edges_ws)
        while len(comps) > 1:
            best = None
            for a in range(len(comps)):
                for b in range(a + 1, len(comps)):
                    i, j, d2 = kb.min_cross(coords, comps[a], comps[b])
                    w = float(kb.pair_dists(coords, np.asarray([i]), np.asarray([j]))[0])
                    u, v = (i, j) if i < j else (j, i)
                    cand = (w, u, v, a, b)
                    if best is None or cand[:3] < best[:3]:
                        best = cand
            w, u, v, a, b = best
            eu.append(u)
            ev.append(v)
            ew.append(w)
            bridges.append([int(u), int(v), float(w)])
            comps[a] = np.concatenate([comps[a], comps[b]])
            del comps[b]
        us = np.asarray(eu, np.int64)
        vs = np.asarray(ev, np.int64)
        ws = np.asarray(ew, np.float64)
        order = np.lexsort((vs, us, ws))
        tree = SpanningTree(n, us[order], vs[order], ws[order])
    else:
        tree = result
    tree.meta = {
        "method": "amst",
        "seed": seed,
        "params": {"alpha": params.alpha, "L": params.L, "R": params.R, "passes": params.passes},
        "bridges": bridges,
    }
    return tree
