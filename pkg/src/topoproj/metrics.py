"""Approximation quality measures between trees and their diagrams.

The two diagram distances keep the textbook formulations: bottleneck as a
binary search over candidate costs with a bipartite feasibility matching, and
Wasserstein as an exact assignment on the diagonally augmented cost matrix.
Diagrams produced by this package have every birth at zero, which puts all
points on one line; for such diagrams above a size cutoff both distances
switch to an exact specialized route (an optimal matching can always be
uncrossed on a line), since the generic algorithms are impractical at
thousands of points. The two routes are cross-checked in the test suite.
"""

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_bipartite_matching

from .filtration import PersistenceDiagram
from .mst import SpanningTree

# Above this many finite points, all-births-zero diagrams take the line route.
_LINE_CUTOFF = 64


@dataclass
class DiagramMatching:
    """Explicit matching realizing a Wasserstein cost.

    pairs holds (index into d1 or None, index into d2 or None); None stands
    for the diagonal. Diagonal-to-diagonal fillers are dropped.
    """

    pairs: list
    cost: float


def rwe(approx: SpanningTree, exact: SpanningTree) -> float:
    """Relative weight excess of an approximate tree over the exact one."""
    if approx.n != exact.n:
        raise ValueError(f"trees span different point counts: {approx.n} vs {exact.n}")
    we = exact.total_weight
    if we == 0.0:
        raise ValueError("exact tree has zero total weight; relative excess undefined")
    return (approx.total_weight - we) / we


def normalize_diagram(d: PersistenceDiagram) -> PersistenceDiagram:
    """Divide all finite coordinates by the maximum finite death."""
    finite = np.isfinite(d.deaths)
    if not np.any(finite):
        warnings.warn("diagram has no finite pairs; normalization is the identity")
        return PersistenceDiagram(d.births.copy(), d.deaths.copy())
    top = float(np.max(d.deaths[finite]))
    if top == 0.0:
        warnings.warn("maximum finite death is zero; normalization is the identity")
        return PersistenceDiagram(d.births.copy(), d.deaths.copy())
    deaths = np.where(finite, d.deaths / top, d.deaths)
    return PersistenceDiagram(d.births / top, deaths)


def _check_infinite(d1: PersistenceDiagram, d2: PersistenceDiagram) -> None:
    if d1.n_infinite != d2.n_infinite:
        raise ValueError(
            f"diagrams have different infinite pair counts: {d1.n_infinite} vs {d2.n_infinite}")


def _ground_cost(a: np.ndarray, b: np.ndarray, ground: str) -> np.ndarray:
    """Pairwise cost matrix between finite diagram points."""
    db = np.abs(a[:, None, 0] - b[None, :, 0])
    dd = np.abs(a[:, None, 1] - b[None, :, 1])
    return np.maximum(db, dd) if ground == "linf" else db + dd


def _diag_cost(pts: np.ndarray, ground: str) -> np.ndarray:
    pers = pts[:, 1] - pts[:, 0]
    return pers / 2.0 if ground == "linf" else pers


def _line_route(d1: PersistenceDiagram, d2: PersistenceDiagram) -> bool:
    return (max(len(d1.finite()[0]), len(d2.finite()[0])) > _LINE_CUTOFF
            and not np.any(d1.births) and not np.any(d2.births))


def _bottleneck_feasible(a: np.ndarray, b: np.ndarray, cross: np.ndarray,
                         diag_a: np.ndarray, diag_b: np.ndarray, t: float) -> bool:
    """Perfect matching test on the diagonally augmented bipartite graph.

    Rows are points of a plus one diagonal slot per point of b; columns the
    mirror image. Diagonal slots pair with each other for free, so the graph
    is square and feasibility means every finite point is covered at cost
    <= t.
    """
    m1, m2 = len(a), len(b)
    rows, cols = [], []
    ra, rb = np.nonzero(cross <= t)
    rows.extend(ra)
    cols.extend(rb)
    for i in np.flatnonzero(diag_a <= t):
        rows.append(i)
        cols.append(m2 + i)
    for j in np.flatnonzero(diag_b <= t):
        rows.append(m1 + j)
        cols.append(j)
    for j in range(m2):
        for i in range(m1):
            rows.append(m1 + j)
            cols.append(m2 + i)
    size = m1 + m2
    graph = csr_matrix((np.ones(len(rows), np.int8), (rows, cols)), shape=(size, size))
    match = maximum_bipartite_matching(graph, perm_type="column")
    return not np.any(match == -1)


def _bottleneck_generic(a: np.ndarray, b: np.ndarray) -> float:
    cross = _ground_cost(a, b, "linf")
    diag_a = _diag_cost(a, "linf")
    diag_b = _diag_cost(b, "linf")
    candidates = np.unique(np.concatenate([[0.0], cross.ravel(), diag_a, diag_b]))
    lo, hi = 0, len(candidates) - 1
    while lo < hi:
        mid = (lo + hi) // 2
        if _bottleneck_feasible(a, b, cross, diag_a, diag_b, float(candidates[mid])):
            hi = mid
        else:
            lo = mid + 1
    return float(candidates[lo])


def _line_feasible(da: np.ndarray, db: np.ndarray, t: float) -> bool:
    """Monotone matching feasibility for deaths on a line, threshold t.

    State f[j] after row i: the first i values of da and first j of db can
    all be matched or discarded within cost t. An optimal matching can
    always be uncrossed, so scanning both sorted sequences is exact. The
    in-row closure handles discarding a run of db values: state j is
    reachable from a true state j0 <= j when db positions j0+1..j are all
    individually discardable, i.e. when no barrier sits after j0.
    """
    m2 = len(db)
    disp_b = db <= 2.0 * t
    idx = np.arange(1, m2 + 1)
    # barrier[j-1]: rightmost undiscardable db position <= j (0 = none)
    barrier = np.maximum.accumulate(np.where(~disp_b, idx, 0))

    def settle(g):
        reach = np.maximum.accumulate(
            np.concatenate(([0 if g[0] else -1], np.where(g[1:], idx, -1))))
        out = g.copy()
        if m2:
            out[1:] = reach[1:] >= barrier
        return out

    f = np.zeros(m2 + 1, bool)
    f[0] = True
    f = settle(f)
    for x in da:
        ok = np.abs(x - db) <= t
        disp_a = x <= 2.0 * t
        g = np.empty(m2 + 1, bool)
        g[0] = f[0] and disp_a
        g[1:] = (f[:-1] & ok) | (f[1:] & disp_a)
        f = settle(g)
    return bool(f[m2])


def _bottleneck_line(da: np.ndarray, db: np.ndarray) -> float:
    """Bisection over doubles; the answer is itself a candidate cost, so the
    search terminates exactly on it."""
    if len(da) == 0 and len(db) == 0:
        return 0.0
    hi = float(max(da.max(initial=0.0), db.max(initial=0.0)))
    if _line_feasible(da, db, 0.0):
        return 0.0
    lo = 0.0
    while True:
        mid = (lo + hi) / 2.0
        if mid <= lo or mid >= hi:
            return hi
        if _line_feasible(da, db, mid):
            hi = mid
        else:
            lo = mid


def bottleneck_distance(d1: PersistenceDiagram, d2: PersistenceDiagram) -> float:
    """Minimum over matchings of the maximum per-pair L-infinity cost.

    Infinite pairs must agree in count and match each other at zero cost.
    """
    _check_infinite(d1, d2)
    a = np.column_stack(d1.finite()) if len(d1.finite()[0]) else np.empty((0, 2))
    b = np.column_stack(d2.finite()) if len(d2.finite()[0]) else np.empty((0, 2))
    if len(a) == 0 and len(b) == 0:
        return 0.0
    if _line_route(d1, d2):
        da = np.sort(a[:, 1]) if len(a) else np.empty(0)
        db = np.sort(b[:, 1]) if len(b) else np.empty(0)
        return _bottleneck_line(da, db)
    return _bottleneck_generic(a, b)


def _wasserstein_generic(a: np.ndarray, b: np.ndarray, order: float, ground: str,
                         want_matching: bool):
    m1, m2 = len(a), len(b)
    size = m1 + m2
    cost = np.zeros((size, size))
    if m1 and m2:
        cost[:m1, :m2] = _ground_cost(a, b, ground)
    if m1:
        cost[:m1, m2:] = _diag_cost(a, ground)[:, None]
    if m2:
        cost[m1:, :m2] = _diag_cost(b, ground)[None, :]
    powed = cost ** order
    rows, cols = linear_sum_assignment(powed)
    total = math.fsum(powed[r, c] for r, c in zip(rows, cols))
    value = total ** (1.0 / order)
    if not want_matching:
        return value
    pairs = []
    for r, c in zip(rows, cols):
        if r < m1 and c < m2:
            pairs.append((int(r), int(c)))
        elif r < m1:
            pairs.append((int(r), None))
        elif c < m2:
            pairs.append((None, int(c)))
    return value, DiagramMatching(pairs, value)


def _wasserstein_line(da: np.ndarray, db: np.ndarray, order: float, ground: str) -> float:
    """Sequence alignment DP over sorted deaths (all births zero).

    Cost of a match is |da - db|; discarding costs the distance to the
    diagonal. Non-crossing optimality on a line makes the DP exact.
    """
    half = 0.5 if ground == "linf" else 1.0
    ca = (da * half) ** order
    cb = (db * half) ** order
    s = np.concatenate([[0.0], np.cumsum(cb)])
    f = s.copy()
    for i in range(len(da)):
        match = f[:-1] + np.abs(da[i] - db) ** order
        g = np.empty_like(f)
        g[0] = f[0] + ca[i]
        g[1:] = np.minimum(match, f[1:] + ca[i])
        # cheapest way to also discard a run of db values ending at j
        h = np.minimum.accumulate(g - s)
        f = np.minimum(g, h + s)
    return float(f[-1] ** (1.0 / order))


def wasserstein_distance(d1: PersistenceDiagram, d2: PersistenceDiagram,
                         order: float = 1.0, ground: str = "linf",
                         return_matching: bool = False):
    """Minimum over matchings of the order-norm of per-pair costs.

    ground chooses the per-pair metric between points ("linf" or "l1");
    order is the exponent of the outer sum.
    """
    if order < 1.0:
        raise ValueError(f"order must be >= 1, got {order}")
    if ground not in ("linf", "l1"):
        raise ValueError(f"ground must be 'linf' or 'l1', got {ground!r}")
    _check_infinite(d1, d2)
    a = np.column_stack(d1.finite()) if len(d1.finite()[0]) else np.empty((0, 2))
    b = np.column_stack(d2.finite()) if len(d2.finite()[0]) else np.empty((0, 2))
    if len(a) == 0 and len(b) == 0:
        return (0.0, DiagramMatching([], 0.0)) if return_matching else 0.0
    if not return_matching and _line_route(d1, d2):
        return _wasserstein_line(np.sort(a[:, 1]) if len(a) else np.empty(0),
                                 np.sort(b[:, 1]) if len(b) else np.empty(0),
                                 order, ground)
    return _wasserstein_generic(a, b, order, ground, return_matching)


def normalized_wasserstein(d1: PersistenceDiagram, d2: PersistenceDiagram,
                           order: float = 1.0, ground: str = "linf") -> float:
    """Wasserstein distance divided by the larger finite point count."""
    m = max(len(d1.finite()[0]), len(d2.finite()[0]))
    if m == 0:
        return 0.0
    return wasserstein_distance(d1, d2, order, ground) / m
