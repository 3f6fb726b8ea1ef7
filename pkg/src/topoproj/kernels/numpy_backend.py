"""Pure numpy/python fallback kernels.

Same contracts and tie rules as the numba backend, implemented with vectorized
numpy where it helps. Noticeably slower on large inputs; intended for
environments without a working numba and for cross-checking.
"""

import bisect

import numpy as np

__all__ = [
    "pair_dists",
    "prim_mst",
    "kruskal_scan",
    "medoid_scan",
    "greedy_search",
    "robust_prune",
    "init_adj_cache",
    "vamana_insert",
    "vamana_pass",
    "min_cross",
]


def _diff_d2(diff):
    # Four accumulator lanes over the feature axis, combined (0+1)+(2+3),
    # trailing features folded into lane 0: the exact reduction order of the
    # compiled backend, so both backends agree bit for bit.
    m, d = diff.shape
    lanes = np.zeros((m, 4))
    k = 0
    while k + 4 <= d:
        t = diff[:, k : k + 4]
        lanes += t * t
        k += 4
    while k < d:
        t = diff[:, k]
        lanes[:, 0] += t * t
        k += 1
    return (lanes[:, 0] + lanes[:, 1]) + (lanes[:, 2] + lanes[:, 3])


def _row_d2(points, ids, q):
    return _diff_d2(points[ids] - q)


def pair_dists(points, us, vs):
    return np.sqrt(_diff_d2(points[us] - points[vs]))


def prim_mst(points):
    n = points.shape[0]
    us = np.empty(n - 1, np.int64)
    vs = np.empty(n - 1, np.int64)
    best_d2 = np.full(n, np.inf)
    best_src = np.full(n, -1, np.int64)
    rem = np.arange(1, n, dtype=np.int64)
    cur = 0
    for step in range(n - 1):
        d2 = _row_d2(points, rem, points[cur])
        upd = d2 < best_d2[rem]
        idx = rem[upd]
        best_d2[idx] = d2[upd]
        best_src[idx] = cur
        vals = best_d2[rem]
        mv = vals.min()
        j = int(rem[vals == mv].min())
        us[step] = best_src[j]
        vs[step] = j
        rem = rem[rem != j]
        cur = j
    return us, vs


def kruskal_scan(n, us, vs):
    m = us.shape[0]
    keep = np.zeros(m, np.bool_)
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    rank = [0] * n
    for e in range(m):
        ru, rv = find(int(us[e])), find(int(vs[e]))
        if ru == rv:
            continue
        keep[e] = True
        if rank[ru] < rank[rv]:
            parent[ru] = rv
        elif rank[rv] < rank[ru]:
            parent[rv] = ru
        else:
            parent[rv] = ru
            rank[ru] += 1
    labels = np.fromiter((find(i) for i in range(n)), np.int64, n)
    return keep, labels


def medoid_scan(points, sample):
    n = points.shape[0]
    totals = np.zeros(n)
    # Accumulate sample by sample: same summation order as the compiled scan.
    for s in sample:
        totals += np.sqrt(_diff_d2(points - points[int(s)]))
    return int(np.argmin(totals))


class _Beam:
    """Candidate pool sorted by (d2, id), capacity L."""

    def __init__(self, L):
        self.L = L
        self.keys = []
        self.exp = []

    def insert(self, w, dw):
        key = (dw, w)
        if len(self.keys) == self.L:
            if key >= self.keys[-1]:
                return
            self.keys.pop()
            self.exp.pop()
        pos = bisect.bisect_left(self.keys, key)
        self.keys.insert(pos, key)
        self.exp.insert(pos, False)


def _search(points, adj, deg, start, q, L, stamp, token):
    token += 1
    stamp[start] = token
    beam = _Beam(L)
    d0 = float(_row_d2(points, np.asarray([start]), q)[0])
    beam.insert(int(start), d0)
    vis_ids, vis_d2 = [], []
    while True:
        uidx = -1
        for t, e in enumerate(beam.exp):
            if not e:
                uidx = t
                break
        if uidx < 0:
            break
        dw, u = beam.keys[uidx]
        beam.exp[uidx] = True
        vis_ids.append(u)
        vis_d2.append(dw)
        nbrs = [int(w) for w in adj[u, : deg[u]] if stamp[w] != token]
        if not nbrs:
            continue
        for w in nbrs:
            stamp[w] = token
        dws = _row_d2(points, np.asarray(nbrs), q)
        for w, d in zip(nbrs, dws):
            beam.insert(w, float(d))
    return beam, vis_ids, vis_d2, token


def greedy_search(points, adj, deg, start, q, L):
    n = points.shape[0]
    stamp = np.zeros(n, np.int64)
    beam, vis_ids, vis_d2, _ = _search(points, adj, deg, start, q, L, stamp, 0)
    beam_ids = np.asarray([k[1] for k in beam.keys], np.int64)
    beam_d2 = np.asarray([k[0] for k in beam.keys])
    return beam_ids, beam_d2, np.asarray(vis_ids, np.int64), np.asarray(vis_d2)


def _prune(points, center_row, cand_ids, cand_d2, alpha2, R):
    k = len(cand_ids)
    if k == 0:
        return [], []
    ids = np.asarray(cand_ids, np.int64)
    d2 = np.asarray(cand_d2)
    order = np.argsort(d2, kind="stable")
    alive = np.ones(k, np.bool_)
    sel = []
    seld = []
    for a in range(k):
        ia = order[a]
        if not alive[ia]:
            continue
        p = int(ids[ia])
        sel.append(p)
        seld.append(float(d2[ia]))
        if len(sel) == R:
            break
        rest = order[a + 1 :]
        rest = rest[alive[rest]]
        if rest.size:
            dom = alpha2 * _row_d2(points, ids[rest], points[p]) <= d2[rest]
            alive[rest[dom]] = False
    return sel, seld


def robust_prune(points, center, cand_ids, cand_d2, alpha2, R):
    sel, _ = _prune(points, points[center], cand_ids, cand_d2, alpha2, R)
    return np.asarray(sel, np.int64)


def init_adj_cache(points, adj, deg, adj_d2):
    n = adj.shape[0]
    for v in range(n):
        dg = int(deg[v])
        ids = adj[v, :dg].astype(np.int64)
        d2 = _row_d2(points, ids, points[v])
        o = np.argsort(d2, kind="stable")
        adj[v, :dg] = ids[o]
        adj_d2[v, :dg] = d2[o]


def vamana_insert(points, adj, adj_d2, deg, clean, i, start, L, alpha2, R, token, stamp, *_scratch):
    """Mirror of the numba insertion step; scratch arrays are accepted but unused.

    Same clean-list bookkeeping: overflow of a list still in robust-prune form
    only tests the newcomer, anything else re-runs the full prune.
    """
    beam, vis_ids, vis_d2, token = _search(points, adj, deg, start, points[i], L, stamp, token)
    cand_ids = [v for v in vis_ids if v != i]
    cand_d2 = [d for v, d in zip(vis_ids, vis_d2) if v != i]
    sel, seld = _prune(points, points[i], cand_ids, cand_d2, alpha2, R)
    adj[i, : len(sel)] = sel
    adj_d2[i, : len(sel)] = seld
    deg[i] = len(sel)
    clean[i] = 1
    for j, dji in zip(sel, seld):
        dj = int(deg[j])
        row = adj[j, :dj]
        if (row == i).any():
            continue
        rowd = adj_d2[j, :dj]
        p = int(np.searchsorted(rowd, dji, side="right"))
        if dj < R:
            tail = row[p:].copy()
            taild = rowd[p:].copy()
            adj[j, p + 1 : dj + 1] = tail
            adj_d2[j, p + 1 : dj + 1] = taild
            adj[j, p] = i
            adj_d2[j, p] = dji
            deg[j] = dj + 1
            clean[j] = 0
        elif not clean[j]:
            ids = list(map(int, row[:p])) + [i] + list(map(int, row[p:]))
            d2s = list(map(float, rowd[:p])) + [dji] + list(map(float, rowd[p:]))
            sj, sjd = _prune(points, points[j], ids, d2s, alpha2, R)
            adj[j, : len(sj)] = sj
            adj_d2[j, : len(sj)] = sjd
            deg[j] = len(sj)
            clean[j] = 1
        else:
            if p == R:
                continue
            if p and (alpha2 * _row_d2(points, row[:p].astype(np.int64), points[i]) <= dji).any():
                continue
            tail = row[p:].copy()
            taild = rowd[p:].copy()
            adj[j, p] = i
            adj_d2[j, p] = dji
            w = p + 1
            if tail.size:
                cross = _row_d2(points, tail.astype(np.int64), points[i])
                for s in range(tail.size):
                    if w == R:
                        break
                    if alpha2 * cross[s] <= taild[s]:
                        continue
                    adj[j, w] = tail[s]
                    adj_d2[j, w] = taild[s]
                    w += 1
            deg[j] = w
    return token


def vamana_pass(points, adj, adj_d2, deg, clean, order, start, L, alpha2, R, token, stamp, *_scratch):
    for i in order:
        token = vamana_insert(points, adj, adj_d2, deg, clean, int(i), start, L, alpha2, R, token, stamp)
    return token


def min_cross(points, ids_a, ids_b):
    best = (np.inf, -1, -1)
    for a in ids_a:
        a = int(a)
        d2 = _row_d2(points, ids_b, points[a])
        mv = d2.min()
        b = int(ids_b[d2 == mv].min())
        cand = (float(mv), a, b)
        if cand < best:
            best = cand
    return best[1], best[2], best[0]
