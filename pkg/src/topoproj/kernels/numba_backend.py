"""Numba-compiled kernels.

All squared distances come from the same unrolled accumulation so that every
caller (exact MST scan, graph search, pruning, edge weighting) sees identical
floating-point values for identical point pairs. No fastmath: the reduction
order is fixed by the source, which keeps runs bit-reproducible.
"""

import numpy as np
from numba import njit

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


@njit(cache=True, inline="always")
def _sqdist(points, i, q):
    # Four accumulator chains: fixed association, still vectorizable.
    d = points.shape[1]
    s0 = 0.0
    s1 = 0.0
    s2 = 0.0
    s3 = 0.0
    k = 0
    while k + 4 <= d:
        t0 = points[i, k] - q[k]
        t1 = points[i, k + 1] - q[k + 1]
        t2 = points[i, k + 2] - q[k + 2]
        t3 = points[i, k + 3] - q[k + 3]
        s0 += t0 * t0
        s1 += t1 * t1
        s2 += t2 * t2
        s3 += t3 * t3
        k += 4
    while k < d:
        t = points[i, k] - q[k]
        s0 += t * t
        k += 1
    return (s0 + s1) + (s2 + s3)


@njit(cache=True)
def _batch_d2(points, ids, m, q, out):
    """Squared distances of rows ids[:m] to q, four rows at a time.

    Interleaving four rows keeps several cache fetches in flight, which is
    what limits throughput when the rows are scattered. Each row uses the
    exact accumulation order of _sqdist, so the values match bit for bit.
    """
    d = points.shape[1]
    r = 0
    while r + 4 <= m:
        i0 = ids[r]
        i1 = ids[r + 1]
        i2 = ids[r + 2]
        i3 = ids[r + 3]
        a0 = 0.0; a1 = 0.0; a2 = 0.0; a3 = 0.0
        b0 = 0.0; b1 = 0.0; b2 = 0.0; b3 = 0.0
        c0 = 0.0; c1 = 0.0; c2 = 0.0; c3 = 0.0
        e0 = 0.0; e1 = 0.0; e2 = 0.0; e3 = 0.0
        k = 0
        while k + 4 <= d:
            q0 = q[k]; q1 = q[k + 1]; q2 = q[k + 2]; q3 = q[k + 3]
            t = points[i0, k] - q0; a0 += t * t
            t = points[i0, k + 1] - q1; a1 += t * t
            t = points[i0, k + 2] - q2; a2 += t * t
            t = points[i0, k + 3] - q3; a3 += t * t
            t = points[i1, k] - q0; b0 += t * t
            t = points[i1, k + 1] - q1; b1 += t * t
            t = points[i1, k + 2] - q2; b2 += t * t
            t = points[i1, k + 3] - q3; b3 += t * t
            t = points[i2, k] - q0; c0 += t * t
            t = points[i2, k + 1] - q1; c1 += t * t
            t = points[i2, k + 2] - q2; c2 += t * t
            t = points[i2, k + 3] - q3; c3 += t * t
            t = points[i3, k] - q0; e0 += t * t
            t = points[i3, k + 1] - q1; e1 += t * t
            t = points[i3, k + 2] - q2; e2 += t * t
            t = points[i3, k + 3] - q3; e3 += t * t
            k += 4
        while k < d:
            qk = q[k]
            t = points[i0, k] - qk; a0 += t * t
            t = points[i1, k] - qk; b0 += t * t
            t = points[i2, k] - qk; c0 += t * t
            t = points[i3, k] - qk; e0 += t * t
            k += 1
        out[r] = (a0 + a1) + (a2 + a3)
        out[r + 1] = (b0 + b1) + (b2 + b3)
        out[r + 2] = (c0 + c1) + (c2 + c3)
        out[r + 3] = (e0 + e1) + (e2 + e3)
        r += 4
    while r < m:
        out[r] = _sqdist(points, ids[r], q)
        r += 1


@njit(cache=True)
def pair_dists(points, us, vs):
    m = us.shape[0]
    out = np.empty(m, np.float64)
    for e in range(m):
        out[e] = np.sqrt(_sqdist(points, us[e], points[vs[e]]))
    return out


@njit(cache=True)
def prim_mst(points):
    """Dense O(n^2) Prim scan. Returns parent edges in discovery order.

    Ties in the scan pick the lowest vertex index, so the result does not
    depend on anything but the input array.
    """
    n = points.shape[0]
    us = np.empty(n - 1, np.int64)
    vs = np.empty(n - 1, np.int64)
    best_d2 = np.full(n, np.inf)
    best_src = np.full(n, -1, np.int64)
    # Vertices not yet in the tree, swap-removed as they join.
    rem = np.empty(n - 1, np.int64)
    for j in range(1, n):
        rem[j - 1] = j
    nrem = n - 1
    cur = 0
    for step in range(n - 1):
        q = points[cur]
        for t in range(nrem):
            j = rem[t]
            s = _sqdist(points, j, q)
            if s < best_d2[j]:
                best_d2[j] = s
                best_src[j] = cur
        bt = 0
        bv = np.inf
        bj = n
        for t in range(nrem):
            j = rem[t]
            v = best_d2[j]
            if v < bv or (v == bv and j < bj):
                bv = v
                bj = j
                bt = t
        us[step] = best_src[bj]
        vs[step] = bj
        rem[bt] = rem[nrem - 1]
        nrem -= 1
        cur = bj
    return us, vs


@njit(cache=True)
def kruskal_scan(n, us, vs):
    """Union-find pass over edges in the given order.

    Returns (keep mask, component label per vertex). Labels are root ids;
    callers canonicalize.
    """
    m = us.shape[0]
    keep = np.zeros(m, np.bool_)
    parent = np.empty(n, np.int64)
    rank = np.zeros(n, np.int8)
    for i in range(n):
        parent[i] = i
    for e in range(m):
        ru = us[e]
        while parent[ru] != ru:
            parent[ru] = parent[parent[ru]]
            ru = parent[ru]
        rv = vs[e]
        while parent[rv] != rv:
            parent[rv] = parent[parent[rv]]
            rv = parent[rv]
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
    labels = np.empty(n, np.int64)
    for i in range(n):
        r = i
        while parent[r] != r:
            r = parent[r]
        labels[i] = r
    return keep, labels


@njit(cache=True)
def medoid_scan(points, sample):
    """Index of the point minimizing summed distance to the sample (ties: lowest id)."""
    n = points.shape[0]
    m = sample.shape[0]
    # Contiguous copy of the sample rows; the scan then streams instead of
    # gathering. Copies preserve values, so results are unchanged.
    sp = points[sample]
    rows = np.arange(m)
    d2 = np.empty(m, np.float64)
    best = -1
    bv = np.inf
    for i in range(n):
        _batch_d2(sp, rows, m, points[i], d2)
        s = 0.0
        for t in range(m):
            s += np.sqrt(d2[t])
        if s < bv:
            bv = s
            best = i
    return best


@njit(cache=True, inline="always")
def _beam_insert(beam_ids, beam_d2, beam_exp, nb, cap, w, dw):
    """Insert (w, dw) into the beam kept sorted by (d2, id). Returns new size."""
    if nb == cap:
        last = nb - 1
        if dw > beam_d2[last] or (dw == beam_d2[last] and w >= beam_ids[last]):
            return nb
        nb = last
    pos = nb
    while pos > 0 and (
        beam_d2[pos - 1] > dw or (beam_d2[pos - 1] == dw and beam_ids[pos - 1] > w)
    ):
        beam_ids[pos] = beam_ids[pos - 1]
        beam_d2[pos] = beam_d2[pos - 1]
        beam_exp[pos] = beam_exp[pos - 1]
        pos -= 1
    beam_ids[pos] = w
    beam_d2[pos] = dw
    beam_exp[pos] = False
    return nb + 1


@njit(cache=True)
def _search_into(
    points, adj, deg, start, q, L, stamp, token, beam_ids, beam_d2, beam_exp, vis_ids, vis_d2, nbr_ids, nbr_d2
):
    """Beam search from start toward q. Expanded nodes land in vis_* in order.

    stamp/token implement an O(1) visited check; a vertex gets its distance
    computed at most once per search.
    """
    token += 1
    nb = 0
    nv = 0
    stamp[start] = token
    d0 = _sqdist(points, start, q)
    nb = _beam_insert(beam_ids, beam_d2, beam_exp, nb, L, start, d0)
    while True:
        uidx = -1
        for t in range(nb):
            if not beam_exp[t]:
                uidx = t
                break
        if uidx < 0:
            break
        u = beam_ids[uidx]
        beam_exp[uidx] = True
        vis_ids[nv] = u
        vis_d2[nv] = beam_d2[uidx]
        nv += 1
        nn = 0
        for t in range(deg[u]):
            w = adj[u, t]
            if stamp[w] == token:
                continue
            stamp[w] = token
            nbr_ids[nn] = w
            nn += 1
        _batch_d2(points, nbr_ids, nn, q, nbr_d2)
        for t in range(nn):
            nb = _beam_insert(beam_ids, beam_d2, beam_exp, nb, L, nbr_ids[t], nbr_d2[t])
    return nb, nv, token


@njit(cache=True)
def greedy_search(points, adj, deg, start, q, L):
    """Standalone beam search; returns (beam ids, beam dists^2, visited ids, visited dists^2)."""
    n = points.shape[0]
    cap = adj.shape[1]
    stamp = np.zeros(n, np.int64)
    beam_ids = np.empty(L, np.int64)
    beam_d2 = np.empty(L, np.float64)
    beam_exp = np.empty(L, np.bool_)
    vis_ids = np.empty(n, np.int64)
    vis_d2 = np.empty(n, np.float64)
    nbr_ids = np.empty(cap, np.int64)
    nbr_d2 = np.empty(cap, np.float64)
    nb, nv, _ = _search_into(
        points, adj, deg, start, q, L, stamp, 0, beam_ids, beam_d2, beam_exp, vis_ids, vis_d2, nbr_ids, nbr_d2
    )
    return beam_ids[:nb].copy(), beam_d2[:nb].copy(), vis_ids[:nv].copy(), vis_d2[:nv].copy()


@njit(cache=True, inline="always")
def _sort_by_d2(ids, d2, k, order, tmp):
    """Stable bottom-up mergesort of order[:k] by d2 (ties keep assembly order)."""
    for t in range(k):
        order[t] = t
    width = 1
    while width < k:
        lo = 0
        while lo < k:
            mid = lo + width
            hi = mid + width
            if mid > k:
                mid = k
            if hi > k:
                hi = k
            a = lo
            b = mid
            o = lo
            while a < mid and b < hi:
                if d2[order[a]] <= d2[order[b]]:
                    tmp[o] = order[a]
                    a += 1
                else:
                    tmp[o] = order[b]
                    b += 1
                o += 1
            while a < mid:
                tmp[o] = order[a]
                a += 1
                o += 1
            while b < hi:
                tmp[o] = order[b]
                b += 1
                o += 1
            for t in range(lo, hi):
                order[t] = tmp[t]
            lo += 2 * width
        width *= 2


@njit(cache=True)
def _prune_into(points, center, cand_ids, cand_d2, ncand, alpha2, R, order, tmp, alive, sel, sel_d2, dom_ids, dom_d2):
    """Robust prune: keep nearest survivor, drop candidates it alpha-dominates."""
    _sort_by_d2(cand_ids, cand_d2, ncand, order, tmp)
    for t in range(ncand):
        alive[t] = True
    nsel = 0
    for a in range(ncand):
        ia = order[a]
        if not alive[ia]:
            continue
        p = cand_ids[ia]
        sel[nsel] = p
        sel_d2[nsel] = cand_d2[ia]
        nsel += 1
        if nsel == R:
            break
        # Batch the dominance scan over the still-alive tail (tmp is free
        # once the sort is done; it holds the scanned order positions).
        nd = 0
        for b in range(a + 1, ncand):
            ib = order[b]
            if alive[ib]:
                tmp[nd] = ib
                dom_ids[nd] = cand_ids[ib]
                nd += 1
        _batch_d2(points, dom_ids, nd, points[p], dom_d2)
        for b in range(nd):
            if alpha2 * dom_d2[b] <= cand_d2[tmp[b]]:
                alive[tmp[b]] = False
    return nsel


@njit(cache=True)
def robust_prune(points, center, cand_ids, cand_d2, alpha2, R):
    """Standalone robust prune; candidates carry squared distances to center."""
    k = cand_ids.shape[0]
    order = np.empty(k, np.int64)
    tmp = np.empty(k, np.int64)
    alive = np.empty(k, np.bool_)
    sel = np.empty(R, np.int64)
    sel_d2 = np.empty(R, np.float64)
    dom_ids = np.empty(k, np.int64)
    dom_d2 = np.empty(k, np.float64)
    nsel = _prune_into(points, center, cand_ids, cand_d2, k, alpha2, R, order, tmp, alive, sel, sel_d2, dom_ids, dom_d2)
    return sel[:nsel].copy()


@njit(cache=True)
def init_adj_cache(points, adj, deg, adj_d2):
    """Fill the per-list distance cache and sort every list ascending by d2.

    Lists stay sorted by (distance, insertion age) for the whole build; the
    incremental overflow prune in vamana_insert depends on that.
    """
    n = adj.shape[0]
    cap = adj.shape[1]
    ids = np.empty(cap, np.int64)
    d2 = np.empty(cap, np.float64)
    order = np.empty(cap, np.int64)
    tmp = np.empty(cap, np.int64)
    for v in range(n):
        dg = deg[v]
        for t in range(dg):
            ids[t] = adj[v, t]
            d2[t] = _sqdist(points, adj[v, t], points[v])
        _sort_by_d2(ids, d2, dg, order, tmp)
        for t in range(dg):
            s = order[t]
            adj[v, t] = ids[s]
            adj_d2[v, t] = d2[s]


@njit(cache=True)
def vamana_insert(
    points,
    adj,
    adj_d2,
    deg,
    clean,
    i,
    start,
    L,
    alpha2,
    R,
    token,
    stamp,
    beam_ids,
    beam_d2,
    beam_exp,
    vis_ids,
    vis_d2,
    cand_ids,
    cand_d2,
    cand_order,
    cand_tmp,
    cand_alive,
    sel,
    sel_d2,
    rev_ids,
    rev_d2,
    rev_order,
    rev_tmp,
    rev_alive,
    rev_sel,
    rev_sel_d2,
    tail_ids,
    tail_d2,
    nbr_ids,
    nbr_d2,
):
    """One insertion step: search for point i, prune its visited set into its
    out-list, then patch reverse edges.

    clean[v] marks lists that are verbatim robust-prune output. Overflow of a
    clean list is handled incrementally: the stored picks are exactly what a
    full re-prune would select ahead of the newcomer, so only the newcomer's
    own dominance tests are run. Overflow of a dirty list (one that took plain
    appends since its last prune) falls back to the full prune. Both paths
    yield the identical list a from-scratch robust prune would.

    Mutates adj/adj_d2/deg/clean in place; returns the advanced stamp token.
    """
    nb, nv, token = _search_into(
        points, adj, deg, start, points[i], L, stamp, token, beam_ids, beam_d2, beam_exp, vis_ids, vis_d2,
        nbr_ids, nbr_d2,
    )
    # Candidates: the search's visited set, center excluded.
    ncand = 0
    for t in range(nv):
        v = vis_ids[t]
        if v != i:
            cand_ids[ncand] = v
            cand_d2[ncand] = vis_d2[t]
            ncand += 1
    # vis_* are done; they serve as the prune's dominance scratch.
    nsel = _prune_into(
        points, points[i], cand_ids, cand_d2, ncand, alpha2, R, cand_order, cand_tmp, cand_alive, sel, sel_d2,
        vis_ids, vis_d2,
    )
    for t in range(nsel):
        adj[i, t] = sel[t]
        adj_d2[i, t] = sel_d2[t]
    deg[i] = nsel
    clean[i] = 1
    # Reverse edges, pruning any list that overflows R.
    for t in range(nsel):
        j = sel[t]
        dji = sel_d2[t]
        dj = deg[j]
        present = False
        for s in range(dj):
            if adj[j, s] == i:
                present = True
                break
        if present:
            continue
        # Insertion slot: after every stored entry with d2 <= dji.
        p = dj
        for s in range(dj):
            if adj_d2[j, s] > dji:
                p = s
                break
        if dj < R:
            for s in range(dj, p, -1):
                adj[j, s] = adj[j, s - 1]
                adj_d2[j, s] = adj_d2[j, s - 1]
            adj[j, p] = i
            adj_d2[j, p] = dji
            deg[j] = dj + 1
            clean[j] = 0
        elif clean[j] == 0:
            nr = 0
            for s in range(p):
                rev_ids[nr] = adj[j, s]
                rev_d2[nr] = adj_d2[j, s]
                nr += 1
            rev_ids[nr] = i
            rev_d2[nr] = dji
            nr += 1
            for s in range(p, dj):
                rev_ids[nr] = adj[j, s]
                rev_d2[nr] = adj_d2[j, s]
                nr += 1
            nrs = _prune_into(
                points, points[j], rev_ids, rev_d2, nr, alpha2, R, rev_order, rev_tmp, rev_alive, rev_sel, rev_sel_d2,
                tail_ids, tail_d2,
            )
            for s in range(nrs):
                adj[j, s] = rev_sel[s]
                adj_d2[j, s] = rev_sel_d2[s]
            deg[j] = nrs
            clean[j] = 1
        else:
            if p == R:
                # Selection fills all R slots before reaching the newcomer.
                continue
            dominated = False
            if p > 0:
                _batch_d2(points, adj[j], p, points[i], rev_d2)
                for s in range(p):
                    if alpha2 * rev_d2[s] <= dji:
                        dominated = True
                        break
            if dominated:
                continue
            nt = dj - p
            for s in range(nt):
                tail_ids[s] = adj[j, p + s]
                tail_d2[s] = adj_d2[j, p + s]
            _batch_d2(points, tail_ids, nt, points[i], rev_d2)
            adj[j, p] = i
            adj_d2[j, p] = dji
            w = p + 1
            for s in range(nt):
                if w == R:
                    break
                if alpha2 * rev_d2[s] <= tail_d2[s]:
                    continue
                adj[j, w] = tail_ids[s]
                adj_d2[j, w] = tail_d2[s]
                w += 1
            deg[j] = w
    return token


@njit(cache=True)
def vamana_pass(
    points,
    adj,
    adj_d2,
    deg,
    clean,
    order,
    start,
    L,
    alpha2,
    R,
    token,
    stamp,
    beam_ids,
    beam_d2,
    beam_exp,
    vis_ids,
    vis_d2,
    cand_ids,
    cand_d2,
    cand_order,
    cand_tmp,
    cand_alive,
    sel,
    sel_d2,
    rev_ids,
    rev_d2,
    rev_order,
    rev_tmp,
    rev_alive,
    rev_sel,
    rev_sel_d2,
    tail_ids,
    tail_d2,
    nbr_ids,
    nbr_d2,
):
    """Run one full build pass: insert every point in the given order."""
    for t in range(order.shape[0]):
        token = vamana_insert(
            points, adj, adj_d2, deg, clean, order[t], start, L, alpha2, R, token, stamp,
            beam_ids, beam_d2, beam_exp, vis_ids, vis_d2,
            cand_ids, cand_d2, cand_order, cand_tmp, cand_alive, sel, sel_d2,
            rev_ids, rev_d2, rev_order, rev_tmp, rev_alive, rev_sel, rev_sel_d2,
            tail_ids, tail_d2, nbr_ids, nbr_d2,
        )
    return token


@njit(cache=True)
def min_cross(points, ids_a, ids_b):
    """Exact nearest pair across two id sets: (a, b, squared distance)."""
    best_a = -1
    best_b = -1
    bv = np.inf
    for s in range(ids_a.shape[0]):
        a = ids_a[s]
        qa = points[a]
        for t in range(ids_b.shape[0]):
            b = ids_b[t]
            d2 = _sqdist(points, b, qa)
            if d2 < bv or (d2 == bv and (a < best_a or (a == best_a and b < best_b))):
                bv = d2
                best_a = a
                best_b = b
    return best_a, best_b, bv
