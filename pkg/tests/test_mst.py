import math

import numpy as np
import pytest

from topoproj import PointSet, SpanningTree, exact_emst, mst_of_graph
from topoproj.mst import Forest

from oracles import brute_mst_weights

# frozen oracle outputs (quadratic Kruskal, see oracles.py)
N30_SEED42_TOTAL = 18.864453317415578
N30_SEED42_LMAX = 1.3527489802707582
IRIS_TOTAL = 43.523779638298755
IRIS_LMAX = 1.6401219466856725


def test_exact_matches_brute_force():
    for seed in range(12):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(2, 120))
        d = int(rng.integers(1, 8))
        X = rng.normal(size=(n, d))
        tree = exact_emst(PointSet(X))
        ref = brute_mst_weights(X)
        assert len(tree.ws) == n - 1
        assert np.allclose(np.sort(tree.ws), ref, rtol=1e-12, atol=0)


def test_frozen_30_point_tree():
    X = np.random.default_rng(42).normal(size=(30, 3))
    tree = exact_emst(PointSet(X))
    assert tree.total_weight == pytest.approx(N30_SEED42_TOTAL, rel=1e-12)
    assert tree.l_max == pytest.approx(N30_SEED42_LMAX, rel=1e-12)


def test_frozen_iris_tree(iris_points):
    tree = exact_emst(iris_points)
    assert tree.total_weight == pytest.approx(IRIS_TOTAL, rel=1e-12)
    assert tree.l_max == pytest.approx(IRIS_LMAX, rel=1e-12)


def test_edges_sorted_canonical(rng):
    tree = exact_emst(PointSet(rng.normal(size=(80, 4))))
    assert np.all(np.diff(tree.ws) >= 0)
    assert np.all(tree.us < tree.vs)


def test_duplicate_points_zero_edges():
    X = np.array([[1.0, 1.0], [1.0, 1.0], [5.0, 5.0]])
    tree = exact_emst(PointSet(X))
    assert np.sort(tree.ws)[0] == 0.0
    assert tree.total_weight == pytest.approx(np.sqrt(32.0))


def test_single_and_pair():
    t1 = exact_emst(np.array([[0.0, 0.0]]))
    assert t1.n == 1 and len(t1.ws) == 0 and t1.total_weight == 0.0
    t2 = exact_emst(np.array([[0.0, 0.0], [3.0, 4.0]]))
    assert t2.edges == [(0, 1, 5.0)]
    assert t2.l_max == 5.0


def test_text_roundtrip_exact(rng):
    tree = exact_emst(PointSet(rng.normal(size=(40, 3))))
    back = SpanningTree.from_text(tree.to_text(), n=tree.n)
    assert np.array_equal(back.ws, tree.ws)  # repr round-trip
    assert np.array_equal(back.us, tree.us)
    # n inferred from edge count when omitted
    assert SpanningTree.from_text(tree.to_text()).n == tree.n


def test_json_roundtrip(tmp_path, rng):
    tree = exact_emst(PointSet(rng.normal(size=(25, 2))))
    back = SpanningTree.from_json(tree.to_json())
    assert np.array_equal(back.ws, tree.ws)
    p = tmp_path / "t.json"
    tree.save(p)
    loaded = SpanningTree.load(p)
    assert np.array_equal(loaded.ws, tree.ws)
    assert loaded.meta == tree.meta


def test_mst_of_graph_complete_equals_exact(rng):
    X = rng.normal(size=(40, 3))
    n = 40
    iu, iv = np.triu_indices(n, k=1)
    ws = np.linalg.norm(X[iu] - X[iv], axis=1)
    got = mst_of_graph(n, iu, iv, ws)
    assert isinstance(got, SpanningTree)
    assert np.allclose(np.sort(got.ws), brute_mst_weights(X), rtol=1e-12, atol=0)


def test_mst_of_graph_disconnected_forest():
    # two triangles, no bridge
    us = [0, 1, 2, 3, 4, 5]
    vs = [1, 2, 0, 4, 5, 3]
    ws = [1.0, 2.0, 3.0, 1.0, 2.0, 3.0]
    got = mst_of_graph(6, us, vs, ws)
    assert isinstance(got, Forest)
    assert got.n_components == 2
    assert sorted(len(c) for c in got.components) == [3, 3]


def test_mst_of_graph_rejects_bad_edges():
    with pytest.raises(ValueError):
        mst_of_graph(3, [0], [0], [1.0])
    with pytest.raises(ValueError):
        mst_of_graph(3, [0], [5], [1.0])


def test_constructor_canonicalizes_edges():
    # arbitrary input order and orientation normalize to (w, u, v) ascending
    t = SpanningTree(4, [3, 1, 2], [2, 0, 1], [5.0, 2.0, 2.0])
    assert t.us.tolist() == [0, 1, 2]
    assert t.vs.tolist() == [1, 2, 3]
    assert t.ws.tolist() == [2.0, 2.0, 5.0]
    assert t.l_max == 5.0
    with pytest.raises(ValueError, match="self-loop"):
        SpanningTree(2, [1], [1], [1.0])
    with pytest.raises(ValueError, match="out of range"):
        SpanningTree(2, [0], [2], [1.0])


def test_total_weight_uses_stable_sum(rng):
    X = rng.normal(size=(200, 2))
    tree = exact_emst(PointSet(X))
    assert tree.total_weight == pytest.approx(math.fsum(tree.ws), rel=1e-15)
