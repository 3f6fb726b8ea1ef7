import numpy as np
import pytest

from topoproj import (PointSet, VamanaGraph, VamanaParams, amst, build_vamana,
                      exact_emst, greedy_search, robust_prune)
from topoproj.vamana import medoid, symmetrize_edges

from oracles import brute_knn, brute_mst_weights


def test_params_validation():
    with pytest.raises(ValueError):
        VamanaParams(alpha=0.9)
    with pytest.raises(ValueError):
        VamanaParams(R=0)
    with pytest.raises(ValueError):
        VamanaParams(L=10, R=20)
    with pytest.raises(ValueError):
        VamanaParams(passes=0)
    p = VamanaParams()
    assert (p.alpha, p.L, p.R, p.passes) == (1.3, 100, 100, 2)


def test_medoid_brute_force(rng):
    X = rng.normal(size=(40, 3))
    # sample covers everything when n <= sample_size, so this is the true medoid
    dist = np.linalg.norm(X[:, None] - X[None, :], axis=2)
    assert medoid(X) == int(np.argmin(dist.sum(axis=1)))


def test_out_degree_bounded():
    X = np.random.default_rng(1).normal(size=(5000, 8))
    params = VamanaParams(alpha=1.3, L=50, R=32)
    g = build_vamana(X, params, seed=0)
    assert int(g.deg.max()) <= 32


def test_recall_at_1_and_10(rng):
    X = rng.normal(size=(2000, 12))
    g = build_vamana(X, VamanaParams(alpha=1.3, L=64, R=48), seed=0)
    hit1 = hit10 = 0
    queries = rng.normal(size=(100, 12))
    for q in queries:
        best, _ = greedy_search(g, X, q, k=10)
        got = [i for i, _ in best]
        want = brute_knn(X, q, 10)
        hit1 += got[0] == want[0]
        hit10 += len(set(got) & set(want)) / 10.0
    assert hit1 / 100 >= 0.95, f"recall@1 {hit1 / 100}"
    assert hit10 / 100 >= 0.9, f"recall@10 {hit10 / 100}"


def test_greedy_search_two_points():
    X = np.array([[0.0, 0.0], [1.0, 0.0]])
    g = build_vamana(X, VamanaParams(alpha=1.0, L=2, R=1, passes=1), seed=0)
    best, visited = greedy_search(g, X, [0.9, 0.0], k=1)
    assert best[0][0] == 1
    assert best[0][1] == pytest.approx(0.1)
    assert len(visited) >= 1


def test_greedy_search_validates():
    X = np.zeros((3, 2))
    g = build_vamana(X, VamanaParams(alpha=1.0, L=3, R=2, passes=1), seed=0)
    with pytest.raises(ValueError):
        greedy_search(g, X, [0.0], k=1)  # dimension mismatch
    with pytest.raises(ValueError):
        greedy_search(g, X, [0.0, 0.0], k=5, L=3)


def test_robust_prune_occlusion_hand_case():
    # center at 0, candidates at 1 and 2 on a line, alpha=2:
    # keeping x=1 occludes x=2 because 2*d(1,2) = 2 <= d(0,2) = 2
    X = np.array([[0.0], [1.0], [2.0]])
    sel = robust_prune(X, 0, [(1, 1.0), (2, 2.0)], alpha=2.0, R=3)
    assert sel == [1]
    # alpha=1 keeps both: 1*d(1,2) = 1 <= 2 still occludes -> [1]
    sel = robust_prune(X, 0, [(1, 1.0), (2, 2.0)], alpha=1.0, R=3)
    assert sel == [1]
    # pull 2 away so it survives
    X = np.array([[0.0, 0.0], [1.0, 0.0], [1.0, 2.0]])
    sel = robust_prune(X, 0, [(1, 1.0), (2, np.sqrt(5.0))], alpha=1.3, R=3)
    assert sel == [1, 2]


def test_robust_prune_respects_r(rng):
    X = rng.normal(size=(50, 4))
    d = np.linalg.norm(X - X[0], axis=1)
    cands = [(i, float(d[i])) for i in range(1, 50)]
    sel = robust_prune(X, 0, cands, alpha=1.0, R=5)
    assert len(sel) <= 5
    assert len(set(sel)) == len(sel)


def test_build_deterministic_per_seed(rng):
    X = rng.normal(size=(400, 6))
    params = VamanaParams(alpha=1.3, L=32, R=24)
    g1 = build_vamana(X, params, seed=9)
    g2 = build_vamana(X, params, seed=9)
    assert np.array_equal(g1.adj, g2.adj) and np.array_equal(g1.deg, g2.deg)
    g3 = build_vamana(X, params, seed=10)
    assert not np.array_equal(g1.adj, g3.adj)


def test_symmetrized_graph_connected_at_defaults():
    X = np.random.default_rng(3).normal(size=(1000, 16))
    g = build_vamana(X, VamanaParams(), seed=0)
    us, vs = symmetrize_edges(g)
    # union-find over the undirected edge set
    parent = np.arange(1000)

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v in zip(us, vs):
        parent[find(int(u))] = find(int(v))
    assert len({find(i) for i in range(1000)}) == 1


def test_amst_weight_dominates_exact():
    for seed in range(5):
        X = np.random.default_rng(seed).normal(size=(300, 8))
        exact = exact_emst(PointSet(X))
        approx = amst(X, VamanaParams(alpha=1.3, L=32, R=24), seed=seed)
        assert approx.n == 300 and len(approx.ws) == 299
        assert approx.total_weight >= exact.total_weight - 1e-9


def test_amst_close_to_exact_on_easy_data(rng):
    X = rng.normal(size=(500, 6))
    exact = exact_emst(PointSet(X))
    approx = amst(X, VamanaParams(), seed=0)
    excess = (approx.total_weight - exact.total_weight) / exact.total_weight
    assert excess <= 1e-3, f"rwe {excess}"


def test_amst_single_point_and_pair():
    t = amst(np.array([[1.0, 2.0]]), VamanaParams(alpha=1.0, L=1, R=1, passes=1), seed=0)
    assert t.n == 1 and len(t.ws) == 0
    t = amst(np.array([[0.0, 0.0], [3.0, 4.0]]),
             VamanaParams(alpha=1.0, L=2, R=1, passes=1), seed=0)
    assert t.edges == [(0, 1, 5.0)]


def test_amst_weights_match_brute_on_small_sets():
    for seed in range(4):
        X = np.random.default_rng(100 + seed).normal(size=(120, 4))
        approx = amst(X, VamanaParams(alpha=1.3, L=60, R=40), seed=seed)
        ref = brute_mst_weights(X)
        # dense enough graph: the approximation is exact here
        assert np.allclose(np.sort(approx.ws), ref, rtol=1e-12, atol=0)


def test_graph_json_roundtrip(tmp_path, rng):
    X = rng.normal(size=(30, 3))
    g = build_vamana(X, VamanaParams(alpha=1.2, L=8, R=6, passes=1), seed=2)
    back = VamanaGraph.from_json(g.to_json())
    assert np.array_equal(back.deg, g.deg)
    assert all(np.array_equal(back.out_neighbors(i), g.out_neighbors(i))
               for i in range(30))
    assert back.medoid == g.medoid
    assert back.params == g.params
