import numpy as np
import pytest


def caterpillar_blobs(n_blobs=4, per=250, sep=50.0, d=4):
    """Well-separated blobs whose intra-blob merges happen one point at a time.

    Strictly increasing consecutive gaps along one axis make every blob's
    merge subtree a caterpillar, so simplification collapses each blob to a
    single component of interest for any eta <= per.
    """
    centers = np.zeros((n_blobs, d))
    for b in range(1, n_blobs):
        centers[b, (b - 1) % d] = sep
    rows = []
    for b in range(n_blobs):
        x = 0.0
        for j in range(per):
            p = centers[b].copy()
            p[0] += x
            rows.append(p)
            x += 0.001 * (1 + (j + per * b) / (8.0 * per))
    return np.asarray(rows)


@pytest.fixture(scope="session")
def iris_points():
    from sklearn.datasets import load_iris

    from topoproj import PointSet
    return PointSet(load_iris().data.astype(np.float64))


@pytest.fixture()
def rng():
    return np.random.default_rng(0)
