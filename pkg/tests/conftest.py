import numpy as np
import pytest

from so3topo.suites import corpus


@pytest.fixture
def rng():
    return np.random.default_rng(20261018)


@pytest.fixture(scope="session")
def loop_corpus():
    return corpus(11, 200)


def random_unit_quats(rng, n):
    g = rng.standard_normal((n, 4))
    return g / np.linalg.norm(g, axis=1, keepdims=True)


def rodrigues(axis, angle):
    """Independent axis-angle -> matrix, via the matrix exponential series of the cross-product matrix."""
    n = np.asarray(axis, float) / np.linalg.norm(axis)
    K = np.array([[0, -n[2], n[1]], [n[2], 0, -n[0]], [-n[1], n[0], 0]]) * angle
    out = np.eye(3)
    term = np.eye(3)
    for k in range(1, 60):
        term = term @ K / k
        out = out + term
    return out
