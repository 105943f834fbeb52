import numpy as np
import pytest

from causalbatch.graphs import Dag
from causalbatch.mec import enumerate_mec, essential_graph


@pytest.fixture(scope="session")
def t5():
    """Five-node tree: 0 -> {1, 2}, 1 -> {3, 4}.  MEC has 5 members."""
    return Dag(5, [(0, 1), (0, 2), (1, 3), (1, 4)])


@pytest.fixture(scope="session")
def t5_ess(t5):
    return essential_graph(t5)


@pytest.fixture(scope="session")
def t5_ens(t5_ess):
    return enumerate_mec(t5_ess)


def random_dag(rng, p, density=0.4):
    perm = rng.permutation(p)
    edges = [(int(perm[a]), int(perm[b]))
             for a in range(p) for b in range(a + 1, p)
             if rng.random() < density]
    return Dag(p, edges)
