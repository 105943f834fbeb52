import itertools

import numpy as np
import pytest

from causalbatch.graphs import Dag, batch, skeleton, v_structures
from causalbatch.mec import (
    DagEnsemble, MecSizeError, enumerate_mec, essential_graph,
    interventional_classes, mec_size, diminishing_returns_counterexample, sample_ensemble,
)

from conftest import random_dag


def brute_force_mec(g: Dag):
    """All orientations of g's skeleton with the same skeleton+colliders."""
    sk = sorted(skeleton(g).undirected)
    base_vs = v_structures(g)
    members = []
    for bits in itertools.product([0, 1], repeat=len(sk)):
        edges = [(i, j) if b == 0 else (j, i) for (i, j), b in zip(sk, bits)]
        try:
            cand = Dag(g.p, edges)
        except ValueError:
            continue
        if v_structures(cand) == base_vs:
            members.append(cand)
    return sorted(members, key=lambda d: sorted(d.edges))


def test_t5_mec_size(t5, t5_ess, t5_ens):
    assert len(t5_ens) == 5
    assert mec_size(t5_ess) == 5
    # members are exactly the 5 rooted versions of the tree
    assert t5 in t5_ens.dags


def test_enumeration_matches_brute_force():
    rng = np.random.default_rng(4)
    for _ in range(60):
        g = random_dag(rng, int(rng.integers(2, 6)), density=0.5)
        ens = enumerate_mec(essential_graph(g))
        assert list(ens.dags) == brute_force_mec(g)


def test_fully_directed_essential_graph_single_member():
    collider = Dag(3, [(0, 2), (1, 2)])
    ens = enumerate_mec(essential_graph(collider))
    assert len(ens) == 1 and ens.dags[0] == collider


def test_essential_graph_same_for_all_members(t5_ess, t5_ens):
    for member in t5_ens.dags:
        assert essential_graph(member).pdag == t5_ess.pdag


def test_essential_graph_with_prior(t5):
    ess = essential_graph(t5, batch([{1}, {2}]))
    assert ess.pdag.is_fully_directed()
    assert ess.pdag.directed == t5.edges


def test_cap_enforced():
    g = Dag(8, [(i, j) for i in range(8) for j in range(i + 1, 8)])
    with pytest.raises(MecSizeError):
        enumerate_mec(essential_graph(g), cap=100)


def test_interventional_classes_partition(t5_ens, t5_ess):
    classes = interventional_classes(t5_ens, batch([{1}]), t5_ess)
    flat = sorted(i for c in classes for i in c)
    assert flat == list(range(5))
    assert sorted(len(c) for c in classes) == [1, 1, 1, 2]
    # a separating batch isolates every member
    full = interventional_classes(t5_ens, batch([{1}, {2}]), t5_ess)
    assert sorted(len(c) for c in full) == [1] * 5


def test_sample_ensemble_reproducible(t5_ess):
    a = sample_ensemble(t5_ess, n=12, seed=9)
    b = sample_ensemble(t5_ess, n=12, seed=9)
    assert a.dags == b.dags
    assert len(a) == 12


def test_ensemble_weights_default_uniform(t5_ens):
    assert np.allclose(t5_ens.weights, 0.2)
    with pytest.raises(ValueError):
        DagEnsemble(t5_ens.dags, (1.0,))


def test_diminishing_returns_counterexample_shape():
    ens, i2, i1, v = diminishing_returns_counterexample()
    assert len(ens) == 3
    assert i1 < i2 and v not in i2
    assert all(g.p == 6 for g in ens.dags)
