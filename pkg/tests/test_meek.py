import numpy as np
import pytest

from causalbatch.graphs import Dag, PatternMismatchError, Pdag, batch
from causalbatch.mec import enumerate_mec, essential_graph
from causalbatch.meek import meek_closure, orient_by_intervention, r_oriented

from conftest import random_dag


def test_cut_orientation_t5(t5, t5_ess):
    # intervening on node 1 cuts 0-1, 1-3, 1-4 but not 0-2
    pd = orient_by_intervention(t5_ess.pdag, t5, frozenset({1}))
    assert (0, 1) in pd.directed
    assert (1, 3) in pd.directed
    assert (1, 4) in pd.directed
    assert (0, 2) in pd.undirected


def test_r_oriented_t5_frozen(t5, t5_ess):
    got = r_oriented(batch([{1}]), t5, t5_ess.pdag)
    assert got == frozenset({(0, 1), (1, 3), (1, 4)})
    # node 2 alone only pins 0->2; no propagation back up the tree
    assert r_oriented(batch([{2}]), t5, t5_ess.pdag) == frozenset({(0, 2)})
    assert r_oriented(frozenset(), t5, t5_ess.pdag) == frozenset()


def test_meek_rule1_chain():
    # 0->1, 1-2, 0 and 2 nonadjacent: must become 1->2
    pd = meek_closure(Pdag(3, [(0, 1)], [(1, 2)]))
    assert (1, 2) in pd.directed


def test_meek_rule2_transitive():
    pd = meek_closure(Pdag(3, [(0, 1), (1, 2)], [(0, 2)]))
    assert (0, 2) in pd.directed


def test_pattern_mismatch_raises(t5):
    wrong = Pdag(5, [(1, 0)], [(0, 2), (1, 3), (1, 4)])
    with pytest.raises(PatternMismatchError):
        r_oriented(batch([{1}]), t5, wrong)


def test_closure_idempotent_and_order_independent():
    rng = np.random.default_rng(0)
    for _ in range(50):
        g = random_dag(rng, int(rng.integers(3, 8)))
        ess = essential_graph(g).pdag
        once = meek_closure(ess)
        assert meek_closure(once) == once
        for k in range(10):
            shuffled = meek_closure(ess, np.random.default_rng(k))
            assert shuffled == once


def test_r_monotone_in_batch():
    rng = np.random.default_rng(1)
    for _ in range(200):
        g = random_dag(rng, int(rng.integers(3, 8)))
        ess = essential_graph(g).pdag
        nodes = list(range(g.p))
        i1 = frozenset(rng.choice(nodes, size=2, replace=False).tolist())
        i2 = frozenset(rng.choice(nodes, size=2, replace=False).tolist())
        small = r_oriented(batch([i1]), g, ess)
        big = r_oriented(batch([i1, i2]), g, ess)
        assert small <= big


def test_r_complement_symmetry():
    # intervening on I cuts the same edges as intervening on V \ I
    rng = np.random.default_rng(2)
    for _ in range(200):
        g = random_dag(rng, int(rng.integers(3, 8)))
        ess = essential_graph(g).pdag
        size = int(rng.integers(1, g.p))
        i_set = frozenset(rng.choice(g.p, size=size, replace=False).tolist())
        comp = frozenset(range(g.p)) - i_set
        assert r_oriented(batch([i_set]), g, ess) == \
            r_oriented(batch([comp]), g, ess)


def test_r_soundness_against_mec():
    # every orientation returned by R must agree with the ground truth,
    # and must hold in all MEC members that share the same cut pattern
    rng = np.random.default_rng(3)
    for _ in range(50):
        g = random_dag(rng, 5)
        ess = essential_graph(g)
        i_set = frozenset(rng.choice(5, size=2, replace=False).tolist())
        oriented = r_oriented(batch([i_set]), g, ess.pdag)
        for i, j in oriented:
            assert (i, j) in g.edges
        for member in enumerate_mec(ess).dags:
            got = r_oriented(batch([i_set]), member, ess.pdag)
            for i, j in got:
                assert (i, j) in member.edges
