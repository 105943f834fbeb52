import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from causalbatch.graphs import Dag, Pdag
from causalbatch.mec import essential_graph
from causalbatch.sepsys import (
    SparsityError, all_pairs, separate_agnostic, separate_graph_sensitive,
    verify_separation,
)

from conftest import random_dag


@given(st.integers(2, 64), st.data())
@settings(max_examples=150, deadline=None)
def test_agnostic_separates_all_pairs(p, data):
    q = data.draw(st.integers(1, p // 2))
    ss = separate_agnostic(p, q)
    assert verify_separation(ss, all_pairs(p))
    assert all(len(s) <= q for s in ss.sets)
    assert len(ss) <= math.ceil(p / q) * math.ceil(math.log2(p))


def test_agnostic_rejects_bad_sparsity():
    with pytest.raises(SparsityError):
        separate_agnostic(8, 0)
    with pytest.raises(SparsityError):
        separate_agnostic(8, 5)  # q > floor(p/2)


def test_agnostic_singletons_at_q1():
    ss = separate_agnostic(6, 1)
    assert all(len(s) == 1 for s in ss.sets)
    assert verify_separation(ss, all_pairs(6))


def test_graph_sensitive_k5_all_singletons():
    # undirected complete graph: cover nodes are pairwise adjacent, so
    # every color class (and hence every set) is a single node
    k5 = Pdag(5, [], [(i, j) for i in range(5) for j in range(i + 1, 5)])
    for q in (1, 2, 3):
        ss = separate_graph_sensitive(k5, q)
        assert all(len(s) == 1 for s in ss.sets)
        assert verify_separation(ss, k5)


def test_graph_sensitive_star_forest_hubs():
    hubs = Dag(20, [(0, leaf) for leaf in range(1, 7)]
               + [(7, leaf) for leaf in range(8, 14)]
               + [(14, leaf) for leaf in range(15, 20)])
    ess = essential_graph(hubs).pdag
    ss = separate_graph_sensitive(ess, 3)
    assert verify_separation(ss, ess)
    # the hubs are mutually nonadjacent, so they land in one color class
    # and survive 3-chunking as a single intervention
    assert frozenset({0, 7, 14}) in ss.sets


def test_graph_sensitive_fuzz():
    rng = np.random.default_rng(5)
    for _ in range(100):
        g = random_dag(rng, int(rng.integers(3, 10)))
        ess = essential_graph(g).pdag
        q = int(rng.integers(1, 4))
        ss = separate_graph_sensitive(ess, q)
        assert verify_separation(ss, ess)
        assert all(len(s) <= q for s in ss.sets)


def test_verify_separation_detects_failure():
    from causalbatch.sepsys import SeparatingSystem
    ss = SeparatingSystem((frozenset({0, 1}),), 2, "agnostic")
    assert not verify_separation(ss, [(0, 1)])
    assert verify_separation(ss, [(0, 2)])
