import pytest

from causalbatch.graphs import (
    Dag, GraphError, Pdag, batch, canonical_batch, check_constraints,
    is_acyclic, skeleton, topological_order, v_structures,
)


def test_dag_rejects_self_loop():
    with pytest.raises(GraphError):
        Dag(3, [(0, 0)])


def test_dag_rejects_cycle():
    with pytest.raises(GraphError):
        Dag(3, [(0, 1), (1, 2), (2, 0)])


def test_dag_rejects_double_edge():
    with pytest.raises(GraphError):
        Dag(3, [(0, 1), (1, 0)])


def test_dag_parents_children(t5):
    assert t5.parents[3] == frozenset({1})
    assert t5.children[0] == frozenset({1, 2})
    assert t5.parents[0] == frozenset()


def test_topological_order(t5):
    order = topological_order(t5)
    pos = {v: k for k, v in enumerate(order)}
    for i, j in t5.edges:
        assert pos[i] < pos[j]


def test_is_acyclic():
    assert is_acyclic([(0, 1), (1, 2)], 3)
    assert not is_acyclic([(0, 1), (1, 0)], 2)


def test_skeleton(t5):
    sk = skeleton(t5)
    assert sk.directed == frozenset()
    assert sk.undirected == frozenset({(0, 1), (0, 2), (1, 3), (1, 4)})


def test_v_structures():
    collider = Dag(3, [(0, 2), (1, 2)])
    assert v_structures(collider) == frozenset({(0, 1, 2)})
    chain = Dag(3, [(0, 1), (1, 2)])
    assert v_structures(chain) == frozenset()
    # shielded: 0-1 adjacent, not a v-structure
    shielded = Dag(3, [(0, 2), (1, 2), (0, 1)])
    assert v_structures(shielded) == frozenset()


def test_pdag_adjacency():
    pd = Pdag(4, [(0, 1)], [(1, 2)])
    assert pd.adjacent(0, 1) and pd.adjacent(1, 2)
    assert not pd.adjacent(0, 2)
    assert pd.num_edges == 2
    assert not pd.is_fully_directed()
    assert Pdag(2, [(0, 1)], []).is_fully_directed()


def test_pdag_undirected_canonical():
    assert Pdag(3, [], [(2, 1)]).undirected == frozenset({(1, 2)})


def test_batch_constraints():
    b = batch([{0, 1}, {2}])
    assert check_constraints(b, m=2, q=2)
    assert not check_constraints(b, m=1, q=2)
    assert not check_constraints(b, m=2, q=1)
    assert check_constraints(frozenset(), m=1, q=1)


def test_canonical_batch_deduplicates():
    b = canonical_batch(batch([[1, 0], [0, 1], [2]]))
    assert b == ((0, 1), (2,))
