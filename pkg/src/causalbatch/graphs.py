"""Core graph types: DAGs, partially directed graphs, interventions, batches.

Nodes are dense 0-based integers 0..p-1. All graph objects are immutable
after construction and hashable, so they can be shared freely and used as
memoization keys.
"""

from __future__ import annotations

from typing import Iterable

MAX_NODES = 512

# An intervention is just a set of target nodes; a batch is a set of
# interventions.  Frozensets give us set semantics and hashability for free.
Intervention = frozenset
Batch = frozenset

Edge = tuple  # ordered pair (i, j) meaning i -> j


class GraphError(ValueError):
    """Invalid graph construction (self-loop, cycle, bad node id, ...)."""


class PatternMismatchError(GraphError):
    """A partially directed graph disagrees with the DAG it should refine."""


def _check_node(i, p):
    if not (0 <= i < p):
        raise GraphError(f"node {i} out of range for p={p}")


class Dag:
    """Immutable directed acyclic graph over nodes 0..p-1."""

    __slots__ = ("p", "edges", "parents", "children", "_hash")

    def __init__(self, p: int, edges: Iterable[Edge] = ()):
        if p < 1:
            raise GraphError("p must be >= 1")
        if p > MAX_NODES:
            raise GraphError(f"p={p} exceeds the supported maximum {MAX_NODES}")
        edge_set = frozenset((int(i), int(j)) for i, j in edges)
        parents = [set() for _ in range(p)]
        children = [set() for _ in range(p)]
        for i, j in edge_set:
            _check_node(i, p)
            _check_node(j, p)
            if i == j:
                raise GraphError(f"self-loop at node {i}")
            if (j, i) in edge_set:
                raise GraphError(f"both orientations of {{{i},{j}}} present")
            parents[j].add(i)
            children[i].add(j)
        if not is_acyclic(edge_set, p):
            raise GraphError("edge set contains a cycle")
        self.p = p
        self.edges = edge_set
        self.parents = tuple(frozenset(s) for s in parents)
        self.children = tuple(frozenset(s) for s in children)
        self._hash = hash((p, edge_set))

    def has_edge(self, i, j) -> bool:
        return (i, j) in self.edges

    def adjacent(self, i, j) -> bool:
        return (i, j) in self.edges or (j, i) in self.edges

    def __eq__(self, other):
        return (
            isinstance(other, Dag)
            and self.p == other.p
            and self.edges == other.edges
        )

    def __hash__(self):
        return self._hash

    def __repr__(self):
        es = ",".join(f"{i}->{j}" for i, j in sorted(self.edges))
        return f"Dag(p={self.p}, [{es}])"


class Pdag:
    """Immutable partially directed graph: directed plus undirected edges.

    Undirected edges are stored canonically as (min, max) pairs.
    """

    __slots__ = ("p", "directed", "undirected", "parents", "children",
                 "neighbors", "_hash")

    def __init__(self, p: int, directed: Iterable[Edge] = (),
                 undirected: Iterable[Edge] = ()):
        if p < 1:
            raise GraphError("p must be >= 1")
        if p > MAX_NODES:
            raise GraphError(f"p={p} exceeds the supported maximum {MAX_NODES}")
        dir_set = frozenset((int(i), int(j)) for i, j in directed)
        und_set = frozenset(
            (min(int(i), int(j)), max(int(i), int(j))) for i, j in undirected
        )
        parents = [set() for _ in range(p)]
        children = [set() for _ in range(p)]
        neighbors = [set() for _ in range(p)]
        for i, j in dir_set:
            _check_node(i, p)
            _check_node(j, p)
            if i == j:
                raise GraphError(f"self-loop at node {i}")
            if (j, i) in dir_set:
                raise GraphError(f"both orientations of {{{i},{j}}} present")
            parents[j].add(i)
            children[i].add(j)
        for i, j in und_set:
            _check_node(j, p)
            if i == j:
                raise GraphError(f"self-loop at node {i}")
            if (i, j) in dir_set or (j, i) in dir_set:
                raise GraphError(f"edge {{{i},{j}}} both directed and undirected")
            neighbors[i].add(j)
            neighbors[j].add(i)
        self.p = p
        self.directed = dir_set
        self.undirected = und_set
        self.parents = tuple(frozenset(s) for s in parents)
        self.children = tuple(frozenset(s) for s in children)
        self.neighbors = tuple(frozenset(s) for s in neighbors)
        self._hash = hash((p, dir_set, und_set))

    def adjacent(self, i, j) -> bool:
        return (
            j in self.neighbors[i]
            or (i, j) in self.directed
            or (j, i) in self.directed
        )

    @property
    def num_edges(self) -> int:
        return len(self.directed) + len(self.undirected)

    def is_fully_directed(self) -> bool:
        return not self.undirected

    def __eq__(self, other):
        return (
            isinstance(other, Pdag)
            and self.p == other.p
            and self.directed == other.directed
            and self.undirected == other.undirected
        )

    def __hash__(self):
        return self._hash

    def __repr__(self):
        ds = ",".join(f"{i}->{j}" for i, j in sorted(self.directed))
        us = ",".join(f"{i}-{j}" for i, j in sorted(self.undirected))
        return f"Pdag(p={self.p}, [{ds}], [{us}])"


def is_acyclic(edges, p: int) -> bool:
    """True iff the directed edge set admits a topological order (Kahn)."""
    indeg = [0] * p
    children = [[] for _ in range(p)]
    for i, j in edges:
        indeg[j] += 1
        children[i].append(j)
    stack = [v for v in range(p) if indeg[v] == 0]
    seen = 0
    while stack:
        v = stack.pop()
        seen += 1
        for c in children[v]:
            indeg[c] -= 1
            if indeg[c] == 0:
                stack.append(c)
    return seen == p


def topological_order(g: Dag) -> list:
    indeg = [len(g.parents[v]) for v in range(g.p)]
    stack = sorted((v for v in range(g.p) if indeg[v] == 0), reverse=True)
    order = []
    while stack:
        v = stack.pop()
        order.append(v)
        for c in sorted(g.children[v], reverse=True):
            indeg[c] -= 1
            if indeg[c] == 0:
                stack.append(c)
    return order


def skeleton(g: Dag) -> Pdag:
    """Drop all orientations from a DAG."""
    return Pdag(g.p, directed=(), undirected=g.edges)


def v_structures(g: Dag):
    """All collider triples (i, j, k): i->k<-j with i, j nonadjacent, i < j."""
    out = set()
    for k in range(g.p):
        pars = sorted(g.parents[k])
        for a in range(len(pars)):
            for b in range(a + 1, len(pars)):
                i, j = pars[a], pars[b]
                if not g.adjacent(i, j):
                    out.add((i, j, k))
    return frozenset(out)


def intervention(targets: Iterable) -> Intervention:
    return frozenset(int(t) for t in targets)


def batch(interventions: Iterable) -> Batch:
    return frozenset(frozenset(int(t) for t in i) for i in interventions)


def canonical_batch(b: Batch):
    """Deterministic tuple-of-tuples form, for ordering and serialization."""
    return tuple(sorted(tuple(sorted(i)) for i in b))


def check_constraints(b: Batch, m: int, q: int) -> bool:
    """True iff the batch has at most m interventions, each with <= q targets."""
    return len(b) <= m and all(len(i) <= q for i in b)
