"""q-sparse separating-system constructions.

Two constructions: a graph-agnostic mixed-radix labeling that separates
every node pair, and a graph-sensitive one built from a matching-based
vertex cover plus Welsh-Powell coloring that separates exactly the
undirected edges of a given Pdag.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .graphs import Pdag


@dataclass(frozen=True)
class SeparatingSystem:
    sets: tuple          # tuple of frozenset interventions
    sparsity: int        # q
    mode: str            # "agnostic" | "graph_sensitive"

    def __len__(self):
        return len(self.sets)

    def __iter__(self):
        return iter(self.sets)


class SparsityError(ValueError):
    """q outside the valid range for the requested construction."""


def separate_agnostic(p: int, q: int) -> SeparatingSystem:
    """Structure-agnostic system separating every node pair.

    Mixed-radix labeling: nodes are grouped into a = ceil(p/q) blocks of
    at most q nodes (first label digit, base a), and nodes within a block
    are told apart by the binary digits of their in-block index (one label
    section per block).  Emitting the support of every nonzero symbol
    yields at most (a - 1) + a * ceil(log2 q) sets, each of size <= q,
    which stays within the ceil(p/q) * ceil(log2 p) budget for q <= p/2;
    distinct labels separate every pair.
    """
    if not 1 <= q <= p // 2:
        raise SparsityError(f"need 1 <= q <= floor(p/2), got q={q}, p={p}")
    blocks = [list(range(k, min(k + q, p))) for k in range(0, p, q)]
    sets = [frozenset(b) for b in blocks[1:]]
    bits = max(1, math.ceil(math.log2(q))) if q > 1 else 0
    for block in blocks:
        for k in range(bits):
            s = frozenset(v for idx, v in enumerate(block) if idx >> k & 1)
            if s:
                sets.append(s)
    return SeparatingSystem(tuple(sets), q, "agnostic")


def _maximal_matching_cover(und_edges):
    """Vertex cover via greedy maximal matching (2-approximation)."""
    cover = set()
    for i, j in sorted(und_edges):
        if i not in cover and j not in cover:
            cover.add(i)
            cover.add(j)
    return cover


def _welsh_powell(nodes, adj):
    """Greedy coloring, highest degree first, ties by node id."""
    order = sorted(nodes, key=lambda v: (-len(adj[v] & nodes), v))
    color = {}
    for v in order:
        used = {color[u] for u in adj[v] if u in color}
        c = 0
        while c in used:
            c += 1
        color[v] = c
    classes = {}
    for v, c in color.items():
        classes.setdefault(c, []).append(v)
    return [sorted(classes[c]) for c in sorted(classes)]


def separate_graph_sensitive(ess: Pdag, q: int) -> SeparatingSystem:
    """Separating system for the undirected part of ess.

    Colors a vertex cover of the undirected subgraph; each color class is
    an independent set, so any chunk of it separates every incident
    undirected edge.  Chunks are capped at q targets.
    """
    if q < 1:
        raise SparsityError(f"need q >= 1, got q={q}")
    und = ess.undirected
    cover = _maximal_matching_cover(und)
    adj = {v: set(ess.neighbors[v]) for v in cover}
    sets = []
    for cls in _welsh_powell(frozenset(cover), adj):
        for k in range(0, len(cls), q):
            sets.append(frozenset(cls[k:k + q]))
    return SeparatingSystem(tuple(sets), q, "graph_sensitive")


def verify_separation(ss: SeparatingSystem, pairs) -> bool:
    """True iff every pair in `pairs` is split by some set of the system.

    `pairs` may be a Pdag (its undirected edges are checked) or an
    iterable of node pairs.
    """
    if isinstance(pairs, Pdag):
        pairs = pairs.undirected
    for i, j in pairs:
        if not any((i in s) != (j in s) for s in ss.sets):
            return False
    return True


def all_pairs(p: int):
    return [(i, j) for i in range(p) for j in range(i + 1, p)]
