"""Essential graphs, MEC enumeration, interventional equivalence classes.

Enumeration is exact backtracking, intended for desk-scale graphs; the
size cap guards against accidentally exploding instances.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .graphs import (
    Batch, Dag, Intervention, Pdag, batch, canonical_batch, is_acyclic,
    skeleton, v_structures,
)
from .meek import meek_closure, orient_by_intervention, r_oriented

DEFAULT_MEC_CAP = 50_000
DEFAULT_ENSEMBLE_SIZE = 40


class MecSizeError(RuntimeError):
    """The equivalence class exceeds the configured enumeration cap."""


@dataclass(frozen=True)
class EssentialGraph:
    """A Meek-closed Pdag together with the prior batch that produced it."""

    pdag: Pdag
    prior_batch: Batch = frozenset()

    @property
    def p(self):
        return self.pdag.p


@dataclass(frozen=True)
class DagEnsemble:
    """Weighted multiset of DAGs approximating an essential graph's members."""

    dags: tuple
    weights: tuple = None

    def __post_init__(self):
        if self.weights is None:
            n = len(self.dags)
            object.__setattr__(self, "weights", (1.0 / n,) * n)
        else:
            w = tuple(float(x) for x in self.weights)
            if len(w) != len(self.dags):
                raise ValueError("one weight per DAG required")
            if any(x < 0 for x in w) or sum(w) <= 0:
                raise ValueError("weights must be nonnegative with positive sum")
            object.__setattr__(self, "weights", w)

    def __len__(self):
        return len(self.dags)

    def __iter__(self):
        return iter(self.dags)


def essential_graph(g: Dag, prior: Batch = frozenset()) -> EssentialGraph:
    """Essential graph of g under the prior interventions.

    Starts from the skeleton with v-structures oriented, applies cut-edge
    orientation for every prior intervention, then Meek closure.
    """
    directed = set()
    for i, j, k in v_structures(g):
        directed.add((i, k))
        directed.add((j, k))
    undirected = [e for e in g.edges if e not in directed]
    pd = Pdag(g.p, directed, undirected)
    for targets in sorted(prior, key=sorted):
        pd = orient_by_intervention(pd, g, targets)
    return EssentialGraph(meek_closure(pd), batch(prior))


def _base_vstructs(pd: Pdag):
    """Collider triples readable off the directed part of a closed Pdag."""
    out = set()
    for k in range(pd.p):
        pars = sorted(pd.parents[k])
        for a in range(len(pars)):
            for b in range(a + 1, len(pars)):
                i, j = pars[a], pars[b]
                if not pd.adjacent(i, j):
                    out.add((i, j, k))
    return frozenset(out)


def enumerate_mec(ess: EssentialGraph, cap: int = DEFAULT_MEC_CAP):
    """All DAGs consistent with the essential graph, uniformly weighted.

    Backtracks over undirected edges, trying both orientations and pruning
    with Meek closure; leaves are validated for acyclicity and unchanged
    v-structures.
    """
    base_vs = _base_vstructs(ess.pdag)
    p = ess.p
    members = []

    def valid_leaf(pd: Pdag) -> bool:
        if not is_acyclic(pd.directed, p):
            return False
        return v_structures(Dag(p, pd.directed)) == base_vs

    def recurse(pd: Pdag):
        if not pd.undirected:
            if valid_leaf(pd):
                members.append(Dag(p, pd.directed))
                if len(members) > cap:
                    raise MecSizeError(
                        f"equivalence class larger than cap={cap}")
            return
        i, j = min(pd.undirected)
        for a, b in ((i, j), (j, i)):
            cand = Pdag(p, set(pd.directed) | {(a, b)},
                        pd.undirected - {(i, j)})
            if not is_acyclic(cand.directed, p):
                continue
            # reject early if the new arc creates a collider not in the base
            new_vs = any(
                w != a and not cand.adjacent(w, a)
                and (min(w, a), max(w, a), b) not in base_vs
                for w in cand.parents[b]
            )
            if new_vs:
                continue
            recurse(meek_closure(cand))

    recurse(ess.pdag)
    members.sort(key=lambda d: sorted(d.edges))
    return DagEnsemble(tuple(members))


def mec_size(ess: EssentialGraph, cap: int = DEFAULT_MEC_CAP) -> int:
    return len(enumerate_mec(ess, cap))


def interventional_classes(ens: DagEnsemble, b: Batch, ess: EssentialGraph):
    """Partition ensemble indices by the edges the batch would orient.

    Members with identical `r_oriented` output are equivalent given the
    shared prior essential graph.  Returns a list of index lists.
    """
    groups = {}
    for idx, g in enumerate(ens.dags):
        key = r_oriented(b, g, ess.pdag)
        groups.setdefault(key, []).append(idx)
    return [groups[k] for k in sorted(groups, key=sorted)]


def sample_ensemble(ess: EssentialGraph, n: int = DEFAULT_ENSEMBLE_SIZE,
                    seed: int = 0, cap: int = DEFAULT_MEC_CAP) -> DagEnsemble:
    """n uniform draws (with replacement) from the enumerated class."""
    full = enumerate_mec(ess, cap)
    rng = np.random.default_rng(seed)
    idx = rng.integers(0, len(full), size=n)
    return DagEnsemble(tuple(full.dags[i] for i in idx))


def diminishing_returns_counterexample():
    """Fixed 6-node ensemble on which diminishing returns fails.

    Returns (ensemble, larger intervention, smaller intervention, added
    node); the prior batch is empty.
    """
    g1 = Dag(6, [(0, 1), (4, 1), (4, 0), (4, 3), (4, 5), (5, 2)])
    g2 = Dag(6, [(0, 1), (4, 1), (4, 0), (3, 4), (4, 5), (5, 2)])
    g3 = Dag(6, [(1, 0), (4, 1), (4, 0), (4, 3), (4, 5), (5, 2)])
    ens = DagEnsemble((g1, g2, g3))
    i2 = frozenset({1, 2, 3})
    i1 = frozenset({1, 2})
    return ens, i2, i1, 0
