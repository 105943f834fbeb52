"""Infinite-sample design objectives and the multilinear-extension machinery.

`EdgeOrientationScorer` memoizes `r_oriented` per (DAG, batch) so that
greedy loops and gradient estimation revisit batches cheaply.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .graphs import Batch, Dag, Intervention, batch
from .mec import DagEnsemble, EssentialGraph, interventional_classes
from .meek import r_oriented

MULTILINEAR_MAX_NODES = 20


@dataclass(frozen=True)
class EoWeights:
    """Optional per-edge weights for the coverage objective (default 1)."""

    edge_weights: dict = field(default_factory=dict)

    def __post_init__(self):
        for e, w in self.edge_weights.items():
            if w < 0:
                raise ValueError(f"negative weight for edge {e}")

    def of(self, i, j) -> float:
        key = (min(i, j), max(i, j))
        return self.edge_weights.get(key, 1.0)


def _batch_key(b):
    return frozenset(frozenset(i) for i in b)


class EdgeOrientationScorer:
    """Weighted edge-orientation coverage over a DAG ensemble.

    value(batch) computes sum_G a(G) * sum_e w(e) * 1(e oriented), with
    a(G) the normalized ensemble weights.  Results are cached per
    (member, batch) pair.
    """

    def __init__(self, ens: DagEnsemble, ess: EssentialGraph,
                 weights: EoWeights = None):
        self.ens = ens
        self.ess = ess
        self.weights = weights or EoWeights()
        total = sum(ens.weights)
        self._a = [w / total for w in ens.weights]
        self._cache = {}

    @property
    def p(self):
        return self.ess.p

    def oriented(self, idx: int, b: Batch):
        key = (idx, _batch_key(b))
        hit = self._cache.get(key)
        if hit is None:
            hit = r_oriented(b, self.ens.dags[idx], self.ess.pdag)
            self._cache[key] = hit
        return hit

    def member_value(self, idx: int, b: Batch) -> float:
        return sum(self.weights.of(i, j) for i, j in self.oriented(idx, b))

    def value(self, b: Batch) -> float:
        return sum(a * self.member_value(idx, b)
                   for idx, a in enumerate(self._a))


def f_eo(b: Batch, ens: DagEnsemble, ess: EssentialGraph,
         w: EoWeights = None) -> float:
    """Expected weighted number of newly oriented edges under the batch."""
    return EdgeOrientationScorer(ens, ess, w).value(b)


def f_eo_node_restricted(i_set, b: Batch, ens: DagEnsemble,
                         ess: EssentialGraph, w: EoWeights = None) -> float:
    """f_eo with the node set added to the batch as one more intervention."""
    extra = frozenset() if not i_set else frozenset({frozenset(i_set)})
    return f_eo(frozenset(b) | extra, ens, ess, w)


def f_eo_soft(b: Batch, ens: DagEnsemble, ess: EssentialGraph,
              w: EoWeights = None) -> float:
    """Soft-intervention score: the batch acts as singletons on the union
    of its targets (a size-q soft intervention equals q single-node ones).
    """
    singles = batch({t} for i in b for t in i)
    return f_eo(singles, ens, ess, w)


def f_inf_tilde(b: Batch, ens: DagEnsemble, ess: EssentialGraph) -> float:
    """Negative mean log2 size of each member's interventional class.

    Zero iff the batch distinguishes every ensemble member; class sizes
    are multiset counts, so duplicated members count.
    """
    classes = interventional_classes(ens, b, ess)
    n = len(ens)
    total = sum(len(c) * math.log2(len(c)) for c in classes)
    return -total / n


def multilinear_value_exact(x, b: Batch, ens: DagEnsemble,
                            ess: EssentialGraph, w: EoWeights = None) -> float:
    """Exact multilinear extension of the node-restricted objective.

    Enumerates all 2^p node subsets; test oracle only.
    """
    x = np.asarray(x, dtype=float)
    p = ess.p
    if p > MULTILINEAR_MAX_NODES:
        raise ValueError(f"exact multilinear extension capped at "
                         f"p <= {MULTILINEAR_MAX_NODES}")
    scorer = EdgeOrientationScorer(ens, ess, w)
    total = 0.0
    for subset in itertools.product([0, 1], repeat=p):
        prob = 1.0
        for i, bit in enumerate(subset):
            prob *= x[i] if bit else 1.0 - x[i]
        if prob == 0.0:
            continue
        i_set = frozenset(i for i, bit in enumerate(subset) if bit)
        total += prob * scorer.value(frozenset(b) | {i_set})
    return total


def estimate_gradient(x, b: Batch, ens: DagEnsemble, ess: EssentialGraph,
                      n_samples: int, seed=0, w: EoWeights = None,
                      scorer: EdgeOrientationScorer = None):
    """Unbiased stochastic gradient of the multilinear extension at x.

    Each sample draws a member G proportional to its weight and an
    inclusion set I ~ Bernoulli(x), then toggles every coordinate:
    grad_i = value(I with i) - value(I without i).  Deterministic given
    the seed.  Returns (gradient, per-coordinate standard error).
    """
    rng = np.random.default_rng(seed) if isinstance(seed, int) else seed
    if scorer is None:
        scorer = EdgeOrientationScorer(ens, ess, w)
    x = np.asarray(x, dtype=float)
    p = ess.p
    a = np.array(scorer._a)
    a = a / a.sum()
    sums = np.zeros(p)
    sq_sums = np.zeros(p)
    base = frozenset(b)
    for _ in range(n_samples):
        idx = int(rng.choice(len(ens.dags), p=a))
        include = rng.random(p) < x
        i_set = frozenset(np.flatnonzero(include).tolist())
        est = np.empty(p)
        for i in range(p):
            with_i = scorer.member_value(idx, base | {i_set | {i}})
            without_i = scorer.member_value(idx, base | _nonempty(i_set - {i}))
            est[i] = with_i - without_i
        sums += est
        sq_sums += est * est
    mean = sums / n_samples
    var = np.maximum(sq_sums / n_samples - mean * mean, 0.0)
    stderr = np.sqrt(var / n_samples)
    return mean, stderr


def _nonempty(i_set):
    """Adding the empty intervention must leave the batch unchanged."""
    return {i_set} if i_set else set()
