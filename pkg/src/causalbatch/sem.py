"""Finite-sample layer: linear-Gaussian SEM simulation, posterior
reweighting over candidate DAGs, the Monte-Carlo mutual-information
objective, and F1/SHD evaluation of the resulting edge probabilities.

Noise variance is fixed at 1 and treated as known throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import logsumexp

from .graphs import Batch, Dag, Intervention, topological_order

DEFAULT_CLAMP = 5.0
DEFAULT_OBS_ROWS = 800
DEFAULT_ROWS_PER_INTERVENTION = 3
DEFAULT_MI_REPEATS = 10

_LOG_2PI = math.log(2.0 * math.pi)


@dataclass(frozen=True)
class LinearSem:
    dag: Dag
    weights: dict          # edge (i, j) -> coefficient of i in j's equation
    noise: float = 1.0

    def __post_init__(self):
        if set(self.weights) != set(self.dag.edges):
            raise ValueError("weights must cover exactly the DAG's edges")


@dataclass(frozen=True)
class Dataset:
    """Rows of (intervention targets, length-p sample vector)."""

    rows: tuple

    def __len__(self):
        return len(self.rows)

    def __add__(self, other: "Dataset") -> "Dataset":
        return Dataset(self.rows + other.rows)


def gen_sem(dag: Dag, seed: int = 0) -> LinearSem:
    """Edge weights uniform on [-1, -0.25] union [0.25, 1], unit noise."""
    rng = np.random.default_rng(seed)
    weights = {}
    for e in sorted(dag.edges):
        mag = rng.uniform(0.25, 1.0)
        weights[e] = mag if rng.random() < 0.5 else -mag
    return LinearSem(dag, weights)


def simulate(sem: LinearSem, intervention: Intervention = frozenset(),
             n: int = 1, clamp_value: float = DEFAULT_CLAMP,
             seed=0) -> Dataset:
    """Ancestral sampling; intervened nodes are clamped with incoming
    edges severed for those rows.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = np.random.default_rng(seed) if not isinstance(seed, np.random.Generator) else seed
    p = sem.dag.p
    x = rng.standard_normal((n, p)) * sem.noise
    for i in topological_order(sem.dag):
        if i in intervention:
            x[:, i] = clamp_value
            continue
        for par in sem.dag.parents[i]:
            x[:, i] += sem.weights[(par, i)] * x[:, par]
    targets = frozenset(intervention)
    return Dataset(tuple((targets, x[k].copy()) for k in range(n)))


def simulate_batch(sem: LinearSem, b: Batch,
                   rows_per_intervention: int = DEFAULT_ROWS_PER_INTERVENTION,
                   clamp_value: float = DEFAULT_CLAMP, seed=0) -> Dataset:
    rng = np.random.default_rng(seed) if not isinstance(seed, np.random.Generator) else seed
    rows = ()
    for targets in sorted(b, key=sorted):
        rows += simulate(sem, targets, rows_per_intervention, clamp_value,
                         rng).rows
    return Dataset(rows)


def observe(sem: LinearSem, n: int = DEFAULT_OBS_ROWS, seed=0) -> Dataset:
    return simulate(sem, frozenset(), n, seed=seed)


def _fit_node(dag: Dag, data: Dataset, node: int):
    """Least-squares fit of node's equation on rows where it is free.

    Returns (weights per parent, log-likelihood of those rows under the
    fit with unit noise).  Minimum-norm solution on rank-deficient
    designs.
    """
    pars = sorted(dag.parents[node])
    rows = [x for targets, x in data.rows if node not in targets]
    if not rows:
        return {par: 0.0 for par in pars}, 0.0
    mat = np.array(rows)
    y = mat[:, node]
    if pars:
        design = mat[:, pars]
        coef, *_ = np.linalg.lstsq(design, y, rcond=None)
        resid = y - design @ coef
    else:
        coef = np.zeros(0)
        resid = y
    ll = -0.5 * float(resid @ resid) - 0.5 * len(y) * _LOG_2PI
    return dict(zip(pars, coef)), ll


def fit_sem(dag: Dag, data: Dataset) -> tuple:
    """(maximum-likelihood LinearSem, total log-likelihood of data)."""
    weights = {}
    total = 0.0
    for node in range(dag.p):
        coef, ll = _fit_node(dag, data, node)
        for par, w in coef.items():
            weights[(par, node)] = float(w)
        total += ll
    return LinearSem(dag, weights), total


def loglik(sem: LinearSem, data: Dataset) -> float:
    """Gaussian log-likelihood of the non-intervened coordinates."""
    total = 0.0
    for targets, x in data.rows:
        for node in range(sem.dag.p):
            if node in targets:
                continue
            mean = sum(sem.weights[(par, node)] * x[par]
                       for par in sem.dag.parents[node])
            r = x[node] - mean
            total += -0.5 * r * r - 0.5 * _LOG_2PI
    return total


@dataclass(frozen=True)
class Posterior:
    ens: "DagEnsemble"
    log_weights: tuple

    def __post_init__(self):
        if len(self.log_weights) != len(self.ens.dags):
            raise ValueError("one log-weight per ensemble member required")
        if not all(math.isfinite(w) for w in self.log_weights):
            raise ValueError("log-weights must be finite")
        if abs(sum(math.exp(w) for w in self.log_weights) - 1.0) > 1e-9:
            raise ValueError("posterior must be normalized")

    @property
    def weights(self):
        return np.exp(self.log_weights)

    def entropy(self) -> float:
        w = self.weights
        w = w[w > 0]
        return float(-(w * np.log2(w)).sum())


def reweight_posterior(ens, data: Dataset,
                       prior_log_weights=None) -> Posterior:
    """Posterior over candidate DAGs, each weighted by the likelihood of
    the data under its per-node least-squares fit with unit noise.
    """
    if not data.rows:
        raise ValueError("data must be nonempty")
    lw = np.zeros(len(ens.dags)) if prior_log_weights is None \
        else np.array(prior_log_weights, dtype=float)
    for idx, g in enumerate(ens.dags):
        _, ll = fit_sem(g, data)
        lw[idx] += ll
    lw -= logsumexp(lw)
    return Posterior(ens, tuple(lw.tolist()))


def fit_sems(ens, data: Dataset) -> tuple:
    """Per-member maximum-likelihood SEM fits (theta-hat given the data)."""
    return tuple(fit_sem(g, data)[0] for g in ens.dags)


def update_posterior(post: Posterior, sems, new_data: Dataset) -> Posterior:
    """Reweight by the likelihood of new rows under each member's fit.

    Parameters stay fixed at their current estimates; only the structure
    weights move.
    """
    lw = np.array(post.log_weights)
    for idx, sem in enumerate(sems):
        lw[idx] += loglik(sem, new_data)
    lw -= logsumexp(lw)
    return Posterior(post.ens, tuple(lw.tolist()))


def f_mi_estimate(b: Batch, post: Posterior, sems,
                  rows_per_intervention: int = DEFAULT_ROWS_PER_INTERVENTION,
                  repeats: int = DEFAULT_MI_REPEATS, seed=0,
                  clamp_value: float = DEFAULT_CLAMP) -> float:
    """Monte-Carlo mutual information between structure and batch outcomes.

    Draws a member from the posterior, simulates the batch's samples under
    its fitted parameters, reweights, and averages the entropy drop.
    Exactly 0 for an empty batch or a point-mass posterior.
    """
    if not b:
        return 0.0
    h0 = post.entropy()
    if h0 == 0.0:
        return 0.0
    rng = np.random.default_rng(seed) if not isinstance(seed, np.random.Generator) else seed
    w = post.weights
    drops = []
    for _ in range(repeats):
        idx = int(rng.choice(len(w), p=w))
        y = simulate_batch(sems[idx], b, rows_per_intervention, clamp_value,
                           rng)
        updated = update_posterior(post, sems, y)
        drops.append(h0 - updated.entropy())
    return float(np.mean(drops))


def edge_probabilities(post: Posterior) -> dict:
    """P(u -> v) = sum of posterior weights of members containing u -> v."""
    probs = {}
    for w, g in zip(post.weights, post.ens.dags):
        for e in g.edges:
            probs[e] = probs.get(e, 0.0) + float(w)
    return {e: min(v, 1.0) for e, v in probs.items()}


def shd(a: Dag, b: Dag) -> int:
    """Structural Hamming distance: node pairs whose edge status differs."""

    def status(g, i, j):
        if (i, j) in g.edges:
            return 1
        if (j, i) in g.edges:
            return 2
        return 0

    p = max(a.p, b.p)
    return sum(status(a, i, j) != status(b, i, j)
               for i in range(p) for j in range(i + 1, p))


def eval_f1_shd(post: Posterior, truth: Dag):
    """Best-threshold F1 of the edge probabilities against the true edge
    set, and the posterior-weighted mean SHD.
    """
    probs = edge_probabilities(post)
    true_edges = set(truth.edges)

    def f1_at(threshold):
        pred = {e for e, v in probs.items() if v >= threshold}
        tp = len(pred & true_edges)
        if not pred and not true_edges:
            return 1.0
        if tp == 0:
            return 0.0
        precision = tp / len(pred)
        recall = tp / len(true_edges)
        return 2 * precision * recall / (precision + recall)

    thresholds = sorted(set(probs.values())) or [1.0]
    best_f1 = max(f1_at(t) for t in thresholds)
    mean_shd = float(sum(w * shd(g, truth)
                         for w, g in zip(post.weights, post.ens.dags)))
    return best_f1, mean_shd
