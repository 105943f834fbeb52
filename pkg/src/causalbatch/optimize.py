"""Batch-design algorithms: continuous greedy (DGC), separating-system
greedy (SSG), lazy greedy, dependent rounding, and the baselines they are
compared against.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field

import numpy as np

from .graphs import Batch, Intervention, batch, check_constraints
from .mec import DagEnsemble, EssentialGraph
from .objectives import EdgeOrientationScorer, EoWeights, estimate_gradient, f_inf_tilde
from .sepsys import separate_agnostic, separate_graph_sensitive

OBJECTIVE_EO = "eo"
OBJECTIVE_MI_INF = "mi_inf"


class DesignError(ValueError):
    pass


@dataclass
class DesignProblem:
    ess: EssentialGraph
    ens: DagEnsemble
    m: int
    q: int
    objective: str = OBJECTIVE_EO
    weights: EoWeights = None
    seed: int = 0

    def __post_init__(self):
        if self.m < 1:
            raise DesignError("m must be >= 1")
        if not 1 <= self.q <= self.ess.p:
            raise DesignError("q must be in 1..p")
        if self.objective not in (OBJECTIVE_EO, OBJECTIVE_MI_INF):
            raise DesignError(f"unknown objective {self.objective!r}")

    def objective_value(self, b: Batch, scorer=None) -> float:
        if self.objective == OBJECTIVE_EO:
            scorer = scorer or EdgeOrientationScorer(
                self.ens, self.ess, self.weights)
            return scorer.value(b)
        return f_inf_tilde(b, self.ens, self.ess)


@dataclass
class NmscgParams:
    iterations: int = 100
    gradient_samples: int = 8
    rounding_repeats: int = 10
    restarts: int = 5  # independent trajectories; best rounded candidate wins
    momentum: callable = None  # t -> rho_t in (0, 1]

    def rho(self, t: int) -> float:
        if self.momentum is not None:
            return self.momentum(t)
        return min(1.0, 4.0 / (t + 8) ** (2.0 / 3.0))


def lmo(d, x, q: int):
    """Maximize <v, d> over {0 <= v <= 1 - x, sum(v) <= q}.

    Greedy fill of positive coordinates in decreasing d order, ties broken
    by index.
    """
    d = np.asarray(d, dtype=float)
    x = np.asarray(x, dtype=float)
    v = np.zeros_like(x)
    budget = float(q)
    for i in sorted(range(len(d)), key=lambda i: (-d[i], i)):
        if d[i] <= 0 or budget <= 0:
            break
        amount = min(1.0 - x[i], budget)
        v[i] = amount
        budget -= amount
    return v


def nmscg(problem: DesignProblem, batch_so_far: Batch,
          params: NmscgParams = None, rng=None,
          scorer: EdgeOrientationScorer = None):
    """Non-monotone stochastic continuous greedy over the relaxed polytope.

    Momentum-averaged stochastic gradients with a shrunk linear oracle;
    returns a feasible fractional point (sum <= q, coordinates in [0, 1]).
    """
    params = params or NmscgParams()
    rng = np.random.default_rng(problem.seed) if rng is None else rng
    scorer = scorer or EdgeOrientationScorer(
        problem.ens, problem.ess, problem.weights)
    p = problem.ess.p
    x = np.zeros(p)
    d = np.zeros(p)
    T = params.iterations
    for t in range(1, T + 1):
        g, _ = estimate_gradient(x, batch_so_far, problem.ens, problem.ess,
                                 params.gradient_samples, seed=rng,
                                 scorer=scorer)
        rho = params.rho(t)
        d = (1.0 - rho) * d + rho * g
        v = lmo(d, x, problem.q)
        x = x + v / T
    return np.clip(x, 0.0, 1.0)


def round_fractional(x, problem: DesignProblem, batch_so_far: Batch = frozenset(),
                     repeats: int = 10, rng=None,
                     scorer: EdgeOrientationScorer = None) -> Intervention:
    """Dependent rounding of x to a node set.

    Pairwise mass transfer preserves every marginal exactly and keeps the
    total within {floor(sum x), ceil(sum x)}.  The best of `repeats`
    candidates under the batch-restricted objective is returned.
    """
    rng = np.random.default_rng(problem.seed) if rng is None else rng
    scorer = scorer or EdgeOrientationScorer(
        problem.ens, problem.ess, problem.weights)
    x = np.asarray(x, dtype=float)

    def round_once():
        y = x.copy()
        frac = [i for i in range(len(y)) if 1e-12 < y[i] < 1 - 1e-12]
        while len(frac) >= 2:
            i, j = frac[0], frac[1]
            up_i = min(1.0 - y[i], y[j])
            up_j = min(y[i], 1.0 - y[j])
            if rng.random() < up_j / (up_i + up_j):
                y[i] += up_i
                y[j] -= up_i
            else:
                y[i] -= up_j
                y[j] += up_j
            frac = [k for k in frac if 1e-12 < y[k] < 1 - 1e-12]
        if frac:
            k = frac[0]
            y[k] = 1.0 if rng.random() < y[k] else 0.0
        return frozenset(np.flatnonzero(y > 0.5).tolist())

    candidates = [round_once() for _ in range(repeats)]
    best = max(
        candidates,
        key=lambda s: (scorer.value(frozenset(batch_so_far) | ({s} if s else set())),
                       sorted(s)),
    )
    return best


def dgc(problem: DesignProblem, params: NmscgParams = None) -> Batch:
    """Continuous-greedy outer loop: m interventions, each from a fresh
    NMSCG run against the objective restricted to the batch so far.
    """
    if problem.objective != OBJECTIVE_EO:
        raise DesignError("continuous greedy optimizes the edge-orientation "
                          "objective only")
    params = params or NmscgParams()
    rng = np.random.default_rng(problem.seed)
    scorer = EdgeOrientationScorer(problem.ens, problem.ess, problem.weights)
    selected = set()
    for _ in range(problem.m):
        base = frozenset(selected)
        best, best_val = None, -math.inf
        for _ in range(max(1, params.restarts)):
            x = nmscg(problem, base, params, rng, scorer)
            cand = round_fractional(x, problem, base,
                                    params.rounding_repeats, rng, scorer)
            val = scorer.value(base | ({cand} if cand else set()))
            if val > best_val or (val == best_val and best is not None
                                  and sorted(cand) < sorted(best)):
                best, best_val = cand, val
        if best:
            selected.add(best)
    result = frozenset(selected)
    assert check_constraints(result, problem.m, problem.q)
    return result


def lazy_greedy(groundset, m: int, objective) -> Batch:
    """Greedy selection with lazily re-evaluated marginal gains.

    `objective` maps a Batch to a float and must be submodular over the
    groundset for the laziness to be exact.  Ties break toward the lowest
    groundset index.  Selects min(m, len(groundset)) members.
    """
    groundset = list(groundset)
    selected = set()
    current = objective(frozenset())
    # heap entries: (-gain, groundset index, round the gain was computed in)
    heap = []
    for idx, cand in enumerate(groundset):
        gain = objective(frozenset({cand})) - current
        heapq.heappush(heap, (-gain, idx, 0))
    chosen = set()
    for round_no in range(1, min(m, len(groundset)) + 1):
        while True:
            neg_gain, idx, computed_in = heapq.heappop(heap)
            if idx in chosen:
                continue
            if computed_in == round_no - 1:
                break
            gain = objective(frozenset(selected | {groundset[idx]})) - current
            heapq.heappush(heap, (-gain, idx, round_no - 1))
        chosen.add(idx)
        selected.add(groundset[idx])
        current = objective(frozenset(selected))
    return frozenset(selected)


def naive_greedy(groundset, m: int, objective) -> Batch:
    """Reference greedy used to validate lazy_greedy."""
    groundset = list(groundset)
    selected = set()
    for _ in range(min(m, len(groundset))):
        best = max(
            (i for i in range(len(groundset)) if groundset[i] not in selected),
            key=lambda i: (objective(frozenset(selected | {groundset[i]})), -i),
        )
        selected.add(groundset[best])
    return frozenset(selected)


def ssg(problem: DesignProblem, mode: str = "graph_sensitive",
        objective=None) -> Batch:
    """Separating-system greedy.

    Builds a q-sparse separating system for the essential graph, then lazy
    greedy picks m of its sets under the problem objective (or a custom
    objective handle).  In "best_over_q" mode the graph-sensitive system
    is rebuilt for every q' <= q and the best-scoring batch wins.
    """
    if mode == "best_over_q":
        best = None
        best_val = -math.inf
        for q_prime in range(1, problem.q + 1):
            sub = DesignProblem(problem.ess, problem.ens, problem.m, q_prime,
                                problem.objective, problem.weights,
                                problem.seed)
            cand = ssg(sub, "graph_sensitive", objective)
            val = (objective or problem.objective_value)(cand)
            if val > best_val:
                best, best_val = cand, val
        return best
    if mode == "agnostic":
        system = separate_agnostic(problem.ess.p, problem.q)
    elif mode == "graph_sensitive":
        system = separate_graph_sensitive(problem.ess.pdag, problem.q)
    else:
        raise DesignError(f"unknown separating-system mode {mode!r}")
    groundset = [s for s in system.sets if s]
    if not groundset:
        return frozenset()
    handle = objective or problem.objective_value
    return lazy_greedy(groundset, problem.m, handle)


def baseline_rand(problem: DesignProblem) -> Batch:
    """m interventions of q distinct nodes drawn uniformly from the nodes
    incident to at least one undirected edge.
    """
    active = sorted({v for e in problem.ess.pdag.undirected for v in e})
    if not active:
        raise DesignError("no undirected edges to intervene on")
    rng = np.random.default_rng(problem.seed)
    k = min(problem.q, len(active))
    picks = set()
    for _ in range(problem.m):  # duplicates collapse under set semantics
        picks.add(frozenset(rng.choice(active, size=k, replace=False).tolist()))
    return frozenset(picks)


def baseline_greedy_single(problem: DesignProblem) -> Batch:
    """Greedy over all single-node interventions (the q=1 comparator)."""
    if problem.m < 1:
        return frozenset()
    scorer = EdgeOrientationScorer(problem.ens, problem.ess, problem.weights)
    groundset = [frozenset({v}) for v in range(problem.ess.p)]
    return lazy_greedy(groundset, problem.m, scorer.value)


def greedy_floor_bound(b: Batch, system_size: int,
                   problem: DesignProblem) -> bool:
    """Greedy-from-separating-system lower bound check.

    With |S| the constructed system size and m = |batch|, the selected
    batch must satisfy F(batch) >= (1 - m/|S|) * F(empty).
    """
    val = f_inf_tilde(b, problem.ens, problem.ess)
    empty = f_inf_tilde(frozenset(), problem.ens, problem.ess)
    frac = 1.0 - len(b) / system_size if system_size else 0.0
    return val >= frac * empty - 1e-12
