"""Experiment harness: algorithm comparison sweeps, sequential-batch
loops, and CSV/SVG emission.

All randomness is derived from per-repeat seeds, so a config plus a base
seed pins every number in the output.
"""

from __future__ import annotations

import csv
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .graphgen import GraphSpec, gen_dag
from .graphs import Batch
from .mec import (
    DEFAULT_ENSEMBLE_SIZE, MecSizeError, enumerate_mec, essential_graph,
    sample_ensemble,
)
from .meek import r_oriented
from .objectives import f_inf_tilde
from .optimize import (
    DesignProblem, NmscgParams, baseline_greedy_single, baseline_rand, dgc,
    ssg,
)
from .sem import (
    DEFAULT_CLAMP, DEFAULT_MI_REPEATS, DEFAULT_OBS_ROWS,
    DEFAULT_ROWS_PER_INTERVENTION, eval_f1_shd, f_mi_estimate, fit_sems,
    gen_sem, observe, reweight_posterior,
)

ALGORITHMS = ("rand", "greedy1", "dgc", "ssg_a", "ssg_b", "ssg_best_q")
METRICS = ("edges_oriented_fraction", "f_inf", "f_mi", "f1", "shd")
CSV_COLUMNS = ("algorithm", "m", "q", "repeat", "seed", "metric", "value",
               "wall_ms")
FULL_MEC_LIMIT = 100  # enumerate exactly below this, sample above


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class ExperimentConfig:
    graph: GraphSpec
    algorithms: tuple = ("rand", "greedy1")
    m_values: tuple = (1,)
    q_values: tuple = (1,)
    repeats: int = 1
    metric: str = "edges_oriented_fraction"
    mode: str = "infinite"
    seed: int = 0
    ensemble_size: int = None      # None -> exact MEC when small enough
    nmscg: NmscgParams = field(default_factory=NmscgParams)
    obs_rows: int = DEFAULT_OBS_ROWS
    rows_per_intervention: int = DEFAULT_ROWS_PER_INTERVENTION
    clamp_value: float = DEFAULT_CLAMP
    mi_repeats: int = DEFAULT_MI_REPEATS
    batch_rounds: int = 1          # sequential-loop round budget
    threads: int = 1
    reproducible: bool = True

    def __post_init__(self):
        if self.repeats < 1:
            raise ConfigError("repeats must be >= 1")
        bad = [a for a in self.algorithms if a not in ALGORITHMS]
        if bad:
            raise ConfigError(f"unknown algorithms {bad}")
        if self.metric not in METRICS:
            raise ConfigError(f"unknown metric {self.metric!r}")
        if self.mode not in ("infinite", "finite"):
            raise ConfigError(f"unknown mode {self.mode!r}")
        if self.mode == "infinite" and self.metric in ("f_mi", "f1", "shd"):
            raise ConfigError(f"metric {self.metric} requires finite mode")


@dataclass(frozen=True)
class ResultRow:
    algorithm: str
    m: int
    q: int
    repeat: int
    seed: int
    metric: str
    value: float
    wall_ms: float


def design_batch(name: str, problem: DesignProblem,
                 params: NmscgParams = None) -> Batch:
    if name == "rand":
        return baseline_rand(problem)
    if name == "greedy1":
        return baseline_greedy_single(problem)
    if name == "dgc":
        return dgc(problem, params)
    if name == "ssg_a":
        return ssg(problem, "agnostic")
    if name == "ssg_b":
        return ssg(problem, "graph_sensitive")
    if name == "ssg_best_q":
        return ssg(problem, "best_over_q")
    raise ConfigError(f"unknown algorithm {name!r}")


def _ensemble_for(ess, config, seed):
    if config.ensemble_size is not None:
        return sample_ensemble(ess, config.ensemble_size, seed)
    try:
        return enumerate_mec(ess, cap=FULL_MEC_LIMIT)
    except MecSizeError:
        return sample_ensemble(ess, DEFAULT_ENSEMBLE_SIZE, seed)


def oriented_fraction(b: Batch, truth, ess) -> float:
    und = len(ess.pdag.undirected)
    if und == 0:
        return 1.0
    return len(r_oriented(b, truth, ess.pdag)) / und


def _finite_score(config, b, truth, ens, seed):
    sem = gen_sem(truth, seed)
    obs = observe(sem, config.obs_rows, seed)
    post = reweight_posterior(ens, obs)
    sems = fit_sems(ens, obs)
    if config.metric == "f_mi":
        return f_mi_estimate(b, post, sems, config.rows_per_intervention,
                             config.mi_repeats, seed, config.clamp_value)
    rng = np.random.default_rng(seed)
    from .sem import simulate_batch, update_posterior
    if b:
        idx = int(rng.choice(len(post.weights), p=post.weights))
        y = simulate_batch(sems[idx], b, config.rows_per_intervention,
                           config.clamp_value, rng)
        post = update_posterior(post, sems, y)
    f1, shd = eval_f1_shd(post, truth)
    return f1 if config.metric == "f1" else shd


def _run_repeat(config: ExperimentConfig, rep: int):
    seed = config.seed + rep
    truth = gen_dag(replace(config.graph, seed=seed))
    ess = essential_graph(truth)
    ens = _ensemble_for(ess, config, seed)
    rows = []
    for m in config.m_values:
        for q in config.q_values:
            for name in config.algorithms:
                problem = DesignProblem(ess, ens, m, q, seed=seed)
                t0 = time.perf_counter()
                b = design_batch(name, problem, config.nmscg) \
                    if ess.pdag.undirected else frozenset()
                if config.mode == "infinite":
                    if config.metric == "f_inf":
                        value = f_inf_tilde(b, ens, ess)
                    else:
                        value = oriented_fraction(b, truth, ess)
                else:
                    value = _finite_score(config, b, truth, ens, seed)
                wall_ms = (time.perf_counter() - t0) * 1000.0
                rows.append(ResultRow(name, m, q, rep, seed, config.metric,
                                      float(value), wall_ms))
    return rows


def run_experiment(config: ExperimentConfig):
    reps = range(config.repeats)
    if config.threads > 1 and not config.reproducible:
        with ThreadPoolExecutor(max_workers=config.threads) as pool:
            chunks = list(pool.map(lambda r: _run_repeat(config, r), reps))
    else:
        chunks = [_run_repeat(config, r) for r in reps]
    return [row for chunk in chunks for row in chunk]


def run_sequential_batches(config: ExperimentConfig):
    """Design-orient-update loop (infinite mode only).

    Each round designs a batch against the current essential graph and
    applies it; stops when fully oriented or the round budget is spent.
    Emits one row per round with the cumulative oriented fraction.
    """
    if config.mode != "infinite":
        raise ConfigError("sequential batches require infinite mode")
    rows = []
    for rep in range(config.repeats):
        seed = config.seed + rep
        truth = gen_dag(replace(config.graph, seed=seed))
        ess = essential_graph(truth)
        initial_und = len(ess.pdag.undirected)
        prior = set()
        for name in config.algorithms:
            cur = ess
            history = set(prior)
            for round_no in range(1, config.batch_rounds + 1):
                if not cur.pdag.undirected:
                    break
                ens = _ensemble_for(cur, config, seed + round_no)
                problem = DesignProblem(cur, ens, config.m_values[0],
                                        config.q_values[0], seed=seed)
                t0 = time.perf_counter()
                b = design_batch(name, problem, config.nmscg)
                history |= b
                cur = essential_graph(truth, frozenset(history))
                wall_ms = (time.perf_counter() - t0) * 1000.0
                frac = 1.0 if initial_und == 0 else \
                    1.0 - len(cur.pdag.undirected) / initial_und
                rows.append(ResultRow(name, config.m_values[0],
                                      config.q_values[0], rep, seed,
                                      f"round_{round_no}_fraction",
                                      frac, wall_ms))
    return rows


def emit(results, out_dir, formats=("csv",)):
    os.makedirs(out_dir, exist_ok=True)
    paths = []
    if "csv" in formats:
        path = os.path.join(out_dir, "results.csv")
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(CSV_COLUMNS)
            for r in results:
                writer.writerow([r.algorithm, r.m, r.q, r.repeat, r.seed,
                                 r.metric, repr(r.value), f"{r.wall_ms:.3f}"])
        paths.append(path)
    if "svg" in formats:
        paths.extend(_emit_svg(results, out_dir))
    return paths


def load_results_csv(path):
    rows = []
    with open(path, newline="", encoding="utf-8") as fh:
        for rec in csv.DictReader(fh):
            rows.append(ResultRow(rec["algorithm"], int(rec["m"]),
                                  int(rec["q"]), int(rec["repeat"]),
                                  int(rec["seed"]), rec["metric"],
                                  float(rec["value"]),
                                  float(rec["wall_ms"])))
    return rows


def _emit_svg(results, out_dir):
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    paths = []
    metrics = sorted({r.metric for r in results})
    for metric in metrics:
        sub = [r for r in results if r.metric == metric]
        xs = sorted({r.m for r in sub})
        axis = "m"
        if len(xs) == 1 and len({r.q for r in sub}) > 1:
            xs = sorted({r.q for r in sub})
            axis = "q"
        fig, ax = plt.subplots(figsize=(5, 3.5))
        for name in sorted({r.algorithm for r in sub}):
            means, sds = [], []
            for x in xs:
                vals = [r.value for r in sub if r.algorithm == name
                        and getattr(r, axis) == x]
                means.append(np.mean(vals))
                sds.append(np.std(vals))
            ax.errorbar(xs, means, yerr=sds, marker="o", capsize=3,
                        label=name)
        ax.set_xlabel(axis)
        ax.set_ylabel(metric)
        ax.legend(fontsize=8)
        fig.tight_layout()
        path = os.path.join(out_dir, f"{metric}.svg")
        fig.savefig(path, format="svg")
        plt.close(fig)
        paths.append(path)
    return paths


def parse_config(text: str) -> dict:
    """Flat dotted key=value document; '#' starts a comment."""
    out = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ConfigError(f"line {lineno}: expected key = value")
        key, value = (part.strip() for part in stripped.split("=", 1))
        out[key] = value
    return out


def _parse_tuple(value, cast):
    return tuple(cast(tok) for tok in value.replace(",", " ").split())


def config_from_dict(kv: dict) -> ExperimentConfig:
    """Build an ExperimentConfig from flat dotted keys (see docs/config.md)."""
    kind = kv.get("graph.kind", "er")
    spec = GraphSpec(
        kind=kind,
        p=int(kv.get("graph.p", 10)),
        density=float(kv.get("graph.density", 0.1)),
        star_sizes=_parse_tuple(kv["graph.star_sizes"], int)
        if "graph.star_sizes" in kv else (),
        path=kv.get("graph.path"),
        seed=int(kv.get("seed", 0)),
        mec_size_range=_parse_tuple(kv["graph.mec_size_range"], int)
        if "graph.mec_size_range" in kv else None,
    )
    nmscg = NmscgParams(
        iterations=int(kv.get("dgc.iterations", NmscgParams.iterations)),
        gradient_samples=int(kv.get("dgc.gradient_samples",
                                    NmscgParams.gradient_samples)),
        rounding_repeats=int(kv.get("dgc.rounding_repeats",
                                    NmscgParams.rounding_repeats)),
        restarts=int(kv.get("dgc.restarts", NmscgParams.restarts)),
    )
    try:
        return ExperimentConfig(
            graph=spec,
            algorithms=_parse_tuple(kv.get("algorithms", "rand greedy1"), str),
            m_values=_parse_tuple(kv.get("m", "1"), int),
            q_values=_parse_tuple(kv.get("q", "1"), int),
            repeats=int(kv.get("repeats", 1)),
            metric=kv.get("metric", "edges_oriented_fraction"),
            mode=kv.get("mode", "infinite"),
            seed=int(kv.get("seed", 0)),
            ensemble_size=int(kv["ensemble_size"])
            if "ensemble_size" in kv else None,
            nmscg=nmscg,
            obs_rows=int(kv.get("sem.obs_rows", DEFAULT_OBS_ROWS)),
            rows_per_intervention=int(
                kv.get("sem.rows_per_intervention",
                       DEFAULT_ROWS_PER_INTERVENTION)),
            clamp_value=float(kv.get("sem.clamp", DEFAULT_CLAMP)),
            mi_repeats=int(kv.get("sem.mi_repeats", DEFAULT_MI_REPEATS)),
            batch_rounds=int(kv.get("batch_rounds", 1)),
            threads=int(kv.get("threads", 1)),
            reproducible=kv.get("reproducible", "true").lower()
            not in ("false", "0", "no"),
        )
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc
