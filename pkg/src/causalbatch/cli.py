"""Command-line interface.

Subcommands: gen (graphs), design (one batch), eval (score a batch
file), sweep (algorithm comparison), loop (sequential batches),
selftest (acceptance suite).  Exit codes: 0 success, 1 config error,
2 runtime error.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace

from .graphgen import GenerationError, GraphSpec, gen_dag
from .graphs import GraphError
from .harness import (
    ALGORITHMS, ConfigError, ExperimentConfig, config_from_dict,
    design_batch, emit, oriented_fraction, parse_config, run_experiment,
    run_sequential_batches,
)
from .io import load_batch, load_edge_list, save_batch, save_edge_list
from .mec import enumerate_mec, essential_graph
from .optimize import DesignError, DesignProblem, NmscgParams

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_RUNTIME = 2


def _graph_spec(args) -> GraphSpec:
    """--graph is either a path to an edge list or a kind[:p[:density]]."""
    token = args.graph
    if token is None:
        raise ConfigError("--graph is required")
    if token.split(":")[0] not in ("er", "tree", "star_forest", "complete"):
        return GraphSpec("file", path=token, seed=args.seed)
    parts = token.split(":")
    kind = parts[0]
    if kind == "star_forest":
        sizes = tuple(int(x) for x in parts[1].split(",")) if len(parts) > 1 \
            else (7, 7, 6)
        return GraphSpec(kind, star_sizes=sizes, seed=args.seed)
    p = int(parts[1]) if len(parts) > 1 else 10
    density = float(parts[2]) if len(parts) > 2 else 0.1
    return GraphSpec(kind, p=p, density=density, seed=args.seed)


def _base_config(args) -> ExperimentConfig:
    kv = {}
    if getattr(args, "config", None):
        with open(args.config, encoding="utf-8") as fh:
            kv = parse_config(fh.read())
    if args.graph:
        spec = _graph_spec(args)
    else:
        spec = config_from_dict(kv).graph
    config = config_from_dict(kv)
    overrides = dict(graph=spec, seed=args.seed)
    if args.algo:
        overrides["algorithms"] = tuple(args.algo.split(","))
    if args.m:
        overrides["m_values"] = tuple(int(x) for x in args.m.split(","))
    if args.q:
        overrides["q_values"] = tuple(int(x) for x in args.q.split(","))
    if args.repeats:
        overrides["repeats"] = args.repeats
    if args.mode:
        overrides["mode"] = args.mode
        if args.mode == "finite" and config.metric == "edges_oriented_fraction":
            overrides["metric"] = "f_mi"
    if args.threads:
        overrides["threads"] = args.threads
    if args.reproducible:
        overrides["reproducible"] = True
    return replace(config, **overrides)


def _cmd_gen(args):
    g = gen_dag(_graph_spec(args))
    if args.out:
        save_edge_list(g, args.out)
        print(f"wrote {args.out} ({g.p} nodes, {len(g.edges)} edges)")
    else:
        for i, j in sorted(g.edges):
            print(f"{i}\t{j}\t1")
    return EXIT_OK


def _cmd_design(args):
    truth = load_edge_list(args.graph)
    ess = essential_graph(truth)
    ens = enumerate_mec(ess)
    m = int(args.m or 1)
    q = int(args.q or 1)
    algo = args.algo or "greedy1"
    if algo not in ALGORITHMS:
        raise ConfigError(f"unknown algorithm {algo!r}")
    problem = DesignProblem(ess, ens, m, q, seed=args.seed)
    b = design_batch(algo, problem, NmscgParams()) \
        if ess.pdag.undirected else frozenset()
    if args.out:
        save_batch(b, args.out)
        print(f"wrote {args.out}")
    for targets in sorted(b, key=sorted):
        print(" ".join(str(v) for v in sorted(targets)))
    return EXIT_OK


def _cmd_eval(args):
    truth = load_edge_list(args.graph)
    b = load_batch(args.batch)
    ess = essential_graph(truth)
    frac = oriented_fraction(b, truth, ess)
    print(f"oriented_fraction {frac:.6f}")
    return EXIT_OK


def _cmd_sweep(args):
    config = _base_config(args)
    rows = run_experiment(config)
    out = args.out or "."
    formats = tuple(args.formats.split(",")) if args.formats else ("csv",)
    for path in emit(rows, out, formats):
        print(f"wrote {path}")
    return EXIT_OK


def _cmd_loop(args):
    config = _base_config(args)
    if config.batch_rounds == 1 and args.rounds:
        config = replace(config, batch_rounds=args.rounds)
    rows = run_sequential_batches(config)
    out = args.out or "."
    formats = tuple(args.formats.split(",")) if args.formats else ("csv",)
    for path in emit(rows, out, formats):
        print(f"wrote {path}")
    return EXIT_OK


def _cmd_selftest(args):
    import subprocess
    from pathlib import Path
    test = Path(__file__).resolve().parents[2] / "tests" / "test_acceptance.py"
    cmd = [sys.executable, "-m", "pytest", str(test), "-v", "-s"]
    return subprocess.call(cmd)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="causalbatch",
        description="Budget-constrained batch design of interventions "
                    "for causal-graph identification.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, fn in (("gen", _cmd_gen), ("design", _cmd_design),
                     ("eval", _cmd_eval), ("sweep", _cmd_sweep),
                     ("loop", _cmd_loop), ("selftest", _cmd_selftest)):
        cmd = sub.add_parser(name)
        cmd.set_defaults(fn=fn)
        cmd.add_argument("--graph", help="edge-list file or kind[:p[:density]]")
        cmd.add_argument("--algo", help="comma-separated algorithm names")
        cmd.add_argument("--m", help="interventions per batch (list ok)")
        cmd.add_argument("--q", help="targets per intervention (list ok)")
        cmd.add_argument("--repeats", type=int)
        cmd.add_argument("--seed", type=int, default=0)
        cmd.add_argument("--mode", choices=("infinite", "finite"))
        cmd.add_argument("--out", help="output file or directory")
        cmd.add_argument("--formats", help="csv,svg")
        cmd.add_argument("--threads", type=int)
        cmd.add_argument("--reproducible", action="store_true")
        cmd.add_argument("--config", help="key=value config file")
        if name == "eval":
            cmd.add_argument("--batch", required=True,
                             help="batch file (one intervention per line)")
        if name == "loop":
            cmd.add_argument("--rounds", type=int, default=10)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (DesignError, GenerationError, OSError) as exc:
        print(f"runtime error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    except (ConfigError, GraphError, ValueError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
