"""Random DAG generators with optional MEC-size rejection sampling."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .graphs import Dag
from .mec import MecSizeError, essential_graph, mec_size

DEFAULT_RETRY_BUDGET = 10_000


class GenerationError(RuntimeError):
    """Rejection sampling exhausted its retry budget."""


@dataclass(frozen=True)
class GraphSpec:
    kind: str                     # er | tree | star_forest | complete | file
    p: int = 0
    density: float = 0.1          # er only
    star_sizes: tuple = ()        # star_forest only (nodes per star, >= 2)
    path: str = None              # file only
    seed: int = 0
    mec_size_range: tuple = None  # (lo, hi) inclusive
    retry_budget: int = DEFAULT_RETRY_BUDGET

    def __post_init__(self):
        if self.kind not in ("er", "tree", "star_forest", "complete", "file"):
            raise ValueError(f"unknown graph kind {self.kind!r}")
        if self.kind == "er" and not 0 < self.density <= 1:
            raise ValueError("er density must be in (0, 1]")
        if self.kind == "star_forest" and any(s < 2 for s in self.star_sizes):
            raise ValueError("star sizes must be >= 2")
        if self.mec_size_range is not None:
            lo, hi = self.mec_size_range
            if lo > hi:
                raise ValueError("mec_size_range must satisfy lo <= hi")


def _er(p: int, density: float, rng) -> Dag:
    """Each unordered pair becomes an edge with the given probability,
    oriented forward under a uniformly random node permutation.
    """
    perm = rng.permutation(p)
    edges = []
    for a in range(p):
        for b in range(a + 1, p):
            if rng.random() < density:
                edges.append((int(perm[a]), int(perm[b])))
    return Dag(p, edges)


def _tree(p: int, rng) -> Dag:
    """Uniform random recursive tree oriented away from node 0."""
    edges = [(int(rng.integers(0, v)), v) for v in range(1, p)]
    return Dag(p, edges)


def _star_forest(star_sizes, rng) -> Dag:
    edges = []
    base = 0
    for size in star_sizes:
        hub = base
        edges.extend((hub, leaf) for leaf in range(base + 1, base + size))
        base += size
    return Dag(base, edges)


def _complete(p: int, rng) -> Dag:
    perm = rng.permutation(p)
    edges = [(int(perm[a]), int(perm[b]))
             for a in range(p) for b in range(a + 1, p)]
    return Dag(p, edges)


def gen_dag(spec: GraphSpec) -> Dag:
    if spec.kind == "file":
        from .io import load_edge_list
        return load_edge_list(spec.path)
    rng = np.random.default_rng(spec.seed)
    for _ in range(max(1, spec.retry_budget)):
        if spec.kind == "er":
            g = _er(spec.p, spec.density, rng)
        elif spec.kind == "tree":
            g = _tree(spec.p, rng)
        elif spec.kind == "star_forest":
            g = _star_forest(spec.star_sizes, rng)
        else:
            g = _complete(spec.p, rng)
        if spec.mec_size_range is None:
            return g
        lo, hi = spec.mec_size_range
        try:
            size = mec_size(essential_graph(g), cap=hi)
        except MecSizeError:
            continue
        if lo <= size <= hi:
            return g
    raise GenerationError(
        f"no graph with MEC size in {spec.mec_size_range} found within "
        f"{spec.retry_budget} attempts")
