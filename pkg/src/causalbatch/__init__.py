"""Budget-constrained batch design of interventions for causal-DAG
identification: orientation engine, MEC machinery, objectives, the
continuous-greedy and separating-system design algorithms, a
linear-SEM finite-sample layer, and an experiment harness.
"""

from .graphs import (
    Batch, Dag, GraphError, Intervention, PatternMismatchError, Pdag,
    batch, canonical_batch, check_constraints, intervention, is_acyclic,
    skeleton, topological_order, v_structures,
)
from .meek import meek_closure, orient_by_intervention, r_oriented
from .mec import (
    DagEnsemble, EssentialGraph, MecSizeError, enumerate_mec,
    essential_graph, interventional_classes, mec_size,
    diminishing_returns_counterexample, sample_ensemble,
)
from .sepsys import (
    SeparatingSystem, SparsityError, separate_agnostic,
    separate_graph_sensitive, verify_separation,
)
from .objectives import (
    EdgeOrientationScorer, EoWeights, estimate_gradient, f_eo,
    f_eo_node_restricted, f_eo_soft, f_inf_tilde, multilinear_value_exact,
)
from .optimize import (
    DesignError, DesignProblem, NmscgParams, baseline_greedy_single,
    baseline_rand, dgc, lazy_greedy, lmo, nmscg, round_fractional, ssg,
    greedy_floor_bound,
)
from .sem import (
    Dataset, LinearSem, Posterior, edge_probabilities, eval_f1_shd,
    f_mi_estimate, fit_sems, gen_sem, observe, reweight_posterior, shd,
    simulate, simulate_batch, update_posterior,
)
from .graphgen import GenerationError, GraphSpec, gen_dag
from .io import load_batch, load_edge_list, save_batch, save_edge_list
from .harness import (
    ExperimentConfig, ResultRow, design_batch, emit, oriented_fraction,
    run_experiment, run_sequential_batches,
)

__version__ = "0.1.0"
