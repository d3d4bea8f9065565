"""Exact desk-scale simulation and analysis of random-pair entanglement
distillation over lossy star-topology networks."""

__version__ = "0.1.0"

from .analysis import (
    Curve,
    OptimizationResult,
    advantage_ratio,
    avg_entanglement,
    branch_concurrence,
    build_curve,
    fom_lower_bound,
    optimize_kappa,
    threshold,
)
from .locc import (
    BranchState,
    KrausOperator,
    TransitionMatrix,
    build_transition_matrix,
    evolve_branch,
    run_rounds,
    sp_kraus,
)
from .lossy import ghz_benchmark, loss_weight, two_centered_benchmark, w_loss_ensemble
from .oracle import BACKEND, ClassHistogram, McConfig, McEstimate, mc_class_histogram, mc_estimate
from .qcore import DensityOperator, Ket, LinearOp, concurrence, fidelity, partial_trace, tensor
from .resources import Graph, ghz_state, graph_state, two_centered_graph, w_sigma, w_state

__all__ = [
    "__version__",
    "BACKEND",
    "BranchState",
    "ClassHistogram",
    "Curve",
    "DensityOperator",
    "Graph",
    "Ket",
    "KrausOperator",
    "LinearOp",
    "McConfig",
    "McEstimate",
    "OptimizationResult",
    "TransitionMatrix",
    "advantage_ratio",
    "avg_entanglement",
    "branch_concurrence",
    "build_curve",
    "build_transition_matrix",
    "concurrence",
    "evolve_branch",
    "fidelity",
    "fom_lower_bound",
    "ghz_benchmark",
    "ghz_state",
    "graph_state",
    "loss_weight",
    "mc_class_histogram",
    "mc_estimate",
    "optimize_kappa",
    "partial_trace",
    "run_rounds",
    "sp_kraus",
    "tensor",
    "threshold",
    "two_centered_benchmark",
    "two_centered_graph",
    "w_loss_ensemble",
    "w_sigma",
    "w_state",
]
