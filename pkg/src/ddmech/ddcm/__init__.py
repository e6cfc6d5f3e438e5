from .database import MaterialDatabase, Provenance, enrich_isotropic
from .metric import DegenerateDatabase, MetricTensor, estimate_metric
from .search import SearchIndex, build_index, lce_project, nearest_state
from .solver import (
    STATUS_CONVERGED,
    STATUS_MAX_ITERS,
    STATUS_STAGNATED,
    VARIANTS,
    ConvergenceLog,
    DDConfig,
    DDSolution,
    DDState,
    InnerSolverFailure,
    dd_solve,
    equilibrium_projection,
    phase_distance,
)

__all__ = [
    "MaterialDatabase",
    "Provenance",
    "enrich_isotropic",
    "DegenerateDatabase",
    "MetricTensor",
    "estimate_metric",
    "SearchIndex",
    "build_index",
    "lce_project",
    "nearest_state",
    "ConvergenceLog",
    "DDConfig",
    "DDSolution",
    "DDState",
    "InnerSolverFailure",
    "dd_solve",
    "equilibrium_projection",
    "phase_distance",
    "STATUS_CONVERGED",
    "STATUS_MAX_ITERS",
    "STATUS_STAGNATED",
    "VARIANTS",
]
