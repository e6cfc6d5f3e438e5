"""Benchmark scenarios, error reports, and the size-by-noise matrix driver."""

from .errors import (
    COMPARED_FIELDS,
    ErrorReport,
    KeyMismatch,
    ZeroReference,
    compare,
    mandel_rows,
    nodal_weights,
    relative_l2,
)
from .matrix import MASTER_COLUMNS, MatrixConfig, run_matrix
from .scenarios import (
    METHODS,
    ReferenceBundle,
    ScenarioConfig,
    field_hash,
    field_text,
    load_report,
    reference_solution,
    restart_statistics,
    run_scenario,
    tip_node,
)

__all__ = [
    "COMPARED_FIELDS",
    "ErrorReport",
    "KeyMismatch",
    "MASTER_COLUMNS",
    "MatrixConfig",
    "METHODS",
    "ReferenceBundle",
    "ScenarioConfig",
    "ZeroReference",
    "compare",
    "field_hash",
    "field_text",
    "load_report",
    "mandel_rows",
    "nodal_weights",
    "reference_solution",
    "relative_l2",
    "restart_statistics",
    "run_matrix",
    "run_scenario",
    "tip_node",
]
