"""Quadrature-weighted error norms and method comparison reports.

All field errors are relative L2 ratios over the domain.  Tensor fields are
compared in Mandel components so the scalar product matches the full tensor
contraction; displacement errors use lumped nodal areas as weights.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..fem.mesh import Mesh
from ..tensors import SQRT2


class ZeroReference(Exception):
    """Reference field has zero norm, relative error undefined."""


class KeyMismatch(Exception):
    """Reports describe different scenarios and cannot be compared."""


def relative_l2(field: np.ndarray, ref: np.ndarray, weights: np.ndarray) -> float:
    """|| field - ref || / || ref || in the weighted discrete L2 norm.

    Rows are the per-point values (scalars or component vectors); weights are
    the quadrature volumes of the points.
    """
    f = np.asarray(field, dtype=float)
    r = np.asarray(ref, dtype=float)
    w = np.asarray(weights, dtype=float)
    if f.shape != r.shape or f.shape[0] != w.shape[0]:
        raise ValueError(f"shape mismatch: field {f.shape}, ref {r.shape}, weights {w.shape}")
    if f.ndim == 1:
        f, r = f[:, None], r[:, None]
    ref_sq = float(np.sum(w * np.sum(r * r, axis=1)))
    if ref_sq == 0.0:
        raise ZeroReference("reference field is identically zero")
    diff = f - r
    return math.sqrt(np.sum(w * np.sum(diff * diff, axis=1)) / ref_sq)


def nodal_weights(mesh: Mesh) -> np.ndarray:
    """Lumped nodal areas: one third of each incident element's area."""
    w = np.zeros(mesh.n_nodes)
    np.add.at(w, mesh.triangles.ravel(), np.repeat(mesh.areas() / 3.0, 3))
    return w


def mandel_rows(components: np.ndarray) -> np.ndarray:
    """Tensor-component rows (a11, a22, a12) to Mandel rows."""
    m = np.array(components, dtype=float, copy=True)
    m[:, 2] *= SQRT2
    return m


@dataclass
class ErrorReport:
    """All measured outcomes for one scenario run."""

    problem: str
    law: str
    method: str
    dataset_hash: str = "none"
    noise_level: float = 0.0
    n_refine: int = 1
    load: float = 0.0
    n_steps: int = 0
    status: str = "converged"
    converged: bool = True
    disp_error: float = math.nan
    strain_error: float = math.nan
    stress_error: float = math.nan
    tip: tuple[float, float] = (math.nan, math.nan)
    tip_ref: tuple[float, float] = (math.nan, math.nan)
    tip_error: float = math.nan
    elapsed: float = math.nan
    ref_elapsed: float = math.nan
    time_ratio: float = math.nan
    solution_hash: str = "none"
    reference_hash: str = "none"
    convergence: dict = field(default_factory=dict)

    def key(self) -> tuple:
        """Scenario identity shared by comparable reports (method excluded)."""
        return (
            self.problem, self.law, self.dataset_hash, self.noise_level,
            self.n_refine, self.load,
        )


COMPARED_FIELDS = ("disp_error", "strain_error", "stress_error", "tip_error")


def compare(dd_report: ErrorReport, nn_report: ErrorReport) -> list[dict]:
    """Per-field error difference rows; negative means the DD run is better.

    Each row carries the absolute difference e_dd - e_nn and the relative
    difference (e_dd - e_nn) / e_dd.
    """
    if dd_report.key() != nn_report.key():
        raise KeyMismatch(
            f"scenario keys differ: {dd_report.key()} vs {nn_report.key()}"
        )
    rows = []
    for name in COMPARED_FIELDS:
        e_dd = float(getattr(dd_report, name))
        e_nn = float(getattr(nn_report, name))
        diff = e_dd - e_nn
        if diff == 0.0:
            rel = 0.0
        elif e_dd == 0.0:
            rel = math.copysign(math.inf, diff)
        else:
            rel = diff / e_dd
        rows.append({
            "field": name, "dd": e_dd, "nn": e_nn,
            "difference": diff, "relative": rel,
        })
    return rows
