"""Phase-space metric: a data-estimated SPD tensor weighting strain and stress."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..tensors import SQRT2, to_mandel
from .database import MaterialDatabase


class DegenerateDatabase(Exception):
    """Raised when the database cannot support a metric estimate."""


@dataclass(frozen=True)
class MetricTensor:
    """SPD matrix in the Mandel basis, with cached Cholesky factors.

    The squared local distance between phase points is
    |e|_C^2 + |s|_{C^-1}^2 computed on Mandel vectors, i.e. the mapped
    coordinates (L^T e, L^-1 s) with C = L L^T are plain Euclidean.
    """

    mandel: np.ndarray                      # (3, 3) SPD
    chol: np.ndarray = field(init=False)    # lower L
    chol_inv: np.ndarray = field(init=False)

    def __post_init__(self):
        m = np.asarray(self.mandel, dtype=float)
        if m.shape != (3, 3) or not np.allclose(m, m.T, rtol=0, atol=1e-12 * abs(m).max()):
            raise ValueError("metric must be a symmetric (3, 3) matrix")
        object.__setattr__(self, "mandel", m)
        try:
            l = np.linalg.cholesky(m)
        except np.linalg.LinAlgError as exc:
            raise ValueError("metric is not positive definite") from exc
        object.__setattr__(self, "chol", l)
        object.__setattr__(self, "chol_inv", np.linalg.inv(l))

    @property
    def engineering(self) -> np.ndarray:
        """Matrix mapping engineering strain (a11, a22, 2 a12) to stress components."""
        t = np.diag([1.0, 1.0, 1.0 / SQRT2])
        return t @ self.mandel @ t

    def map_strain(self, e_mandel: np.ndarray) -> np.ndarray:
        return e_mandel @ self.chol            # rows become L^T e

    def map_stress(self, s_mandel: np.ndarray) -> np.ndarray:
        return s_mandel @ self.chol_inv.T      # rows become L^-1 s

    def local_norm(self, e: np.ndarray, s: np.ndarray) -> np.ndarray:
        """Phase-space norm of tensor-component rows (e, s)."""
        me = self.map_strain(to_mandel(np.atleast_2d(e)))
        ms = self.map_stress(to_mandel(np.atleast_2d(s)))
        out = np.sqrt(np.sum(me * me, axis=-1) + np.sum(ms * ms, axis=-1))
        return out[0] if np.ndim(e) == 1 else out


def estimate_metric(
    db: MaterialDatabase, eig_floor: float = 1e-6, rcond: float = 1e-10
) -> MetricTensor:
    """Least-squares linear map strain -> stress, symmetrized and clipped SPD.

    Solves min ||E M^T - S|| over Mandel rows, symmetrizes M, then floors the
    eigenvalues at eig_floor * max(lambda_max, 1) so near-singular estimates
    on low-rank data stay usable as a norm.
    """
    if len(db) < 3:
        raise DegenerateDatabase("need at least 3 states to estimate a metric")
    e = to_mandel(db.strain)
    s = to_mandel(db.stress)
    if np.all(np.ptp(db.strain, axis=0) == 0.0):
        raise DegenerateDatabase("all database strains identical")
    m = (np.linalg.pinv(e, rcond=rcond) @ s).T
    m = 0.5 * (m + m.T)
    w, v = np.linalg.eigh(m)
    w = np.maximum(w, eig_floor * max(w.max(), 1.0))
    return MetricTensor((v * w) @ v.T)
