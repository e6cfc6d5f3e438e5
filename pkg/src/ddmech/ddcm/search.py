"""Nearest-state queries and local convex embedding in mapped phase space."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import nnls
from scipy.spatial import cKDTree

from ..tensors import to_mandel
from .database import MaterialDatabase
from .metric import MetricTensor

# Relative slack for treating two neighbor distances as tied.
_TIE_RTOL = 1e-12


@dataclass(frozen=True)
class SearchIndex:
    """k-d tree over database states in metric-mapped coordinates."""

    metric: MetricTensor
    strain: np.ndarray                      # (n, 3) tensor components
    stress: np.ndarray
    mapped: np.ndarray                      # (n, 6)
    tree: cKDTree

    def __len__(self) -> int:
        return self.mapped.shape[0]

    def map_states(self, e: np.ndarray, s: np.ndarray) -> np.ndarray:
        me = self.metric.map_strain(to_mandel(e))
        ms = self.metric.map_stress(to_mandel(s))
        return np.concatenate([me, ms], axis=-1)


def build_index(db: MaterialDatabase, metric: MetricTensor) -> SearchIndex:
    me = metric.map_strain(to_mandel(db.strain))
    ms = metric.map_stress(to_mandel(db.stress))
    mapped = np.concatenate([me, ms], axis=1)
    return SearchIndex(metric, db.strain.copy(), db.stress.copy(), mapped, cKDTree(mapped))


def nearest_state(
    index: SearchIndex, e: np.ndarray, s: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """Nearest database index per query row; ties resolve to the lowest index.

    A plain tree query breaks ties by traversal order, which is not stable
    under database permutations, so the few nearest candidates are rechecked.
    """
    pts = index.map_states(np.atleast_2d(e), np.atleast_2d(s))
    k = min(4, len(index))
    dist, idx = index.tree.query(pts, k=k)
    if k == 1:
        return idx.reshape(-1), dist.reshape(-1)
    tied = dist <= dist[:, :1] * (1.0 + _TIE_RTOL) + 1e-300
    best = np.where(tied, idx, len(index)).min(axis=1)
    return best, dist[:, 0]


def lce_project(
    index: SearchIndex,
    e: np.ndarray,
    s: np.ndarray,
    k: int = 20,
    penalty_scale: float = 0.03,
) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Project queries onto local convex combinations of nearby states.

    For each query z, take its k nearest neighbors with mapped coordinates
    Phi and solve min ||Phi w - phi(z)||^2 + rho (sum w - 1)^2 over w >= 0
    via nonnegative least squares on the rho-augmented system.  rho scales
    with the mean squared neighbor magnitude so the sum constraint is stiff
    relative to the residual term.  Returns the combined tensor-component
    states, the weights, and the neighbor indices.
    """
    e2 = np.atleast_2d(e)
    s2 = np.atleast_2d(s)
    pts = index.map_states(e2, s2)
    k = min(k, len(index))
    dist, nbr = index.tree.query(pts, k=k)
    if k == 1:
        nbr = nbr.reshape(-1, 1)
    e_star = np.empty_like(e2)
    s_star = np.empty_like(s2)
    weights = np.empty((pts.shape[0], k))
    for q in range(pts.shape[0]):
        phi = index.mapped[nbr[q]]          # (k, 6)
        rho = penalty_scale * np.mean(np.sum(phi * phi, axis=1))
        sq = np.sqrt(rho) if rho > 0 else 1.0
        a = np.concatenate([phi.T, np.full((1, k), sq)], axis=0)
        y = np.concatenate([pts[q], [sq]])
        w, _ = nnls(a, y)
        weights[q] = w
        e_star[q] = w @ index.strain[nbr[q]]
        s_star[q] = w @ index.stress[nbr[q]]
    return e_star, s_star, weights, nbr
