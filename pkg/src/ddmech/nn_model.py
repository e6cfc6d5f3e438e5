"""Shallow invariant network as a hyperelastic energy.

One hidden layer of ``n_h`` neurons, no biases, activation
``h(x) = exp(alpha x) - 1`` with one trainable exponent per neuron:

    psi(x) = sum_j w2_j (exp(alpha_j z_j) - 1),    z_j = sum_k w1_kj x_k,

on the shifted invariants ``x = (I1 - 3, I2 - 3, I3 - 1)``.  The shift and
the activation's ``-1`` make ``psi`` and the stress vanish identically at the
undeformed state.  With ``w2 >= 0`` the Hessian in invariant space is a sum
of rank-one terms ``w2_j alpha_j^2 exp(alpha_j z_j) w1_j w1_j^T`` and hence
positive semidefinite, which is the convexity the training projection
maintains.

All derivatives are closed forms; nothing here differentiates numerically.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .materials import Material
from .tensors import SymTensor2, shifted_invariants


@dataclass
class NetworkParams:
    """Weights of the invariant network: w1 (3, n_h), alpha (n_h,), w2 (n_h,)."""

    w1: np.ndarray
    alpha: np.ndarray
    w2: np.ndarray

    def __post_init__(self):
        self.w1 = np.asarray(self.w1, dtype=float)
        self.alpha = np.asarray(self.alpha, dtype=float)
        self.w2 = np.asarray(self.w2, dtype=float)
        n_h = self.w2.shape[0]
        if self.w1.shape != (3, n_h) or self.alpha.shape != (n_h,):
            raise ValueError(
                f"inconsistent shapes: w1 {self.w1.shape}, alpha {self.alpha.shape}, "
                f"w2 {self.w2.shape}"
            )

    @property
    def n_hidden(self) -> int:
        return self.w2.shape[0]

    def copy(self) -> "NetworkParams":
        return NetworkParams(self.w1.copy(), self.alpha.copy(), self.w2.copy())


def init_params(n_hidden: int, rng: np.random.Generator) -> NetworkParams:
    """Uniform init: w1, w2 ~ U[0, 0.5], alpha ~ U[0.1, 1.0]."""
    return NetworkParams(
        w1=rng.uniform(0.0, 0.5, size=(3, n_hidden)),
        alpha=rng.uniform(0.1, 1.0, size=n_hidden),
        w2=rng.uniform(0.0, 0.5, size=n_hidden),
    )


def forward_batch(p: NetworkParams, x: np.ndarray) -> np.ndarray:
    """Energy for rows of shifted invariants, shape (n, 3) -> (n,)."""
    with np.errstate(over="ignore", invalid="ignore"):
        z = x @ p.w1
        return (np.exp(p.alpha * z) - 1.0) @ p.w2


def energy_derivatives_batch(
    p: NetworkParams, x: np.ndarray, order: int = 2
) -> tuple[np.ndarray, np.ndarray | None]:
    """First (and optionally second) derivatives of psi w.r.t. the invariants.

    Returns ``(d1, d2)`` with d1 of shape (n, 3) and d2 of shape (n, 3, 3)
    (or None when order < 2).  The shift is affine, so derivatives w.r.t.
    shifted and unshifted invariants coincide.
    """
    with np.errstate(over="ignore", invalid="ignore"):
        z = x @ p.w1
        e = np.exp(p.alpha * z)
        d1 = (e * (p.w2 * p.alpha)) @ p.w1.T
        if order < 2:
            return d1, None
        d2 = np.einsum("nj,kj,lj->nkl", e * (p.w2 * p.alpha**2), p.w1, p.w1)
    return d1, d2


class NNMaterial(Material):
    """Adapter exposing a trained network through the common material interface."""

    name = "nn"

    def __init__(self, params: NetworkParams):
        self.params = params

    def _x(self, i1, i2, i3):
        return np.stack(
            [np.asarray(i1) - 3.0, np.asarray(i2) - 3.0, np.asarray(i3) - 1.0], axis=-1
        )

    def energy_invariants(self, i1, i2, i3):
        x = self._x(i1, i2, i3)
        return forward_batch(self.params, x.reshape(-1, 3)).reshape(np.shape(i1))

    def first_derivatives(self, i1, i2, i3):
        x = self._x(i1, i2, i3)
        d1, _ = energy_derivatives_batch(self.params, x.reshape(-1, 3), order=1)
        return d1.reshape(np.shape(i1) + (3,))

    def second_derivatives(self, i1, i2, i3):
        x = self._x(i1, i2, i3)
        _, d2 = energy_derivatives_batch(self.params, x.reshape(-1, 3))
        return d2.reshape(np.shape(i1) + (3, 3))


# Scalar convenience API mirroring the analytic laws.


def forward_energy(p: NetworkParams, c2: SymTensor2) -> float:
    return float(forward_batch(p, shifted_invariants(c2)[None, :])[0])


def nn_stress(p: NetworkParams, c2: SymTensor2) -> SymTensor2:
    return NNMaterial(p).stress(c2)


def nn_tangent(p: NetworkParams, c2: SymTensor2) -> np.ndarray:
    return NNMaterial(p).tangent(c2)


def hessian_invariants(p: NetworkParams, c2: SymTensor2) -> np.ndarray:
    """Hessian of the energy w.r.t. the invariants at one state, shape (3, 3)."""
    _, d2 = energy_derivatives_batch(p, shifted_invariants(c2)[None, :])
    return d2[0]
