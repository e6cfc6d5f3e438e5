"""Plane-strain tensor kinematics, invariants and component conventions.

Symmetric in-plane second-order tensors are carried as component triples in
the fixed order ``(a11, a22, a12)``.  Three vector conventions appear in the
code base and are never mixed silently:

* tensor components ``(a11, a22, a12)`` - storage and file format,
* engineering strain ``(a11, a22, 2 a12)`` - work-conjugate pairing with
  stress components in assembly,
* Mandel components ``(a11, a22, sqrt(2) a12)`` - orthonormal basis used for
  metric algebra, so that the Euclidean dot product equals the tensor double
  contraction.

Plane strain embeds the in-plane right Cauchy-Green tensor ``C2`` into 3D as
``C3 = diag(C2, 1)``; the principal invariants below are those of ``C3``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

SQRT2 = math.sqrt(2.0)


class NonInvertibleDeformation(Exception):
    """det F <= 0: the deformation gradient is not admissible."""


class NonPositiveDefinite(Exception):
    """A tensor required to be symmetric positive definite is not."""


@dataclass(frozen=True)
class SymTensor2:
    """Symmetric 2x2 tensor stored as its three independent components."""

    a11: float
    a22: float
    a12: float

    @classmethod
    def from_matrix(cls, m: np.ndarray) -> "SymTensor2":
        m = np.asarray(m, dtype=float)
        return cls(float(m[0, 0]), float(m[1, 1]), 0.5 * float(m[0, 1] + m[1, 0]))

    @classmethod
    def from_vec(cls, v: np.ndarray) -> "SymTensor2":
        return cls(float(v[0]), float(v[1]), float(v[2]))

    def as_matrix(self) -> np.ndarray:
        return np.array([[self.a11, self.a12], [self.a12, self.a22]])

    def as_vec(self) -> np.ndarray:
        """Tensor components ``(a11, a22, a12)``."""
        return np.array([self.a11, self.a22, self.a12])

    def mandel(self) -> np.ndarray:
        """Orthonormal components ``(a11, a22, sqrt(2) a12)``."""
        return np.array([self.a11, self.a22, SQRT2 * self.a12])


@dataclass(frozen=True)
class PhasePoint:
    """A strain-stress pair ``z = (E, S)`` in constitutive phase space."""

    E: SymTensor2
    S: SymTensor2


class Invariants(NamedTuple):
    i1: float
    i2: float
    i3: float


def green_lagrange(grad_u: np.ndarray) -> SymTensor2:
    r"""Green-Lagrange strain from an in-plane displacement gradient.

    .. math::
        E = \tfrac12 (\nabla u + \nabla u^T + \nabla u^T \nabla u)

    which equals :math:`\tfrac12(F^T F - I)` with :math:`F = I + \nabla u`.
    Exact for pure rotations: ``grad_u = Q - I`` gives ``E = 0``.
    """
    g = np.asarray(grad_u, dtype=float)
    e = 0.5 * (g + g.T + g.T @ g)
    return SymTensor2(e[0, 0], e[1, 1], e[0, 1])


def right_cauchy_green(f: np.ndarray) -> SymTensor2:
    """In-plane right Cauchy-Green tensor ``C2 = F^T F``.

    Raises
    ------
    NonInvertibleDeformation
        If ``det F <= 0``.
    """
    f = np.asarray(f, dtype=float)
    det = f[0, 0] * f[1, 1] - f[0, 1] * f[1, 0]
    if det <= 0.0:
        raise NonInvertibleDeformation(f"det F = {det:.6g} <= 0")
    c = f.T @ f
    return SymTensor2(c[0, 0], c[1, 1], c[0, 1])


def invariants_plane_strain(c2: SymTensor2) -> Invariants:
    r"""Principal invariants of the plane-strain lift ``C3 = diag(C2, 1)``.

    .. math::
        I_1 = \operatorname{tr} C_2 + 1, \qquad
        I_2 = \tfrac12\left[(\operatorname{tr} C_3)^2
              - \operatorname{tr}(C_3^2)\right], \qquad
        I_3 = \det C_2 .

    ``C2`` must be symmetric positive definite.
    """
    det = c2.a11 * c2.a22 - c2.a12 * c2.a12
    if c2.a11 <= 0.0 or det <= 0.0:
        raise NonPositiveDefinite(f"C2 with a11 = {c2.a11:.6g}, det = {det:.6g}")
    tr2 = c2.a11 + c2.a22
    i1 = tr2 + 1.0
    # tr(C3^2) = tr(C2^2) + 1
    tr_sq = c2.a11 * c2.a11 + c2.a22 * c2.a22 + 2.0 * c2.a12 * c2.a12 + 1.0
    i2 = 0.5 * (i1 * i1 - tr_sq)
    return Invariants(i1, i2, det)


def shifted_invariants(c2: SymTensor2) -> np.ndarray:
    """Invariants shifted to vanish at the undeformed state: ``(I1-3, I2-3, I3-1)``."""
    i1, i2, i3 = invariants_plane_strain(c2)
    return np.array([i1 - 3.0, i2 - 3.0, i3 - 1.0])


def rotate_pair(p: PhasePoint, theta: float) -> PhasePoint:
    """Rotate both members of a phase-space pair by ``Q(theta)``: ``A -> Q^T A Q``."""
    e = rotate_sym(p.E.as_vec(), theta)
    s = rotate_sym(p.S.as_vec(), theta)
    return PhasePoint(SymTensor2.from_vec(e), SymTensor2.from_vec(s))


# ---------------------------------------------------------------------------
# Array kernels.  Last axis holds tensor components (a11, a22, a12).
# ---------------------------------------------------------------------------


def rotate_sym(a: np.ndarray, theta: float) -> np.ndarray:
    """``Q(theta)^T A Q(theta)`` on component triples, vectorized over rows."""
    a = np.asarray(a, dtype=float)
    c, s = math.cos(theta), math.sin(theta)
    a11, a22, a12 = a[..., 0], a[..., 1], a[..., 2]
    out = np.empty_like(a)
    out[..., 0] = c * c * a11 + s * s * a22 + 2.0 * c * s * a12
    out[..., 1] = s * s * a11 + c * c * a22 - 2.0 * c * s * a12
    out[..., 2] = c * s * (a22 - a11) + (c * c - s * s) * a12
    return out


def to_mandel(a: np.ndarray) -> np.ndarray:
    """Tensor components -> Mandel components (shear scaled by sqrt(2))."""
    out = np.array(a, dtype=float, copy=True)
    out[..., 2] *= SQRT2
    return out


def from_mandel(a: np.ndarray) -> np.ndarray:
    out = np.array(a, dtype=float, copy=True)
    out[..., 2] /= SQRT2
    return out


def voigt_inner(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Double contraction ``A : B`` of symmetric tensors from component triples."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    return a[..., 0] * b[..., 0] + a[..., 1] * b[..., 1] + 2.0 * a[..., 2] * b[..., 2]


def gl_from_grad(grad_u: np.ndarray) -> np.ndarray:
    """Green-Lagrange components from displacement gradients of shape (..., 2, 2)."""
    g = np.asarray(grad_u, dtype=float)
    gt = np.swapaxes(g, -1, -2)
    e = 0.5 * (g + gt + gt @ g)
    return np.stack([e[..., 0, 0], e[..., 1, 1], e[..., 0, 1]], axis=-1)


def invariants_batch(c: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Invariant arrays (i1, i2, i3) from C2 component triples of shape (..., 3)."""
    c11, c22, c12 = c[..., 0], c[..., 1], c[..., 2]
    det = c11 * c22 - c12 * c12
    i1 = c11 + c22 + 1.0
    tr_sq = c11 * c11 + c22 * c22 + 2.0 * c12 * c12 + 1.0
    i2 = 0.5 * (i1 * i1 - tr_sq)
    return i1, i2, det
