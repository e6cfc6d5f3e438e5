"""Isotropic hyperelastic laws for plane strain, expressed through invariants.

Every law supplies the scalar energy ``psi(I1, I2, I3)`` and its first and
second partial derivatives with respect to the principal invariants of the
plane-strain lifted right Cauchy-Green tensor.  Stress and tangent follow
from the chain rule

.. math::
    S = 2\\,\\frac{\\partial\\psi}{\\partial C}
      = 2\\left[(\\psi_{,1} + I_1\\psi_{,2})\\,I - \\psi_{,2}\\,C
        + I_3\\psi_{,3}\\,C^{-1}\\right],
    \\qquad
    \\mathbb{D} = 2\\,\\frac{\\partial S}{\\partial C},

evaluated on the in-plane 2x2 block.  The same kernel serves the analytic
laws and the trained network, so all of them share one consistent tangent.

Component conventions follow :mod:`ddmech.tensors`: stress rows are tensor
components ``(s11, s22, s12)`` and tangent matrices pair them with
engineering strain increments ``(de11, de22, 2 de12)``.
"""

from __future__ import annotations

import abc
import dataclasses
import math
from dataclasses import dataclass

import numpy as np

from .tensors import SymTensor2, invariants_batch

# Plane strain, E = 500 MPa, nu = 0.35.
DEFAULT_MU = 185.185
DEFAULT_LAMBDA = 432.099


def _adjugate(c: np.ndarray) -> np.ndarray:
    """adj(C2) = I3 * C2^(-1) as component triples; no division involved."""
    return np.stack([c[..., 1], c[..., 0], -c[..., 2]], axis=-1)


def invariant_stress(c: np.ndarray, psi_d: np.ndarray) -> np.ndarray:
    """Second Piola-Kirchhoff stress components from invariant derivatives.

    Parameters
    ----------
    c : (..., 3) array
        In-plane right Cauchy-Green components ``(c11, c22, c12)``.
    psi_d : (..., 3) array
        ``(psi_{,1}, psi_{,2}, psi_{,3})`` at those states.
    """
    c = np.asarray(c, dtype=float)
    p1, p2, p3 = psi_d[..., 0], psi_d[..., 1], psi_d[..., 2]
    i1 = c[..., 0] + c[..., 1] + 1.0
    out = np.empty_like(c)
    out[..., 0] = 2.0 * (p1 + p2 * (i1 - c[..., 0]) + p3 * c[..., 1])
    out[..., 1] = 2.0 * (p1 + p2 * (i1 - c[..., 1]) + p3 * c[..., 0])
    out[..., 2] = -2.0 * c[..., 2] * (p2 + p3)
    return out


def invariant_tangent(c: np.ndarray, psi_d: np.ndarray, psi_dd: np.ndarray) -> np.ndarray:
    """Consistent material tangent ``D = 2 dS/dC`` in engineering Voigt form.

    Built from the invariant gradients ``A_k = dI_k/dC`` restricted in plane:
    ``A1 = I``, ``A2 = I1 I - C``, ``A3 = adj(C)``, plus the curvature of
    ``A2`` and ``A3`` in ``C``.  Returns shape (..., 3, 3).
    """
    c = np.asarray(c, dtype=float)
    i1 = c[..., 0] + c[..., 1] + 1.0
    i3 = c[..., 0] * c[..., 1] - c[..., 2] ** 2
    adj = _adjugate(c)

    a1 = np.zeros_like(c)
    a1[..., 0] = 1.0
    a1[..., 1] = 1.0
    a2 = np.stack([i1 - c[..., 0], i1 - c[..., 1], -c[..., 2]], axis=-1)
    a = np.stack([a1, a2, adj], axis=-2)  # (..., 3 invariants, 3 comps)

    d = np.einsum("...kl,...ki,...lj->...ij", psi_dd, a, a)

    # d(A2)/dC = I (x) I - Isym
    p2 = psi_d[..., 1]
    d += p2[..., None, None] * (
        np.einsum("...i,...j->...ij", a1, a1) - _isym_like(c)
    )

    # d(A3)/dC = I3 (Cinv (x) Cinv - Cinv [] Cinv); with adj = I3 Cinv this is
    # (adj (x) adj - boxed(adj)) / I3.
    p3 = psi_d[..., 2]
    d += (p3 / i3)[..., None, None] * (
        np.einsum("...i,...j->...ij", adj, adj) - _boxed(adj)
    )
    return 4.0 * d


def _isym_like(c: np.ndarray) -> np.ndarray:
    m = np.zeros(c.shape[:-1] + (3, 3))
    m[..., 0, 0] = 1.0
    m[..., 1, 1] = 1.0
    m[..., 2, 2] = 0.5
    return m


def _boxed(p: np.ndarray) -> np.ndarray:
    """Voigt matrix of X -> P X P for symmetric X, P given as component triple."""
    p11, p22, p12 = p[..., 0], p[..., 1], p[..., 2]
    m = np.empty(p.shape[:-1] + (3, 3))
    m[..., 0, 0] = p11 * p11
    m[..., 0, 1] = p12 * p12
    m[..., 0, 2] = p11 * p12
    m[..., 1, 0] = p12 * p12
    m[..., 1, 1] = p22 * p22
    m[..., 1, 2] = p12 * p22
    m[..., 2, 0] = p11 * p12
    m[..., 2, 1] = p12 * p22
    m[..., 2, 2] = 0.5 * (p11 * p22 + p12 * p12)
    return m


class Material(abc.ABC):
    """A hyperelastic law defined by its invariant-space energy derivatives."""

    name: str = "material"

    @abc.abstractmethod
    def energy_invariants(self, i1, i2, i3):
        """psi(I1, I2, I3), vectorized."""

    @abc.abstractmethod
    def first_derivatives(self, i1, i2, i3):
        """(psi_,1, psi_,2, psi_,3) stacked on the last axis."""

    @abc.abstractmethod
    def second_derivatives(self, i1, i2, i3):
        """Symmetric (..., 3, 3) matrix of psi_,kl."""

    def describe_params(self) -> str:
        """Scalar parameters as 'key=value' pairs, for file headers."""
        p = getattr(self, "params", None)
        if p is None or not dataclasses.is_dataclass(p):
            return ""
        items = dataclasses.asdict(p).items()
        return " ".join(f"{k}={v}" for k, v in items if np.isscalar(v))

    # -- batch interface on component triples --------------------------------

    def energy_batch(self, c: np.ndarray) -> np.ndarray:
        return self.energy_invariants(*invariants_batch(np.asarray(c, dtype=float)))

    def stress_batch(self, c: np.ndarray) -> np.ndarray:
        c = np.asarray(c, dtype=float)
        return invariant_stress(c, self.first_derivatives(*invariants_batch(c)))

    def stress_and_tangent(self, c: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        c = np.asarray(c, dtype=float)
        i1, i2, i3 = invariants_batch(c)
        d1 = self.first_derivatives(i1, i2, i3)
        d2 = self.second_derivatives(i1, i2, i3)
        return invariant_stress(c, d1), invariant_tangent(c, d1, d2)

    # -- scalar interface -----------------------------------------------------

    def energy(self, c2: SymTensor2) -> float:
        return float(self.energy_batch(c2.as_vec()))

    def stress(self, c2: SymTensor2) -> SymTensor2:
        return SymTensor2.from_vec(self.stress_batch(c2.as_vec()))

    def tangent(self, c2: SymTensor2) -> np.ndarray:
        return self.stress_and_tangent(c2.as_vec()[None, :])[1][0]


@dataclass(frozen=True)
class CiarletParams:
    mu: float = DEFAULT_MU
    lam: float = DEFAULT_LAMBDA


class Ciarlet(Material):
    r"""Compressible Neo-Hookean law of Ciarlet type.

    .. math::
        \psi = \frac{\mu}{2}(I_1 - 3) + \frac{\lambda}{4}(J^2 - 1)
               - \left(\frac{\lambda}{2} + \mu\right)\ln J,
        \qquad J = \sqrt{I_3}.
    """

    name = "ciarlet"

    def __init__(self, params: CiarletParams | None = None):
        self.params = params or CiarletParams()

    def energy_invariants(self, i1, i2, i3):
        mu, lam = self.params.mu, self.params.lam
        return 0.5 * mu * (i1 - 3.0) + 0.25 * lam * (i3 - 1.0) \
            - 0.5 * (0.5 * lam + mu) * np.log(i3)

    def first_derivatives(self, i1, i2, i3):
        mu, lam = self.params.mu, self.params.lam
        z = np.zeros_like(np.asarray(i3, dtype=float))
        p1 = z + 0.5 * mu
        # grouped so that p3 = -p1 exactly at i3 = 1, making S(I) = 0 exact
        p3 = 0.25 * lam * (1.0 - 1.0 / i3) - 0.5 * mu / i3
        return np.stack([p1, z, p3], axis=-1)

    def second_derivatives(self, i1, i2, i3):
        mu, lam = self.params.mu, self.params.lam
        i3 = np.asarray(i3, dtype=float)
        m = np.zeros(i3.shape + (3, 3))
        m[..., 2, 2] = 0.5 * (0.5 * lam + mu) / i3**2
        return m


@dataclass(frozen=True)
class HartmannNeffParams:
    a: float = 0.00367
    c10: float = 0.1788
    c01: float = 0.1958
    k: float = 80.0


class HartmannNeff(Material):
    r"""Hartmann-Neff hyperelastic law with an isochoric-volumetric split.

    .. math::
        \psi = a(\bar I_1^3 - 27) + c_{10}(\bar I_1 - 3)
             + c_{01}(\bar I_2^{3/2} - 3\sqrt{3})
             + \frac{k}{50}(J^5 + J^{-5} - 2)

    with the unimodular invariants :math:`\bar I_1 = I_1 I_3^{-1/3}` and
    :math:`\bar I_2 = I_2 I_3^{-2/3}` of :math:`\bar C = J^{-2/3} C_3`.
    """

    name = "hartmann-neff"

    def __init__(self, params: HartmannNeffParams | None = None):
        self.params = params or HartmannNeffParams()

    def energy_invariants(self, i1, i2, i3):
        p = self.params
        j = np.sqrt(i3)
        b1 = i1 * i3 ** (-1.0 / 3.0)
        b2 = i2 * i3 ** (-2.0 / 3.0)
        return p.a * (b1**3 - 27.0) + p.c10 * (b1 - 3.0) \
            + p.c01 * (b2**1.5 - 3.0 * math.sqrt(3.0)) \
            + (p.k / 50.0) * (j**5 + j**-5 - 2.0)

    def first_derivatives(self, i1, i2, i3):
        p = self.params
        b1 = i1 * i3 ** (-1.0 / 3.0)
        b2 = i2 * i3 ** (-2.0 / 3.0)
        w1 = 3.0 * p.a * b1**2 + p.c10
        w2 = 1.5 * p.c01 * np.sqrt(b2)
        j = np.sqrt(i3)
        du = (p.k / 10.0) * (j**4 - j**-6)
        p1 = w1 * i3 ** (-1.0 / 3.0)
        p2 = w2 * i3 ** (-2.0 / 3.0)
        p3 = -(w1 * i1) / 3.0 * i3 ** (-4.0 / 3.0) \
            - (2.0 * w2 * i2) / 3.0 * i3 ** (-5.0 / 3.0) \
            + 0.5 * du * i3**-0.5
        return np.stack([p1, p2, p3], axis=-1)

    def second_derivatives(self, i1, i2, i3):
        p = self.params
        i1 = np.asarray(i1, dtype=float)
        b1 = i1 * i3 ** (-1.0 / 3.0)
        b2 = i2 * i3 ** (-2.0 / 3.0)
        w1 = 3.0 * p.a * b1**2 + p.c10
        w2 = 1.5 * p.c01 * np.sqrt(b2)
        j = np.sqrt(i3)
        du = (p.k / 10.0) * (j**4 - j**-6)
        ddu = (p.k / 10.0) * (4.0 * j**3 + 6.0 * j**-7)

        m = np.zeros(i1.shape + (3, 3))
        m[..., 0, 0] = 6.0 * p.a * b1 * i3 ** (-2.0 / 3.0)
        m[..., 0, 2] = -2.0 * p.a * b1 * i1 * i3 ** (-5.0 / 3.0) \
            - w1 / 3.0 * i3 ** (-4.0 / 3.0)
        m[..., 2, 0] = m[..., 0, 2]
        m[..., 1, 1] = 0.75 * p.c01 / np.sqrt(b2) * i3 ** (-4.0 / 3.0)
        m[..., 1, 2] = -0.5 * p.c01 * i2 / np.sqrt(b2) * i3 ** (-7.0 / 3.0) \
            - (2.0 / 3.0) * w2 * i3 ** (-5.0 / 3.0)
        m[..., 2, 1] = m[..., 1, 2]
        m[..., 2, 2] = (2.0 / 3.0) * p.a * b1 * i1**2 * i3 ** (-8.0 / 3.0) \
            + (4.0 / 9.0) * w1 * i1 * i3 ** (-7.0 / 3.0) \
            + (1.0 / 3.0) * p.c01 * i2**2 / np.sqrt(b2) * i3 ** (-10.0 / 3.0) \
            + (10.0 / 9.0) * w2 * i2 * i3 ** (-8.0 / 3.0) \
            + 0.25 * ddu / i3 - 0.25 * du * i3**-1.5
        return m


def make_material(law: str, params=None) -> Material:
    """Factory by law name: 'ciarlet' or 'hartmann-neff' (alias 'hn')."""
    key = law.lower()
    if key == "ciarlet":
        return Ciarlet(params)
    if key in ("hartmann-neff", "hn"):
        return HartmannNeff(params)
    raise ValueError(f"unknown law {law!r}")


# Functional wrappers around the scalar interface.

def ciarlet_energy(c2: SymTensor2, params: CiarletParams | None = None) -> float:
    return Ciarlet(params).energy(c2)


def ciarlet_stress(c2: SymTensor2, params: CiarletParams | None = None) -> SymTensor2:
    return Ciarlet(params).stress(c2)


def hn_energy(c2: SymTensor2, params: HartmannNeffParams | None = None) -> float:
    return HartmannNeff(params).energy(c2)


def hn_stress(c2: SymTensor2, params: HartmannNeffParams | None = None) -> SymTensor2:
    return HartmannNeff(params).stress(c2)
