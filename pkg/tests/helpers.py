"""Shared test oracles: finite differences and random admissible states.

The finite-difference derivatives treat the energy as a function of the three
independent components (c11, c22, c12) of a symmetric tensor.  Because the
off-diagonal slot represents the two equal tensor entries c12 = c21, the
symmetric tensor derivative relates to the component derivative by

    S11 = 2 dpsi/dc11,   S22 = 2 dpsi/dc22,   S12 = dpsi/dc12,

and equivalently for the tangent columns of D = 2 dS/dC.
"""

from __future__ import annotations

import numpy as np


def five_point(f, x: np.ndarray, i: int, h: float) -> np.ndarray:
    """Fourth-order central difference of f along component i."""
    e = np.zeros_like(x)
    e[i] = 1.0
    return (
        -np.asarray(f(x + 2 * h * e))
        + 8.0 * np.asarray(f(x + h * e))
        - 8.0 * np.asarray(f(x - h * e))
        + np.asarray(f(x - 2 * h * e))
    ) / (12.0 * h)


def fd_stress(energy, cvec: np.ndarray, h: float = 1e-5) -> np.ndarray:
    """S = 2 dpsi/dC from an energy callable on component triples."""
    g = np.array([five_point(energy, cvec, i, h) for i in range(3)])
    return np.array([2.0 * g[0], 2.0 * g[1], g[2]])

def fd_tangent(stress, cvec: np.ndarray, h: float = 1e-5) -> np.ndarray:
    """D = 2 dS/dC from a stress callable on component triples."""
    cols = [five_point(stress, cvec, i, h) for i in range(3)]
    return np.column_stack([2.0 * cols[0], 2.0 * cols[1], cols[2]])


def random_spd_c(rng: np.random.Generator, scale: float = 0.4) -> np.ndarray:
    """Random admissible right Cauchy-Green component triple C = F^T F."""
    while True:
        f = np.eye(2) + scale * (rng.random((2, 2)) - 0.5)
        if np.linalg.det(f) > 0.2:
            c = f.T @ f
            return np.array([c[0, 0], c[1, 1], c[0, 1]])


def random_spd_batch(rng: np.random.Generator, n: int, scale: float = 0.4) -> np.ndarray:
    return np.array([random_spd_c(rng, scale) for _ in range(n)])
