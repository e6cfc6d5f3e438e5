"""Vectorized total-Lagrangian assembly on linear triangles.

One-point quadrature at the centroid is exact for constant-strain triangles:
the deformation gradient is constant per element, so every quadrature state
lives at the element center.  The strain-displacement operator at finite
strain uses the current deformation gradient,

    (B(W) v)_rows = (d(E11), d(E22), 2 d(E12))  for  dE = sym(W^T grad v),

with ``W = F`` for compatibility terms; the same builder with ``W = grad eta``
produces the coupling operator of the data-driven saddle solver.  Geometric
stiffness contracts a stress state with shape-function gradients:
``geo(T)[(a,i),(b,j)] = delta_ij gradNa . T gradNb``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from ..materials import Material
from ..tensors import NonInvertibleDeformation
from .mesh import Mesh


@dataclass
class ElementOps:
    """Per-element geometry factors shared by all assemblies on a mesh."""

    grads: np.ndarray      # (m, 3, 2) shape-function gradients
    areas: np.ndarray      # (m,)
    dof_idx: np.ndarray    # (m, 6) global dofs in (node, component) order
    n_dofs: int


def element_ops(mesh: Mesh) -> ElementOps:
    p = mesh.nodes[mesh.triangles]
    x0, x1, x2 = p[:, 0], p[:, 1], p[:, 2]
    two_a = (x1[:, 0] - x0[:, 0]) * (x2[:, 1] - x0[:, 1]) - (
        x2[:, 0] - x0[:, 0]
    ) * (x1[:, 1] - x0[:, 1])
    if two_a.min() <= 0.0:
        raise ValueError("mesh has non-positive element areas")
    grads = np.empty((mesh.n_elements, 3, 2))
    grads[:, 0, 0] = x1[:, 1] - x2[:, 1]
    grads[:, 0, 1] = x2[:, 0] - x1[:, 0]
    grads[:, 1, 0] = x2[:, 1] - x0[:, 1]
    grads[:, 1, 1] = x0[:, 0] - x2[:, 0]
    grads[:, 2, 0] = x0[:, 1] - x1[:, 1]
    grads[:, 2, 1] = x1[:, 0] - x0[:, 0]
    grads /= two_a[:, None, None]

    dof_idx = np.empty((mesh.n_elements, 6), dtype=int)
    dof_idx[:, 0::2] = 2 * mesh.triangles
    dof_idx[:, 1::2] = 2 * mesh.triangles + 1
    return ElementOps(grads, 0.5 * two_a, dof_idx, 2 * mesh.n_nodes)


def grad_field(ops: ElementOps, u: np.ndarray) -> np.ndarray:
    """Per-element gradient of a nodal vector field: (m, 2, 2)."""
    nodal = u[ops.dof_idx].reshape(-1, 3, 2)
    return np.einsum("eai,eaj->eij", nodal, ops.grads)


def bmat(ops: ElementOps, w: np.ndarray) -> np.ndarray:
    """Strain-displacement operator rows for weight tensor w (m, 2, 2)."""
    g = ops.grads
    m = g.shape[0]
    b = np.empty((m, 3, 3, 2))
    b[:, 0] = w[:, None, :, 0] * g[:, :, 0, None]
    b[:, 1] = w[:, None, :, 1] * g[:, :, 1, None]
    b[:, 2] = w[:, None, :, 0] * g[:, :, 1, None] + w[:, None, :, 1] * g[:, :, 0, None]
    return b.reshape(m, 3, 6)


def geo_matrix(ops: ElementOps, svec: np.ndarray) -> np.ndarray:
    """Geometric operator geo(T) per element from stress components (m, 3)."""
    s = np.empty(svec.shape[:-1] + (2, 2))
    s[..., 0, 0] = svec[..., 0]
    s[..., 1, 1] = svec[..., 1]
    s[..., 0, 1] = svec[..., 2]
    s[..., 1, 0] = svec[..., 2]
    gm = np.einsum("eak,ekl,ebl->eab", ops.grads, s, ops.grads)
    return np.einsum("eab,ij->eaibj", gm, np.eye(2)).reshape(-1, 6, 6)


def scatter_matrix(ops: ElementOps, ke: np.ndarray) -> sp.csr_matrix:
    """Sum element matrices (m, 6, 6) into the global sparse matrix."""
    rows = np.broadcast_to(ops.dof_idx[:, :, None], ke.shape)
    cols = np.broadcast_to(ops.dof_idx[:, None, :], ke.shape)
    a = sp.coo_matrix(
        (ke.ravel(), (rows.ravel(), cols.ravel())), shape=(ops.n_dofs, ops.n_dofs)
    )
    return a.tocsr()


def scatter_vector(ops: ElementOps, fe: np.ndarray) -> np.ndarray:
    f = np.zeros(ops.n_dofs)
    np.add.at(f, ops.dof_idx.ravel(), fe.ravel())
    return f


def kinematics(ops: ElementOps, u: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Deformation gradient (m, 2, 2) and strain components (m, 3) from u.

    Raises
    ------
    NonInvertibleDeformation
        If any element has det F <= 0.
    """
    g = grad_field(ops, u)
    f = g.copy()
    f[:, 0, 0] += 1.0
    f[:, 1, 1] += 1.0
    det = f[:, 0, 0] * f[:, 1, 1] - f[:, 0, 1] * f[:, 1, 0]
    if det.min() <= 0.0:
        raise NonInvertibleDeformation(f"min det F = {det.min():.6g}")
    # E = sym(g) + g'g/2 stays accurate at small strain, unlike (F'F - 1)/2
    e = np.empty((f.shape[0], 3))
    e[:, 0] = g[:, 0, 0] + 0.5 * (g[:, 0, 0] ** 2 + g[:, 1, 0] ** 2)
    e[:, 1] = g[:, 1, 1] + 0.5 * (g[:, 0, 1] ** 2 + g[:, 1, 1] ** 2)
    e[:, 2] = 0.5 * (g[:, 0, 1] + g[:, 1, 0]) + 0.5 * (
        g[:, 0, 0] * g[:, 0, 1] + g[:, 1, 0] * g[:, 1, 1]
    )
    return f, e


def internal_forces(
    ops: ElementOps, material: Material, u: np.ndarray, with_tangent: bool = False
):
    """Internal force vector, strains, stresses and optionally the tangent."""
    f, e = kinematics(ops, u)
    c = 2.0 * e.copy()
    c[:, :2] += 1.0
    if with_tangent:
        s, d = material.stress_and_tangent(c)
    else:
        s = material.stress_batch(c)
    b = bmat(ops, f)
    fe = np.einsum("e,eka,ek->ea", ops.areas, b, s)
    fint = scatter_vector(ops, fe)
    if not with_tangent:
        return fint, e, s
    ke = np.einsum("e,eka,ekl,elb->eab", ops.areas, b, d, b)
    ke += ops.areas[:, None, None] * geo_matrix(ops, s)
    return fint, e, s, scatter_matrix(ops, ke)
