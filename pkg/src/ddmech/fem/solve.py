"""Incremental-load Newton solver for the hyperelastic problem.

Loads and prescribed displacements are ramped in equal steps; each step runs
a full Newton iteration with the consistent tangent (material + geometric)
to a relative residual of 1e-10 or 25 iterations.  A residual-norm
backtracking line search (halving, at most 8 cuts) guards against element
inversion and material overflow on trial steps; near the solution full steps
are always accepted, so the quadratic tail is unaffected.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import splu

from ..materials import Material
from ..tensors import NonInvertibleDeformation
from .assembly import ElementOps, element_ops, internal_forces
from .bc import BoundaryConditions, dirichlet_dofs, traction_vector
from .mesh import Mesh


class NewtonDivergence(Exception):
    """Newton failed to reach the residual tolerance."""


@dataclass
class FESolveConfig:
    n_steps: int = 4
    tol: float = 1e-10
    max_iters: int = 25


@dataclass
class FEStep:
    load_factor: float
    u: np.ndarray            # (2 n_nodes,)
    strain: np.ndarray       # (m, 3) tensor components at element centers
    stress: np.ndarray       # (m, 3)
    residuals: list[float]   # relative residual per Newton iteration


@dataclass
class FESolution:
    mesh: Mesh
    material_name: str
    steps: list[FEStep] = field(default_factory=list)
    elapsed: float = 0.0

    @property
    def u(self) -> np.ndarray:
        return self.steps[-1].u

    @property
    def strain(self) -> np.ndarray:
        return self.steps[-1].strain

    @property
    def stress(self) -> np.ndarray:
        return self.steps[-1].stress


def solve_factorized(k: sp.spmatrix, rhs: np.ndarray) -> np.ndarray:
    try:
        return splu(sp.csc_matrix(k)).solve(rhs)
    except RuntimeError as exc:  # singular factor
        raise NewtonDivergence(f"linear solve failed: {exc}") from exc


def newton_solve(
    mesh: Mesh,
    material: Material,
    bcs: BoundaryConditions,
    config: FESolveConfig | None = None,
) -> FESolution:
    """Solve the static problem; returns the per-step displacement history."""
    cfg = config or FESolveConfig()
    bcs.validate(mesh)
    t0 = time.perf_counter()

    ops = element_ops(mesh)
    fixed, fixed_values = dirichlet_dofs(mesh, bcs)
    free = np.setdiff1d(np.arange(ops.n_dofs), fixed)
    f_total = traction_vector(mesh, bcs)

    sol = FESolution(mesh, material.name)
    u = np.zeros(ops.n_dofs)
    for step in range(1, cfg.n_steps + 1):
        lam = step / cfg.n_steps
        f_ext = lam * f_total
        u[fixed] = lam * fixed_values
        u, rec = _newton_step(ops, material, u, f_ext, free, cfg, lam)
        sol.steps.append(rec)
    sol.elapsed = time.perf_counter() - t0
    return sol


def _residual(ops, material, u, f_ext, free):
    fint, e, s = internal_forces(ops, material, u)
    r = fint - f_ext
    norm = float(np.linalg.norm(r[free]))
    scale = max(float(np.linalg.norm(f_ext[free])), float(np.linalg.norm(fint)), 1e-300)
    return norm / scale, e, s, fint


def _newton_step(ops, material, u, f_ext, free, cfg, lam) -> tuple[np.ndarray, FEStep]:
    rel, e, s, _ = _residual(ops, material, u, f_ext, free)
    residuals = [rel]
    for _ in range(cfg.max_iters):
        if rel < cfg.tol:
            return u, FEStep(lam, u.copy(), e, s, residuals)
        fint, e, s, k = internal_forces(ops, material, u, with_tangent=True)
        r = fint - f_ext
        du = solve_factorized(k[free][:, free], -r[free])
        if not np.all(np.isfinite(du)):
            raise NewtonDivergence("non-finite Newton direction")

        alpha = 1.0
        for _ in range(9):
            trial = u.copy()
            trial[free] += alpha * du
            try:
                new_rel, e, s, _ = _residual(ops, material, trial, f_ext, free)
            except NonInvertibleDeformation:
                new_rel = np.inf
            if np.isfinite(new_rel) and (new_rel < 2.0 * rel or alpha <= 1.0 / 256):
                break
            alpha *= 0.5
        else:
            raise NewtonDivergence("line search exhausted")
        u, rel = trial, new_rel
        residuals.append(rel)
    if rel < cfg.tol:
        return u, FEStep(lam, u.copy(), e, s, residuals)
    raise NewtonDivergence(
        f"no convergence in {cfg.max_iters} iterations (relative residual {rel:.3e})"
    )


def sample_centers(sol: FESolution, material: Material) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Quadrature-point dataset rows over all load steps (zero-load state excluded).

    Stresses and energies are recomputed from the stored strains with the
    given law, so the same strain paths can be labeled by a different
    material than the one that produced them.
    """
    e = np.concatenate([st.strain for st in sol.steps], axis=0)
    c = 2.0 * e.copy()
    c[:, :2] += 1.0
    return e, material.stress_batch(c), material.energy_batch(c)
