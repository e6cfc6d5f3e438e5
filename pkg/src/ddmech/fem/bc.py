"""Boundary conditions on tagged mesh edges.

Dirichlet entries prescribe displacement components (via a per-component
mask) on every node of a tagged edge set; Neumann entries prescribe a dead
reference traction per unit undeformed length.  Loads and prescribed values
are totals at full load; solvers scale them by the load-step fraction.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .mesh import Mesh


@dataclass(frozen=True)
class DirichletBC:
    tag: str
    mask: tuple[bool, bool]
    value: tuple[float, float] = (0.0, 0.0)


@dataclass(frozen=True)
class NeumannBC:
    tag: str
    traction: tuple[float, float]


@dataclass
class BoundaryConditions:
    dirichlet: list[DirichletBC] = field(default_factory=list)
    neumann: list[NeumannBC] = field(default_factory=list)

    def validate(self, mesh: Mesh) -> None:
        for bc in list(self.dirichlet) + list(self.neumann):
            if bc.tag not in mesh.edge_tags:
                raise ValueError(f"unknown edge tag {bc.tag!r}")


def dirichlet_dofs(mesh: Mesh, bcs: BoundaryConditions) -> tuple[np.ndarray, np.ndarray]:
    """Constrained dof indices and their full-load values.

    Overlapping prescriptions (e.g. a shared corner node) must agree.
    """
    table: dict[int, float] = {}
    for bc in bcs.dirichlet:
        nodes = np.unique(mesh.edge_tags[bc.tag])
        for comp in range(2):
            if not bc.mask[comp]:
                continue
            for n in nodes:
                dof = 2 * int(n) + comp
                val = float(bc.value[comp])
                if dof in table and table[dof] != val:
                    raise ValueError(f"conflicting Dirichlet value at dof {dof}")
                table[dof] = val
    if not table:
        return np.empty(0, dtype=int), np.empty(0)
    dofs = np.array(sorted(table), dtype=int)
    return dofs, np.array([table[d] for d in dofs])


def traction_vector(mesh: Mesh, bcs: BoundaryConditions) -> np.ndarray:
    """Consistent nodal loads of all dead edge tractions at full load."""
    f = np.zeros(2 * mesh.n_nodes)
    for bc in bcs.neumann:
        edges = mesh.edge_tags[bc.tag]
        p = mesh.nodes[edges]                      # (k, 2 nodes, 2)
        lengths = np.linalg.norm(p[:, 1] - p[:, 0], axis=1)
        for comp in range(2):
            contrib = 0.5 * lengths * bc.traction[comp]
            np.add.at(f, 2 * edges[:, 0] + comp, contrib)
            np.add.at(f, 2 * edges[:, 1] + comp, contrib)
    return f
