"""The two benchmark boundary-value problems.

* Cook membrane: tapered panel clamped on the left, uniform vertical dead
  traction ``t`` (N/mm per unit thickness) on the right edge, monitored at
  the top-right corner (48, 60).
* Punch: rectangle [0, 2] x [0, 1] mm with symmetry rollers on the left edge
  (u_x = 0) and vertical rollers on the bottom (u_y = 0), pressed down by a
  dead traction ``q`` on the left half of the top edge, monitored at the
  top-left corner (0, 1).
"""

from __future__ import annotations

from .fem.bc import BoundaryConditions, DirichletBC, NeumannBC
from .fem.mesh import Mesh, cook_mesh, punch_mesh

COOK_TIP = (48.0, 60.0)
PUNCH_TIP = (0.0, 1.0)
COOK_TRACTION = 20.0
PUNCH_LOAD = 100.0


def cook_problem(n_refine: int = 1, traction: float = COOK_TRACTION) -> tuple[Mesh, BoundaryConditions]:
    mesh = cook_mesh(n_refine)
    bcs = BoundaryConditions(
        dirichlet=[DirichletBC("left", (True, True))],
        neumann=[NeumannBC("right", (0.0, traction))],
    )
    return mesh, bcs


def punch_problem(n_refine: int = 1, load: float = PUNCH_LOAD) -> tuple[Mesh, BoundaryConditions]:
    mesh = punch_mesh(n_refine)
    bcs = BoundaryConditions(
        dirichlet=[
            DirichletBC("left", (True, False)),
            DirichletBC("bottom", (False, True)),
        ],
        neumann=[NeumannBC("top_load", (0.0, -load))],
    )
    return mesh, bcs


def problem(name: str, n_refine: int = 1, load: float | None = None):
    if name == "cook":
        return cook_problem(n_refine, COOK_TRACTION if load is None else load)
    if name == "punch":
        return punch_problem(n_refine, PUNCH_LOAD if load is None else load)
    raise ValueError(f"unknown problem {name!r}")


def tip_point(name: str) -> tuple[float, float]:
    return {"cook": COOK_TIP, "punch": PUNCH_TIP}[name]
