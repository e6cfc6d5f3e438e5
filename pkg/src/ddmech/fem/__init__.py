from .assembly import (
    ElementOps,
    bmat,
    element_ops,
    geo_matrix,
    internal_forces,
    scatter_matrix,
    scatter_vector,
)
from .bc import BoundaryConditions, DirichletBC, NeumannBC, dirichlet_dofs, traction_vector
from .mesh import MalformedMesh, Mesh, cook_mesh, punch_mesh, read_mesh, write_mesh
from .solve import (
    FESolution,
    FESolveConfig,
    FEStep,
    NewtonDivergence,
    newton_solve,
    sample_centers,
)

__all__ = [
    "ElementOps",
    "bmat",
    "element_ops",
    "scatter_matrix",
    "scatter_vector",
    "geo_matrix",
    "internal_forces",
    "BoundaryConditions",
    "DirichletBC",
    "NeumannBC",
    "dirichlet_dofs",
    "traction_vector",
    "MalformedMesh",
    "Mesh",
    "cook_mesh",
    "punch_mesh",
    "read_mesh",
    "write_mesh",
    "FESolution",
    "FESolveConfig",
    "FEStep",
    "NewtonDivergence",
    "newton_solve",
    "sample_centers",
]
