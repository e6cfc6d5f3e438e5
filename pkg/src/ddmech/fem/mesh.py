"""Triangle meshes for the two benchmark geometries.

Both generators build a structured quad grid, split each quad along a
parity-alternating diagonal, and tag the boundary edges.  The Cook membrane
additionally jitters the interior nodes (deterministically, in index space)
so the triangulation is genuinely unstructured; the punch mesh stays
structured but is power-graded toward the top-left corner where the solution
is steep.

Geometry conventions (documented assumptions):

* Cook membrane: trapezoid (0,0)-(48,44)-(48,60)-(0,44) mm, tags
  left/right/top/bottom.  ``n_refine=1`` is the 888-element comparison mesh
  (37x12 grid), ``n_refine=2`` the 986-element source mesh (29x17 grid, a
  different jitter seed), other values scale the 37x12 grid.
* Punch: rectangle [0, 2L] x [0, L] with L = 1 mm, tags left/right/bottom and
  a split top edge: ``top_load`` for x <= L, ``top_free`` for the rest.  The
  grading places a grid line exactly at x = L.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


class MalformedMesh(Exception):
    """A mesh file or mesh data failed validation."""


@dataclass
class Mesh:
    nodes: np.ndarray                     # (n, 2) float
    triangles: np.ndarray                 # (m, 3) int, counter-clockwise
    edge_tags: dict[str, np.ndarray] = field(default_factory=dict)

    @property
    def n_nodes(self) -> int:
        return self.nodes.shape[0]

    @property
    def n_elements(self) -> int:
        return self.triangles.shape[0]

    def areas(self) -> np.ndarray:
        p = self.nodes[self.triangles]
        return 0.5 * (
            (p[:, 1, 0] - p[:, 0, 0]) * (p[:, 2, 1] - p[:, 0, 1])
            - (p[:, 2, 0] - p[:, 0, 0]) * (p[:, 1, 1] - p[:, 0, 1])
        )

    def centroids(self) -> np.ndarray:
        return self.nodes[self.triangles].mean(axis=1)

    def find_node(self, xy) -> int:
        """Index of the node nearest to a coordinate pair."""
        d = np.linalg.norm(self.nodes - np.asarray(xy, dtype=float), axis=1)
        return int(np.argmin(d))

    def validate(self) -> None:
        if not np.all(np.isfinite(self.nodes)):
            raise MalformedMesh("non-finite node coordinates")
        if self.triangles.min(initial=0) < 0 or self.triangles.max(initial=-1) >= self.n_nodes:
            raise MalformedMesh("triangle index out of range")
        a = self.areas()
        if a.size == 0 or a.min() <= 0.0:
            raise MalformedMesh("non-positive triangle area (orientation)")
        for tag, edges in self.edge_tags.items():
            if edges.size and edges.max() >= self.n_nodes:
                raise MalformedMesh(f"edge tag {tag!r} references missing node")


def _triangulate(nx: int, ny: int) -> np.ndarray:
    """Split each grid quad along a parity-alternating diagonal (CCW)."""
    tris = []
    nid = lambda i, j: j * (nx + 1) + i
    for j in range(ny):
        for i in range(nx):
            n00, n10 = nid(i, j), nid(i + 1, j)
            n11, n01 = nid(i + 1, j + 1), nid(i, j + 1)
            if (i + j) % 2 == 0:
                tris += [(n00, n10, n11), (n00, n11, n01)]
            else:
                tris += [(n00, n10, n01), (n10, n11, n01)]
    return np.array(tris, dtype=int)


def _boundary_tags(nx: int, ny: int) -> dict[str, np.ndarray]:
    nid = lambda i, j: j * (nx + 1) + i
    left = [(nid(0, j), nid(0, j + 1)) for j in range(ny)]
    right = [(nid(nx, j), nid(nx, j + 1)) for j in range(ny)]
    bottom = [(nid(i, 0), nid(i + 1, 0)) for i in range(nx)]
    top = [(nid(i, ny), nid(i + 1, ny)) for i in range(nx)]
    return {k: np.array(v, dtype=int) for k, v in
            [("left", left), ("right", right), ("bottom", bottom), ("top", top)]}


def cook_mesh(n_refine: int = 1) -> Mesh:
    """Cook membrane mesh; see module docstring for the n_refine mapping."""
    if n_refine == 2:
        nx, ny, seed = 29, 17, 200
    else:
        scale = max(1, int(n_refine))
        nx, ny, seed = 37 * scale, 12 * scale, 100

    rng = np.random.default_rng(seed)
    ii, jj = np.meshgrid(np.arange(nx + 1.0), np.arange(ny + 1.0))
    interior = (ii > 0) & (ii < nx) & (jj > 0) & (jj < ny)
    ii = ii + np.where(interior, rng.uniform(-0.25, 0.25, ii.shape), 0.0)
    jj = jj + np.where(interior, rng.uniform(-0.25, 0.25, jj.shape), 0.0)

    s, t = ii / nx, jj / ny
    x = 48.0 * s
    y_bottom = 44.0 * s
    y_top = 44.0 + 16.0 * s
    y = y_bottom + (y_top - y_bottom) * t
    nodes = np.column_stack([x.ravel(), y.ravel()])

    mesh = Mesh(nodes, _triangulate(nx, ny), _boundary_tags(nx, ny))
    mesh.validate()
    return mesh


def _power_graded(n: int, gamma: float) -> np.ndarray:
    """n+1 points on [0, 1] with spacing growing like s^(gamma-1) away from 0."""
    return (np.arange(n + 1) / n) ** gamma


def punch_mesh(n_refine: int = 1) -> Mesh:
    """Graded punch mesh on [0, 2] x [0, 1]; 3108 elements at n_refine = 1."""
    scale = max(1, int(n_refine))
    n1, n2, ny = 26 * scale, 16 * scale, 37 * scale
    gamma = 1.5

    xa = _power_graded(n1, gamma)                      # [0, 1], fine near 0
    xb = 1.0 + np.arange(1, n2 + 1) / n2               # uniform (1, 2]
    xs = np.concatenate([xa, xb])
    ys = 1.0 - _power_graded(ny, gamma)[::-1]          # [0, 1], fine near 1

    nx = n1 + n2
    xg, yg = np.meshgrid(xs, ys)
    nodes = np.column_stack([xg.ravel(), yg.ravel()])

    tags = _boundary_tags(nx, ny)
    top = tags.pop("top")
    on_left_half = np.all(nodes[top][:, :, 0] <= 1.0 + 1e-12, axis=1)
    tags["top_load"] = top[on_left_half]
    tags["top_free"] = top[~on_left_half]

    mesh = Mesh(nodes, _triangulate(nx, ny), tags)
    mesh.validate()
    return mesh


def write_mesh(path, mesh: Mesh) -> None:
    with open(path, "w") as fh:
        fh.write("# ddmech mesh v1\n")
        fh.write(f"{mesh.n_nodes}\n")
        for x, y in mesh.nodes:
            fh.write(f"{float(x)!r} {float(y)!r}\n")
        fh.write(f"{mesh.n_elements}\n")
        for a, b, c in mesh.triangles:
            fh.write(f"{a} {b} {c}\n")
        fh.write(f"{len(mesh.edge_tags)}\n")
        for tag, edges in mesh.edge_tags.items():
            fh.write(f"{tag} {len(edges)}\n")
            for a, b in edges:
                fh.write(f"{a} {b}\n")


def read_mesh(path) -> Mesh:
    try:
        with open(path) as fh:
            header = fh.readline().strip()
            if header != "# ddmech mesh v1":
                raise MalformedMesh(f"unexpected header {header!r}")
            n = int(fh.readline())
            nodes = np.array([[float(v) for v in fh.readline().split()] for _ in range(n)])
            m = int(fh.readline())
            tris = np.array(
                [[int(v) for v in fh.readline().split()] for _ in range(m)], dtype=int
            )
            tags = {}
            for _ in range(int(fh.readline())):
                name, k = fh.readline().split()
                tags[name] = np.array(
                    [[int(v) for v in fh.readline().split()] for _ in range(int(k))],
                    dtype=int,
                ).reshape(int(k), 2)
    except (ValueError, IndexError) as exc:
        raise MalformedMesh(str(exc)) from exc
    mesh = Mesh(nodes, tris, tags)
    mesh.validate()
    return mesh
