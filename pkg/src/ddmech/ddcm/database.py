"""Material databases: ordered collections of strain-stress states."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..tensors import PhasePoint, SymTensor2, rotate_sym


@dataclass(frozen=True)
class Provenance:
    source: str = ""
    law: str = ""
    noise_level: float = 0.0
    seed: int | None = None


@dataclass
class MaterialDatabase:
    """Index-addressable phase-space states, tensor components per row."""

    strain: np.ndarray                      # (n, 3)
    stress: np.ndarray                      # (n, 3)
    provenance: Provenance = field(default_factory=Provenance)

    def __post_init__(self):
        self.strain = np.asarray(self.strain, dtype=float)
        self.stress = np.asarray(self.stress, dtype=float)
        if self.strain.ndim != 2 or self.strain.shape[1] != 3:
            raise ValueError(f"strain shape {self.strain.shape}, expected (n, 3)")
        if self.stress.shape != self.strain.shape:
            raise ValueError("strain and stress shapes differ")
        if len(self) == 0:
            raise ValueError("empty database")
        if not (np.all(np.isfinite(self.strain)) and np.all(np.isfinite(self.stress))):
            raise ValueError("non-finite database entries")

    def __len__(self) -> int:
        return self.strain.shape[0]

    def point(self, i: int) -> PhasePoint:
        return PhasePoint(
            SymTensor2.from_vec(self.strain[i]), SymTensor2.from_vec(self.stress[i])
        )

    @classmethod
    def from_points(cls, points, provenance: Provenance | None = None) -> "MaterialDatabase":
        e = np.array([p.E.as_vec() for p in points])
        s = np.array([p.S.as_vec() for p in points])
        return cls(e, s, provenance or Provenance())


def enrich_isotropic(db: MaterialDatabase, n_orbits: int) -> MaterialDatabase:
    """Append rotated copies of every state over a half-open angle grid.

    Angles theta_j = -pi/2 + pi j / n_orbits, j = 0..n_orbits-1, cover the
    symmetric-tensor orbit (conjugation has period pi).  Output is grouped by
    angle with the original ordering inside each block, so indices remain
    deterministic.  Every enriched pair keeps its parent's eigenvalues.
    """
    if n_orbits < 1:
        raise ValueError("n_orbits must be >= 1")
    angles = -0.5 * np.pi + np.pi * np.arange(n_orbits) / n_orbits
    e_blocks = [rotate_sym(db.strain, t) for t in angles]
    s_blocks = [rotate_sym(db.stress, t) for t in angles]
    return MaterialDatabase(
        np.concatenate(e_blocks, axis=0), np.concatenate(s_blocks, axis=0), db.provenance
    )
