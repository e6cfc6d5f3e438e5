"""Dataset files, noise injection, subsampling, and model parameter I/O.

Datasets are plain CSV with a comment-prefixed header block recording how the
file was produced (law, parameters, noise, seed, parent hash).  Rows carry
strain and stress tensor components plus an optional energy column.  Floats
are written with repr so read(write(d)) is bitwise lossless.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, replace

import numpy as np

from .ddcm.database import MaterialDatabase, Provenance
from .fem.solve import FESolveConfig, newton_solve, sample_centers
from .materials import make_material
from .nn_model import NetworkParams
from .problems import problem

DATASET_MAGIC = "# ddmech dataset v1"
MODEL_MAGIC = "# ddmech model v1"

NOISE_LEVELS = (0.0, 0.01, 0.05, 0.10)
SUBSET_SIZES = (100, 500, 1000, 2000)


class MalformedFile(Exception):
    """Raised on parse or validation failures, with line diagnostics."""


class SubsampleTooLarge(Exception):
    pass


@dataclass
class DatasetFile:
    strain: np.ndarray                  # (n, 3) tensor components
    stress: np.ndarray                  # (n, 3)
    energy: np.ndarray | None = None    # (n,) clean labels, pre-noise
    law: str = ""
    params: str = ""
    noise_level: float = 0.0
    seed: int | None = None
    parent: str = "none"                # content hash of the source file

    def __post_init__(self):
        self.strain = np.asarray(self.strain, dtype=float)
        self.stress = np.asarray(self.stress, dtype=float)
        if self.strain.ndim != 2 or self.strain.shape[1] != 3:
            raise ValueError(f"strain shape {self.strain.shape}, expected (n, 3)")
        if self.stress.shape != self.strain.shape:
            raise ValueError("strain and stress shapes differ")
        if self.energy is not None:
            self.energy = np.asarray(self.energy, dtype=float)
            if self.energy.shape != (self.strain.shape[0],):
                raise ValueError("energy column length mismatch")
        cols = [self.strain, self.stress] + ([self.energy] if self.energy is not None else [])
        if not all(np.all(np.isfinite(c)) for c in cols):
            raise ValueError("non-finite dataset values")

    def __len__(self) -> int:
        return self.strain.shape[0]

    def content_hash(self) -> str:
        return hashlib.sha256(serialize_dataset(self).encode()).hexdigest()[:12]

    def to_database(self) -> MaterialDatabase:
        prov = Provenance(
            source=f"{self.law}:{self.parent}",
            law=self.law,
            noise_level=self.noise_level,
            seed=self.seed,
        )
        return MaterialDatabase(self.strain.copy(), self.stress.copy(), prov)


def serialize_dataset(d: DatasetFile) -> str:
    cols = "E11,E22,E12,S11,S22,S12" + (",psi" if d.energy is not None else "")
    lines = [
        DATASET_MAGIC,
        f"# law: {d.law}",
        f"# params: {d.params}",
        f"# noise_level: {float(d.noise_level)!r}",
        f"# seed: {'none' if d.seed is None else d.seed}",
        f"# parent: {d.parent}",
        f"# rows: {len(d)}",
        f"# columns: {cols}",
    ]
    for i in range(len(d)):
        vals = list(d.strain[i]) + list(d.stress[i])
        if d.energy is not None:
            vals.append(d.energy[i])
        lines.append(",".join(f"{float(v)!r}" for v in vals))
    return "\n".join(lines) + "\n"


def write_dataset(d: DatasetFile, path) -> str:
    text = serialize_dataset(d)
    with open(path, "w") as f:
        f.write(text)
    return hashlib.sha256(text.encode()).hexdigest()[:12]


def _header_value(lines, key, path):
    prefix = f"# {key}: "
    for ln in lines:
        if ln.startswith(prefix):
            return ln[len(prefix) :]
    raise MalformedFile(f"{path}: missing header line '{prefix.rstrip()}'")


def read_dataset(path) -> DatasetFile:
    with open(path) as f:
        lines = f.read().splitlines()
    if not lines or lines[0] != DATASET_MAGIC:
        raise MalformedFile(f"{path}: line 1: expected '{DATASET_MAGIC}'")
    header = [ln for ln in lines if ln.startswith("#")]
    data = [(i + 1, ln) for i, ln in enumerate(lines) if ln and not ln.startswith("#")]
    law = _header_value(header, "law", path)
    params = _header_value(header, "params", path)
    try:
        noise = float(_header_value(header, "noise_level", path))
        n_rows = int(_header_value(header, "rows", path))
    except ValueError as exc:
        raise MalformedFile(f"{path}: bad header value: {exc}") from exc
    seed_text = _header_value(header, "seed", path)
    seed = None if seed_text == "none" else int(seed_text)
    parent = _header_value(header, "parent", path)
    columns = _header_value(header, "columns", path).split(",")
    if columns not in (
        ["E11", "E22", "E12", "S11", "S22", "S12"],
        ["E11", "E22", "E12", "S11", "S22", "S12", "psi"],
    ):
        raise MalformedFile(f"{path}: unsupported column layout {columns}")
    if len(data) != n_rows:
        raise MalformedFile(f"{path}: header says {n_rows} rows, found {len(data)}")
    width = len(columns)
    values = np.empty((n_rows, width))
    for r, (lineno, ln) in enumerate(data):
        parts = ln.split(",")
        if len(parts) != width:
            raise MalformedFile(f"{path}: line {lineno}: expected {width} fields, got {len(parts)}")
        try:
            values[r] = [float(p) for p in parts]
        except ValueError as exc:
            raise MalformedFile(f"{path}: line {lineno}: {exc}") from exc
    energy = values[:, 6] if width == 7 else None
    try:
        return DatasetFile(
            values[:, :3], values[:, 3:6], energy,
            law=law, params=params, noise_level=noise, seed=seed, parent=parent,
        )
    except ValueError as exc:
        raise MalformedFile(f"{path}: {exc}") from exc


def generate_source(
    law: str = "ciarlet",
    n_refine: int = 2,
    n_steps: int = 4,
    traction: float | None = None,
) -> DatasetFile:
    """Sample element-center states from an incremental bending solve.

    The deformation history is always produced with the baseline law; other
    laws relabel the same strains with their own stresses and energies, so
    variant datasets share E columns exactly.
    """
    mesh, bcs = problem("cook", n_refine=n_refine, load=traction)
    base = make_material("ciarlet")
    sol = newton_solve(mesh, base, bcs, FESolveConfig(n_steps=n_steps))
    mat = make_material(law)
    e, s, psi = sample_centers(sol, mat)
    return DatasetFile(e, s, psi, law=mat.name, params=mat.describe_params())


def add_noise(d: DatasetFile, level: float, seed: int) -> DatasetFile:
    """Multiply each stress component by (1 + level xi), xi standard normal.

    Strains and energy labels stay exact; level 0 is an identical copy.
    """
    if level < 0.0:
        raise ValueError("noise level must be non-negative")
    parent = d.content_hash()
    if level == 0.0:
        return replace(
            d, strain=d.strain.copy(), stress=d.stress.copy(),
            energy=None if d.energy is None else d.energy.copy(),
            noise_level=0.0, seed=seed, parent=parent,
        )
    rng = np.random.default_rng(seed)
    factors = 1.0 + level * rng.standard_normal(d.stress.shape)
    return replace(
        d, strain=d.strain.copy(), stress=d.stress * factors,
        energy=None if d.energy is None else d.energy.copy(),
        noise_level=level, seed=seed, parent=parent,
    )


def subsample(d: DatasetFile, n: int, seed: int) -> DatasetFile:
    """Uniform subset without replacement, deterministic by seed."""
    if n > len(d):
        raise SubsampleTooLarge(f"requested {n} of {len(d)} rows")
    rng = np.random.default_rng(seed)
    idx = rng.choice(len(d), size=n, replace=False)
    return replace(
        d, strain=d.strain[idx], stress=d.stress[idx],
        energy=None if d.energy is None else d.energy[idx],
        seed=seed, parent=d.content_hash(),
    )


def save_model(params: NetworkParams, path) -> str:
    n_h = params.w1.shape[1]
    lines = [MODEL_MAGIC, f"# n_hidden: {n_h}"]
    for row in params.w1:
        lines.append(",".join(f"{float(v)!r}" for v in row))
    lines.append(",".join(f"{float(v)!r}" for v in params.alpha))
    lines.append(",".join(f"{float(v)!r}" for v in params.w2))
    text = "\n".join(lines) + "\n"
    with open(path, "w") as f:
        f.write(text)
    return hashlib.sha256(text.encode()).hexdigest()[:12]


def load_model(path) -> NetworkParams:
    with open(path) as f:
        lines = [ln for ln in f.read().splitlines() if ln]
    if not lines or lines[0] != MODEL_MAGIC:
        raise MalformedFile(f"{path}: line 1: expected '{MODEL_MAGIC}'")
    if len(lines) < 2 or not lines[1].startswith("# n_hidden: "):
        raise MalformedFile(f"{path}: line 2: expected '# n_hidden: <count>'")
    try:
        n_h = int(lines[1].split(": ")[1])
    except ValueError as exc:
        raise MalformedFile(f"{path}: line 2: {exc}") from exc
    rows = lines[2:]
    if len(rows) != 5:
        raise MalformedFile(f"{path}: expected 5 data rows, found {len(rows)}")
    parsed = []
    for i, ln in enumerate(rows):
        parts = ln.split(",")
        if len(parts) != n_h:
            raise MalformedFile(f"{path}: line {i + 3}: expected {n_h} fields")
        try:
            parsed.append([float(p) for p in parts])
        except ValueError as exc:
            raise MalformedFile(f"{path}: line {i + 3}: {exc}") from exc
    try:
        return NetworkParams(
            np.array(parsed[:3]), np.array(parsed[3]), np.array(parsed[4])
        )
    except ValueError as exc:
        raise MalformedFile(f"{path}: {exc}") from exc
