"""Batch driver over the dataset-size x noise-level x method grid.

Every cell derives its noise, subsample, and training seeds from the master
seed and its grid position, so a rerun reproduces the master CSV byte for
byte.  Timing is recorded only in the per-cell report files; the master CSV
keeps deterministic columns so resumed and fresh runs agree.  An existing
master CSV is treated as a checkpoint: finished cells are kept verbatim.
"""

from __future__ import annotations

import csv
import dataclasses
import io
import json
import os

import numpy as np

from ..data_pipeline import NOISE_LEVELS, SUBSET_SIZES, add_noise, read_dataset, subsample, write_dataset
from .scenarios import ScenarioConfig, run_scenario

MASTER_COLUMNS = (
    "problem", "law", "method", "size", "noise_level", "dataset_hash",
    "status", "converged", "disp_error", "strain_error", "stress_error",
    "tip_error",
)


@dataclasses.dataclass
class MatrixConfig:
    dataset: str                        # full noiseless source dataset file
    run_dir: str
    problem: str = "cook"
    law: str = "ciarlet"
    methods: tuple[str, ...] = ("dd", "nn_stress")
    sizes: tuple[int, ...] = SUBSET_SIZES
    noise_levels: tuple[float, ...] = NOISE_LEVELS
    n_refine: int = 1
    load: float | None = None
    n_steps: int | None = None
    seed: int = 0
    n_hidden: int = 10
    restarts: int = 10
    max_epochs: int = 20_000    # reduced budget: the sweep trains one net per cell


def _cell_seeds(master_seed: int, spawn_key: tuple[int, ...], n: int) -> list[int]:
    ss = np.random.SeedSequence(entropy=master_seed, spawn_key=spawn_key)
    return [int(v) for v in ss.generate_state(n)]


def _row_line(report, size: int) -> str:
    buf = io.StringIO()
    csv.writer(buf, lineterminator="").writerow([
        report.problem, report.law, report.method, size,
        repr(float(report.noise_level)), report.dataset_hash,
        report.status.replace(",", ";"), report.converged,
        repr(report.disp_error), repr(report.strain_error),
        repr(report.stress_error), repr(report.tip_error),
    ])
    return buf.getvalue()


def _read_checkpoint(path: str) -> dict[tuple, str]:
    done = {}
    if not os.path.exists(path):
        return done
    with open(path) as f:
        lines = f.read().splitlines()
    for line in lines[1:]:
        rec = next(csv.reader([line]))
        done[(rec[2], int(rec[3]), float(rec[4]))] = line
    return done


def run_matrix(mcfg: MatrixConfig) -> list[dict]:
    """Run (or resume) the grid; returns the master rows as dicts."""
    os.makedirs(mcfg.run_dir, exist_ok=True)
    ds_dir = os.path.join(mcfg.run_dir, "datasets")
    os.makedirs(ds_dir, exist_ok=True)
    master_path = os.path.join(mcfg.run_dir, "master.csv")
    done = _read_checkpoint(master_path)

    source = read_dataset(mcfg.dataset)
    cache: dict = {}
    lines: list[str] = []
    cells: list[dict] = []

    for ni, noise in enumerate(mcfg.noise_levels):
        noise_seed = _cell_seeds(mcfg.seed, (ni,), 1)[0]
        noisy = add_noise(source, noise, noise_seed)
        for si, size in enumerate(mcfg.sizes):
            sub_seed = _cell_seeds(mcfg.seed, (ni, si), 1)[0]
            sub = subsample(noisy, size, sub_seed)
            ds_path = os.path.join(ds_dir, f"noise{ni}_size{size}.csv")
            ds_hash = write_dataset(sub, ds_path)
            for mi, method in enumerate(mcfg.methods):
                key = (method, size, float(noise))
                train_seed = _cell_seeds(mcfg.seed, (ni, si, 100 + mi), 1)[0]
                cell_dir = os.path.join(
                    mcfg.run_dir, "cells", f"{method}_size{size}_noise{ni}"
                )
                if key in done:
                    lines.append(done[key])
                else:
                    cfg = ScenarioConfig(
                        problem=mcfg.problem, law=mcfg.law, method=method,
                        dataset=ds_path, noise_level=noise,
                        n_refine=mcfg.n_refine, load=mcfg.load,
                        n_steps=mcfg.n_steps, seed=train_seed,
                        n_hidden=mcfg.n_hidden, restarts=mcfg.restarts,
                        max_epochs=mcfg.max_epochs,
                    )
                    report = run_scenario(cfg, run_dir=cell_dir, cache=cache)
                    lines.append(_row_line(report, size))
                cells.append({
                    "method": method, "size": size, "noise_level": noise,
                    "dataset": os.path.relpath(ds_path, mcfg.run_dir),
                    "dataset_hash": ds_hash,
                    "seeds": {
                        "noise": noise_seed, "subsample": sub_seed,
                        "training": train_seed,
                    },
                    "cell_dir": os.path.relpath(cell_dir, mcfg.run_dir),
                })

    text = ",".join(MASTER_COLUMNS) + "\n" + "\n".join(lines) + "\n"
    with open(master_path, "w") as f:
        f.write(text)
    manifest = {
        "config": dataclasses.asdict(mcfg),
        "source_hash": source.content_hash(),
        "cells": cells,
    }
    with open(os.path.join(mcfg.run_dir, "manifest.json"), "w") as f:
        json.dump(manifest, f, indent=1)

    return [dict(zip(MASTER_COLUMNS, rec)) for rec in csv.reader(lines)]
