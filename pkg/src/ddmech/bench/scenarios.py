"""Single-scenario runner: solve with one method, report errors vs the FE
reference on the same mesh.

The reference is always a Newton solve with the scenario's analytic law.
Non-convergence of the requested method is recorded in the report status
instead of raised, so batch drivers keep going; genuinely invalid configs
(missing dataset, unknown method) raise immediately.
"""

from __future__ import annotations

import dataclasses
import hashlib
import json
import math
import os
import time
from dataclasses import dataclass, field

import numpy as np

from ..data_pipeline import load_model, read_dataset
from ..ddcm import DDConfig, InnerSolverFailure, dd_solve
from ..fem.solve import FESolveConfig, NewtonDivergence, newton_solve, sample_centers
from ..materials import make_material
from ..nn_model import NNMaterial
from ..nn_training import AllRestartsDiverged, LabeledSamples, TrainingConfig, train
from ..problems import COOK_TRACTION, PUNCH_LOAD, problem, tip_point
from .errors import ErrorReport, mandel_rows, nodal_weights, relative_l2

METHODS = ("fe", "nn_energy", "nn_stress", "dd", "ddiso", "ddlc", "ddlciso")
REFERENCE_STEPS = {"cook": 4, "punch": 10}
DD_STEPS = {"cook": 4, "punch": 5}


@dataclass
class ScenarioConfig:
    problem: str = "cook"
    law: str = "ciarlet"
    method: str = "fe"
    dataset: str | None = None      # dataset file, required for nn_*/dd*
    model: str | None = None        # pretrained model file for nn_* methods
    noise_level: float = 0.0        # provenance echo, the data carry the noise
    n_refine: int = 1
    load: float | None = None
    n_steps: int | None = None      # method load steps; problem default if None
    seed: int = 0                   # training seed
    n_hidden: int = 10
    restarts: int = 10
    max_epochs: int = TrainingConfig.max_epochs
    dd_config: DDConfig | None = None

    def __post_init__(self):
        if self.problem not in REFERENCE_STEPS:
            raise ValueError(f"unknown problem {self.problem!r}")
        if self.method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}")
        if self.method != "fe" and self.dataset is None and self.model is None:
            raise ValueError(f"method {self.method!r} requires a dataset")
        if self.method.startswith("dd") and self.dataset is None:
            raise ValueError(f"method {self.method!r} requires a dataset")

    def method_steps(self) -> int:
        if self.n_steps is not None:
            return self.n_steps
        table = DD_STEPS if self.method.startswith("dd") else REFERENCE_STEPS
        return table[self.problem]


@dataclass
class ReferenceBundle:
    u: np.ndarray
    strain: np.ndarray
    stress: np.ndarray
    elapsed: float
    hash: str


def field_text(rows: np.ndarray) -> str:
    rows = np.atleast_2d(np.asarray(rows, dtype=float))
    return "\n".join(",".join(f"{float(v)!r}" for v in row) for row in rows) + "\n"


def field_hash(rows: np.ndarray) -> str:
    return hashlib.sha256(field_text(rows).encode()).hexdigest()[:12]


def reference_solution(cfg: ScenarioConfig, cache: dict | None = None) -> ReferenceBundle:
    key = ("ref", cfg.problem, cfg.law, cfg.n_refine, cfg.load)
    if cache is not None and key in cache:
        return cache[key]
    mesh, bcs = problem(cfg.problem, cfg.n_refine, cfg.load)
    mat = make_material(cfg.law)
    sol = newton_solve(mesh, mat, bcs, FESolveConfig(n_steps=REFERENCE_STEPS[cfg.problem]))
    ref = ReferenceBundle(
        u=sol.u.reshape(-1, 2),
        strain=sol.strain,
        stress=sol.stress,
        elapsed=sol.elapsed,
        hash=field_hash(sol.u.reshape(-1, 2)),
    )
    if cache is not None:
        cache[key] = ref
    return ref


def tip_node(mesh, problem_name: str) -> int:
    target = np.asarray(tip_point(problem_name))
    dist = np.linalg.norm(mesh.nodes - target, axis=1)
    node = int(np.argmin(dist))
    if dist[node] > 1e-9:
        raise ValueError(f"no mesh node at monitored corner {tuple(target)}")
    return node


def _trained_params(cfg: ScenarioConfig):
    if cfg.model is not None:
        return load_model(cfg.model), {}
    d = read_dataset(cfg.dataset)
    samples = LabeledSamples.from_strain_stress(d.strain, stress=d.stress, energy=d.energy)
    tcfg = TrainingConfig(
        loss=cfg.method.removeprefix("nn_"),
        n_hidden=cfg.n_hidden,
        max_epochs=cfg.max_epochs,
        restarts=cfg.restarts,
        seed=cfg.seed,
    )
    params, report = train(samples, tcfg)
    meta = {
        "best_val_loss": report.restarts[report.selected].best_val_loss,
        "selected_restart": report.selected,
    }
    return params, meta


def run_scenario(
    cfg: ScenarioConfig,
    run_dir: str | None = None,
    cache: dict | None = None,
) -> ErrorReport:
    mesh, bcs = problem(cfg.problem, cfg.n_refine, cfg.load)
    ref = reference_solution(cfg, cache)
    n_steps = cfg.method_steps()

    dataset_hash = "none"
    if cfg.dataset is not None:
        d = read_dataset(cfg.dataset)
        dataset_hash = d.content_hash()

    default_load = COOK_TRACTION if cfg.problem == "cook" else PUNCH_LOAD
    report = ErrorReport(
        problem=cfg.problem, law=cfg.law, method=cfg.method,
        dataset_hash=dataset_hash, noise_level=cfg.noise_level,
        n_refine=cfg.n_refine,
        load=default_load if cfg.load is None else cfg.load,
        n_steps=n_steps, ref_elapsed=ref.elapsed, reference_hash=ref.hash,
    )

    u = e = s = None
    try:
        if cfg.method == "fe":
            u, e, s = ref.u, ref.strain, ref.stress
            report.elapsed = ref.elapsed
            report.convergence = {"scheme": "newton"}
        elif cfg.method.startswith("nn_"):
            params, meta = _trained_params(cfg)
            mat = NNMaterial(params)
            sol = newton_solve(mesh, mat, bcs, FESolveConfig(n_steps=n_steps))
            u, e, s = sol.u.reshape(-1, 2), sol.strain, sol.stress
            report.elapsed = sol.elapsed
            report.convergence = {"scheme": "newton", **meta}
        else:
            db = d.to_database()
            base = cfg.dd_config or DDConfig()
            ddcfg = dataclasses.replace(base, variant=cfg.method, n_steps=n_steps)
            t0 = time.perf_counter()
            sol = dd_solve(mesh, db, bcs, ddcfg)
            elapsed = time.perf_counter() - t0
            u, e, s = sol.u.reshape(-1, 2), sol.strain, sol.stress
            report.elapsed = elapsed
            report.status = sol.log.status
            report.converged = sol.converged
            report.convergence = {
                "scheme": "dd",
                "outer_iterations": len(sol.log.rows),
                "final_ratio": sol.log.rows[-1].ratio if sol.log.rows else math.nan,
                "n_states": sol.n_states,
            }
    except (NewtonDivergence, InnerSolverFailure, AllRestartsDiverged) as exc:
        report.status = f"diverged: {exc}"
        report.converged = False

    if u is not None:
        report.time_ratio = report.elapsed / ref.elapsed
        report.disp_error = relative_l2(u, ref.u, nodal_weights(mesh))
        areas = mesh.areas()
        report.strain_error = relative_l2(
            mandel_rows(e), mandel_rows(ref.strain), areas
        )
        report.stress_error = relative_l2(
            mandel_rows(s), mandel_rows(ref.stress), areas
        )
        node = tip_node(mesh, cfg.problem)
        report.tip = (float(u[node, 0]), float(u[node, 1]))
        report.tip_ref = (float(ref.u[node, 0]), float(ref.u[node, 1]))
        tip_ref_norm = math.hypot(*report.tip_ref)
        report.tip_error = (
            math.hypot(report.tip[0] - report.tip_ref[0], report.tip[1] - report.tip_ref[1])
            / tip_ref_norm
        )
        report.solution_hash = field_hash(u)

    if run_dir is not None:
        dump_scenario(report, u, e, s, run_dir)
    return report


def dump_scenario(report: ErrorReport, u, e, s, run_dir: str) -> None:
    os.makedirs(run_dir, exist_ok=True)
    if u is not None:
        for name, rows in (("u", u), ("strain", e), ("stress", s)):
            with open(os.path.join(run_dir, f"{name}.csv"), "w") as f:
                f.write(field_text(rows))
    with open(os.path.join(run_dir, "report.json"), "w") as f:
        json.dump(dataclasses.asdict(report), f, indent=1)


def load_report(path: str) -> ErrorReport:
    with open(path) as f:
        data = json.load(f)
    data["tip"] = tuple(data["tip"])
    data["tip_ref"] = tuple(data["tip_ref"])
    return ErrorReport(**data)


def restart_statistics(
    cfg: ScenarioConfig,
    cache: dict | None = None,
    run_dir: str | None = None,
) -> dict:
    """Tip-error spread over restarts: each restart trained and solved alone.

    Mirrors 'mean plus/minus std over restarts' reporting; the scenario's
    seed spawns one child seed per restart.
    """
    if not cfg.method.startswith("nn_"):
        raise ValueError("restart statistics only apply to nn methods")
    children = np.random.SeedSequence(cfg.seed).spawn(cfg.restarts)
    reports, errors = [], []
    for i, child in enumerate(children):
        one = dataclasses.replace(
            cfg, restarts=1, seed=int(child.generate_state(1)[0]), model=None
        )
        sub_dir = None if run_dir is None else os.path.join(run_dir, f"restart{i}")
        rep = run_scenario(one, run_dir=sub_dir, cache=cache)
        reports.append(rep)
        if rep.converged:
            errors.append(rep.tip_error)
    return {
        "reports": reports,
        "n_converged": len(errors),
        "tip_error_mean": float(np.mean(errors)) if errors else math.nan,
        "tip_error_std": float(np.std(errors)) if errors else math.nan,
    }
