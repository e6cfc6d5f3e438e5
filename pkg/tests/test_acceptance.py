"""End-to-end acceptance gate: one test per headline claim.

Each test states its bound next to the assert and prints the measured value,
so the -v run reads as a pass/fail line per criterion.  Session fixtures in
conftest.py cache the expensive artifacts (source dataset, trained network,
FE references); the suite is deterministic under the fixed seeds.
"""

from __future__ import annotations

import time

import numpy as np
import pytest

from ddmech import data_pipeline as dp
from ddmech.bench import MatrixConfig, ScenarioConfig, run_matrix, run_scenario
from ddmech.ddcm import (
    MaterialDatabase,
    build_index,
    estimate_metric,
    lce_project,
    nearest_state,
)
from ddmech.materials import make_material
from ddmech.nn_model import NNMaterial, NetworkParams, energy_derivatives_batch, forward_batch

from helpers import fd_stress, fd_tangent, random_spd_batch


def report_line(criterion: int, text: str) -> None:
    print(f"\n[criterion {criterion:2d}] {text}")


def test_criterion_01_analytic_laws_match_finite_differences():
    rng = np.random.default_rng(11)
    states = random_spd_batch(rng, 100)
    t0 = time.perf_counter()
    worst_s = worst_d = 0.0
    for law in ("ciarlet", "hn"):
        mat = make_material(law)
        assert mat.energy_batch(np.array([1.0, 1.0, 0.0])) == 0.0
        assert np.all(mat.stress_batch(np.array([1.0, 1.0, 0.0])) == 0.0)
        for c in states:
            s_ref = fd_stress(mat.energy_batch, c)
            s, d = mat.stress_and_tangent(c[None, :])
            d_ref = fd_tangent(lambda v: mat.stress_batch(v), c)
            worst_s = max(worst_s, np.max(np.abs(s[0] - s_ref)) / np.max(np.abs(s_ref)))
            worst_d = max(worst_d, np.max(np.abs(d[0] - d_ref)) / np.max(np.abs(d_ref)))
    elapsed = time.perf_counter() - t0
    report_line(1, f"stress FD {worst_s:.2e} (<1e-6), tangent FD {worst_d:.2e} "
                   f"(<1e-5), psi(I)=S(I)=0 exact, {elapsed:.2f}s (<1s)")
    assert worst_s < 1e-6
    assert worst_d < 1e-5
    assert elapsed < 1.0


def test_criterion_02_network_structure_and_derivatives():
    rng = np.random.default_rng(23)
    t0 = time.perf_counter()
    identity_x = np.zeros((1, 3))
    for _ in range(50):
        p = NetworkParams(
            w1=rng.normal(size=(3, 8)), alpha=rng.uniform(0.05, 2.0, 8),
            w2=rng.normal(size=8),
        )
        assert forward_batch(p, identity_x)[0] == 0.0

    min_eig = np.inf
    for trial in range(10):
        p = NetworkParams(
            w1=rng.uniform(0.0, 0.6, size=(3, 8)), alpha=rng.uniform(0.1, 1.0, 8),
            w2=rng.uniform(0.0, 0.6, 8),            # convex regime: w2 >= 0
        )
        x = rng.normal(scale=0.5, size=(100, 3))
        _, d2 = energy_derivatives_batch(p, x, order=2)
        min_eig = min(min_eig, float(np.min(np.linalg.eigvalsh(d2))))

    p = NetworkParams(
        w1=rng.uniform(0.0, 0.5, size=(3, 10)), alpha=rng.uniform(0.1, 1.0, 10),
        w2=rng.uniform(0.0, 0.5, 10),
    )
    mat = NNMaterial(p)
    worst = 0.0
    for c in random_spd_batch(rng, 25):
        s_ref = fd_stress(mat.energy_batch, c)
        s = mat.stress_batch(c)
        worst = max(worst, np.max(np.abs(s - s_ref)) / np.max(np.abs(s_ref)))
    elapsed = time.perf_counter() - t0
    report_line(2, f"psi(I)=0 exact over 50 nets, Hessian min eig {min_eig:.2e} "
                   f"(>=-1e-10), stress FD {worst:.2e} (<1e-6), {elapsed:.2f}s (<10s)")
    assert min_eig >= -1e-10
    assert worst < 1e-6
    assert elapsed < 10.0


def test_criterion_03_tree_search_equals_brute_force():
    rng = np.random.default_rng(37)
    db = MaterialDatabase(
        strain=rng.normal(0.0, 0.05, size=(2000, 3)),
        stress=rng.normal(0.0, 30.0, size=(2000, 3)),
    )
    metric = estimate_metric(db)
    index = build_index(db, metric)
    qe = rng.normal(0.0, 0.05, size=(1000, 3))
    qs = rng.normal(0.0, 30.0, size=(1000, 3))
    t0 = time.perf_counter()
    idx, dist = nearest_state(index, qe, qs)
    pts = index.map_states(qe, qs)
    diff = pts[:, None, :] - index.mapped[None, :, :]
    brute = np.argmin(np.einsum("qnk,qnk->qn", diff, diff), axis=1)
    elapsed = time.perf_counter() - t0
    matches = int(np.sum(idx == brute))
    report_line(3, f"{matches}/1000 queries match brute force, {elapsed:.2f}s (<5s)")
    assert np.array_equal(idx, brute)
    assert elapsed < 5.0


def test_criterion_04_local_convex_embedding():
    rng = np.random.default_rng(41)
    db = MaterialDatabase(
        strain=rng.normal(0.0, 0.04, size=(60, 3)),
        stress=rng.normal(0.0, 25.0, size=(60, 3)),
    )
    metric = estimate_metric(db)
    index = build_index(db, metric)

    # 2-point segment: interior optimum of the penalized least squares
    two = build_index(MaterialDatabase(db.strain[:2], db.stress[:2]), metric)
    qe = 0.5 * (db.strain[0] + db.strain[1])
    qs = 0.5 * (db.stress[0] + db.stress[1])
    _, _, w, nbr = lce_project(two, qe[None, :], qs[None, :], k=2, penalty_scale=1e3)
    phi = two.mapped[nbr[0]]
    q = two.map_states(qe[None, :], qs[None, :])[0]
    rho = 1e3 * np.mean(np.sum(phi * phi, axis=1))
    closed = np.linalg.solve(
        phi @ phi.T + rho * np.ones((2, 2)), phi @ q + rho * np.ones(2)
    )
    worst_2pt = float(np.max(np.abs(w[0] - closed)))

    qe = rng.normal(0.0, 0.04, size=(40, 3))
    qs = rng.normal(0.0, 25.0, size=(40, 3))
    _, _, w_hard, _ = lce_project(index, qe, qs, k=8, penalty_scale=1e3)
    _, _, w_soft, _ = lce_project(index, qe, qs, k=8)
    hard_slack = float(np.max(np.abs(w_hard.sum(axis=1) - 1.0)))
    soft_slack = float(np.max(np.abs(w_soft.sum(axis=1) - 1.0)))
    report_line(4, f"2-point vs closed form {worst_2pt:.2e} (<1e-8), weights >= 0, "
                   f"sum slack {hard_slack:.2e} (<1e-3 at 1e3) / "
                   f"{soft_slack:.2e} (<0.15 at default)")
    assert worst_2pt < 1e-8
    assert np.all(w[0] >= 0.0) and np.all(w_hard >= 0.0) and np.all(w_soft >= 0.0)
    assert hard_slack < 1e-3
    assert soft_slack < 0.15


def test_criterion_05_source_mesh_recovery(source_file, scenario_cache):
    t0 = time.perf_counter()
    rep = run_scenario(
        ScenarioConfig(method="ddlciso", dataset=source_file, n_refine=2),
        cache=scenario_cache,
    )
    elapsed = time.perf_counter() - t0
    report_line(5, f"source-mesh ddlciso displacement error {rep.disp_error:.2e} "
                   f"(<1e-3), {elapsed:.0f}s (<120s)")
    assert rep.disp_error < 1e-3
    assert elapsed < 120.0


def test_criterion_06_modified_mesh_recovery(source_file, scenario_cache):
    t0 = time.perf_counter()
    rep = run_scenario(
        ScenarioConfig(method="ddlciso", dataset=source_file, n_refine=1),
        cache=scenario_cache,
    )
    elapsed = time.perf_counter() - t0
    report_line(6, f"modified-mesh ddlciso displacement {rep.disp_error:.2e} "
                   f"(<5e-3), stress {rep.stress_error:.2e} (<5e-2), "
                   f"{elapsed:.0f}s (<120s)")
    assert rep.disp_error < 5e-3
    assert rep.stress_error < 5e-2
    assert elapsed < 120.0


def test_criterion_07_trained_network_tip_error(
    source_file, stress_model_file, scenario_cache
):
    rep = run_scenario(
        ScenarioConfig(method="nn_stress", model=stress_model_file,
                       dataset=source_file, n_refine=1),
        cache=scenario_cache,
    )
    report_line(7, f"stress-trained network tip error {rep.tip_error:.3%} (<=1%)")
    assert rep.converged
    assert rep.tip_error <= 0.01


def test_criterion_08_punch_transfer(source_file, stress_model_file, scenario_cache):
    ddlciso = run_scenario(
        ScenarioConfig(problem="punch", method="ddlciso", dataset=source_file),
        cache=scenario_cache,
    )
    nn = run_scenario(
        ScenarioConfig(problem="punch", method="nn_stress", model=stress_model_file,
                       dataset=source_file),
        cache=scenario_cache,
    )
    flagged = {}
    for method in ("dd", "ddlc"):
        rep = run_scenario(
            ScenarioConfig(problem="punch", method=method, dataset=source_file),
            cache=scenario_cache,
        )
        flagged[method] = rep
    report_line(8, f"punch ddlciso tip {ddlciso.tip_error:.3%} (<=6%), "
                   f"nn tip {nn.tip_error:.3%} (<=5%), "
                   f"dd/ddlc flagged: "
                   + ", ".join(f"{m}={r.status} ratio {r.convergence['final_ratio']:.2f}"
                               for m, r in flagged.items()))
    assert ddlciso.tip_error <= 0.06
    assert nn.converged and nn.tip_error <= 0.05
    for rep in flagged.values():
        # the report must flag the failure: no convergence, and the residual
        # phase distance stays a large fraction of the initial one
        assert not rep.converged
        assert rep.convergence["final_ratio"] > 0.5


def test_criterion_09_noise_and_size_trends(source_file, acceptance_dir):
    t0 = time.perf_counter()
    rows = run_matrix(MatrixConfig(
        dataset=source_file, run_dir=str(acceptance_dir / "matrix"),
        methods=("dd", "nn_stress"), seed=0,
    ))
    elapsed = time.perf_counter() - t0

    dd = {
        (float(r["noise_level"]), int(r["size"])): float(r["disp_error"])
        for r in rows if r["method"] == "dd"
    }
    sizes = sorted({s for _, s in dd})
    noises = sorted({n for n, _ in dd})
    assert len(sizes) == 4 and len(noises) == 4
    worst_step = 0.0
    for noise in noises:
        errs = [dd[(noise, s)] for s in sizes]
        for a, b in zip(errs, errs[1:]):
            worst_step = max(worst_step, b / a)
    nn_cell = next(
        float(r["disp_error"]) for r in rows
        if r["method"] == "nn_stress" and int(r["size"]) == 100
        and float(r["noise_level"]) == 0.10
    )
    dd_cell = dd[(0.10, 100)]
    report_line(9, f"dd error growth per size step <= {worst_step:.3f} (<1.2); "
                   f"at 10% noise, 100 samples: nn {nn_cell:.4f} < dd {dd_cell:.4f}; "
                   f"{elapsed:.0f}s (<3600s)")
    assert worst_step < 1.2
    assert nn_cell < dd_cell
    assert elapsed < 3600.0


def test_criterion_10_timing_ordinality(
    source_file, stress_model_file, scenario_cache
):
    from ddmech import load_model
    from ddmech.fem import FESolveConfig, newton_solve
    from ddmech.materials import Ciarlet
    from ddmech.problems import problem

    # fe and nn run within a few percent of each other, so time those two
    # as the median of three solves; the dd variants sit far above either
    # and a single scenario solve is decisive
    mesh, bcs = problem("cook", n_refine=1)
    solve_config = FESolveConfig(n_steps=4)

    def median_solve_time(material) -> float:
        times = []
        for _ in range(3):
            t0 = time.perf_counter()
            newton_solve(mesh, material, bcs, solve_config)
            times.append(time.perf_counter() - t0)
        return float(np.median(times))

    elapsed = {
        "fe": median_solve_time(Ciarlet()),
        "nn_stress": median_solve_time(NNMaterial(load_model(stress_model_file))),
    }
    for method in ("ddlc", "ddlciso"):
        rep = run_scenario(
            ScenarioConfig(method=method, dataset=source_file, n_refine=1),
            cache=scenario_cache,
        )
        elapsed[method] = rep.elapsed
    order = ("fe", "nn_stress", "ddlc", "ddlciso")
    report_line(10, "wall-clock ratios " + " < ".join(
        f"{m}={elapsed[m] / elapsed['fe']:.2f}" for m in order))
    assert elapsed["fe"] < elapsed["nn_stress"] < elapsed["ddlc"] < elapsed["ddlciso"]
