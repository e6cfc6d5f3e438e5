"""Command-line front end for datasets, training, solves, and the matrix.

Subcommands mirror the library operations one to one; every run writes its
outputs under --out or --run-dir and prints the content hashes, so shell
pipelines can chain steps reproducibly.  Exit status: 0 on success, 1 when a
requested solve fails to converge, 2 on bad inputs.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from ..data_pipeline import (
    MalformedFile,
    SubsampleTooLarge,
    add_noise,
    generate_source,
    read_dataset,
    save_model,
    subsample,
    write_dataset,
)
from ..nn_training import AllRestartsDiverged, LabeledSamples, TrainingConfig, train
from .errors import KeyMismatch, compare
from .matrix import MatrixConfig, run_matrix
from .scenarios import METHODS, ScenarioConfig, load_report, restart_statistics, run_scenario


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ddmech", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate-data", help="sample a source dataset from a bending solve")
    g.add_argument("--law", default="ciarlet")
    g.add_argument("--n-refine", type=int, default=2)
    g.add_argument("--n-steps", type=int, default=4)
    g.add_argument("--traction", type=float, default=None)
    g.add_argument("--out", required=True)

    n = sub.add_parser("add-noise", help="perturb stresses multiplicatively")
    n.add_argument("--input", required=True)
    n.add_argument("--level", type=float, required=True)
    n.add_argument("--seed", type=int, required=True)
    n.add_argument("--out", required=True)

    s = sub.add_parser("subsample", help="draw a smaller dataset without replacement")
    s.add_argument("--input", required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--seed", type=int, required=True)
    s.add_argument("--out", required=True)

    t = sub.add_parser("train-nn", help="fit the invariant network to a dataset")
    t.add_argument("--dataset", required=True)
    t.add_argument("--loss", choices=("energy", "stress"), default="stress")
    t.add_argument("--n-hidden", type=int, default=10)
    t.add_argument("--restarts", type=int, default=10)
    t.add_argument("--max-epochs", type=int, default=TrainingConfig.max_epochs)
    t.add_argument("--seed", type=int, default=0)
    t.add_argument("--out", required=True)

    v = sub.add_parser("solve", help="run one scenario and report errors vs the FE reference")
    v.add_argument("--problem", choices=("cook", "punch"), default="cook")
    v.add_argument("--law", choices=("ciarlet", "hn", "hartmann-neff"), default="ciarlet")
    v.add_argument("--method", choices=METHODS, default="fe")
    v.add_argument("--dataset", default=None)
    v.add_argument("--model", default=None)
    v.add_argument("--noise-level", type=float, default=0.0)
    v.add_argument("--n-refine", type=int, default=1)
    v.add_argument("--load", type=float, default=None)
    v.add_argument("--n-steps", type=int, default=None)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--n-hidden", type=int, default=10)
    v.add_argument("--restarts", type=int, default=10)
    v.add_argument("--max-epochs", type=int, default=TrainingConfig.max_epochs)
    v.add_argument("--all-restarts", action="store_true",
                   help="report tip-error spread over independently trained restarts")
    v.add_argument("--run-dir", default=None)

    m = sub.add_parser("run-matrix", help="sweep dataset sizes and noise levels")
    m.add_argument("--dataset", required=True)
    m.add_argument("--run-dir", required=True)
    m.add_argument("--problem", choices=("cook", "punch"), default="cook")
    m.add_argument("--law", choices=("ciarlet", "hn", "hartmann-neff"), default="ciarlet")
    m.add_argument("--methods", default="dd,nn_stress")
    m.add_argument("--sizes", default="100,500,1000,2000")
    m.add_argument("--noise", default="0,0.01,0.05,0.10")
    m.add_argument("--n-refine", type=int, default=1)
    m.add_argument("--load", type=float, default=None)
    m.add_argument("--n-steps", type=int, default=None)
    m.add_argument("--seed", type=int, default=0)
    m.add_argument("--n-hidden", type=int, default=10)
    m.add_argument("--restarts", type=int, default=10)
    m.add_argument("--max-epochs", type=int, default=20_000)

    c = sub.add_parser("compare", help="difference two scenario reports, DD minus NN")
    c.add_argument("--dd", required=True, help="report.json of the DD run")
    c.add_argument("--nn", required=True, help="report.json of the NN run")

    return p


def cmd_generate_data(args) -> int:
    d = generate_source(law=args.law, n_refine=args.n_refine,
                        n_steps=args.n_steps, traction=args.traction)
    h = write_dataset(d, args.out)
    print(f"wrote {len(d)} rows to {args.out} (hash {h})")
    return 0


def cmd_add_noise(args) -> int:
    d = add_noise(read_dataset(args.input), args.level, args.seed)
    h = write_dataset(d, args.out)
    print(f"wrote {len(d)} rows to {args.out} (hash {h})")
    return 0


def cmd_subsample(args) -> int:
    d = subsample(read_dataset(args.input), args.n, args.seed)
    h = write_dataset(d, args.out)
    print(f"wrote {len(d)} rows to {args.out} (hash {h})")
    return 0


def cmd_train_nn(args) -> int:
    d = read_dataset(args.dataset)
    samples = LabeledSamples.from_strain_stress(d.strain, stress=d.stress, energy=d.energy)
    cfg = TrainingConfig(
        loss=args.loss, n_hidden=args.n_hidden, restarts=args.restarts,
        max_epochs=args.max_epochs, seed=args.seed,
    )
    params, report = train(samples, cfg)
    h = save_model(params, args.out)
    best = report.restarts[report.selected]
    print(f"wrote model to {args.out} (hash {h})")
    print(f"selected restart {report.selected}: val loss {best.best_val_loss:.6e} "
          f"at epoch {best.best_epoch}")
    return 0


def _print_report(rep) -> None:
    print(f"scenario: {rep.problem} / {rep.law} / {rep.method}")
    print(f"status: {rep.status}")
    print(f"displacement error: {rep.disp_error:.6e}")
    print(f"strain error:       {rep.strain_error:.6e}")
    print(f"stress error:       {rep.stress_error:.6e}")
    print(f"tip displacement:   ({rep.tip[0]:.6f}, {rep.tip[1]:.6f}) "
          f"ref ({rep.tip_ref[0]:.6f}, {rep.tip_ref[1]:.6f}) "
          f"rel error {rep.tip_error:.4%}")
    print(f"time ratio vs fe:   {rep.time_ratio:.2f}")


def cmd_solve(args) -> int:
    law = "hn" if args.law == "hartmann-neff" else args.law
    cfg = ScenarioConfig(
        problem=args.problem, law=law, method=args.method,
        dataset=args.dataset, model=args.model, noise_level=args.noise_level,
        n_refine=args.n_refine, load=args.load, n_steps=args.n_steps,
        seed=args.seed, n_hidden=args.n_hidden, restarts=args.restarts,
        max_epochs=args.max_epochs,
    )
    if args.all_restarts:
        stats = restart_statistics(cfg, run_dir=args.run_dir)
        print(f"{stats['n_converged']} of {cfg.restarts} restarts converged")
        print(f"tip error over restarts: {stats['tip_error_mean']:.4%} "
              f"+/- {stats['tip_error_std']:.4%}")
        return 0 if stats["n_converged"] else 1
    rep = run_scenario(cfg, run_dir=args.run_dir)
    _print_report(rep)
    # stagnation still yields a full report; only a failed solve is a hard error
    return 1 if rep.status.startswith("diverged") else 0


def cmd_run_matrix(args) -> int:
    law = "hn" if args.law == "hartmann-neff" else args.law
    mcfg = MatrixConfig(
        dataset=args.dataset, run_dir=args.run_dir, problem=args.problem,
        law=law,
        methods=tuple(args.methods.split(",")),
        sizes=tuple(int(v) for v in args.sizes.split(",")),
        noise_levels=tuple(float(v) for v in args.noise.split(",")),
        n_refine=args.n_refine, load=args.load, n_steps=args.n_steps,
        seed=args.seed, n_hidden=args.n_hidden, restarts=args.restarts,
        max_epochs=args.max_epochs,
    )
    rows = run_matrix(mcfg)
    bad = [r for r in rows if r["converged"] != "True"]
    print(f"{len(rows)} cells in {os.path.join(args.run_dir, 'master.csv')}; "
          f"{len(bad)} flagged")
    for r in bad:
        print(f"  {r['method']} size {r['size']} noise {r['noise_level']}: {r['status']}")
    return 0


def cmd_compare(args) -> int:
    rows = compare(load_report(args.dd), load_report(args.nn))
    print("field,dd,nn,difference,relative")
    for r in rows:
        print(f"{r['field']},{r['dd']!r},{r['nn']!r},{r['difference']!r},{r['relative']!r}")
    return 0


HANDLERS = {
    "generate-data": cmd_generate_data,
    "add-noise": cmd_add_noise,
    "subsample": cmd_subsample,
    "train-nn": cmd_train_nn,
    "solve": cmd_solve,
    "run-matrix": cmd_run_matrix,
    "compare": cmd_compare,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return HANDLERS[args.command](args)
    except (MalformedFile, SubsampleTooLarge, KeyMismatch, AllRestartsDiverged,
            FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
