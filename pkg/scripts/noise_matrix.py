"""Dataset-size x noise-level sweep with error trends per method.

Runs (or resumes) the benchmark matrix and prints displacement error against
dataset size for every noise level, the raw material for the usual bar
charts.  The master CSV under the run directory has one row per cell.
"""

from __future__ import annotations

import argparse
import os

from ddmech import data_pipeline as dp
from ddmech.bench import MatrixConfig, run_matrix


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--methods", default="dd,nn_stress")
    ap.add_argument("--sizes", default="100,500,1000,2000")
    ap.add_argument("--noise", default="0,0.01,0.05,0.10")
    ap.add_argument("--n-refine", type=int, default=1)
    ap.add_argument("--max-epochs", type=int, default=20_000)
    ap.add_argument("--restarts", type=int, default=10)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--run-dir", default="runs/matrix")
    args = ap.parse_args()

    os.makedirs(args.run_dir, exist_ok=True)
    source_path = os.path.join(args.run_dir, "source.csv")
    if not os.path.exists(source_path):
        print("generating source dataset ...")
        dp.write_dataset(dp.generate_source(), source_path)

    mcfg = MatrixConfig(
        dataset=source_path, run_dir=args.run_dir,
        methods=tuple(args.methods.split(",")),
        sizes=tuple(int(v) for v in args.sizes.split(",")),
        noise_levels=tuple(float(v) for v in args.noise.split(",")),
        n_refine=args.n_refine, seed=args.seed,
        restarts=args.restarts, max_epochs=args.max_epochs,
    )
    rows = run_matrix(mcfg)

    for method in mcfg.methods:
        print(f"\n{method}: displacement error by size")
        print("noise    " + " ".join(f"{s:>10d}" for s in mcfg.sizes))
        for noise in mcfg.noise_levels:
            cells = {
                int(r["size"]): float(r["disp_error"])
                for r in rows
                if r["method"] == method and float(r["noise_level"]) == noise
            }
            print(f"{noise:<8} " + " ".join(f"{cells[s]:10.3e}" for s in mcfg.sizes))
    print(f"\nmaster CSV: {os.path.join(args.run_dir, 'master.csv')}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
