#!/usr/bin/env python3
"""Desk-scale reproduction of the decoder comparison curves.

Sweeps the planar surface codes (distances 11 and 13) and the shipped HGP
instance over a grid of erasure rates with every decoder that applies, then
writes one CSV per code. Plot with the frontend package:

    python frontend/plot_results.py out/surface_d13.csv out/surface_d13

Trial counts default to 20k per point, which resolves the plotted rates to
well under a third of their value; expect roughly an hour at full scale on
two cores. Use --trials to trade accuracy for time.
"""

from __future__ import annotations

import argparse
import os

from cssdec.codes import example_hgp, surface_code
from cssdec.sweep import SweepConfig, run_sweep, write_csv

SURFACE_DECODERS = ["peel", "dual-peel", "hard", "inact", "stab-inact", "surface-fast"]
HGP_DECODERS = ["peel", "dual-peel", "hard", "inact", "stab-inact"]
RATES = [0.18, 0.22, 0.26, 0.30, 0.34, 0.38, 0.42, 0.46, 0.48]


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--trials", type=int, default=20_000)
    parser.add_argument("--seed", type=int, default=2026)
    parser.add_argument("--workers", type=int, default=os.cpu_count() or 1)
    parser.add_argument("--out-dir", default="out")
    parser.add_argument("--distances", type=int, nargs="*", default=[11, 13])
    args = parser.parse_args()

    os.makedirs(args.out_dir, exist_ok=True)
    jobs = [(surface_code(d), SURFACE_DECODERS) for d in args.distances]
    jobs.append((example_hgp(), HGP_DECODERS))
    for code, decoders in jobs:
        config = SweepConfig(
            code=code,
            decoders=decoders,
            rates=RATES,
            trials=args.trials,
            master_seed=args.seed,
            workers=args.workers,
        )
        rows = run_sweep(config)
        path = os.path.join(args.out_dir, f"{code.name}.csv")
        write_csv(rows, path)
        print(f"{code.name}: wrote {len(rows)} rows to {path}")
        for row in rows:
            print(
                f"  {row.decoder:12s} p={row.p:.2f} failure_rate={row.failure_rate:.3e} "
                f"mean_inact={row.mean_inactivations:.4f}"
            )
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
