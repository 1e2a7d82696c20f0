#!/usr/bin/env python3
"""Run the acceptance-ratio study and write results.csv / war.csv.

Desk scale (200 sets per grid point) by default; --full reaches 1000 sets
per point. The implicit study covers the EDF-VD strategy comparison, the
constrained study the ECDF and AMC-max cells.
"""

import argparse
import time
from pathlib import Path

from mcsched.experiments import (
    ExperimentConfig,
    run_experiment,
    write_results_csv,
    write_war_csv,
)

IMPLICIT_CELLS = (
    ("CU-UDP", "edfvd"),
    ("CA-UDP", "edfvd"),
    ("CA(nosort)-F-F", "edfvd"),
)
CONSTRAINED_CELLS = (
    ("CU-UDP", "ecdf"),
    ("ECA-Wu-F", "ecdf"),
    ("CA-F-F", "ecdf"),
    ("CU-UDP", "amc-max"),
)


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out-dir", default="results")
    parser.add_argument("--sets-per-point", type=int, default=200)
    parser.add_argument("--full", action="store_true", help="1000 sets per grid point")
    parser.add_argument("--m", type=int, nargs="+", default=[2, 4, 8])
    parser.add_argument("--p-h", type=float, nargs="+", default=[0.5])
    parser.add_argument("--seed", type=int, default=1)
    parser.add_argument(
        "--study", choices=("implicit", "constrained", "both"), default="both"
    )
    args = parser.parse_args()

    sets_per_point = 1000 if args.full else args.sets_per_point
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    studies = []
    if args.study in ("implicit", "both"):
        studies.append(("implicit", IMPLICIT_CELLS))
    if args.study in ("constrained", "both"):
        studies.append(("constrained", CONSTRAINED_CELLS))

    for deadline_model, cells in studies:
        config = ExperimentConfig(
            m_values=tuple(args.m),
            p_h_values=tuple(args.p_h),
            deadline_model=deadline_model,
            cells=cells,
            sets_per_point=sets_per_point,
            master_seed=args.seed,
        )
        started = time.time()
        outcome = run_experiment(config)
        results = out_dir / f"results_{deadline_model}.csv"
        war = out_dir / f"war_{deadline_model}.csv"
        write_results_csv(outcome.records, results)
        write_war_csv(outcome.records, war)
        print(
            f"{deadline_model}: {len(outcome.records)} records, "
            f"{outcome.sets_generated} sets "
            f"({outcome.generation_failures} generation failures), "
            f"{time.time() - started:.0f}s -> {results}"
        )


if __name__ == "__main__":
    main()
