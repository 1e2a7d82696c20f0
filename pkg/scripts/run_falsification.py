#!/usr/bin/env python3
"""Falsification campaign driver: hunt for deadline misses on accepted bins.

Generates uniprocessor task sets, keeps the ones the chosen test accepts,
and simulates each under the matching runtime over the all-LO, all-HI, and
random demand-bit scenarios. Any reported miss refutes the test.
"""

import argparse
import math
import random
import time

from mcsched.generator import GenerationError, GeneratorConfig, generate_taskset
from mcsched.simulator import falsify


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--test", choices=("edfvd", "amc-rtb", "amc-max", "ecdf"), required=True)
    parser.add_argument("--bins", type=int, default=1000)
    parser.add_argument("--scenarios", type=int, default=50)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--max-lcm", type=int, default=20_000)
    args = parser.parse_args()

    deadline_models = ("implicit",) if args.test == "edfvd" else ("implicit", "constrained")
    rng = random.Random(args.seed)
    accepted = 0
    tried = 0
    misses = 0
    started = time.time()
    t_ranges = ((10, 40), (10, 100))
    while accepted < args.bins:
        tried += 1
        t_lo, t_hi = t_ranges[tried % len(t_ranges)]
        uhh = rng.uniform(0.1, 0.9)
        uhl = rng.uniform(0.05, uhh)
        ull = rng.uniform(0.05, min(0.9, 0.99 - uhl))
        config = GeneratorConfig(
            m=1, p_h=0.5, u_hh=uhh, u_hl=uhl, u_ll=ull,
            t_lo=t_lo, t_hi=t_hi,
            deadline_model=deadline_models[tried % len(deadline_models)],
            max_attempts=30,
        )
        try:
            ts = generate_taskset(config, rng)
        except GenerationError:
            continue
        tasks = list(ts.tasks)
        if math.lcm(*(t.T for t in tasks)) > args.max_lcm:
            continue
        try:
            counterexample = falsify(args.test, tasks, args.scenarios, rng)
        except ValueError:
            continue
        accepted += 1
        if counterexample is not None:
            misses += 1
            print(f"MISS under {args.test}: {counterexample}")
            for t in tasks:
                print(f"  {t.chi} T={t.T} C_L={t.C_L} C_H={t.C_H} D={t.D}")
    print(
        f"{args.test}: {accepted} accepted bins, {misses} misses, "
        f"{time.time() - started:.0f}s"
    )


if __name__ == "__main__":
    main()
