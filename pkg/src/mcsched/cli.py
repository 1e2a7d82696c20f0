"""Command-line interface: partition, generate, falsify, experiment."""

from __future__ import annotations

import argparse
import json
import random
import sys
from pathlib import Path

from .experiments import (
    ExperimentConfig,
    default_grid,
    run_experiment,
    write_results_csv,
    write_war_csv,
)
from .generator import GenerationError, GeneratorConfig, generate_taskset
from .model import dumps_taskset, load_taskset
from .partition import STRATEGIES, TEST_FUNCTIONS, partition_by_name
from .simulator import falsify


def _cmd_partition(args: argparse.Namespace) -> int:
    taskset = load_taskset(args.input)
    try:
        result = partition_by_name(taskset, args.m, args.strategy, args.test)
    except ValueError as exc:
        print(str(exc), file=sys.stderr)
        return 2
    payload = {
        "strategy": args.strategy,
        "test": args.test,
        "m": args.m,
        "outcome": "success" if result.success else "failure",
        "bins": [list(bin_ids) for bin_ids in result.bins],
        "failed_task": result.failed_task,
        "failed_phase": result.failed_phase,
    }
    text = json.dumps(payload, indent=2)
    if args.out:
        Path(args.out).write_text(text + "\n", encoding="utf-8")
    else:
        print(text)
    return 0 if result.success else 1


def _cmd_generate(args: argparse.Namespace) -> int:
    config = GeneratorConfig(
        m=args.m,
        p_h=args.ph,
        u_hh=args.uhh,
        u_hl=args.uhl,
        u_ll=args.ull,
        deadline_model=args.deadline_model,
        t_lo=args.t_lo,
        t_hi=args.t_hi,
    )
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    rng = random.Random(args.seed)
    written = 0
    for index in range(args.count):
        try:
            taskset = generate_taskset(config, rng)
        except GenerationError as exc:
            print(f"set {index}: {exc}", file=sys.stderr)
            continue
        path = out_dir / f"taskset_{index:04d}.json"
        path.write_text(dumps_taskset(taskset), encoding="utf-8")
        written += 1
    print(f"wrote {written} of {args.count} task sets to {out_dir}")
    return 0 if written == args.count else 1


def _cmd_falsify(args: argparse.Namespace) -> int:
    taskset = load_taskset(args.input)
    rng = random.Random(args.seed)
    try:
        counterexample = falsify(args.test, taskset, args.scenarios, rng)
    except ValueError as exc:
        print(str(exc), file=sys.stderr)
        return 2
    if counterexample is None:
        print(
            f"no deadline miss found under {args.test} "
            f"({args.scenarios} random scenarios plus all-LO and all-HI)"
        )
        return 0
    task_id, deadline = counterexample.report.miss
    print(
        json.dumps(
            {
                "scenario_index": counterexample.scenario_index,
                "scenario_kind": counterexample.scenario_kind,
                "missed_task": task_id,
                "missed_deadline": deadline,
                "switch_time": counterexample.report.switch_time,
            },
            indent=2,
        )
    )
    return 1


def _cmd_experiment(args: argparse.Namespace) -> int:
    with open(args.config, "r", encoding="utf-8") as handle:
        raw = json.load(handle)
    config = ExperimentConfig(
        m_values=tuple(raw.get("m_values", (2, 4, 8))),
        p_h_values=tuple(raw.get("p_h_values", (0.5,))),
        deadline_model=raw.get("deadline_model", "implicit"),
        cells=tuple((c[0], c[1]) for c in raw["cells"]),
        sets_per_point=raw.get("sets_per_point", 200),
        master_seed=raw.get("master_seed", 1),
        grid=tuple(tuple(p) for p in raw["grid"]) if "grid" in raw else default_grid(),
        t_lo=raw.get("t_lo", 10),
        t_hi=raw.get("t_hi", 500),
        max_attempts=raw.get("max_attempts", 200),
    )
    outcome = run_experiment(config)
    write_results_csv(outcome.records, args.out)
    if args.war:
        write_war_csv(outcome.records, args.war)
    print(
        f"{len(outcome.records)} records from {outcome.sets_generated} task sets "
        f"({outcome.generation_failures} generation failures) -> {args.out}"
    )
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mcsched")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("partition", help="partition a task-set file onto m processors")
    p.add_argument("--input", required=True)
    p.add_argument("--strategy", required=True, choices=sorted(STRATEGIES))
    p.add_argument("--test", required=True, choices=sorted(TEST_FUNCTIONS))
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_partition)

    g = sub.add_parser("generate", help="generate task-set files")
    g.add_argument("--seed", type=int, required=True)
    g.add_argument("--m", type=int, required=True)
    g.add_argument("--ph", type=float, required=True)
    g.add_argument("--uhh", type=float, required=True)
    g.add_argument("--uhl", type=float, required=True)
    g.add_argument("--ull", type=float, required=True)
    g.add_argument("--deadline-model", choices=("implicit", "constrained"), default="implicit")
    g.add_argument("--count", type=int, default=1)
    g.add_argument("--out", required=True)
    g.add_argument("--t-lo", type=int, default=10)
    g.add_argument("--t-hi", type=int, default=500)
    g.set_defaults(func=_cmd_generate)

    f = sub.add_parser("falsify", help="search for deadline misses on an accepted set")
    f.add_argument("--input", required=True)
    f.add_argument("--test", required=True, choices=sorted(TEST_FUNCTIONS))
    f.add_argument("--scenarios", type=int, default=50)
    f.add_argument("--seed", type=int, default=0)
    f.set_defaults(func=_cmd_falsify)

    e = sub.add_parser("experiment", help="run the acceptance-ratio study")
    e.add_argument("--config", required=True)
    e.add_argument("--out", required=True)
    e.add_argument("--war")
    e.set_defaults(func=_cmd_experiment)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
