"""Acceptance-ratio experiment harness.

Sweeps a grid of normalized utilization targets, generates task sets per
grid point (deterministic per-point seeds derived from the master seed),
runs every strategy x test cell on the same sets, and aggregates
acceptance ratios per total normalized utilization U_B. Grid coordinates
are kept in integer hundredths so bucket keys stay exact.
"""

from __future__ import annotations

import csv
import hashlib
import logging
import random
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .generator import GenerationError, GeneratorConfig, generate_taskset
from .model import IMPLICIT, TaskSet, tasks_fingerprint
from .partition import STRATEGIES, TEST_FUNCTIONS, partition

logger = logging.getLogger(__name__)

RESULT_COLUMNS = (
    "strategy",
    "test",
    "m",
    "deadline_model",
    "p_h",
    "u_b",
    "n_total",
    "n_accepted",
    "acceptance_ratio",
)
WAR_COLUMNS = ("strategy", "test", "m", "deadline_model", "p_h", "war")


def default_grid() -> tuple[tuple[int, int, int], ...]:
    """The (U_HH, U_HL, U_LL) target grid in hundredths."""
    points = []
    for uhh in (10, 20, 30, 40, 50, 60, 70, 80, 90, 99):
        for uhl in range(5, uhh + 1, 10):
            for ull in range(5, 99 - uhl + 1, 10):
                points.append((uhh, uhl, ull))
    return tuple(points)


def grid_u_b(point: tuple[int, int, int]) -> int:
    """U_B of a grid point, in hundredths."""
    uhh, uhl, ull = point
    return max(uhl + ull, uhh)


@dataclass(frozen=True)
class ExperimentConfig:
    m_values: tuple[int, ...] = (2, 4, 8)
    p_h_values: tuple[float, ...] = (0.5,)
    deadline_model: str = IMPLICIT
    cells: tuple[tuple[str, str], ...] = (("CU-UDP", "edfvd"),)
    sets_per_point: int = 200
    master_seed: int = 1
    grid: tuple[tuple[int, int, int], ...] = field(default_factory=default_grid)
    t_lo: int = 10
    t_hi: int = 500
    max_attempts: int = 200
    verify_paired: bool = False

    def __post_init__(self) -> None:
        for strategy, test in self.cells:
            if strategy not in STRATEGIES:
                raise ValueError(f"unknown strategy {strategy!r}")
            if test not in TEST_FUNCTIONS:
                raise ValueError(f"unknown test {test!r}")
        for uhh, uhl, ull in self.grid:
            if uhl > uhh:
                raise ValueError(f"grid point ({uhh},{uhl},{ull}) has U_HL > U_HH")
            if ull > 99 - uhl:
                raise ValueError(f"grid point ({uhh},{uhl},{ull}) has U_LL > 0.99 - U_HL")


@dataclass(frozen=True)
class ExperimentRecord:
    strategy: str
    test: str
    m: int
    deadline_model: str
    p_h: float
    u_b: float
    n_total: int
    n_accepted: int

    @property
    def acceptance_ratio(self) -> float:
        return self.n_accepted / self.n_total

    def key(self) -> tuple:
        return (self.strategy, self.test, self.m, self.deadline_model, self.p_h, self.u_b)


@dataclass(frozen=True)
class ExperimentOutcome:
    records: tuple[ExperimentRecord, ...]
    generation_failures: int
    sets_generated: int


def _point_seed(master: int, m: int, p_h: float, point: tuple[int, int, int], dm: str, index: int) -> int:
    token = f"{master}|{m}|{p_h}|{point}|{dm}|{index}".encode()
    return int.from_bytes(hashlib.sha256(token).digest()[:8], "big")


def run_experiment(config: ExperimentConfig) -> ExperimentOutcome:
    """Run every cell of the configured study.

    Generation failures are counted, logged, and excluded from the
    denominators; every cell inside a grid point evaluates the exact same
    task sets.
    """
    counts: dict[tuple, list[int]] = {}
    failures = 0
    generated = 0
    for m in config.m_values:
        for p_h in config.p_h_values:
            for point in config.grid:
                uhh, uhl, ull = point
                gen_config = GeneratorConfig(
                    m=m,
                    p_h=p_h,
                    u_hh=uhh / 100,
                    u_hl=uhl / 100,
                    u_ll=ull / 100,
                    t_lo=config.t_lo,
                    t_hi=config.t_hi,
                    deadline_model=config.deadline_model,
                    max_attempts=config.max_attempts,
                )
                sets: list[TaskSet] = []
                for index in range(config.sets_per_point):
                    rng = random.Random(
                        _point_seed(config.master_seed, m, p_h, point, config.deadline_model, index)
                    )
                    try:
                        sets.append(generate_taskset(gen_config, rng))
                    except GenerationError:
                        failures += 1
                generated += len(sets)
                if not sets:
                    if config.sets_per_point:
                        logger.info("no sets generated for point %s at m=%d p_h=%.2f", point, m, p_h)
                    continue
                hashes = [hash(tasks_fingerprint(ts.tasks)) for ts in sets]
                ub = grid_u_b(point) / 100
                for strategy_name, test_name in config.cells:
                    strategy = STRATEGIES[strategy_name]
                    test = TEST_FUNCTIONS[test_name]
                    accepted = 0
                    for i, ts in enumerate(sets):
                        if config.verify_paired:
                            assert hash(tasks_fingerprint(ts.tasks)) == hashes[i]
                        if partition(ts, m, strategy, test).success:
                            accepted += 1
                    key = (strategy_name, test_name, m, config.deadline_model, p_h, ub)
                    bucket = counts.setdefault(key, [0, 0])
                    bucket[0] += len(sets)
                    bucket[1] += accepted
    records = tuple(
        ExperimentRecord(
            strategy=k[0], test=k[1], m=k[2], deadline_model=k[3], p_h=k[4], u_b=k[5],
            n_total=v[0], n_accepted=v[1],
        )
        for k, v in sorted(counts.items())
    )
    if failures:
        logger.warning("generation failures: %d of %d requested sets", failures, failures + generated)
    return ExperimentOutcome(records=records, generation_failures=failures, sets_generated=generated)


def weighted_acceptance_ratio(records: Sequence[ExperimentRecord]) -> float:
    """WAR over one cell's records: sum(AR * U_B) / sum(U_B)."""
    records = list(records)
    if not records:
        raise ValueError("weighted_acceptance_ratio needs at least one record")
    total = sum(r.u_b for r in records)
    return sum(r.acceptance_ratio * r.u_b for r in records) / total


def cell_records(
    records: Iterable[ExperimentRecord],
    strategy: str,
    test: str,
    m: int,
    deadline_model: Optional[str] = None,
    p_h: Optional[float] = None,
) -> list[ExperimentRecord]:
    out = [
        r
        for r in records
        if r.strategy == strategy
        and r.test == test
        and r.m == m
        and (deadline_model is None or r.deadline_model == deadline_model)
        and (p_h is None or r.p_h == p_h)
    ]
    return sorted(out, key=lambda r: r.u_b)


def write_results_csv(records: Iterable[ExperimentRecord], path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(RESULT_COLUMNS)
        for r in records:
            writer.writerow(
                [
                    r.strategy,
                    r.test,
                    r.m,
                    r.deadline_model,
                    r.p_h,
                    r.u_b,
                    r.n_total,
                    r.n_accepted,
                    r.acceptance_ratio,
                ]
            )


def write_war_csv(records: Sequence[ExperimentRecord], path) -> None:
    """One WAR row per (strategy, test, m, deadline_model, p_h) cell."""
    cells: dict[tuple, list[ExperimentRecord]] = {}
    for r in records:
        cells.setdefault((r.strategy, r.test, r.m, r.deadline_model, r.p_h), []).append(r)
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(WAR_COLUMNS)
        for key in sorted(cells):
            writer.writerow(list(key) + [weighted_acceptance_ratio(cells[key])])


def read_results_csv(path) -> list[ExperimentRecord]:
    records = []
    with open(path, "r", encoding="utf-8", newline="") as handle:
        for row in csv.DictReader(handle):
            records.append(
                ExperimentRecord(
                    strategy=row["strategy"],
                    test=row["test"],
                    m=int(row["m"]),
                    deadline_model=row["deadline_model"],
                    p_h=float(row["p_h"]),
                    u_b=float(row["u_b"]),
                    n_total=int(row["n_total"]),
                    n_accepted=int(row["n_accepted"]),
                )
            )
    return records
