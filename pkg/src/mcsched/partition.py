"""Task-to-processor allocation strategies for dual-criticality sets.

Two utilization-difference balancing strategies (criticality-aware CA-UDP
and criticality-unaware CU-UDP) plus four reference strategies, all
parameterized by a uniprocessor schedulability test. A strategy tries
every processor for a task before declaring failure.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Sequence

from .amc import amc_max_accepts, amc_rtb_accepts
from .ecdf import ecdf_accepts
from .edfvd import edfvd_accepts
from .model import Task, TaskSet

BinTest = Callable[[Sequence[Task]], bool]

# Fit rules for HC tasks; LC tasks always use first-fit.
FIT_UDP = "udp"            # worst-fit by increasing U_HH - U_HL
FIT_WU = "wu"              # worst-fit by increasing U_HH
FIT_FIRST = "first"        # first-fit by processor index

ORDER_CA = "ca"            # HC by u_H desc, then LC by u_L desc
ORDER_CA_NOSORT = "ca-nosort"  # HC then LC, both in input order
ORDER_CU = "cu"            # one list by criticality-level utilization desc
ORDER_ECA = "eca"          # heavy LC first, then HC, then remaining LC


@dataclass(frozen=True)
class Strategy:
    name: str
    ordering: str
    hc_fit: str
    heavy_lc_threshold: Optional[Fraction] = None


STRATEGIES: dict[str, Strategy] = {
    s.name: s
    for s in (
        Strategy("CA-UDP", ORDER_CA, FIT_UDP),
        Strategy("CU-UDP", ORDER_CU, FIT_UDP),
        Strategy("CA-Wu-F", ORDER_CA, FIT_WU),
        Strategy("CA-F-F", ORDER_CA, FIT_FIRST),
        Strategy("CA(nosort)-F-F", ORDER_CA_NOSORT, FIT_FIRST),
        Strategy("ECA-Wu-F", ORDER_ECA, FIT_WU, heavy_lc_threshold=Fraction(1, 2)),
    )
}

TEST_FUNCTIONS: dict[str, BinTest] = {
    "edfvd": edfvd_accepts,
    "amc-rtb": amc_rtb_accepts,
    "amc-max": amc_max_accepts,
    "ecdf": ecdf_accepts,
}


@dataclass
class ProcessorBin:
    """One processor's assigned tasks with running utilization sums."""

    index: int
    tasks: list[Task] = field(default_factory=list)
    u_ll: Fraction = Fraction(0)
    u_hl: Fraction = Fraction(0)
    u_hh: Fraction = Fraction(0)

    def add(self, task: Task) -> None:
        self.tasks.append(task)
        if task.is_hc:
            self.u_hl += task.u_L
            self.u_hh += task.u_H
        else:
            self.u_ll += task.u_L

    @property
    def util_difference(self) -> Fraction:
        return self.u_hh - self.u_hl

    @property
    def task_ids(self) -> tuple[int, ...]:
        return tuple(t.id for t in self.tasks)


@dataclass(frozen=True)
class Partition:
    bins: tuple[tuple[int, ...], ...]
    success: bool
    failed_task: Optional[int] = None
    failed_phase: Optional[str] = None


def order_tasks(strategy: Strategy, taskset: TaskSet) -> list[Task]:
    """Allocation sequence for the strategy. All sorts are stable and break
    ties by smaller id."""
    tasks = list(taskset.tasks)
    hc = [t for t in tasks if t.is_hc]
    lc = [t for t in tasks if not t.is_hc]
    if strategy.ordering == ORDER_CA:
        return sorted(hc, key=lambda t: (-t.u_H, t.id)) + sorted(
            lc, key=lambda t: (-t.u_L, t.id)
        )
    if strategy.ordering == ORDER_CA_NOSORT:
        return hc + lc
    if strategy.ordering == ORDER_CU:
        return sorted(tasks, key=lambda t: (-(t.u_H if t.is_hc else t.u_L), t.id))
    if strategy.ordering == ORDER_ECA:
        threshold = strategy.heavy_lc_threshold
        heavy = [t for t in lc if t.u_L > threshold]
        light = [t for t in lc if t.u_L <= threshold]
        return (
            sorted(heavy, key=lambda t: (-t.u_L, t.id))
            + sorted(hc, key=lambda t: (-t.u_H, t.id))
            + sorted(light, key=lambda t: (-t.u_L, t.id))
        )
    raise ValueError(f"unknown ordering {strategy.ordering!r}")


def candidate_processors(
    strategy: Strategy, task: Task, bins: Sequence[ProcessorBin]
) -> list[ProcessorBin]:
    """Processor trial order for one task; ties break on lower index."""
    if task.is_hc and strategy.hc_fit == FIT_UDP:
        return sorted(bins, key=lambda b: (b.util_difference, b.index))
    if task.is_hc and strategy.hc_fit == FIT_WU:
        return sorted(bins, key=lambda b: (b.u_hh, b.index))
    return list(bins)


def partition(
    taskset: TaskSet,
    m: int,
    strategy: Strategy,
    test: BinTest,
    trace: Optional[list] = None,
) -> Partition:
    """Allocate every task to a processor accepted by the test.

    Tasks are taken in the strategy's order; each is placed on the first
    candidate processor where the test accepts the grown bin. A task
    rejected by all m processors fails the partition. ``trace``, when
    given, records (task id, bin fingerprints, candidate indices) per
    trial round for instrumentation.
    """
    bins = [ProcessorBin(index=k) for k in range(m)]
    for task in order_tasks(strategy, taskset):
        candidates = candidate_processors(strategy, task, bins)
        if trace is not None:
            trace.append(
                (
                    task.id,
                    tuple(b.task_ids for b in bins),
                    tuple(b.index for b in candidates),
                )
            )
        placed = False
        for bin_ in candidates:
            if test(bin_.tasks + [task]):
                bin_.add(task)
                placed = True
                break
        if not placed:
            return Partition(
                bins=tuple(b.task_ids for b in bins),
                success=False,
                failed_task=task.id,
                failed_phase=task.chi,
            )
    return Partition(bins=tuple(b.task_ids for b in bins), success=True)


def partition_by_name(
    taskset: TaskSet, m: int, strategy_name: str, test_name: str
) -> Partition:
    strategy = STRATEGIES[strategy_name]
    test = TEST_FUNCTIONS[test_name]
    return partition(taskset, m, strategy, test)
