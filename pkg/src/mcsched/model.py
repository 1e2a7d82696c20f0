"""Dual-criticality sporadic task model and utilization arithmetic.

Time parameters are positive integers; utilizations are exact rationals
derived from the integer budgets, so aggregate bookkeeping (bin caches,
tie-breaking sort keys, boundary comparisons in the schedulability tests)
never suffers float drift.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

LC = "LC"
HC = "HC"

IMPLICIT = "implicit"
CONSTRAINED = "constrained"


@dataclass(frozen=True)
class Task:
    """One sporadic dual-criticality task.

    ``C_L`` and ``C_H`` are the low- and high-mode execution budgets; LC
    tasks carry a single budget stored as C_H == C_L so aggregate formulas
    need no case split.
    """

    id: int
    T: int
    chi: str
    C_L: int
    C_H: int
    D: int
    u_L: Fraction = field(init=False, repr=False, compare=False)
    u_H: Fraction = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "u_L", Fraction(self.C_L, self.T))
        object.__setattr__(self, "u_H", Fraction(self.C_H, self.T))

    @property
    def is_hc(self) -> bool:
        return self.chi == HC


def make_task(T: int, chi: str, C_L: int, C_H: int, D: int, id: int = 0) -> Task:
    """Validate and build a task.

    Raises ValueError on any violated invariant: non-positive fields,
    C_L > C_H, C_H > D, D > T, unknown criticality, or an LC task whose
    two budgets differ.
    """
    for name, value in (("T", T), ("C_L", C_L), ("C_H", C_H), ("D", D)):
        if not isinstance(value, int) or isinstance(value, bool) or value <= 0:
            raise ValueError(f"{name} must be a positive integer, got {value!r}")
    if chi not in (LC, HC):
        raise ValueError(f"chi must be {LC!r} or {HC!r}, got {chi!r}")
    if C_L > C_H:
        raise ValueError(f"C_L={C_L} exceeds C_H={C_H}")
    if chi == LC and C_L != C_H:
        raise ValueError(f"LC task must satisfy C_H == C_L, got C_L={C_L}, C_H={C_H}")
    if C_H > D:
        raise ValueError(f"C_H={C_H} exceeds deadline D={D}")
    if D > T:
        raise ValueError(f"D={D} exceeds period T={T}")
    return Task(id=id, T=T, chi=chi, C_L=C_L, C_H=C_H, D=D)


@dataclass(frozen=True)
class TaskSet:
    """Ordered collection of tasks intended for m processors."""

    tasks: tuple[Task, ...]
    m: int
    deadline_model: str = IMPLICIT

    def __post_init__(self) -> None:
        if self.m < 1:
            raise ValueError(f"m must be >= 1, got {self.m}")
        if self.deadline_model not in (IMPLICIT, CONSTRAINED):
            raise ValueError(f"unknown deadline model {self.deadline_model!r}")
        ids = [t.id for t in self.tasks]
        if ids != list(range(len(ids))):
            raise ValueError("task ids must be unique and contiguous from 0")
        if self.deadline_model == IMPLICIT:
            for t in self.tasks:
                if t.D != t.T:
                    raise ValueError(f"task {t.id} has D != T in an implicit-deadline set")

    def __len__(self) -> int:
        return len(self.tasks)

    @property
    def hc_tasks(self) -> tuple[Task, ...]:
        return tuple(t for t in self.tasks if t.is_hc)

    @property
    def lc_tasks(self) -> tuple[Task, ...]:
        return tuple(t for t in self.tasks if not t.is_hc)


@dataclass(frozen=True)
class SystemUtilizations:
    """Normalized (divided by m) system-level utilizations."""

    u_ll: Fraction
    u_hl: Fraction
    u_hh: Fraction


def system_utilizations(taskset: TaskSet) -> SystemUtilizations:
    """Per-criticality utilization sums over the whole set, normalized by m."""
    m = taskset.m
    u_ll = sum((t.u_L for t in taskset.lc_tasks), Fraction(0)) / m
    u_hl = sum((t.u_L for t in taskset.hc_tasks), Fraction(0)) / m
    u_hh = sum((t.u_H for t in taskset.hc_tasks), Fraction(0)) / m
    return SystemUtilizations(u_ll=u_ll, u_hl=u_hl, u_hh=u_hh)


def bin_utilizations(tasks: Iterable[Task]) -> tuple[Fraction, Fraction, Fraction]:
    """Un-normalized per-processor sums (U_LL_k, U_HL_k, U_HH_k)."""
    u_ll = Fraction(0)
    u_hl = Fraction(0)
    u_hh = Fraction(0)
    for t in tasks:
        if t.is_hc:
            u_hl += t.u_L
            u_hh += t.u_H
        else:
            u_ll += t.u_L
    return u_ll, u_hl, u_hh


def util_difference(tasks: Iterable[Task]) -> Fraction:
    """Extra demand a processor absorbs at a mode switch: U_HH_k - U_HL_k."""
    _, u_hl, u_hh = bin_utilizations(tasks)
    return u_hh - u_hl


def taskset_to_dict(taskset: TaskSet) -> dict:
    return {
        "m": taskset.m,
        "deadline_model": taskset.deadline_model,
        "tasks": [
            {"id": t.id, "T": t.T, "chi": t.chi, "C_L": t.C_L, "C_H": t.C_H, "D": t.D}
            for t in taskset.tasks
        ],
    }


def taskset_from_dict(payload: dict) -> TaskSet:
    tasks = tuple(
        make_task(
            T=entry["T"],
            chi=entry["chi"],
            C_L=entry["C_L"],
            C_H=entry["C_H"],
            D=entry["D"],
            id=entry["id"],
        )
        for entry in payload["tasks"]
    )
    return TaskSet(tasks=tasks, m=payload["m"], deadline_model=payload["deadline_model"])


def dumps_taskset(taskset: TaskSet) -> str:
    """Canonical JSON serialization; round-trips bit-exactly."""
    return json.dumps(taskset_to_dict(taskset), indent=2) + "\n"


def loads_taskset(text: str) -> TaskSet:
    return taskset_from_dict(json.loads(text))


def save_taskset(taskset: TaskSet, path) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(dumps_taskset(taskset))


def load_taskset(path) -> TaskSet:
    with open(path, "r", encoding="utf-8") as handle:
        return loads_taskset(handle.read())


def tasks_fingerprint(tasks: Sequence[Task]) -> tuple:
    """Hashable canonical identity of a task collection."""
    return tuple((t.id, t.T, t.chi, t.C_L, t.C_H, t.D) for t in tasks)
