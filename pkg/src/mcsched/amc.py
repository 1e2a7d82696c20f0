"""Fixed-priority adaptive mixed-criticality response-time analysis.

Offers the LO-mode recurrence, the AMC-rtb bound, and the AMC-max bound
that maximizes over candidate mode-switch instants. All arithmetic is on
integers; fixed-point iteration starts at the task's own budget and gives
up as soon as the iterate exceeds the deadline.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .model import Task


def _ceil_div(a: int, b: int) -> int:
    return -(-a // b)


def assign_priorities(tasks: Iterable[Task]) -> tuple[int, ...]:
    """Deadline-monotonic priority order, ties broken by smaller id.

    Position 0 is the highest priority.
    """
    return tuple(t.id for t in sorted(tasks, key=lambda t: (t.D, t.id)))


@dataclass(frozen=True)
class RtaResult:
    r_lo: dict[int, int] = field(default_factory=dict)
    r_hi: dict[int, int] = field(default_factory=dict)
    schedulable: bool = False
    failing_task: Optional[int] = None


def _fixed_point(start: int, step, deadline: int) -> Optional[int]:
    """Least fixed point of a monotone step map, or None past the deadline."""
    r = start
    while True:
        nxt = step(r)
        if nxt == r:
            return r
        if nxt > deadline:
            return None
        r = nxt


def rta_lo(tasks: Sequence[Task], order: Sequence[int]) -> tuple[dict[int, int], Optional[int]]:
    """LO-mode response times in priority order.

    Returns (response times, failing task id). On divergence the dict holds
    the tasks completed before the first failure.
    """
    by_id = {t.id: t for t in tasks}
    r_lo: dict[int, int] = {}
    hp: list[Task] = []
    for tid in order:
        task = by_id[tid]
        def step(r: int, hp=tuple(hp), c=task.C_L) -> int:
            return c + sum(_ceil_div(r, j.T) * j.C_L for j in hp)
        r = _fixed_point(task.C_L, step, task.D)
        if r is None:
            return r_lo, tid
        r_lo[tid] = r
        hp.append(task)
    return r_lo, None


def amc_rtb(tasks: Sequence[Task], order: Sequence[int]) -> RtaResult:
    """AMC-rtb: HI-mode bound charging every higher-priority HC task its
    HC budget and capping LC interference at the LO response time."""
    r_lo, failing = rta_lo(tasks, order)
    if failing is not None:
        return RtaResult(r_lo=r_lo, schedulable=False, failing_task=failing)
    by_id = {t.id: t for t in tasks}
    r_hi: dict[int, int] = {}
    for pos, tid in enumerate(order):
        task = by_id[tid]
        if not task.is_hc:
            continue
        hp = [by_id[j] for j in order[:pos]]
        hp_hc = tuple(j for j in hp if j.is_hc)
        lc_carry = sum(_ceil_div(r_lo[tid], j.T) * j.C_L for j in hp if not j.is_hc)

        def step(r: int) -> int:
            return task.C_H + lc_carry + sum(_ceil_div(r, k.T) * k.C_H for k in hp_hc)

        r = _fixed_point(task.C_H, step, task.D)
        if r is None:
            return RtaResult(r_lo=r_lo, r_hi=r_hi, schedulable=False, failing_task=tid)
        r_hi[tid] = r
    return RtaResult(r_lo=r_lo, r_hi=r_hi, schedulable=True)


def _switch_candidates(r_lo_i: int, hp_lc: Sequence[Task]) -> list[int]:
    """Candidate mode-switch instants: 0 plus hp-LC releases before R_LO."""
    candidates = {0}
    for j in hp_lc:
        s = j.T
        while s < r_lo_i:
            candidates.add(s)
            s += j.T
    return sorted(candidates)


def amc_max(tasks: Sequence[Task], order: Sequence[int]) -> RtaResult:
    """AMC-max: per HC task, maximize the HI response over all candidate
    switch instants, crediting higher-priority HC jobs whose deadline falls
    at or before the switch with their LO budget only."""
    r_lo, failing = rta_lo(tasks, order)
    if failing is not None:
        return RtaResult(r_lo=r_lo, schedulable=False, failing_task=failing)
    by_id = {t.id: t for t in tasks}
    r_hi: dict[int, int] = {}
    for pos, tid in enumerate(order):
        task = by_id[tid]
        if not task.is_hc:
            continue
        hp = [by_id[j] for j in order[:pos]]
        hp_hc = tuple(j for j in hp if j.is_hc)
        hp_lc = tuple(j for j in hp if not j.is_hc)

        worst = task.C_H
        diverged = False
        for s in _switch_candidates(r_lo[tid], hp_lc):
            lc_load = sum((s // j.T + 1) * j.C_L for j in hp_lc)

            def step(r: int, s=s, lc_load=lc_load) -> int:
                total = task.C_H + lc_load
                for k in hp_hc:
                    n_k = _ceil_div(r, k.T)
                    # a job is certainly done before the switch only when
                    # its deadline lands at or before s; crediting any more
                    # jobs with C_L is refuted by simulation
                    m_k = max(0, min((s - k.D) // k.T + 1, n_k))
                    total += m_k * k.C_L + (n_k - m_k) * k.C_H
                return total

            r = _fixed_point(task.C_H, step, task.D)
            if r is None:
                diverged = True
                break
            worst = max(worst, r)
        if diverged or worst > task.D:
            return RtaResult(r_lo=r_lo, r_hi=r_hi, schedulable=False, failing_task=tid)
        r_hi[tid] = worst
    return RtaResult(r_lo=r_lo, r_hi=r_hi, schedulable=True)


def amc_rtb_accepts(tasks: Iterable[Task]) -> bool:
    tasks = list(tasks)
    return amc_rtb(tasks, assign_priorities(tasks)).schedulable


def amc_max_accepts(tasks: Iterable[Task]) -> bool:
    tasks = list(tasks)
    return amc_max(tasks, assign_priorities(tasks)).schedulable
