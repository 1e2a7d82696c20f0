"""Demand-bound-function schedulability with greedy virtual-deadline tuning.

LO-mode demand is checked against every task's virtual deadline; HI-mode
demand charges HC tasks their high budget with a carry-over job credited
max(0, C_L - x) units of low-mode execution, x being the time from the
mode switch to its virtual deadline. Virtual deadlines start at the real
deadlines and are greedily shortened at the earliest violating checkpoint
until the HI check passes or no eligible task remains.

Demand functions are integer step/ramp functions, so checking the
checkpoints where some task's demand changes (deadline steps and
carry-over kink points) decides schedulability exactly. Violations in
either mode can only occur below a utilization-slack horizon, which keeps
every scan finite.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np

from .model import Task

DEFAULT_LMAX_CAP = 10**6


@dataclass(frozen=True)
class DbfVerdict:
    schedulable: bool
    assignment: dict[int, int] = field(default_factory=dict)
    first_violation: Optional[tuple[str, Optional[int]]] = None
    diagnostic: Optional[str] = None


def dbf_lo(task: Task, v: int, ell: int) -> int:
    """LO-mode demand of jobs with virtual deadline inside a window of
    length ell; v is the virtual deadline (the real deadline for LC)."""
    return max(0, (ell - v) // task.T + 1) * task.C_L


def dbf_hi(task: Task, v: int, ell: int) -> int:
    """HI-mode demand of an HC task in a window of length ell after the
    mode switch, with carry-over credit for low-mode execution."""
    shift = task.D - v
    if ell < shift:
        return 0
    k = (ell - shift) // task.T + 1
    d = ell - (k - 1) * task.T
    if d >= task.D:
        return k * task.C_H
    return (k - 1) * task.C_H + task.C_H - max(0, task.C_L - (d - shift))


def _mode_horizons(
    tasks: Sequence[Task], assignment: dict[int, int]
) -> tuple[Optional[int], Optional[int]]:
    """Per-mode first-violation horizons (integer ceilings of the exact
    utilization-slack bounds), or None where utilization >= 1.

    Exact integer arithmetic over the common denominator prod(T_i): the
    boundary cases that integer budgets do reach stay exact.
    """
    lo_num = 0
    hi_num = 0
    off_lo_num = 0
    off_hi_num = 0
    den = 1
    for t in tasks:
        v = assignment.get(t.id, t.D)
        T = t.T
        lo_num = lo_num * T + t.C_L * den
        off_lo_num = off_lo_num * T + (T - v) * t.C_L * den
        if t.is_hc:
            hi_num = hi_num * T + t.C_H * den
            off_hi_num = off_hi_num * T + (T - t.D + v) * t.C_H * den
        else:
            hi_num *= T
            off_hi_num *= T
        den *= T
    bound_lo = -(-off_lo_num // (den - lo_num)) if lo_num < den else None
    bound_hi = -(-off_hi_num // (den - hi_num)) if hi_num < den else None
    return bound_lo, bound_hi


def lmax_bound(
    tasks: Sequence[Task],
    assignment: dict[int, int],
    cap: int = DEFAULT_LMAX_CAP,
) -> tuple[int, Optional[str]]:
    """Sound horizon beyond which no first violation can occur.

    Returns (horizon, diagnostic). A non-None diagnostic means the caller
    must treat the set as unschedulable: total LO utilization or total HC
    HI utilization at or above 1 (horizon 0), or a horizon beyond the
    configured cap (conservative give-up).
    """
    bound_lo, bound_hi = _mode_horizons(tasks, assignment)
    if bound_lo is None:
        return 0, "lo-utilization >= 1"
    if bound_hi is None:
        return 0, "hi-utilization >= 1"
    horizon = max(bound_lo, bound_hi)
    if horizon > cap:
        return 0, f"cap: horizon bound {horizon} exceeds {cap}"
    return horizon, None


def _lo_check(
    tasks: Sequence[Task], assignment: dict[int, int], horizon: int
) -> tuple[bool, Optional[int]]:
    """Evaluate the LO demand check at every step point up to the horizon."""
    if horizon <= 0:
        return True, None
    chunks = [np.array([horizon], dtype=np.int64)]
    for t in tasks:
        v = assignment.get(t.id, t.D)
        if v <= horizon:
            chunks.append(np.arange(v, horizon + 1, t.T, dtype=np.int64))
    points = np.unique(np.concatenate(chunks))
    demand = np.zeros(len(points), dtype=np.int64)
    for t in tasks:
        v = assignment.get(t.id, t.D)
        demand += np.maximum(0, (points - v) // t.T + 1) * t.C_L
    bad = np.nonzero(demand > points)[0]
    if len(bad):
        return False, int(points[bad[0]])
    return True, None


def _hi_value(ell: int, shift: int, T: int, D: int, CL: int, CH: int) -> int:
    if ell < shift:
        return 0
    k = (ell - shift) // T + 1
    d = ell - (k - 1) * T
    if d >= D:
        return k * CH
    return (k - 1) * CH + CH - max(0, CL - (d - shift))


def _hi_floor_check(hc: Sequence[Task], horizon: int) -> tuple[bool, Optional[int]]:
    """HI check at the pointwise-minimal assignment V = C_L (vectorized).

    Demand never increases as a virtual deadline shrinks, so a violation
    here rules out every reachable assignment.
    """
    if horizon <= 0:
        return True, None
    chunks = [np.array([horizon], dtype=np.int64)]
    for t in hc:
        shift = t.D - t.C_L
        if shift <= horizon:
            starts = np.arange(shift, horizon + 1, t.T, dtype=np.int64)
            chunks.append(starts)
            chunks.append(starts + t.C_L)
    points = np.unique(np.concatenate(chunks))
    points = points[points <= horizon]
    demand = np.zeros(len(points), dtype=np.int64)
    for t in hc:
        shift = t.D - t.C_L
        rel = points - shift
        k = np.where(rel >= 0, rel // t.T + 1, 0)
        d = points - (k - 1) * t.T
        credit = np.maximum(0, t.C_L - (d - shift))
        full = k * t.C_H
        partial = full - credit
        demand += np.where(rel < 0, 0, np.where(d >= t.D, full, partial))
    bad = np.nonzero(demand > points)[0]
    if len(bad):
        return False, int(points[bad[0]])
    return True, None


def _next_changing_v(pos: int, v: int, T: int, D: int, CL: int, CH: int) -> Optional[int]:
    """Largest v' in [C_L, v) whose HI demand at pos differs from v's.

    Only called when the demand at pos is positive, so pos >= D - vv holds
    whenever the demand is still equal to the starting value.
    """
    base = _hi_value(pos, D - v, T, D, CL, CH)
    vv = v
    while vv > CL:
        rel = pos - (D - vv)
        r = rel - (rel // T) * T
        if r > CL:
            vv -= r - CL + 1  # skip the flat stretch
        else:
            vv -= 1
        if vv < CL:
            vv = CL
        if _hi_value(pos, D - vv, T, D, CL, CH) != base:
            return vv
    return None


def _first_point_after(pos: int, shift: int, T: int, CL: int) -> int:
    """Smallest checkpoint of the stream {shift + jT, shift + jT + CL} > pos."""
    if shift > pos:
        return shift
    j = (pos - shift) // T
    kink = shift + j * T + CL
    if kink > pos:
        return kink
    return shift + (j + 1) * T


def _tune_hi(
    hc: Sequence[Task], assignment: dict[int, int], scan_limit: int
) -> tuple[bool, Optional[int]]:
    """Greedy virtual-deadline tuning over the HI check.

    Walks checkpoints in ascending order; demand is pointwise nonincreasing
    under the tuning, so positions once cleared stay cleared and the
    earliest violating checkpoint only moves forward.
    """
    n = len(hc)
    Ts = [t.T for t in hc]
    Ds = [t.D for t in hc]
    CLs = [t.C_L for t in hc]
    CHs = [t.C_H for t in hc]
    gaps = [t.u_H - t.u_L for t in hc]
    ids = [t.id for t in hc]
    v = [assignment[t.id] for t in hc]
    gen = [0] * n

    heap: list[tuple[int, int, int]] = []
    for i in range(n):
        point = _first_point_after(-1, Ds[i] - v[i], Ts[i], CLs[i])
        if point <= scan_limit:
            heapq.heappush(heap, (point, i, 0))

    pos = -1
    while heap:
        point, i, g = heapq.heappop(heap)
        if g != gen[i]:
            continue
        nxt = _first_point_after(point, Ds[i] - v[i], Ts[i], CLs[i])
        if nxt <= scan_limit:
            heapq.heappush(heap, (nxt, i, gen[i]))
        if point <= pos:
            continue
        pos = point
        demand = sum(
            _hi_value(pos, Ds[j] - v[j], Ts[j], Ds[j], CLs[j], CHs[j]) for j in range(n)
        )
        while demand > pos:
            best = None
            best_key = None
            for j in range(n):
                contrib = _hi_value(pos, Ds[j] - v[j], Ts[j], Ds[j], CLs[j], CHs[j])
                if contrib <= 0 or v[j] <= CLs[j]:
                    continue
                reduction = contrib - _hi_value(
                    pos, Ds[j] - (v[j] - 1), Ts[j], Ds[j], CLs[j], CHs[j]
                )
                key = (reduction, gaps[j], -ids[j])
                if best_key is None or key > best_key:
                    best_key = key
                    best = j
            if best is None:
                for idx in range(n):
                    assignment[ids[idx]] = v[idx]
                return False, pos
            j = best
            old = _hi_value(pos, Ds[j] - v[j], Ts[j], Ds[j], CLs[j], CHs[j])
            v_new = _next_changing_v(pos, v[j], Ts[j], Ds[j], CLs[j], CHs[j])
            if v_new is None:
                v_new = CLs[j]  # no change reachable; still shrinks sum(V)
            v[j] = v_new
            gen[j] += 1
            nxt = _first_point_after(pos, Ds[j] - v[j], Ts[j], CLs[j])
            if nxt <= scan_limit:
                heapq.heappush(heap, (nxt, j, gen[j]))
            demand += _hi_value(pos, Ds[j] - v[j], Ts[j], Ds[j], CLs[j], CHs[j]) - old
    for idx in range(n):
        assignment[ids[idx]] = v[idx]
    return True, None


def ecdf_schedulable(tasks: Iterable[Task], cap: int = DEFAULT_LMAX_CAP) -> DbfVerdict:
    """Run the demand checks with greedy deadline tuning.

    Virtual deadlines initialize to the real deadlines. A failing LO check
    is final; a failing HI check shortens, at the earliest violating
    checkpoint, the virtual deadline of the eligible task whose unit
    decrement sheds the most HI demand (ties: largest u_H - u_L, then
    smallest id), jumping to the next value that changes its demand there.
    """
    tasks = list(tasks)
    hc = [t for t in tasks if t.is_hc]
    assignment = {t.id: t.D for t in hc}

    bound_lo, bound_hi = _mode_horizons(tasks, assignment)
    if bound_lo is None:
        return DbfVerdict(False, assignment, ("lo", None), "lo-utilization >= 1")
    if bound_hi is None:
        return DbfVerdict(False, assignment, ("hi", None), "hi-utilization >= 1")
    if max(bound_lo, bound_hi) > cap:
        return DbfVerdict(
            False, assignment, ("hi", None), f"cap: initial horizon exceeds {cap}"
        )

    # LO violations can only occur below the LO-mode horizon.
    ok, ell = _lo_check(tasks, assignment, bound_lo)
    if not ok:
        return DbfVerdict(False, assignment, ("lo", ell))

    if hc:
        # Necessary condition: even the pointwise-minimal assignment must pass.
        floor_assignment = {t.id: t.C_L for t in hc}
        floor_bound = _mode_horizons(hc, floor_assignment)[1]
        ok, ell = _hi_floor_check(hc, floor_bound)
        if not ok:
            return DbfVerdict(False, assignment, ("hi", ell))
        ok, ell = _tune_hi(hc, assignment, bound_hi)
        if not ok:
            return DbfVerdict(False, dict(assignment), ("hi", ell))
        horizon_lo = _mode_horizons(tasks, assignment)[0]
        if horizon_lo > cap:
            return DbfVerdict(
                False, dict(assignment), ("lo", None), f"cap: horizon bound {horizon_lo} exceeds {cap}"
            )
        ok, ell = _lo_check(tasks, assignment, horizon_lo)
        if not ok:
            # LO failures are permanent as deadlines shrink, so checking at
            # convergence decides the verdict exactly.
            return DbfVerdict(False, dict(assignment), ("lo", ell))

    return DbfVerdict(True, dict(assignment))


def ecdf_accepts(tasks: Iterable[Task]) -> bool:
    return ecdf_schedulable(tasks).schedulable
