"""Discrete-time preemptive uniprocessor simulation of dual-criticality
runtimes, and a falsifier that hunts for deadline misses on sets a
schedulability test accepted.

Releases are synchronous periodic; every parameter is an integer, so the
simulation advances between events without skipping any instant a
unit-time stepper would see. The mode switch fires the instant a running
HC job has consumed its LO budget and still has demand left; LC jobs are
dropped at the switch and LC releases stop being admitted.

The falsifier is one-sided: it can refute a test with a concrete miss but
can never confirm soundness.
"""

from __future__ import annotations

import heapq
import math
import random
from dataclasses import dataclass
from typing import Mapping, Optional, Sequence, Union

from .amc import amc_max, amc_rtb, assign_priorities
from .ecdf import ecdf_schedulable
from .edfvd import edfvd_schedulable, edfvd_virtual_deadlines
from .model import Task, TaskSet


@dataclass(frozen=True)
class Scenario:
    """Per-HC-job execution demand: bit j of a task's tuple selects C_H
    (True) or C_L (False) for its j-th job."""

    hi_bits: Mapping[int, tuple[bool, ...]]

    def demand(self, task: Task, job_index: int) -> int:
        if not task.is_hc:
            return task.C_L
        bits = self.hi_bits.get(task.id, ())
        if job_index < len(bits) and bits[job_index]:
            return task.C_H
        return task.C_L


def _job_count(task: Task, horizon: int) -> int:
    return max(0, -(-horizon // task.T))  # releases at kT < horizon


def all_lo_scenario(tasks: Sequence[Task], horizon: int) -> Scenario:
    return Scenario(
        {t.id: (False,) * _job_count(t, horizon) for t in tasks if t.is_hc}
    )


def all_hi_scenario(tasks: Sequence[Task], horizon: int) -> Scenario:
    return Scenario(
        {t.id: (True,) * _job_count(t, horizon) for t in tasks if t.is_hc}
    )


def random_scenario(tasks: Sequence[Task], horizon: int, rng: random.Random) -> Scenario:
    return Scenario(
        {
            t.id: tuple(rng.random() < 0.5 for _ in range(_job_count(t, horizon)))
            for t in tasks
            if t.is_hc
        }
    )


@dataclass(frozen=True)
class EdfVdRuntime:
    """EDF on virtual deadlines before the switch, EDF on real deadlines
    among HC tasks after."""

    virtual_deadlines: Mapping[int, int]


@dataclass(frozen=True)
class AmcRuntime:
    """Fixed-priority dispatch; position 0 of the order is highest."""

    order: Sequence[int]


RuntimeSpec = Union[EdfVdRuntime, AmcRuntime]


@dataclass(frozen=True)
class SimReport:
    miss: Optional[tuple[int, int]]
    switch_time: Optional[int]
    trace_length: int


@dataclass
class _Job:
    task: Task
    release: int
    deadline: int
    demand: int
    executed: int = 0
    dropped: bool = False

    @property
    def done(self) -> bool:
        return self.executed >= self.demand


def simulate(
    tasks: Sequence[Task],
    runtime: RuntimeSpec,
    scenario: Scenario,
    horizon: int,
    trace: Optional[list] = None,
) -> SimReport:
    """Run one scenario to the horizon; stops at the first deadline miss.

    Only jobs whose absolute deadline lies within the horizon are judged.
    Work conservation holds by construction: the processor idles only when
    no undropped, unfinished job is ready.
    """
    if horizon < max((t.D for t in tasks), default=0):
        raise ValueError("horizon must cover at least the largest deadline")

    if isinstance(runtime, AmcRuntime):
        priority = {tid: pos for pos, tid in enumerate(runtime.order)}

        def lo_key(job: _Job) -> tuple:
            return (priority[job.task.id], job.release)

        hi_key = lo_key
    else:
        vd = runtime.virtual_deadlines

        def lo_key(job: _Job) -> tuple:
            if job.task.is_hc:
                return (job.release + vd[job.task.id], job.task.id, job.release)
            return (job.release + job.task.D, job.task.id, job.release)

        def hi_key(job: _Job) -> tuple:
            return (job.deadline, job.task.id, job.release)

    releases: list[tuple[int, int]] = []  # (time, task index)
    for idx, t in enumerate(tasks):
        releases.append((0, idx))
    heapq.heapify(releases)
    job_counts = [0] * len(tasks)

    ready: list[tuple[tuple, int, _Job]] = []
    deadlines: list[tuple[int, int, _Job]] = []
    seq = 0
    hi_mode = False
    switch_time: Optional[int] = None
    key_fn = lo_key

    def push_ready(job: _Job) -> None:
        nonlocal seq
        heapq.heappush(ready, (key_fn(job), seq, job))
        seq += 1

    def admit(time: int) -> None:
        """Release every job due at exactly `time`."""
        nonlocal seq
        while releases and releases[0][0] == time:
            _, idx = heapq.heappop(releases)
            t = tasks[idx]
            if time + t.T < horizon:
                heapq.heappush(releases, (time + t.T, idx))
            if hi_mode and not t.is_hc:
                job_counts[idx] += 1
                continue
            job = _Job(
                task=t,
                release=time,
                deadline=time + t.D,
                demand=scenario.demand(t, job_counts[idx]),
            )
            job_counts[idx] += 1
            push_ready(job)
            if job.deadline <= horizon:
                heapq.heappush(deadlines, (job.deadline, seq, job))
                seq += 1

    def enter_hi(time: int) -> None:
        nonlocal hi_mode, switch_time, key_fn, ready
        hi_mode = True
        switch_time = time
        key_fn = hi_key
        live = [job for _, _, job in ready if not job.done and job.task.is_hc]
        for _, _, job in ready:
            if not job.task.is_hc:
                job.dropped = True
        ready = []
        for job in live:
            push_ready(job)

    t_now = 0
    admit(0)
    while t_now < horizon:
        while ready and (ready[0][2].done or ready[0][2].dropped):
            heapq.heappop(ready)

        while deadlines and deadlines[0][0] <= t_now:
            _, _, job = heapq.heappop(deadlines)
            if not job.done and not job.dropped:
                return SimReport(
                    miss=(job.task.id, job.deadline),
                    switch_time=switch_time,
                    trace_length=t_now,
                )

        next_release = releases[0][0] if releases else horizon
        next_deadline = deadlines[0][0] if deadlines else horizon

        if not ready:
            t_next = min(next_release, horizon)
            if trace is not None and t_next > t_now:
                trace.append((t_now, t_next, None))
            t_now = t_next
            if t_now >= horizon:
                break
            admit(t_now)
            continue

        job = ready[0][2]
        run_end = t_now + (job.demand - job.executed)
        if not hi_mode and job.task.is_hc and job.demand > job.task.C_L:
            run_end = min(run_end, t_now + (job.task.C_L - job.executed))
        t_next = min(run_end, next_release, next_deadline, horizon)
        if trace is not None and t_next > t_now:
            trace.append((t_now, t_next, job.task.id))
        job.executed += t_next - t_now
        t_now = t_next

        if (
            not hi_mode
            and job.task.is_hc
            and job.executed == job.task.C_L
            and job.demand > job.task.C_L
        ):
            enter_hi(t_now)
        elif job.done and ready and ready[0][2] is job:
            heapq.heappop(ready)

        while deadlines and deadlines[0][0] <= t_now:
            _, _, due = heapq.heappop(deadlines)
            if not due.done and not due.dropped:
                return SimReport(
                    miss=(due.task.id, due.deadline),
                    switch_time=switch_time,
                    trace_length=t_now,
                )
        if t_now < horizon:
            admit(t_now)

    return SimReport(miss=None, switch_time=switch_time, trace_length=horizon)


@dataclass(frozen=True)
class Counterexample:
    scenario_index: int
    scenario_kind: str
    report: SimReport


def runtime_for_test(test_name: str, tasks: Sequence[Task]) -> Optional[RuntimeSpec]:
    """Runtime configuration produced by an accepting test, else None."""
    if test_name == "edfvd":
        verdict = edfvd_schedulable(tasks)
        if not verdict.schedulable:
            return None
        return EdfVdRuntime(edfvd_virtual_deadlines(tasks, verdict.x))
    if test_name == "ecdf":
        verdict = ecdf_schedulable(tasks)
        if not verdict.schedulable:
            return None
        return EdfVdRuntime(dict(verdict.assignment))
    if test_name in ("amc-rtb", "amc-max"):
        order = assign_priorities(tasks)
        result = amc_rtb(tasks, order) if test_name == "amc-rtb" else amc_max(tasks, order)
        if not result.schedulable:
            return None
        return AmcRuntime(order)
    raise ValueError(f"unknown test {test_name!r}")


def falsification_horizon(tasks: Sequence[Task], cap: int = 100_000) -> int:
    lcm = 1
    for t in tasks:
        lcm = math.lcm(lcm, t.T)
    return min(2 * lcm, cap) + max((t.D for t in tasks), default=0)


def falsify_runtime(
    runtime: RuntimeSpec,
    tasks: Sequence[Task],
    n_scenarios: int,
    rng: random.Random,
    horizon_cap: int = 100_000,
) -> Optional[Counterexample]:
    """Scenario sweep against a given runtime configuration.

    Runs the all-LO and all-HI scenarios plus n_scenarios random demand-bit
    scenarios; returns the first counterexample (lowest scenario index) or
    None.
    """
    tasks = list(tasks)
    horizon = falsification_horizon(tasks, horizon_cap)
    scenarios: list[tuple[str, Scenario]] = [
        ("all-lo", all_lo_scenario(tasks, horizon)),
        ("all-hi", all_hi_scenario(tasks, horizon)),
    ]
    for _ in range(n_scenarios):
        scenarios.append(("random", random_scenario(tasks, horizon, rng)))
    for index, (kind, scenario) in enumerate(scenarios):
        report = simulate(tasks, runtime, scenario, horizon)
        if report.miss is not None:
            return Counterexample(scenario_index=index, scenario_kind=kind, report=report)
    return None


def falsify(
    test_name: str,
    tasks: Sequence[Task] | TaskSet,
    n_scenarios: int,
    rng: random.Random,
    horizon_cap: int = 100_000,
) -> Optional[Counterexample]:
    """Search for a deadline miss on a set the named test accepted.

    Raises ValueError when the test rejects the set.
    """
    if isinstance(tasks, TaskSet):
        tasks = list(tasks.tasks)
    else:
        tasks = list(tasks)
    runtime = runtime_for_test(test_name, tasks)
    if runtime is None:
        raise ValueError(f"test {test_name!r} rejects the task set; nothing to falsify")
    return falsify_runtime(runtime, tasks, n_scenarios, rng, horizon_cap)
