import math
from fractions import Fraction

from hypothesis import given, settings, strategies as st

from mcsched.ecdf import DbfVerdict, dbf_hi, dbf_lo, ecdf_schedulable, lmax_bound

from conftest import hc, lc, small_bins, small_tasks


# --- independent reference implementation (direct transcription of the
# --- tuning rule, recomputing every checkpoint from scratch each round)

def _ref_bounds(tasks, v):
    u_lo = sum((t.u_L for t in tasks), Fraction(0))
    u_hi = sum((t.u_H for t in tasks if t.is_hc), Fraction(0))
    if u_lo >= 1 or u_hi >= 1:
        return None, None
    off_lo = sum(((t.T - v.get(t.id, t.D)) * t.u_L for t in tasks), Fraction(0))
    off_hi = sum(((t.T - t.D + v[t.id]) * t.u_H for t in tasks if t.is_hc), Fraction(0))
    bound = max(off_lo / (1 - u_lo), off_hi / (1 - u_hi))
    return math.ceil(bound), None


def _ref_lo_points(tasks, v, bound):
    points = {bound}
    for t in tasks:
        p = v.get(t.id, t.D)
        while p <= bound:
            points.add(p)
            p += t.T
    return sorted(p for p in points if p >= 0)


def _ref_hi_points(hc_tasks, v, bound):
    points = {bound}
    for t in hc_tasks:
        p = t.D - v[t.id]
        while p <= bound:
            points.add(p)
            points.add(p + t.C_L)
            p += t.T
    return sorted(p for p in points if p <= bound)


def _ref_lo_ok(tasks, v, bound):
    for ell in _ref_lo_points(tasks, v, bound):
        if sum(dbf_lo(t, v.get(t.id, t.D), ell) for t in tasks) > ell:
            return False
    return True


def _ref_earliest_hi_violation(hc_tasks, v, bound):
    for ell in _ref_hi_points(hc_tasks, v, bound):
        if sum(dbf_hi(t, v[t.id], ell) for t in hc_tasks) > ell:
            return ell
    return None


def reference_ecdf(tasks, cap=10**6):
    tasks = list(tasks)
    hc_tasks = [t for t in tasks if t.is_hc]
    v = {t.id: t.D for t in hc_tasks}
    bound, _ = _ref_bounds(tasks, v)
    if bound is None or bound > cap:
        return DbfVerdict(False, v)
    if not _ref_lo_ok(tasks, v, bound):
        return DbfVerdict(False, v)
    while True:
        bound, _ = _ref_bounds(tasks, v)
        if bound is None or bound > cap:
            return DbfVerdict(False, v)
        ell = _ref_earliest_hi_violation(hc_tasks, v, bound)
        if ell is None:
            return DbfVerdict(True, dict(v))
        eligible = [
            t for t in hc_tasks if dbf_hi(t, v[t.id], ell) > 0 and v[t.id] > t.C_L
        ]
        if not eligible:
            return DbfVerdict(False, dict(v), ("hi", ell))
        best = max(
            eligible,
            key=lambda t: (
                dbf_hi(t, v[t.id], ell) - dbf_hi(t, v[t.id] - 1, ell),
                t.u_H - t.u_L,
                -t.id,
            ),
        )
        current = dbf_hi(best, v[best.id], ell)
        v_new = v[best.id] - 1
        while v_new > best.C_L and dbf_hi(best, v_new, ell) == current:
            v_new -= 1
        v[best.id] = v_new
        if not _ref_lo_ok(tasks, v, _ref_bounds(tasks, v)[0]):
            return DbfVerdict(False, dict(v), ("lo", None))


# --- dbf unit examples

def test_dbf_lo_examples():
    t = hc(10, 2, 4)
    assert dbf_lo(t, 5, 4) == 0
    assert dbf_lo(t, 5, 5) == 2
    assert dbf_lo(t, 5, 15) == 4


def test_dbf_hi_examples():
    t = hc(10, 2, 4)
    assert dbf_hi(t, 5, 4) == 0
    assert dbf_hi(t, 5, 5) == 2
    assert dbf_hi(t, 5, 15) == 6


def brute_dbf_lo(task, v, ell):
    total = 0
    release = 0
    while release + v <= ell:
        total += task.C_L
        release += task.T
    return total


@given(small_tasks(max_period=15), st.integers(0, 120))
@settings(max_examples=400)
def test_dbf_lo_matches_job_enumeration(task, ell):
    for v in range(task.C_L, task.D + 1):
        assert dbf_lo(task, v, ell) == brute_dbf_lo(task, v, ell)


@given(small_tasks(max_period=15), st.integers(0, 100))
@settings(max_examples=400)
def test_dbf_monotone_in_window(task, ell):
    v = task.D
    assert dbf_lo(task, v, ell) <= dbf_lo(task, v, ell + 1)
    if task.is_hc:
        assert dbf_hi(task, v, ell) <= dbf_hi(task, v, ell + 1)


@given(small_tasks(max_period=15), st.integers(0, 100))
@settings(max_examples=400)
def test_dbf_monotone_in_deadline_shrink(task, ell):
    for v in range(task.C_L + 1, task.D + 1):
        assert dbf_lo(task, v - 1, ell) >= dbf_lo(task, v, ell)
        if task.is_hc:
            assert dbf_hi(task, v - 1, ell) <= dbf_hi(task, v, ell)


# --- lmax bound

def test_lmax_single_task():
    t = hc(10, 5, 5)
    horizon, diag = lmax_bound([t], {0: 10})
    assert diag is None
    assert horizon >= 10


def test_lmax_rejects_overutilization():
    horizon, diag = lmax_bound([lc(10, 10)], {})
    assert horizon == 0 and diag is not None
    horizon, diag = lmax_bound([hc(10, 1, 10, id=0), hc(10, 1, 1, id=1)], {0: 10, 1: 10})
    assert horizon == 0 and diag is not None


def test_lmax_cap_diagnostic():
    t = hc(500, 1, 499)
    horizon, diag = lmax_bound([t], {0: 500}, cap=10)
    assert horizon == 0 and diag is not None and "cap" in diag


def _violation_exists_brute(tasks, v, limit):
    for ell in range(0, limit + 1):
        if sum(dbf_lo(t, v.get(t.id, t.D), ell) for t in tasks) > ell:
            return True
        if sum(dbf_hi(t, v[t.id], ell) for t in tasks if t.is_hc) > ell:
            return True
    return False


def test_lmax_bound_agrees_with_brute_scan_on_two_task_instances():
    instances = [
        [hc(6, 2, 3, id=0), lc(8, 3, id=1)],
        [hc(5, 1, 2, id=0), hc(10, 2, 5, id=1)],
        [hc(4, 2, 3, D=3, id=0), lc(6, 2, D=5, id=1)],
    ]
    for tasks in instances:
        v = {t.id: t.D for t in tasks if t.is_hc}
        horizon, diag = lmax_bound(tasks, v)
        assert diag is None
        lcm = math.lcm(*(t.T for t in tasks))
        limit = max(4 * lcm, horizon)
        bounded = _violation_exists_brute(tasks, v, horizon)
        full = _violation_exists_brute(tasks, v, limit)
        assert bounded == full


# --- ecdf verdicts

def test_lc_only_set_is_lo_check_only():
    verdict = ecdf_schedulable([lc(10, 4, id=0), lc(20, 10, id=1)])
    assert verdict.schedulable and verdict.assignment == {}


def test_lc_only_at_exact_unit_utilization_rejected():
    # boundary pinned by the horizon precondition: utilization must be < 1
    verdict = ecdf_schedulable([lc(10, 10)])
    assert not verdict.schedulable


def test_single_hc_task_tunes_and_accepts():
    verdict = ecdf_schedulable([hc(10, 2, 4)])
    assert verdict.schedulable
    assert verdict.assignment == {0: 8}


def test_edfvd_worked_example_bins():
    # CA-UDP partition bins of the first worked allocation example; the
    # {tau1, tau3} bin carries HC HI utilization exactly 1 and is rejected
    # by the horizon precondition, the other bin is accepted.
    phi1 = [hc(100, 50, 60, id=0), hc(100, 35, 40, id=2)]
    phi2 = [hc(100, 10, 50, id=1), lc(100, 50, id=3)]
    assert not ecdf_schedulable(phi1).schedulable
    assert ecdf_schedulable(phi2).schedulable
    # CU-UDP bins of the second worked example are strictly inside the
    # utilization preconditions and both accepted.
    assert ecdf_schedulable([lc(100, 90, id=2)]).schedulable
    assert ecdf_schedulable([hc(100, 30, 60, id=0), hc(100, 20, 35, id=1)]).schedulable


def test_verdict_assignment_invariants():
    tasks = [hc(12, 3, 6, id=0), hc(9, 2, 4, id=1), lc(15, 3, id=2)]
    verdict = ecdf_schedulable(tasks)
    assert verdict.schedulable
    for t in tasks:
        if t.is_hc:
            assert t.C_L <= verdict.assignment[t.id] <= t.D


@given(small_bins(max_tasks=4, max_period=14))
@settings(max_examples=300, deadline=None)
def test_matches_reference_implementation(tasks):
    fast = ecdf_schedulable(tasks, cap=2000)
    ref = reference_ecdf(tasks, cap=2000)
    assert fast.schedulable == ref.schedulable
    if fast.schedulable:
        assert fast.assignment == ref.assignment


@given(small_bins(max_tasks=4, max_period=14, implicit=True))
@settings(max_examples=200, deadline=None)
def test_matches_reference_implementation_implicit(tasks):
    fast = ecdf_schedulable(tasks, cap=2000)
    ref = reference_ecdf(tasks, cap=2000)
    assert fast.schedulable == ref.schedulable
    if fast.schedulable:
        assert fast.assignment == ref.assignment
