import pytest

from mcsched.amc import assign_priorities
from mcsched.simulator import (
    falsify_runtime,
    AmcRuntime,
    EdfVdRuntime,
    Scenario,
    all_hi_scenario,
    all_lo_scenario,
    falsification_horizon,
    falsify,
    random_scenario,
    simulate,
)

from conftest import hc, lc


def test_single_hc_all_hi_exact_fit():
    tasks = [hc(2, 1, 2)]
    horizon = falsification_horizon(tasks)
    report = simulate(tasks, EdfVdRuntime({0: 2}), all_hi_scenario(tasks, horizon), horizon)
    assert report.miss is None
    assert report.switch_time == 1


def test_two_hc_all_hi_overload_misses():
    tasks = [hc(2, 1, 2, id=0), hc(2, 1, 2, id=1)]
    horizon = falsification_horizon(tasks)
    report = simulate(
        tasks, EdfVdRuntime({0: 2, 1: 2}), all_hi_scenario(tasks, horizon), horizon
    )
    assert report.miss is not None


def test_all_lo_on_rta_accepted_set_amc_runtime():
    tasks = [hc(5, 1, 2, id=0), lc(10, 1, id=1), hc(20, 2, 3, id=2)]
    order = assign_priorities(tasks)
    horizon = falsification_horizon(tasks)
    report = simulate(tasks, AmcRuntime(order), all_lo_scenario(tasks, horizon), horizon)
    assert report.miss is None
    assert report.switch_time is None


def test_lc_dropped_at_switch_not_reported():
    # LC job would miss after the switch; only HC misses count then
    tasks = [hc(4, 1, 4, id=0), lc(4, 2, id=1)]
    horizon = falsification_horizon(tasks)
    scenario = all_hi_scenario(tasks, horizon)
    report = simulate(tasks, AmcRuntime((0, 1)), scenario, horizon)
    assert report.switch_time == 1
    assert report.miss is None


def test_lc_miss_before_switch_is_reported():
    tasks = [lc(4, 3, id=0), lc(4, 3, id=1)]
    horizon = falsification_horizon(tasks)
    report = simulate(tasks, AmcRuntime((0, 1)), all_lo_scenario(tasks, horizon), horizon)
    assert report.miss == (1, 4)


def test_work_conservation_no_idle_while_ready():
    tasks = [hc(4, 2, 3, id=0), lc(8, 3, id=1)]
    horizon = falsification_horizon(tasks)
    trace = []
    simulate(tasks, AmcRuntime((0, 1)), all_lo_scenario(tasks, horizon), horizon, trace=trace)
    busy = sum(end - start for start, end, tid in trace if tid is not None)
    # every released job finishes well inside the horizon here
    expected = sum(t.C_L * len(range(0, horizon, t.T)) for t in tasks)
    assert busy == expected
    for (s1, e1, _), (s2, e2, _) in zip(trace, trace[1:]):
        assert e1 == s2  # gap-free trace


def test_trace_determinism(rng):
    tasks = [hc(6, 2, 4, id=0), lc(9, 2, id=1), hc(12, 1, 3, id=2)]
    horizon = falsification_horizon(tasks)
    scenario = random_scenario(tasks, horizon, rng)
    t1, t2 = [], []
    r1 = simulate(tasks, EdfVdRuntime({0: 4, 2: 9}), scenario, horizon, trace=t1)
    r2 = simulate(tasks, EdfVdRuntime({0: 4, 2: 9}), scenario, horizon, trace=t2)
    assert r1 == r2 and t1 == t2


def test_horizon_must_cover_deadlines():
    tasks = [hc(10, 1, 2)]
    with pytest.raises(ValueError):
        simulate(tasks, EdfVdRuntime({0: 10}), Scenario({0: ()}), horizon=5)


def test_falsify_accepted_single_task_sets(rng):
    for tasks in ([hc(5, 2, 4)], [lc(7, 3)]):
        for test_name in ("edfvd", "amc-rtb", "amc-max", "ecdf"):
            assert falsify(test_name, tasks, 5, rng) is None


def test_falsify_rejects_unaccepted_input(rng):
    tasks = [lc(4, 3, id=0), lc(4, 3, id=1)]
    with pytest.raises(ValueError):
        falsify("edfvd", tasks, 3, rng)


def test_falsifier_catches_broken_test(rng):
    # an always-true "test" (plain deadlines, no admission control) must be
    # refuted on an overloaded set
    tasks = [lc(4, 3, id=0), lc(4, 3, id=1)]
    counterexample = falsify_runtime(EdfVdRuntime({}), tasks, 3, rng)
    assert counterexample is not None
    assert counterexample.report.miss is not None


def test_falsification_horizon_formula():
    tasks = [hc(6, 1, 2, id=0), lc(8, 1, id=1)]
    assert falsification_horizon(tasks) == 2 * 24 + 8
    tasks = [hc(400, 1, 2, id=0), lc(399, 1, id=1)]
    assert falsification_horizon(tasks) == 100_000 + 400
