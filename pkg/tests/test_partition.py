import random
from collections import Counter

import pytest

from mcsched.edfvd import edfvd_accepts
from mcsched.model import bin_utilizations
from mcsched.partition import (
    STRATEGIES,
    TEST_FUNCTIONS,
    ProcessorBin,
    candidate_processors,
    order_tasks,
    partition,
    partition_by_name,
)

from conftest import hc, lc, taskset


@pytest.fixture
def example_a():
    # four tasks on two processors, T=100: CA-UDP succeeds, CA-Wu-F fails
    return taskset(
        hc(100, 50, 60),
        hc(100, 10, 50),
        hc(100, 35, 40),
        lc(100, 50),
        m=2,
    )


@pytest.fixture
def example_b():
    # heavy LC task: CA-UDP fails, CU-UDP succeeds
    return taskset(
        hc(100, 30, 60),
        hc(100, 20, 35),
        lc(100, 90),
        m=2,
    )


def test_order_cu_udp():
    ts = taskset(hc(10, 1, 6), lc(10, 9), hc(20, 1, 7))
    ordered = order_tasks(STRATEGIES["CU-UDP"], ts)
    assert [t.id for t in ordered] == [1, 0, 2]


def test_order_ca_udp():
    ts = taskset(hc(10, 1, 6), lc(10, 9), hc(20, 1, 7))
    ordered = order_tasks(STRATEGIES["CA-UDP"], ts)
    assert [t.id for t in ordered] == [0, 2, 1]


def test_order_ca_nosort_keeps_input_order():
    ts = taskset(hc(10, 1, 2), lc(10, 9), hc(20, 1, 14), lc(10, 1))
    ordered = order_tasks(STRATEGIES["CA(nosort)-F-F"], ts)
    assert [t.id for t in ordered] == [0, 2, 1, 3]


def test_order_eca_heavy_lc_first():
    ts = taskset(hc(10, 1, 6), lc(10, 9), hc(20, 1, 7), lc(10, 2))
    ordered = order_tasks(STRATEGIES["ECA-Wu-F"], ts)
    assert [t.id for t in ordered] == [1, 0, 2, 3]


def _bins_with_diffs(diffs):
    bins = []
    for k, diff in enumerate(diffs):
        b = ProcessorBin(index=k)
        b.add(hc(100, 1, 1 + int(diff * 100), id=k))
        bins.append(b)
    return bins


def test_candidates_udp_by_increasing_difference():
    bins = _bins_with_diffs([0.6, 0.0])
    got = candidate_processors(STRATEGIES["CA-UDP"], hc(10, 1, 2, id=9), bins)
    assert [b.index for b in got] == [1, 0]


def test_candidates_wu_by_increasing_uhh():
    bins = [ProcessorBin(index=0), ProcessorBin(index=1)]
    bins[0].add(hc(100, 10, 60, id=0))
    bins[1].add(hc(100, 10, 50, id=1))
    got = candidate_processors(STRATEGIES["CA-Wu-F"], hc(10, 1, 2, id=9), bins)
    assert [b.index for b in got] == [1, 0]


def test_candidates_tie_breaks_by_index():
    bins = [ProcessorBin(index=0), ProcessorBin(index=1)]
    got = candidate_processors(STRATEGIES["CU-UDP"], hc(10, 1, 2, id=9), bins)
    assert [b.index for b in got] == [0, 1]
    got = candidate_processors(STRATEGIES["CU-UDP"], lc(10, 1, id=9), bins)
    assert [b.index for b in got] == [0, 1]


def test_worked_example_a(example_a):
    result = partition_by_name(example_a, 2, "CA-UDP", "edfvd")
    assert result.success
    assert result.bins == ((0, 2), (1, 3))

    result = partition_by_name(example_a, 2, "CA-Wu-F", "edfvd")
    assert not result.success
    assert result.bins == ((0,), (1, 2))
    assert result.failed_task == 3
    assert result.failed_phase == "LC"


def test_worked_example_b(example_b):
    result = partition_by_name(example_b, 2, "CA-UDP", "edfvd")
    assert not result.success
    assert result.failed_task == 2

    result = partition_by_name(example_b, 2, "CU-UDP", "edfvd")
    assert result.success
    assert result.bins == ((2,), (0, 1))


def test_single_processor_reduces_to_the_test(example_b):
    for name in STRATEGIES:
        result = partition_by_name(example_b, 1, name, "edfvd")
        assert result.success == edfvd_accepts(example_b.tasks)


def test_failure_tries_every_processor(example_b):
    calls = []

    def spying_test(tasks):
        calls.append(tuple(t.id for t in tasks))
        return edfvd_accepts(tasks)

    result = partition(example_b, 2, STRATEGIES["CA-UDP"], spying_test)
    assert not result.success
    failing_trials = [c for c in calls if result.failed_task in c]
    assert len(failing_trials) == 2


def test_conservation_on_success(example_a):
    result = partition_by_name(example_a, 2, "CA-UDP", "edfvd")
    assigned = Counter(tid for bin_ids in result.bins for tid in bin_ids)
    assert assigned == Counter(t.id for t in example_a.tasks)


def test_bin_caches_match_recomputation(example_a):
    bins = [ProcessorBin(index=k) for k in range(3)]
    rng = random.Random(5)
    pool = list(example_a.tasks)
    for task in pool:
        rng.choice(bins).add(task)
    for b in bins:
        assert (b.u_ll, b.u_hl, b.u_hh) == bin_utilizations(b.tasks)
        assert b.util_difference == b.u_hh - b.u_hl


def test_candidate_order_is_test_independent(example_a):
    traces = {}
    for test_name in ("edfvd", "amc-max"):
        trace = []
        partition(example_a, 2, STRATEGIES["CA-UDP"], TEST_FUNCTIONS[test_name], trace=trace)
        traces[test_name] = trace
    seen = {}
    for test_name, trace in traces.items():
        for task_id, bins_fp, order in trace:
            key = (task_id, bins_fp)
            if key in seen:
                assert seen[key] == order
            else:
                seen[key] = order


def test_determinism(example_a):
    first = partition_by_name(example_a, 2, "CU-UDP", "edfvd")
    second = partition_by_name(example_a, 2, "CU-UDP", "edfvd")
    assert first == second
