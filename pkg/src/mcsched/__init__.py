"""Partitioned multiprocessor scheduling of dual-criticality task systems."""

from .amc import RtaResult, amc_max, amc_rtb, assign_priorities, rta_lo
from .ecdf import DbfVerdict, dbf_hi, dbf_lo, ecdf_schedulable, lmax_bound
from .edfvd import EdfVdVerdict, edfvd_schedulable, edfvd_virtual_deadlines
from .experiments import (
    ExperimentConfig,
    ExperimentOutcome,
    ExperimentRecord,
    run_experiment,
    weighted_acceptance_ratio,
)
from .generator import GenerationError, GeneratorConfig, draw_period, generate_taskset, u_b
from .model import (
    CONSTRAINED,
    HC,
    IMPLICIT,
    LC,
    SystemUtilizations,
    Task,
    TaskSet,
    bin_utilizations,
    load_taskset,
    make_task,
    save_taskset,
    system_utilizations,
    util_difference,
)
from .partition import (
    STRATEGIES,
    TEST_FUNCTIONS,
    Partition,
    ProcessorBin,
    Strategy,
    candidate_processors,
    order_tasks,
    partition,
)
from .simulator import (
    AmcRuntime,
    Counterexample,
    EdfVdRuntime,
    Scenario,
    SimReport,
    all_hi_scenario,
    all_lo_scenario,
    falsify,
    falsify_runtime,
    random_scenario,
    simulate,
)

__all__ = [name for name in dir() if not name.startswith("_")]
