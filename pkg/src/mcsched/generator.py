"""Random dual-criticality task-set generation.

Sets are grown toward un-normalized utilization targets m*U_HH, m*U_HL,
m*U_LL: a target task count is drawn from [m+1, 5m], each position is HC
with probability P_H, free tasks draw utilizations uniformly over the
feasibility band of the remaining class budget, and the final task of
each class is clamped so the accumulated sums land within the tolerance. Whole attempts are rejected when the count split
cannot meet the targets or the post-rounding sums miss the tolerance; a
bounded number of attempts is made before generation is declared failed
for that configuration.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Optional

from .model import CONSTRAINED, HC, IMPLICIT, LC, Task, TaskSet, make_task


class GenerationError(RuntimeError):
    """Raised when no attempt satisfied the targets within the retry budget."""


@dataclass(frozen=True)
class GeneratorConfig:
    m: int
    p_h: float
    u_hh: float
    u_hl: float
    u_ll: float
    u_min: float = 0.001
    u_max: float = 0.99
    t_lo: int = 10
    t_hi: int = 500
    deadline_model: str = IMPLICIT
    n_lo: Optional[int] = None
    n_hi: Optional[int] = None
    tolerance: float = 0.05
    max_attempts: int = 200

    def __post_init__(self) -> None:
        if self.u_min > self.u_max:
            raise ValueError("u_min must not exceed u_max")
        if self.u_hl > self.u_hh:
            raise ValueError("U_HL must not exceed U_HH")
        if min(self.u_hh, self.u_hl, self.u_ll) < 0:
            raise ValueError("utilization targets must be nonnegative")
        if self.deadline_model not in (IMPLICIT, CONSTRAINED):
            raise ValueError(f"unknown deadline model {self.deadline_model!r}")

    @property
    def n_bounds(self) -> tuple[int, int]:
        return (
            self.n_lo if self.n_lo is not None else self.m + 1,
            self.n_hi if self.n_hi is not None else 5 * self.m,
        )


def draw_period(rng: random.Random, t_lo: int, t_hi: int) -> int:
    """Log-uniform integer period in [t_lo, t_hi]."""
    if t_lo >= t_hi:
        return t_lo
    value = int(math.exp(rng.uniform(math.log(t_lo), math.log(t_hi))))
    return min(max(value, t_lo), t_hi)


def u_b(u_hh: float, u_hl: float, u_ll: float) -> float:
    """Total normalized utilization U_B = max(U_HL + U_LL, U_HH)."""
    return max(u_hl + u_ll, u_hh)


def _draw_class_utils(
    rng: random.Random,
    count: int,
    target_main: float,
    target_side: Optional[float],
    u_min: float,
    u_max: float,
) -> Optional[list[tuple[float, Optional[float]]]]:
    """Utilization draws for one criticality class.

    HC tasks carry a side value (u_L drawn from [u_min, u_H]); LC tasks
    carry only the main value. Free draws are uniform over the part of
    their range that keeps the remaining class budget reachable by the
    remaining slots (each slot holds between u_min and u_max); the band is
    the full [u_min, u_max] (respectively [u_min, u_H]) whenever the
    budget does not bind. The final task is clamped to the remaining
    target. Returns None when the class quota cannot meet the target.
    """
    draws: list[tuple[float, Optional[float]]] = []
    sum_main = 0.0
    sum_side = 0.0
    for i in range(count - 1):
        slots_after = count - 1 - i
        rem_main = target_main - sum_main
        lo_main = max(u_min, rem_main - slots_after * u_max)
        hi_main = min(u_max, rem_main - slots_after * u_min)
        if hi_main < lo_main:
            return None
        u = rng.uniform(lo_main, hi_main)
        if target_side is not None:
            rem_side = target_side - sum_side
            lo_side = max(u_min, rem_side - slots_after * u_max)
            hi_side = min(u, rem_side - slots_after * u_min)
            if hi_side < lo_side:
                return None
            side = rng.uniform(lo_side, hi_side)
        else:
            side = None
        draws.append((u, side))
        sum_main += u
        if side is not None:
            sum_side += side
    final_main = target_main - sum_main
    if not (u_min - 1e-12 <= final_main <= u_max):
        return None
    final_main = max(final_main, u_min)
    if target_side is not None:
        final_side = min(final_main, max(u_min, target_side - sum_side))
        draws.append((final_main, final_side))
    else:
        draws.append((final_main, None))
    return draws


def generate_taskset(config: GeneratorConfig, rng: random.Random) -> TaskSet:
    """Generate one task set honoring the configuration targets.

    Raises GenerationError after max_attempts rejected attempts.
    """
    m = config.m
    target_hh = m * config.u_hh
    target_hl = m * config.u_hl
    target_ll = m * config.u_ll
    tol = config.tolerance * m
    n_lo, n_hi = config.n_bounds

    for _ in range(config.max_attempts):
        n_target = rng.randint(n_lo, n_hi)
        chis = [HC if rng.random() < config.p_h else LC for _ in range(n_target)]
        n_hc = sum(1 for c in chis if c == HC)
        n_lc = n_target - n_hc

        if n_hc == 0:
            if target_hh > tol or target_hl > tol:
                continue
            hc_draws = []
        else:
            hc_draws = _draw_class_utils(
                rng, n_hc, target_hh, target_hl, config.u_min, config.u_max
            )
            if hc_draws is None:
                continue
        if n_lc == 0:
            if target_ll > tol:
                continue
            lc_draws = []
        else:
            lc_draws = _draw_class_utils(
                rng, n_lc, target_ll, None, config.u_min, config.u_max
            )
            if lc_draws is None:
                continue

        tasks: list[Task] = []
        hc_queue = iter(hc_draws)
        lc_queue = iter(lc_draws)
        valid = True
        for idx, chi in enumerate(chis):
            T = draw_period(rng, config.t_lo, config.t_hi)
            if chi == HC:
                u_h, u_l = next(hc_queue)
                C_H = math.ceil(u_h * T)
                C_L = math.ceil(u_l * T)
            else:
                (u_l, _) = next(lc_queue)
                C_L = C_H = math.ceil(u_l * T)
            if C_H > T:
                valid = False
                break
            if config.deadline_model == IMPLICIT:
                D = T
            else:
                D = rng.randint(C_H, T)
            tasks.append(make_task(T=T, chi=chi, C_L=C_L, C_H=C_H, D=D, id=idx))
        if not valid:
            continue

        # Post-rounding accounting: downstream consumes the recomputed
        # utilizations, so the tolerance applies after the ceilings.
        got_hh = float(sum(t.u_H for t in tasks if t.is_hc))
        got_hl = float(sum(t.u_L for t in tasks if t.is_hc))
        got_ll = float(sum(t.u_L for t in tasks if not t.is_hc))
        if (
            abs(got_hh - target_hh) <= tol
            and abs(got_hl - target_hl) <= tol
            and abs(got_ll - target_ll) <= tol
        ):
            return TaskSet(
                tasks=tuple(tasks), m=m, deadline_model=config.deadline_model
            )
    raise GenerationError(
        f"no admissible task set in {config.max_attempts} attempts for "
        f"targets ({config.u_hh}, {config.u_hl}, {config.u_ll}) at m={m}"
    )
