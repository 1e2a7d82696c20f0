"""EDF-VD utilization test for implicit-deadline dual-criticality sets.

The verdict is computed twice, once through the published inequality on
U_LL and once through the scaling-factor form, and the two must agree;
exact rational arithmetic makes the agreement unconditional.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence

from .model import Task, bin_utilizations


@dataclass(frozen=True)
class EdfVdVerdict:
    schedulable: bool
    x: Optional[Fraction] = None


def inequality_form(u_ll, u_hl, u_hh) -> bool:
    """U_LL <= (1 - U_HH) / (1 - (U_HH - U_HL)), after the plain-EDF case."""
    if u_ll + u_hh <= 1:
        return True
    if u_ll >= 1 or u_hh >= 1:
        return False
    return u_ll * (1 - (u_hh - u_hl)) <= 1 - u_hh


def scaling_form(u_ll, u_hl, u_hh) -> bool:
    """x*U_LL + U_HH <= 1 with x = U_HL / (1 - U_LL)."""
    if u_ll + u_hh <= 1:
        return True
    if u_ll >= 1 or u_hh >= 1:
        return False
    return u_hl * u_ll <= (1 - u_hh) * (1 - u_ll)


def edfvd_schedulable(tasks: Iterable[Task]) -> EdfVdVerdict:
    """Schedulability of one processor's tasks under EDF-VD.

    Accepts only implicit-deadline tasks. Returns x = 1 when plain EDF
    suffices (U_LL + U_HH <= 1), otherwise x = U_HL / (1 - U_LL) when the
    utilization inequality admits the set.
    """
    tasks = list(tasks)
    for t in tasks:
        if t.D != t.T:
            raise ValueError(f"task {t.id} is constrained-deadline; EDF-VD needs D == T")
    u_ll, u_hl, u_hh = bin_utilizations(tasks)

    by_inequality = inequality_form(u_ll, u_hl, u_hh)
    by_scaling = scaling_form(u_ll, u_hl, u_hh)
    assert by_inequality == by_scaling, (
        f"inequality and scaling forms disagree on ({u_ll}, {u_hl}, {u_hh})"
    )

    if u_ll + u_hh <= 1:
        return EdfVdVerdict(schedulable=True, x=Fraction(1))
    if not by_inequality:
        return EdfVdVerdict(schedulable=False)
    x = u_hl / (1 - u_ll)
    assert x * u_ll + u_hh <= 1
    return EdfVdVerdict(schedulable=True, x=x)


def edfvd_accepts(tasks: Iterable[Task]) -> bool:
    return edfvd_schedulable(tasks).schedulable


def edfvd_virtual_deadlines(tasks: Sequence[Task], x: Fraction) -> Mapping[int, int]:
    """Integer virtual deadline floor(x*T) per HC task, clamped to >= C_L."""
    deadlines: dict[int, int] = {}
    for t in tasks:
        if t.is_hc:
            deadlines[t.id] = max(t.C_L, int(x * t.T))  # Fraction int() truncates = floor for x >= 0
    return deadlines
