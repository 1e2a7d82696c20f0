"""CSV readers for the experiment harness outputs.

results.csv columns: strategy,test,m,deadline_model,p_h,u_b,n_total,
n_accepted,acceptance_ratio. war.csv columns: strategy,test,m,
deadline_model,p_h,war.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence


class PlotError(ValueError):
    """Raised for empty selections or malformed inputs."""


@dataclass(frozen=True)
class AcceptanceRow:
    strategy: str
    test: str
    m: int
    deadline_model: str
    p_h: float
    u_b: float
    acceptance_ratio: float


@dataclass(frozen=True)
class WarRow:
    strategy: str
    test: str
    m: int
    deadline_model: str
    p_h: float
    war: float


def read_acceptance_csv(path) -> list[AcceptanceRow]:
    rows = []
    with open(path, "r", encoding="utf-8", newline="") as handle:
        for raw in csv.DictReader(handle):
            rows.append(
                AcceptanceRow(
                    strategy=raw["strategy"],
                    test=raw["test"],
                    m=int(raw["m"]),
                    deadline_model=raw["deadline_model"],
                    p_h=float(raw["p_h"]),
                    u_b=float(raw["u_b"]),
                    acceptance_ratio=float(raw["acceptance_ratio"]),
                )
            )
    if not rows:
        raise PlotError(f"no data rows in {Path(path)}")
    return rows


def read_war_csv(path) -> list[WarRow]:
    rows = []
    with open(path, "r", encoding="utf-8", newline="") as handle:
        for raw in csv.DictReader(handle):
            rows.append(
                WarRow(
                    strategy=raw["strategy"],
                    test=raw["test"],
                    m=int(raw["m"]),
                    deadline_model=raw["deadline_model"],
                    p_h=float(raw["p_h"]),
                    war=float(raw["war"]),
                )
            )
    if not rows:
        raise PlotError(f"no data rows in {Path(path)}")
    return rows


def select(
    rows: Sequence,
    m: int,
    deadline_model: str,
    tests: Optional[Sequence[str]] = None,
    p_h: Optional[float] = None,
):
    out = [
        r
        for r in rows
        if r.m == m
        and r.deadline_model == deadline_model
        and (tests is None or r.test in tests)
        and (p_h is None or r.p_h == p_h)
    ]
    if not out:
        raise PlotError(
            f"filter selected no rows (m={m}, deadline_model={deadline_model!r}, "
            f"tests={tests}, p_h={p_h})"
        )
    return out
