"""Acceptance-ratio and WAR figure construction.

Figures are line+marker charts with the y axis clamped to [0, 1]; the
legend carries one strategy-test label per curve. SVG output is rendered
deterministically (fixed hash salt, no date metadata) so re-running on the
same CSV reproduces the file byte for byte.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import matplotlib

matplotlib.use("Agg")
matplotlib.rcParams["svg.hashsalt"] = "plotkit"

import matplotlib.pyplot as plt

from .records import (
    PlotError,
    read_acceptance_csv,
    read_war_csv,
    select,
)

MARKERS = ["o", "s", "^", "v", "D", "x", "*", "P"]


@dataclass(frozen=True)
class FigureSpec:
    csv_path: Path
    out_path: Path
    m: int
    deadline_model: str
    tests: Optional[tuple[str, ...]] = None
    p_h: Optional[float] = None
    title: Optional[str] = None


def _series_label(strategy: str, test: str) -> str:
    return f"{strategy}-{test}"


def _ordered_series(rows, x_attr: str, y_attr: str):
    series: dict[str, list[tuple[float, float]]] = {}
    for row in rows:
        label = _series_label(row.strategy, row.test)
        series.setdefault(label, []).append((getattr(row, x_attr), getattr(row, y_attr)))
    for label, points in series.items():
        points.sort()
        xs = [p[0] for p in points]
        if len(set(xs)) != len(xs):
            raise PlotError(
                f"series {label!r} has duplicate x values; narrow the filter "
                "(e.g. pass a single P_H)"
            )
    return dict(sorted(series.items()))


def build_acceptance_figure(spec: FigureSpec):
    rows = select(
        read_acceptance_csv(spec.csv_path),
        m=spec.m,
        deadline_model=spec.deadline_model,
        tests=spec.tests,
        p_h=spec.p_h,
    )
    p_hs = {r.p_h for r in rows}
    if spec.p_h is None and len(p_hs) > 1:
        raise PlotError(f"multiple P_H values {sorted(p_hs)} in selection; pass one")
    series = _ordered_series(rows, "u_b", "acceptance_ratio")

    fig, ax = plt.subplots(figsize=(6.4, 4.0))
    for i, (label, points) in enumerate(series.items()):
        ax.plot(
            [p[0] for p in points],
            [p[1] for p in points],
            marker=MARKERS[i % len(MARKERS)],
            linewidth=1.4,
            markersize=4.5,
            label=label,
        )
    ax.set_xlabel("total normalized utilization $U_B$")
    ax.set_ylabel("acceptance ratio")
    ax.set_ylim(-0.02, 1.02)
    ax.grid(True, linewidth=0.3, alpha=0.6)
    ax.legend(loc="lower left", fontsize=8)
    ax.set_title(spec.title or f"m={spec.m}, {spec.deadline_model} deadlines")
    fig.tight_layout()
    return fig


def build_war_figure(spec: FigureSpec):
    rows = select(
        read_war_csv(spec.csv_path),
        m=spec.m,
        deadline_model=spec.deadline_model,
        tests=spec.tests,
    )
    series = _ordered_series(rows, "p_h", "war")

    fig, ax = plt.subplots(figsize=(6.4, 4.0))
    for i, (label, points) in enumerate(series.items()):
        ax.plot(
            [p[0] for p in points],
            [p[1] for p in points],
            marker=MARKERS[i % len(MARKERS)],
            linewidth=1.4,
            markersize=4.5,
            label=label,
        )
    ax.set_xlabel("fraction of HC tasks $P_H$")
    ax.set_ylabel("weighted acceptance ratio")
    ax.set_ylim(-0.02, 1.02)
    ax.grid(True, linewidth=0.3, alpha=0.6)
    ax.legend(loc="lower left", fontsize=8)
    ax.set_title(spec.title or f"m={spec.m}, {spec.deadline_model} deadlines")
    fig.tight_layout()
    return fig


def _save(fig, out_path: Path) -> Path:
    out_path = Path(out_path)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(out_path, metadata={"Date": None} if out_path.suffix == ".svg" else None)
    plt.close(fig)
    return out_path


def render_acceptance(spec: FigureSpec) -> Path:
    """Render the acceptance-ratio curves for one (m, deadline model)."""
    return _save(build_acceptance_figure(spec), spec.out_path)


def render_war(spec: FigureSpec) -> Path:
    """Render the WAR-versus-P_H chart for one (m, deadline model)."""
    return _save(build_war_figure(spec), spec.out_path)
