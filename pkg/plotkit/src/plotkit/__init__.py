"""Figure rendering for partitioned mixed-criticality scheduling CSVs."""

from .figures import FigureSpec, build_acceptance_figure, build_war_figure, render_acceptance, render_war
from .records import AcceptanceRow, PlotError, WarRow, read_acceptance_csv, read_war_csv

__all__ = [
    "AcceptanceRow",
    "FigureSpec",
    "PlotError",
    "WarRow",
    "build_acceptance_figure",
    "build_war_figure",
    "read_acceptance_csv",
    "read_war_csv",
    "render_acceptance",
    "render_war",
]
