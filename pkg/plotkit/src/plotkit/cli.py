"""Command-line interface: plot acceptance|war."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .figures import FigureSpec, render_acceptance, render_war
from .records import PlotError


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="plot")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("acceptance", "war"):
        p = sub.add_parser(name)
        p.add_argument("--csv", required=True)
        p.add_argument("--m", type=int, required=True)
        p.add_argument("--deadline-model", required=True, choices=("implicit", "constrained"))
        p.add_argument("--out", required=True)
        p.add_argument("--tests", nargs="+", help="restrict to these schedulability tests")
        p.add_argument("--title")
        if name == "acceptance":
            p.add_argument("--p-h", type=float, help="select one P_H when several are present")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    spec = FigureSpec(
        csv_path=Path(args.csv),
        out_path=Path(args.out),
        m=args.m,
        deadline_model=args.deadline_model,
        tests=tuple(args.tests) if args.tests else None,
        p_h=getattr(args, "p_h", None),
        title=args.title,
    )
    try:
        out = render_acceptance(spec) if args.command == "acceptance" else render_war(spec)
    except (PlotError, FileNotFoundError) as exc:
        print(str(exc), file=sys.stderr)
        return 1
    print(out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
