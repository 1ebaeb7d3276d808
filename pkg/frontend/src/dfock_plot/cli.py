"""Command-line front end.

    dfock-plot --figure N --csv PATH --out PATH [--format svg|png]

Exit codes: 0 success, 1 rendering/validation failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import sys

from .errors import PlotError
from .recipes import FIGURE_RECIPES
from .render import render

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dfock-plot", description=__doc__.splitlines()[0]
    )
    parser.add_argument("--figure", type=int, required=True,
                        choices=sorted(FIGURE_RECIPES), metavar="1..8")
    parser.add_argument("--csv", required=True, help="sweep CSV input path")
    parser.add_argument("--out", required=True, help="image output path")
    parser.add_argument("--format", choices=["svg", "png"], default="svg")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    recipe = FIGURE_RECIPES[args.figure]
    try:
        report = render(recipe, args.csv, args.out, args.format)
    except PlotError as exc:
        print(f"dfock-plot: {exc}", file=sys.stderr)
        return EXIT_FAILURE
    except OSError as exc:
        print(f"dfock-plot: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if report.na_dropped:
        print(
            f"dfock-plot: warning: dropped {report.na_dropped} NA rows",
            file=sys.stderr,
        )
    print(
        f"dfock-plot: wrote {report.out_path} "
        f"({report.curves} curves, {report.points_plotted} points)"
    )
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
