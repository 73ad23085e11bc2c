"""Command-line front end for the figure renderer.

One invocation renders one figure from one CSV.  Exit codes: 0 success,
1 usage or input problem (including an empty CSV, which produces a
warning and no figure), 2 runtime failure.
"""

from __future__ import annotations

import argparse
import sys
import warnings
from pathlib import Path
from typing import Optional

from .render import KINDS, NoDataError, PlotSpec, SchemaError, render

USAGE_ERROR = 1
RUNTIME_ERROR = 2


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on usage errors; the contract here is 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(USAGE_ERROR)


def build_parser() -> _Parser:
    parser = _Parser(
        prog="plot",
        description="Render a violin or boxen figure from a campaign CSV.",
    )
    parser.add_argument("--in", dest="input_csv", required=True, metavar="CSV",
                        help="input CSV (tournaments.csv or combined.csv)")
    parser.add_argument("--metric", required=True, metavar="COL",
                        help="numeric column to plot")
    parser.add_argument("--by", required=True, metavar="COL",
                        help="column whose values form the groups")
    parser.add_argument("--kind", required=True, choices=KINDS)
    parser.add_argument("--out", required=True, metavar="PNG",
                        help="output image path")
    return parser


def main(argv: Optional[list] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    spec = PlotSpec(
        input_csv=Path(args.input_csv),
        metric=args.metric,
        by=args.by,
        kind=args.kind,
        out=Path(args.out),
    )
    try:
        # Re-emit data-quality warnings on stderr; under a test runner the
        # warnings machinery may swallow them otherwise.
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            result = render(spec)
        for item in caught:
            if issubclass(item.category, UserWarning):
                print(f"{parser.prog}: warning: {item.message}", file=sys.stderr)
    except NoDataError as exc:
        print(f"{parser.prog}: warning: {exc}; no figure written", file=sys.stderr)
        return USAGE_ERROR
    except SchemaError as exc:
        print(f"{parser.prog}: error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except Exception as exc:
        print(f"{parser.prog}: error: {exc}", file=sys.stderr)
        return RUNTIME_ERROR
    groups = ", ".join(str(g) for g in result.groups)
    print(f"wrote {result.out_path} ({result.n_rows} rows; groups: {groups})")
    return 0


if __name__ == "__main__":
    sys.exit(main())
