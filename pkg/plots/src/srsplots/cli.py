"""Command-line front end: srsplot plot-cdf / plot-tradeoff."""
from __future__ import annotations

import argparse
import sys

from .figures import plot_cdf, plot_tradeoff
from .io import PLOTTABLE_COLUMNS, SchemaError


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="srsplot",
        description="Render figures from srssim campaign outputs.")
    sub = parser.add_subparsers(dest="command", required=True)

    cdf = sub.add_parser("plot-cdf", help="empirical CDF per samples.csv")
    cdf.add_argument("--in", dest="inputs", action="append", required=True,
                     metavar="SAMPLES_CSV")
    cdf.add_argument("--column", choices=PLOTTABLE_COLUMNS,
                     default="contamination_dbm")
    cdf.add_argument("--out", required=True, metavar="IMAGE")

    trade = sub.add_parser("plot-tradeoff",
                           help="median contamination vs throughput points")
    trade.add_argument("--in", dest="inputs", action="append", required=True,
                       metavar="SUMMARY_JSON")
    trade.add_argument("--label", dest="labels", action="append",
                       help="per-point annotation, one per --in")
    trade.add_argument("--out", required=True, metavar="IMAGE")

    args = parser.parse_args(argv)
    try:
        if args.command == "plot-cdf":
            plot_cdf(args.inputs, args.column, args.out)
        else:
            plot_tradeoff(args.inputs, args.out, labels=args.labels)
    except SchemaError as e:
        print(f"input error: {e}", file=sys.stderr)
        return 1
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
