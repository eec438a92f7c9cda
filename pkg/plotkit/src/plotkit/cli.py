"""The ``plotkit`` command: figures from experiment CSVs, nothing else.

Subcommands
-----------
regret          prefix-regret curves from trajectory CSV globs
counterexample  cumulative-reward comparison of two experiments in one run dir
trend           final-swap-by-horizon plus doubling-ratio chart from a summary

Every subcommand validates its inputs before writing; on any failure the
process prints one ``plotkit: error:`` line to stderr and exits with 2,
leaving no partial image behind.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .figures import counterexample_figure, plot_regret, trend_ratio_chart
from .io import PlotkitError, find_runs


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="plotkit",
        description="render figures from bandit-experiment CSV logs",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_regret = sub.add_parser(
        "regret", help="prefix-regret curves from trajectory CSVs"
    )
    p_regret.add_argument(
        "globs", nargs="+", metavar="glob", help="trajectory CSV paths or globs"
    )
    p_regret.add_argument("--out", required=True, metavar="fig.png")
    p_regret.add_argument(
        "--metric", choices=("swap", "external", "reward"), default="swap"
    )
    p_regret.add_argument(
        "--loglog", action="store_true", help="log scale on both axes"
    )

    p_counter = sub.add_parser(
        "counterexample",
        help="cumulative-reward comparison of the needle-instance pair",
    )
    p_counter.add_argument(
        "runs_dir", help="directory holding both experiments' trajectory CSVs"
    )
    p_counter.add_argument("--out", required=True, metavar="fig.png")
    p_counter.add_argument(
        "--replica-name",
        default="counterexample",
        help="experiment name of the uniform-marginal learner's runs",
    )
    p_counter.add_argument(
        "--fixed-name",
        default="counterexample-fixed",
        help="experiment name of the spanner-based learner's runs",
    )

    p_trend = sub.add_parser(
        "trend", help="swap-regret growth and doubling ratios from a summary CSV"
    )
    p_trend.add_argument("summary", help="path to a <name>_summary.csv file")
    p_trend.add_argument("--out", required=True, metavar="fig.png")

    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "regret":
            out = plot_regret(
                find_runs(args.globs), args.out,
                metric=args.metric, loglog=args.loglog,
            )
        elif args.command == "counterexample":
            base = Path(args.runs_dir)
            out = counterexample_figure(
                find_runs(base / f"{args.replica_name}_T*_seed*.csv"),
                find_runs(base / f"{args.fixed_name}_T*_seed*.csv"),
                args.out,
            )
        else:
            out = trend_ratio_chart(args.summary, args.out)
    except PlotkitError as err:
        print(f"plotkit: error: {err}", file=sys.stderr)
        return 2
    print(out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
