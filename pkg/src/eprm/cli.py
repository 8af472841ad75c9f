"""Command-line interface.

Subcommands: ``simulate`` (generate a case corpus), ``decide`` (run the
decision methods over a corpus), ``stats`` (cross-tab and rates from a
results file), ``trace`` (per-case walkthrough plus plot-ready data) and
``run-all`` (the whole pipeline).  Exit codes: 0 success, 1 invalid input,
2 internal invariant violation.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from pathlib import Path

from . import harness
from . import simulate as sim


def _add_generation_options(parser):
    parser.add_argument("--aircraft", type=int, default=None, help="aircraft per case")
    parser.add_argument("--sensors", type=int, default=None, help="sensors per case")
    parser.add_argument("--radius", type=float, default=None, help="sensor detection radius")
    parser.add_argument("--dt", type=float, default=None, help="sampling interval")
    parser.add_argument("--sigma2", type=float, default=None, help="velocity variance")
    parser.add_argument("--speed-min", type=float, default=None, help="slowest base speed")
    parser.add_argument("--speed-max", type=float, default=None, help="fastest base speed")
    parser.add_argument("--full", action="store_true", help="include trajectories in case files")


def _generation_config(args):
    overrides = {
        "n_aircraft": args.aircraft,
        "n_sensors": args.sensors,
        "sensor_radius": args.radius,
        "dt": args.dt,
        "sigma2": args.sigma2,
        "speed_min": args.speed_min,
        "speed_max": args.speed_max,
    }
    overrides = {k: v for k, v in overrides.items() if v is not None}
    return replace(sim.GenerationConfig(), **overrides)


def _cmd_simulate(args):
    params = _generation_config(args)
    paths = sim.write_corpus(args.out, params, args.seed, args.cases, full=args.full)
    print(f"wrote {len(paths)} case files to {args.out}")
    return 0


def _cmd_decide(args):
    methods = harness.METHODS if args.method == "both" else (args.method,)
    report = harness.run_experiment(args.cases, methods=methods, workers=args.workers)
    harness.write_results(report, args.out, methods=methods)
    print(f"decided {len(report.results)} cases ({len(report.skipped)} skipped) -> {args.out}")
    if report.stats is not None:
        print(
            f"mvd error-or-conflict rate {report.stats.mvd_error_or_conflict_rate:.4f}, "
            f"crd improvement rate {report.stats.crd_improvement_rate:.4f}"
        )
    return 0


def _cmd_stats(args):
    doc = harness.load_results(args.results)
    crosstab, stats, skipped = harness.report_from_results(doc)
    report_path, csv_path = harness.write_report(crosstab, stats, skipped, args.out)
    print(f"wrote {report_path} and {csv_path}")
    print(
        f"total {stats.total}: mvd error-or-conflict {stats.mvd_error_or_conflict_rate:.4f}, "
        f"crd improvement {stats.crd_improvement_rate:.4f}, both wrong {stats.both_wrong_rate:.4f}"
    )
    return 0


def _cmd_trace(args):
    case = sim.load_case(args.case)
    out_path = Path(args.out)
    plot_dir = Path(args.plot_dir) if args.plot_dir else out_path.parent / (out_path.stem + "_plots")
    harness.write_trace(case, out_path, plot_dir=plot_dir)
    print(f"wrote {out_path} (plot data in {plot_dir})")
    return 0


def _cmd_run_all(args):
    params = _generation_config(args)
    paths = harness.run_all(
        args.out,
        args.seed,
        args.cases,
        params=params,
        workers=args.workers,
        full=args.full,
    )
    print(f"corpus: {paths['cases']}")
    print(f"results: {paths['results']}")
    print(f"report: {paths['report']}")
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="eprm",
        description="Evidence-pattern fusion and the multi-sensor velocity-ranking experiment.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="generate a corpus of simulated cases")
    p.add_argument("--cases", type=int, required=True, help="number of cases")
    p.add_argument("--seed", type=int, required=True, help="global seed")
    p.add_argument("--out", required=True, help="output directory")
    _add_generation_options(p)
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("decide", help="run the decision methods over a corpus")
    p.add_argument("--cases", required=True, help="corpus directory")
    p.add_argument("--method", choices=["mvd", "crd", "both"], default="both")
    p.add_argument("--out", required=True, help="results JSON path")
    p.add_argument("--workers", type=int, default=1, help="worker processes")
    p.set_defaults(func=_cmd_decide)

    p = sub.add_parser("stats", help="cross-tab and summary rates from results")
    p.add_argument("--results", required=True, help="results JSON path")
    p.add_argument("--out", required=True, help="report output directory")
    p.set_defaults(func=_cmd_stats)

    p = sub.add_parser("trace", help="walk through one case step by step")
    p.add_argument("--case", required=True, help="case JSON file")
    p.add_argument("--out", required=True, help="trace JSON-lines path")
    p.add_argument("--plot-dir", default=None, help="plot-data directory (default: <out>_plots)")
    p.set_defaults(func=_cmd_trace)

    p = sub.add_parser("run-all", help="simulate + decide + stats pipeline")
    p.add_argument("--seed", type=int, required=True, help="global seed")
    p.add_argument("--cases", type=int, required=True, help="number of cases")
    p.add_argument("--out", required=True, help="pipeline output directory")
    p.add_argument("--workers", type=int, default=1, help="worker processes")
    _add_generation_options(p)
    p.set_defaults(func=_cmd_run_all)

    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (OSError, json.JSONDecodeError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # internal invariant violation
        print(f"internal error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
