"""Batch experiment driver and statistics reporter.

Runs the decision methods over a corpus of case files, cross-tabulates the
MVD and CRD result states, and writes machine-readable reports.  Output is
deterministic for a given corpus: results are ordered by case id, reports
carry no timestamps or absolute paths, and JSON keys are sorted.
"""

from __future__ import annotations

import csv
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from . import simulate as sim
from .core import TotalConflictError, mass_to_json
from .decision import (
    DecisionOutcome,
    InvalidCaseError,
    ResultState,
    SPEED_GRAPH,
    case_space,
    crd,
    mean_ranking,
    mvd,
    sensor_source,
    sensor_speeds,
)
from .model import fuse_sequence

STATE_ORDER = (
    ResultState.TRUE,
    ResultState.FALSE,
    ResultState.CONFLICT,
    ResultState.INVALID,
)
STATE_NAMES = tuple(s.value for s in STATE_ORDER)
_STATE_INDEX = {s.value: k for k, s in enumerate(STATE_ORDER)}

METHODS = ("mvd", "crd")
_METHOD_FNS = {"mvd": mvd, "crd": crd}


@dataclass
class CrossTab:
    """4x4 state matrix indexed (MVD state, CRD state)."""

    counts: list[list[int]]
    total: int

    @classmethod
    def from_records(cls, records):
        counts = [[0] * len(STATE_ORDER) for _ in STATE_ORDER]
        for record in records:
            row = _STATE_INDEX[record["mvd"]["state"]]
            col = _STATE_INDEX[record["crd"]["state"]]
            counts[row][col] += 1
        return cls(counts, len(records))

    def row_marginals(self):
        return {name: sum(row) for name, row in zip(STATE_NAMES, self.counts)}

    def col_marginals(self):
        return {
            name: sum(row[k] for row in self.counts)
            for k, name in enumerate(STATE_NAMES)
        }

    def check(self):
        if sum(sum(row) for row in self.counts) != self.total:
            raise AssertionError("cross-tab counts do not sum to the case total")


@dataclass
class SummaryStats:
    total: int
    mvd_state_counts: dict[str, int]
    crd_state_counts: dict[str, int]
    mvd_error_or_conflict_count: int
    crd_improvement_count: int
    both_wrong_count: int
    mvd_error_or_conflict_rate: float
    crd_improvement_rate: float
    both_wrong_rate: float


def compute_stats(crosstab):
    """Summary rates from the cross-tab.

    Improvement means MVD landed in {False, Conflict} while CRD decided
    True; the remaining error-or-conflict cases are counted as both-wrong.
    The three counts partition exactly.
    """
    crosstab.check()
    bad_rows = [_STATE_INDEX["False"], _STATE_INDEX["Conflict"]]
    true_col = _STATE_INDEX["True"]
    err = sum(sum(crosstab.counts[r]) for r in bad_rows)
    improved = sum(crosstab.counts[r][true_col] for r in bad_rows)
    total = crosstab.total
    return SummaryStats(
        total=total,
        mvd_state_counts=crosstab.row_marginals(),
        crd_state_counts=crosstab.col_marginals(),
        mvd_error_or_conflict_count=err,
        crd_improvement_count=improved,
        both_wrong_count=err - improved,
        mvd_error_or_conflict_rate=err / total if total else 0.0,
        crd_improvement_rate=improved / total if total else 0.0,
        both_wrong_rate=(err - improved) / total if total else 0.0,
    )


def decide_case(case, methods=METHODS):
    """Per-case result record; an uninformative case classifies as Invalid."""
    record = {"id": case.id}
    for name in methods:
        try:
            outcome = _METHOD_FNS[name](case)
        except InvalidCaseError:
            outcome = DecisionOutcome([], ResultState.INVALID)
        record[name] = {
            "chains": [list(chain) for chain in outcome.chains],
            "state": outcome.state.value,
        }
    return record


@dataclass
class ExperimentReport:
    results: list[dict]
    skipped: list[dict]
    crosstab: CrossTab | None
    stats: SummaryStats | None


def _decide_path(args):
    path, methods = args
    try:
        return ("ok", decide_case(sim.load_case(path), methods))
    except (OSError, ValueError, KeyError, TypeError) as exc:
        return ("skipped", {"file": Path(path).name, "error": str(exc)})


def run_experiment(corpus_dir, methods=METHODS, workers=1):
    """Decide every case file in a corpus directory.

    Unreadable files are tallied separately, never silently dropped.  With
    ``workers > 1`` cases are decided in a process pool; results are ordered
    by case id either way.
    """
    methods = tuple(methods)
    paths = sorted(Path(corpus_dir).glob("*.json"))
    if not paths:
        raise ValueError(f"no case files found in {corpus_dir}")
    jobs = [(str(p), methods) for p in paths]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(_decide_path, jobs, chunksize=16))
    else:
        outcomes = [_decide_path(job) for job in jobs]
    results = [payload for kind, payload in outcomes if kind == "ok"]
    skipped = [payload for kind, payload in outcomes if kind == "skipped"]
    results.sort(key=lambda record: record["id"])
    crosstab = stats = None
    if "mvd" in methods and "crd" in methods and results:
        crosstab = CrossTab.from_records(results)
        stats = compute_stats(crosstab)
    return ExperimentReport(results, skipped, crosstab, stats)


def results_to_json(report, methods=METHODS):
    return {
        "methods": list(methods),
        "cases": report.results,
        "skipped": report.skipped,
    }


def write_results(report, path, methods=METHODS):
    Path(path).write_text(
        json.dumps(results_to_json(report, methods), sort_keys=True) + "\n",
        encoding="utf-8",
    )


def load_results(path):
    return json.loads(Path(path).read_text(encoding="utf-8"))


def report_from_results(doc):
    """Rebuild the cross-tab and stats from a results.json document."""
    records = doc["cases"]
    for record in records:
        if "mvd" not in record or "crd" not in record:
            raise ValueError("results lack one of the methods; rerun decide with --method both")
    crosstab = CrossTab.from_records(records)
    return crosstab, compute_stats(crosstab), doc.get("skipped", [])


def write_report(crosstab, stats, skipped, out_dir):
    """Write report.json plus the 4x4 matrix as crosstab.csv."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    doc = {
        "total": crosstab.total,
        "states": list(STATE_NAMES),
        "crosstab": crosstab.counts,
        "stats": {
            "mvd_state_counts": stats.mvd_state_counts,
            "crd_state_counts": stats.crd_state_counts,
            "mvd_error_or_conflict_count": stats.mvd_error_or_conflict_count,
            "crd_improvement_count": stats.crd_improvement_count,
            "both_wrong_count": stats.both_wrong_count,
            "mvd_error_or_conflict_rate": stats.mvd_error_or_conflict_rate,
            "crd_improvement_rate": stats.crd_improvement_rate,
            "both_wrong_rate": stats.both_wrong_rate,
        },
        "skipped_count": len(skipped),
    }
    report_path = out_dir / "report.json"
    report_path.write_text(json.dumps(doc, sort_keys=True, indent=2) + "\n", encoding="utf-8")
    csv_path = out_dir / "crosstab.csv"
    with csv_path.open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(["mvd\\crd", *STATE_NAMES])
        for name, row in zip(STATE_NAMES, crosstab.counts):
            writer.writerow([name, *row])
    return report_path, csv_path


def trace_records(case):
    """Human-followable walkthrough of one case as JSON-able records:
    per-sensor means and rankings, per-sensor evidence sources, the fused
    source, and both decisions."""
    records = [
        {
            "record": "case",
            "id": case.id,
            "seed": case.seed,
            "n_aircraft": len(case.aircraft),
            "n_sensors": len(case.sensors),
            "truth": list(case.truth),
        }
    ]
    space = case_space(case)
    sources = []
    for j in range(len(case.sensors)):
        speeds = sensor_speeds(case, j)
        means = {i: math.fsum(v) / len(v) for i, v in speeds.items()}
        ranking = mean_ranking(means) if len(means) >= 2 else None
        records.append(
            {
                "record": "sensor_means",
                "sensor": j,
                "means": {str(i): means[i] for i in sorted(means)},
                "ranking": list(ranking) if ranking else None,
            }
        )
        source = sensor_source(case, j, space)
        if source is not None:
            sources.append(source)
        records.append(
            {
                "record": "sensor_source",
                "sensor": j,
                "source": mass_to_json(source) if source is not None else None,
            }
        )
    fused_doc = None
    total_conflict = False
    if sources:
        try:
            fused_doc = mass_to_json(fuse_sequence(sources, SPEED_GRAPH))
        except TotalConflictError:
            total_conflict = True
    records.append(
        {"record": "fused_source", "source": fused_doc, "total_conflict": total_conflict}
    )
    decided = decide_case(case)
    for name in METHODS:
        records.append({"record": "decision", "method": name, **decided[name]})
    return records


def write_trace(case, out_path, plot_dir=None):
    """Write the walkthrough as JSON-lines, plus plot-ready CSV data files."""
    out_path = Path(out_path)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    lines = [json.dumps(record, sort_keys=True) for record in trace_records(case)]
    out_path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    if plot_dir is None:
        return out_path
    plot_dir = Path(plot_dir)
    plot_dir.mkdir(parents=True, exist_ok=True)
    with (plot_dir / "sensors.csv").open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(["sensor", "x", "y", "radius"])
        for j, sensor in enumerate(case.sensors):
            writer.writerow([j, sensor.center[0], sensor.center[1], sensor.radius])
    with (plot_dir / "speeds.csv").open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(["sensor", "aircraft", "t", "speed"])
        for j in sorted(case.readings):
            for i in sorted(case.readings[j]):
                for t, v in case.readings[j][i]:
                    writer.writerow([j, i, t, v])
    if case.trajectories is not None:
        with (plot_dir / "trajectories.csv").open("w", newline="", encoding="utf-8") as handle:
            writer = csv.writer(handle)
            writer.writerow(["aircraft", "t", "x", "y"])
            for i, traj in enumerate(case.trajectories):
                for t, x, y in zip(traj.times, traj.xs, traj.ys):
                    writer.writerow([i, t, x, y])
    return out_path


def run_all(out_dir, global_seed, count, params=None, methods=METHODS, workers=1, full=False):
    """simulate + decide + stats in one pipeline rooted at ``out_dir``.

    Re-running with the same arguments reproduces every output byte.
    Returns the paths of the corpus dir, results file and report dir.
    """
    params = params or sim.GenerationConfig()
    out_dir = Path(out_dir)
    cases_dir = out_dir / "cases"
    sim.write_corpus(cases_dir, params, global_seed, count, full=full)
    report = run_experiment(cases_dir, methods=methods, workers=workers)
    results_path = out_dir / "results.json"
    write_results(report, results_path, methods=methods)
    report_dir = out_dir / "report"
    if report.crosstab is not None:
        write_report(report.crosstab, report.stats, report.skipped, report_dir)
    return {"cases": cases_dir, "results": results_path, "report": report_dir}
