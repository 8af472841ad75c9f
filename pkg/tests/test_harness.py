import json
import math
from pathlib import Path

import pytest

from eprm import (
    GenerationConfig,
    case_seed,
    decide_case,
    generate_case,
    run_experiment,
    trace_records,
    write_corpus,
    write_trace,
)
from eprm.harness import (
    CrossTab,
    METHODS,
    STATE_NAMES,
    compute_stats,
    load_results,
    report_from_results,
    run_all,
    write_report,
    write_results,
)
from eprm.simulate import load_case

# Case 22 of the seed-1729 corpus: all four sensors rank all three
# aircraft, three agree with the truth and one disagrees, and the fused
# decision resolves the conflict correctly.
ANALOGUE_SEED = 1729
ANALOGUE_INDEX = 22


@pytest.fixture(scope="module")
def small_corpus(tmp_path_factory):
    corpus = tmp_path_factory.mktemp("corpus")
    write_corpus(corpus, GenerationConfig(), 7, 30)
    return corpus


def test_decide_case_record_shape():
    case = generate_case(GenerationConfig(), case_seed(7, 0), case_id=0)
    record = decide_case(case)
    assert record["id"] == 0
    for method in METHODS:
        assert record[method]["state"] in STATE_NAMES
        assert isinstance(record[method]["chains"], list)


def test_crosstab_marginals_match_state_counts(small_corpus):
    report = run_experiment(small_corpus)
    crosstab = report.crosstab
    crosstab.check()
    mvd_counts = {name: 0 for name in STATE_NAMES}
    crd_counts = {name: 0 for name in STATE_NAMES}
    for record in report.results:
        mvd_counts[record["mvd"]["state"]] += 1
        crd_counts[record["crd"]["state"]] += 1
    assert crosstab.row_marginals() == mvd_counts
    assert crosstab.col_marginals() == crd_counts


def test_stats_partition_exactly(small_corpus):
    report = run_experiment(small_corpus)
    stats = report.stats
    assert stats.crd_improvement_count + stats.both_wrong_count == stats.mvd_error_or_conflict_count
    assert stats.crd_improvement_rate <= stats.mvd_error_or_conflict_rate
    assert 0.0 <= stats.crd_improvement_rate <= 1.0


def test_run_experiment_is_deterministic(small_corpus):
    a = run_experiment(small_corpus)
    b = run_experiment(small_corpus)
    assert a.results == b.results


def test_run_experiment_workers_match_sequential(small_corpus):
    sequential = run_experiment(small_corpus, workers=1)
    parallel = run_experiment(small_corpus, workers=2)
    assert sequential.results == parallel.results


def test_run_experiment_counts_unreadable_cases(small_corpus, tmp_path):
    corpus = tmp_path / "broken"
    corpus.mkdir()
    for path in sorted(small_corpus.glob("*.json"))[:3]:
        (corpus / path.name).write_bytes(path.read_bytes())
    (corpus / "case_99999.json").write_text("{not json", encoding="utf-8")
    report = run_experiment(corpus)
    assert len(report.results) == 3
    assert len(report.skipped) == 1
    assert report.skipped[0]["file"] == "case_99999.json"


def test_run_experiment_requires_cases(tmp_path):
    with pytest.raises(ValueError):
        run_experiment(tmp_path)


def test_single_true_true_case_crosstab():
    records = [{"id": 0, "mvd": {"state": "True", "chains": []}, "crd": {"state": "True", "chains": []}}]
    crosstab = CrossTab.from_records(records)
    assert crosstab.counts[0][0] == 1 and crosstab.total == 1
    stats = compute_stats(crosstab)
    assert stats.crd_improvement_count == 0


def test_results_round_trip(small_corpus, tmp_path):
    report = run_experiment(small_corpus)
    out = tmp_path / "results.json"
    write_results(report, out)
    doc = load_results(out)
    assert doc["cases"] == report.results
    crosstab, stats, skipped = report_from_results(doc)
    assert crosstab.counts == report.crosstab.counts
    assert stats == report.stats


def test_report_files(small_corpus, tmp_path):
    report = run_experiment(small_corpus)
    report_path, csv_path = write_report(
        report.crosstab, report.stats, report.skipped, tmp_path / "report"
    )
    doc = json.loads(report_path.read_text())
    assert doc["total"] == report.crosstab.total
    assert doc["states"] == list(STATE_NAMES)
    lines = csv_path.read_text().strip().splitlines()
    assert len(lines) == 5
    assert lines[0].startswith("mvd\\crd")


def test_trace_records_walkthrough():
    case = generate_case(
        GenerationConfig(), case_seed(ANALOGUE_SEED, ANALOGUE_INDEX), case_id=ANALOGUE_INDEX
    )
    records = trace_records(case)
    kinds = [r["record"] for r in records]
    assert kinds[0] == "case"
    assert kinds.count("sensor_means") == 4
    assert kinds.count("sensor_source") == 4
    assert kinds.count("fused_source") == 1
    assert kinds.count("decision") == 2
    rankings = [tuple(r["ranking"]) for r in records if r["record"] == "sensor_means"]
    majority = tuple(case.truth)
    assert rankings.count(majority) == 3
    decisions = {r["method"]: r for r in records if r["record"] == "decision"}
    assert decisions["mvd"]["state"] == "Conflict"
    assert decisions["crd"]["state"] == "True"
    assert decisions["crd"]["chains"] == [list(case.truth)]


def test_trace_of_noise_free_case_shows_no_conflict():
    # without velocity noise every sensed speed equals the base speed, so
    # each sensor's ranking is the truth restricted to what it saw
    cfg = GenerationConfig(sigma2=0.0)
    case = generate_case(cfg, case_seed(3, 5), case_id=5)
    records = trace_records(case)
    rankings = [
        r["ranking"] for r in records if r["record"] == "sensor_means" and r["ranking"]
    ]
    truth_pos = {label: k for k, label in enumerate(case.truth)}
    for ranking in rankings:
        positions = [truth_pos[i] for i in ranking]
        assert positions == sorted(positions)
    decisions = {r["method"]: r["state"] for r in records if r["record"] == "decision"}
    assert decisions["mvd"] in ("True", "Invalid")
    assert decisions["crd"] == decisions["mvd"]


def test_write_trace_outputs_jsonl_and_plot_data(tmp_path):
    case = generate_case(
        GenerationConfig(), case_seed(ANALOGUE_SEED, ANALOGUE_INDEX), case_id=ANALOGUE_INDEX
    )
    out = tmp_path / "trace.jsonl"
    write_trace(case, out, plot_dir=tmp_path / "plots")
    lines = out.read_text().strip().splitlines()
    parsed = [json.loads(line) for line in lines]
    assert parsed[0]["record"] == "case"
    assert (tmp_path / "plots" / "sensors.csv").exists()
    assert (tmp_path / "plots" / "speeds.csv").exists()
    # trajectories were generated, so their polylines are exported too
    assert (tmp_path / "plots" / "trajectories.csv").exists()


def test_run_all_pipeline(tmp_path):
    paths = run_all(tmp_path / "out", 7, 12)
    assert sorted(p.name for p in paths["cases"].glob("*.json"))[0] == "case_00000.json"
    assert paths["results"].exists()
    assert (paths["report"] / "report.json").exists()
    assert (paths["report"] / "crosstab.csv").exists()
    doc = load_results(paths["results"])
    assert len(doc["cases"]) == 12
