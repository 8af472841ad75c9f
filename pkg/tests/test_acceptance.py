"""Acceptance suite: one test per release criterion, each printing a
PASS line with its measured numbers (run with ``pytest -s`` to see them).

The corpus-level criteria share one generated corpus: the default
generation config with global seed 1729, 2,000 cases.  The regression
counts asserted in criterion 6 were measured once on that corpus and
pinned.
"""

import math
import random
import time
from pathlib import Path

import pytest

from eprm import (
    GenerationConfig,
    MassAssignment,
    SampleSpace,
    TotalConflictError,
    case_seed,
    decide_case,
    dempster_combine,
    from_perm,
    from_set,
    fuse_two,
    generate_case,
    mean_ranking,
    pattern_operator,
    pignistic,
    rps_right_combine,
    speed_graph_po,
    to_perm,
    to_set,
    validate,
)
from eprm.cli import main as cli_main
from eprm.decision import edge_vote
from eprm.rgs import longest_path_reduce, remove_cycles
from conftest import LABELS, random_graph, random_set_source, random_singleton_perm_source
from oracles import combine_oracle, has_cycle_by_peeling, is_shortcut_free, reachability

CORPUS_SEED = 1729
CORPUS_SIZE = 2000

# regression values measured once on the pinned corpus
EXPECTED_MVD_ERROR_OR_CONFLICT = 1348
EXPECTED_CRD_IMPROVEMENT = 292

INTERSECT = pattern_operator("intersection")


def _report(number, message):
    print(f"[criterion {number}] PASS: {message}")


@pytest.fixture(scope="module")
def corpus_records():
    config = GenerationConfig()
    started = time.perf_counter()
    records = []
    for idx in range(CORPUS_SIZE):
        case = generate_case(
            config, case_seed(CORPUS_SEED, idx), case_id=idx, include_trajectories=False
        )
        records.append(decide_case(case))
    elapsed = time.perf_counter() - started
    return records, elapsed


def test_criterion_1_oracle_equivalence():
    rng = random.Random(0xACCE)
    started = time.perf_counter()
    checked = conflicts = 0
    worst = 0.0
    for _ in range(1000):
        space = SampleSpace(LABELS[: rng.randint(2, 4)])
        a = random_set_source(rng, space)
        b = random_set_source(rng, space)
        expected, conflict = combine_oracle(dict(a.items()), dict(b.items()))
        if expected is None:
            with pytest.raises(TotalConflictError):
                dempster_combine(a, b)
            with pytest.raises(TotalConflictError):
                fuse_two(a, b, INTERSECT)
            conflicts += 1
            continue
        fused, k = dempster_combine(a, b)
        generic = fuse_two(a, b, INTERSECT)
        assert set(fused.events()) == set(expected)
        assert set(generic.events()) == set(expected)
        for event, mass in expected.items():
            worst = max(worst, abs(fused[event] - mass), abs(generic[event] - mass))
        worst = max(worst, abs(k - conflict))
        checked += 1
    elapsed = time.perf_counter() - started
    assert worst < 1e-9
    assert elapsed < 5.0
    _report(
        1,
        f"{checked} random pairs (+{conflicts} total-conflict) match the brute-force "
        f"oracle, max deviation {worst:.2e}, {elapsed:.2f}s",
    )


def test_criterion_2_reduction_chain():
    rng = random.Random(0xB0B)
    started = time.perf_counter()
    reduced = conflicts = 0
    for _ in range(500):
        space = SampleSpace(LABELS[: rng.randint(2, 5)])
        a = random_singleton_perm_source(rng, space)
        b = random_singleton_perm_source(rng, space)
        set_a = MassAssignment(space, {frozenset(e): m for e, m in a.items()})
        set_b = MassAssignment(space, {frozenset(e): m for e, m in b.items()})
        try:
            fused = rps_right_combine([a, b])
        except TotalConflictError:
            with pytest.raises(TotalConflictError):
                dempster_combine(set_a, set_b)
            conflicts += 1
            continue
        expected, _ = dempster_combine(set_a, set_b)
        assert {frozenset(e) for e in fused.events()} == set(expected.events())
        for event, mass in fused.items():
            assert mass == expected[frozenset(event)]
        reduced += 1
    for _ in range(500):
        perm = tuple(rng.sample(LABELS, rng.randint(1, len(LABELS))))
        assert to_perm(from_perm(perm)) == perm
    for _ in range(500):
        members = frozenset(rng.sample(LABELS, rng.randint(0, len(LABELS))))
        assert to_set(from_set(members)) == members
    elapsed = time.perf_counter() - started
    assert elapsed < 5.0
    _report(
        2,
        f"{reduced} singleton fusions equal set combination exactly "
        f"(+{conflicts} total-conflict), 500+500 round-trips, {elapsed:.2f}s",
    )


def test_criterion_3_reported_vectors():
    digits = SampleSpace(range(10))
    m1 = MassAssignment(digits, {frozenset({4}): 0.925, frozenset({6}): 0.075})
    m2 = MassAssignment(digits, {frozenset({4}): 1.0})
    m3 = MassAssignment(digits, {frozenset({4, 6}): 1.0})
    step, conflict = dempster_combine(m1, m2)
    assert conflict == pytest.approx(0.075, abs=1e-9)
    fused, _ = dempster_combine(step, m3)
    assert set(fused.events()) == {frozenset({4})}
    assert fused[{4}] == pytest.approx(1.0, abs=1e-9)

    probs = pignistic(MassAssignment(digits, {frozenset({4, 6}): 0.95, frozenset({4}): 0.05}))
    assert probs[4] == pytest.approx(0.525, abs=1e-9)
    assert probs[6] == pytest.approx(0.475, abs=1e-9)

    assert mean_ranking({1: 0.44, 2: 0.453, 3: 0.470}) == (1, 2, 3)
    _report(3, "classifier fusion, pignistic split and sensor mean ranking all match")


def test_criterion_4_graph_operator_properties():
    rng = random.Random(0xCAFE)
    started = time.perf_counter()
    empty = 0
    for _ in range(2000):
        a = random_graph(rng, LABELS[:6])
        b = random_graph(rng, LABELS[:6])
        voted = edge_vote(a, b)
        unrolled = remove_cycles(voted)
        out = speed_graph_po(a, b)
        assert out == longest_path_reduce(unrolled)
        assert not has_cycle_by_peeling(out)
        assert is_shortcut_free(out)
        assert longest_path_reduce(out) == out
        assert reachability(out) == reachability(unrolled)
        if not out:
            empty += 1
    elapsed = time.perf_counter() - started
    assert elapsed < 10.0
    _report(
        4,
        f"2000 random graph pairs: acyclic, shortcut-free, idempotent, "
        f"reachability-preserving ({empty} fully cancelled), {elapsed:.2f}s",
    )


def test_criterion_5_mvd_dominance(corpus_records):
    records, elapsed = corpus_records
    assert len(records) >= 2000
    violations = [
        r["id"]
        for r in records
        if r["mvd"]["state"] == "True" and r["crd"]["state"] in ("False", "Invalid")
    ]
    assert violations == []
    assert elapsed < 120.0
    _report(
        5,
        f"{len(records)} cases, zero MVD=True with CRD in {{False, Invalid}}, "
        f"{elapsed:.1f}s for generation plus both decisions",
    )


def test_criterion_6_improvement_exists(corpus_records):
    records, _ = corpus_records
    total = len(records)
    err = sum(1 for r in records if r["mvd"]["state"] in ("False", "Conflict"))
    improved = sum(
        1
        for r in records
        if r["mvd"]["state"] in ("False", "Conflict") and r["crd"]["state"] == "True"
    )
    err_rate = err / total
    improvement_rate = improved / total
    assert improved > 0
    assert 0.50 <= err_rate <= 0.95
    assert err == EXPECTED_MVD_ERROR_OR_CONFLICT
    assert improved == EXPECTED_CRD_IMPROVEMENT
    _report(
        6,
        f"MVD error-or-conflict {err_rate:.2%}, CRD improvement {improvement_rate:.2%} "
        f"({improved}/{total} cases)",
    )


def _tree_bytes(root):
    return {
        path.relative_to(root).as_posix(): path.read_bytes()
        for path in sorted(Path(root).rglob("*"))
        if path.is_file()
    }


def test_criterion_7_run_all_determinism(tmp_path):
    started = time.perf_counter()
    for name in ("one", "two"):
        code = cli_main(
            ["run-all", "--seed", "42", "--cases", "100", "--out", str(tmp_path / name)]
        )
        assert code == 0
    first = _tree_bytes(tmp_path / "one")
    second = _tree_bytes(tmp_path / "two")
    elapsed = time.perf_counter() - started
    assert first == second
    assert len(first) == 100 + 1 + 2  # cases + results.json + report files
    assert elapsed < 30.0
    _report(7, f"two run-all invocations produced byte-identical trees, {elapsed:.1f}s")


def test_criterion_8_normalization_suite():
    rng = random.Random(0xDEED)
    union = pattern_operator("union")
    checked = 0
    for _ in range(200):
        space = SampleSpace(LABELS[: rng.randint(2, 4)])
        a = random_set_source(rng, space)
        b = random_set_source(rng, space)
        for po in (INTERSECT, union):
            try:
                fused = fuse_two(a, b, po)
            except TotalConflictError:
                continue
            assert validate(fused) == []
            checked += 1
    for _ in range(200):
        space = SampleSpace(LABELS[:4])
        a = random_singleton_perm_source(rng, space)
        b = random_singleton_perm_source(rng, space)
        try:
            fused = rps_right_combine([a, b])
        except TotalConflictError:
            continue
        assert validate(fused) == []
        checked += 1
    graph_space = SampleSpace(LABELS[:5])
    speed_graph = pattern_operator("speed-graph")
    for _ in range(200):
        a = MassAssignment(graph_space, {random_graph(rng, LABELS[:5]): 1.0})
        b = MassAssignment(graph_space, {random_graph(rng, LABELS[:5]): 1.0})
        try:
            fused = fuse_two(a, b, speed_graph)
        except TotalConflictError:
            continue
        assert validate(fused) == []
        checked += 1
    _report(8, f"{checked} fusion outputs sum to one with no empty-event entry")
