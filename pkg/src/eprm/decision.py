"""The two competing velocity-ranking procedures.

MVD ranks the aircraft each sensor saw by mean observed speed and keeps
every per-sensor ranking.  CRD converts each sensor's readings into a
graph-valued evidence source (interval counting, group merging, rank-chain
construction), fuses the sources with a conflict-cancelling edge-vote
pattern operator, and reads ranking chains off the heaviest fused graph.
Both end in the same four-state classification against ground truth.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from . import _kernels
from .core import (
    MassAssignment,
    SampleSpace,
    TOLERANCE,
    TotalConflictError,
    event_sort_key,
)
from .model import (
    DecisionOperator,
    PatternOperator,
    fuse_sequence,
    register_decision_operator,
    register_pattern_operator,
)
from .rgs import GraphEvent, enumerate_paths, longest_path_reduce, remove_cycles

#: Subset counting enumerates up to 2**n subsets per pooled speed.
MAX_AIRCRAFT = 8


class ResultState(Enum):
    TRUE = "True"
    FALSE = "False"
    CONFLICT = "Conflict"
    INVALID = "Invalid"


@dataclass
class DecisionOutcome:
    chains: list[tuple[int, ...]]
    state: ResultState


class InvalidCaseError(ValueError):
    """No sensor carries any velocity-ranking information for the case."""


def sensor_speeds(case, sensor_index):
    """Observed speeds per aircraft for one sensor (detected aircraft only)."""
    readings = case.readings.get(sensor_index, {})
    return {i: [v for _, v in obs] for i, obs in readings.items() if obs}


def mean_ranking(means):
    """Labels sorted by mean speed ascending; ties broken by label."""
    return tuple(sorted(means, key=lambda i: (means[i], i)))


def mvd(case):
    """Mean Velocity Decision: one ranking chain per informative sensor."""
    chains = []
    for j in range(len(case.sensors)):
        speeds = sensor_speeds(case, j)
        if len(speeds) < 2:
            continue
        means = {i: math.fsum(v) / len(v) for i, v in speeds.items()}
        chains.append(mean_ranking(means))
    if not chains:
        raise InvalidCaseError("no sensor observed two or more aircraft")
    return DecisionOutcome(chains, classify_result(chains, case.truth))


def interval_count(readings):
    """Count, per pooled speed, the candidate aircraft subsets it may belong to.

    A speed belongs to aircraft ``j`` when it lies inside ``j``'s observed
    [min, max] interval.  Speeds inside every interval distinguish nothing
    and are skipped; otherwise every non-empty subset of the belonging set
    gets one count.  Returns a map frozenset(labels) -> count; the full
    detected set never appears as a key.
    """
    if len(readings) < 2:
        raise ValueError("need readings for at least two aircraft")
    if len(readings) > MAX_AIRCRAFT:
        raise ValueError(
            f"subset counting is exponential; at most {MAX_AIRCRAFT} aircraft supported"
        )
    labels = sorted(readings)
    mins = [min(readings[i]) for i in labels]
    maxs = [max(readings[i]) for i in labels]
    pooled = [v for i in labels for v in readings[i]]
    masked = _kernels.interval_counts(mins, maxs, pooled)
    return {
        frozenset(labels[p] for p in range(len(labels)) if (mask >> p) & 1): count
        for mask, count in sorted(masked.items())
    }


def counts_to_source(readings, counts, space=None):
    """Normalize interval counts into a graph-valued evidence source.

    For each counted subset the indistinguishable aircraft are merged into
    one group whose mean is recomputed from the pooled speeds; groups are
    ranked ascending and consecutive groups are joined by all slower-to-
    faster edges.  Masses are counts over the count total, with identical
    graphs merged additively.
    """
    if not counts:
        raise ValueError("empty interval count")
    labels = sorted(readings)
    if space is None:
        space = SampleSpace(labels)
    singleton_mean = {i: math.fsum(readings[i]) / len(readings[i]) for i in labels}
    total = sum(counts.values())
    acc = {}
    for subset, count in sorted(counts.items(), key=lambda kv: event_sort_key(kv[0])):
        if len(subset) == 1:
            groups = [((i,), singleton_mean[i]) for i in labels]
        else:
            pooled = [v for i in sorted(subset) for v in readings[i]]
            merged_mean = math.fsum(pooled) / len(pooled)
            groups = [((i,), singleton_mean[i]) for i in labels if i not in subset]
            groups.append((tuple(sorted(subset)), merged_mean))
        groups.sort(key=lambda g: (g[1], g[0]))
        edges = [
            (u, v)
            for ga, gb in zip(groups, groups[1:])
            for u in ga[0]
            for v in gb[0]
        ]
        graph = GraphEvent(labels, edges)
        acc[graph] = acc.get(graph, 0.0) + count / total
    return MassAssignment(space, acc)


def edge_vote(a, b):
    """Signed per-pair tally of the two operands' edges.

    Opposite directions cancel one for one; the surviving net direction
    keeps the edge.  The result's nodes are exactly the surviving edge
    endpoints, so fully cancelled votes yield the empty graph.
    """
    tally = {}
    for u, v in list(a.edges) + list(b.edges):
        lo, hi = (u, v) if u < v else (v, u)
        tally[(lo, hi)] = tally.get((lo, hi), 0) + (1 if u == lo else -1)
    edges = []
    for (lo, hi), net in tally.items():
        if net > 0:
            edges.append((lo, hi))
        elif net < 0:
            edges.append((hi, lo))
    return GraphEvent.from_edges(edges)


def speed_graph_po(a, b):
    """Graph pattern operator: edge vote, cycle removal, longest-path keep."""
    return longest_path_reduce(remove_cycles(edge_vote(a, b)))


SPEED_GRAPH = register_pattern_operator(PatternOperator("speed-graph", speed_graph_po))


def case_space(case):
    return SampleSpace(range(len(case.aircraft)))


def sensor_source(case, sensor_index, space=None):
    """Graph-valued evidence from one sensor, or None without ranking info."""
    speeds = sensor_speeds(case, sensor_index)
    if len(speeds) < 2:
        return None
    counts = interval_count(speeds)
    if not counts:
        return None
    return counts_to_source(speeds, counts, space=space or case_space(case))


def ranking_chains(source):
    """Read the decision chains off a fused graph source.

    Takes every maximum-mass graph (ties within tolerance), cancels their
    mutual conflicts by folding the speed-graph operator over them in
    canonical order, then emits every start-to-end path of the survivor.
    """
    top = max(mass for _, mass in source.items())
    ties = sorted(
        (e for e, mass in source.items() if mass >= top - TOLERANCE),
        key=event_sort_key,
    )
    graph = ties[0]
    for nxt in ties[1:]:
        graph = speed_graph_po(graph, nxt)
    if not graph:
        return []
    indeg = graph.in_degrees()
    outdeg = graph.out_degrees()
    starts = sorted(u for u, d in indeg.items() if d == 0)
    ends = sorted(u for u, d in outdeg.items() if d == 0)
    chains = []
    for s in starts:
        for e in ends:
            chains.extend(enumerate_paths(graph, s, e))
    return chains


CRD_DMO = register_decision_operator(
    DecisionOperator("crd", lambda source, params: ranking_chains(source))
)


def crd(case):
    """Conflict Resolution Decision: fuse per-sensor graph sources, decide.

    Sensors are fused in ascending index order.  Total conflict during
    fusion, or an empty decision graph, yields the Invalid state.
    """
    space = case_space(case)
    informative = [
        j for j in range(len(case.sensors)) if len(sensor_speeds(case, j)) >= 2
    ]
    if not informative:
        raise InvalidCaseError("no sensor observed two or more aircraft")
    sources = []
    for j in informative:
        source = sensor_source(case, j, space)
        if source is not None:
            sources.append(source)
    if not sources:
        return DecisionOutcome([], ResultState.INVALID)
    try:
        fused = fuse_sequence(sources, SPEED_GRAPH)
    except TotalConflictError:
        return DecisionOutcome([], ResultState.INVALID)
    chains = ranking_chains(fused)
    return DecisionOutcome(chains, classify_result(chains, case.truth))


def classify_result(chains, truth):
    """Four-state classification of ranking chains against ground truth.

    A chain ordering fewer than two aircraft is uninformative; an
    informative chain is True when every ordered pair it implies agrees
    with the truth order and False otherwise.  All-uninformative means
    Invalid, otherwise all True -> True, all False -> False, and a mixture
    -> Conflict.
    """
    truth = tuple(truth)
    if len(set(truth)) != len(truth):
        raise ValueError("truth must be a strict total order")
    position = {label: k for k, label in enumerate(truth)}
    informative = []
    for chain in chains:
        if len(chain) < 2:
            continue
        consistent = all(
            position[chain[i]] < position[chain[j]]
            for i in range(len(chain))
            for j in range(i + 1, len(chain))
        )
        informative.append(consistent)
    if not informative:
        return ResultState.INVALID
    if all(informative):
        return ResultState.TRUE
    if not any(informative):
        return ResultState.FALSE
    return ResultState.CONFLICT
