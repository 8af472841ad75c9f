"""Shared generators for randomized tests (seeded, reproducible)."""

import random

import pytest

from eprm import GraphEvent, MassAssignment, SampleSpace

LABELS = "ABCDEFGH"


def random_set_source(rng, space, max_focal=6):
    """Random valid set-algebra source: non-empty focal sets, unit mass."""
    labels = list(space.elements)
    n_focal = rng.randint(1, max_focal)
    events = set()
    for _ in range(n_focal):
        size = rng.randint(1, len(labels))
        events.add(frozenset(rng.sample(labels, size)))
    weights = [rng.uniform(0.05, 1.0) for _ in events]
    total = sum(weights)
    return MassAssignment(space, {e: w / total for e, w in zip(sorted(events, key=sorted), weights)})


def random_singleton_perm_source(rng, space, max_focal=4):
    """Random source whose focal elements are single-label sequences."""
    labels = list(space.elements)
    chosen = rng.sample(labels, rng.randint(1, min(max_focal, len(labels))))
    weights = [rng.uniform(0.05, 1.0) for _ in chosen]
    total = sum(weights)
    return MassAssignment(space, {(label,): w / total for label, w in zip(chosen, weights)})


def random_graph(rng, labels, edge_prob=0.4, allow_bidirectional=True):
    """Random directed graph over a sample of the labels (no self-loops)."""
    nodes = rng.sample(list(labels), rng.randint(1, len(labels)))
    edges = []
    for u in nodes:
        for v in nodes:
            if u == v:
                continue
            if not allow_bidirectional and (v, u) in edges:
                continue
            if rng.random() < edge_prob:
                edges.append((u, v))
    return GraphEvent(nodes, edges)


@pytest.fixture
def rng():
    return random.Random(0xE5E5)


@pytest.fixture
def space4():
    return SampleSpace(LABELS[:4])
