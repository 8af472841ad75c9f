"""The pluggable pattern-fusion pipeline.

A pattern operator generalizes set intersection: any deterministic binary
operation closed over one event algebra (plus the empty event as a
transient state) can drive the product fusion below.  Decision operators
turn a fused source plus user preference parameters into a decision;
registries let both be selected by name from configuration.
"""

from __future__ import annotations

from collections.abc import Callable
from dataclasses import dataclass

from . import rps
from .core import (
    MassAssignment,
    TOLERANCE,
    TotalConflictError,
    event_sort_key,
    is_empty_event,
    pignistic,
    require_shared_space,
)


@dataclass(frozen=True)
class PatternOperator:
    """Named binary operation on one event algebra."""

    name: str
    fn: Callable

    def __call__(self, a, b):
        return self.fn(a, b)


@dataclass(frozen=True)
class BpaAlgorithm:
    """Named transformation from raw input data to a mass assignment."""

    name: str
    fn: Callable

    def __call__(self, raw):
        return self.fn(raw)


@dataclass(frozen=True)
class DecisionOperator:
    """Named map from (fused source, preference parameters) to a decision."""

    name: str
    fn: Callable

    def __call__(self, source, params=None):
        return self.fn(source, dict(params or {}))


_PATTERN_OPERATORS: dict[str, PatternOperator] = {}
_DECISION_OPERATORS: dict[str, DecisionOperator] = {}


def register_pattern_operator(op):
    _PATTERN_OPERATORS[op.name] = op
    return op


def register_decision_operator(op):
    _DECISION_OPERATORS[op.name] = op
    return op


def pattern_operator(name):
    try:
        return _PATTERN_OPERATORS[name]
    except KeyError:
        raise KeyError(
            f"unknown pattern operator {name!r}; known: {sorted(_PATTERN_OPERATORS)}"
        ) from None


def decision_operator(name):
    try:
        return _DECISION_OPERATORS[name]
    except KeyError:
        raise KeyError(
            f"unknown decision operator {name!r}; known: {sorted(_DECISION_OPERATORS)}"
        ) from None


def fuse_two(a, b, po):
    """Product fusion of two sources under a pattern operator.

    Every entry pair contributes ``m1 * m2`` to ``po(e1, e2)``; products
    landing on the empty event are pooled and redistributed by dividing
    the survivors by one minus the pooled mass, so the output is always a
    valid closed-world source.  Raises :class:`TotalConflictError` when
    every product lands on the empty event.
    """
    space = require_shared_space(a, b)
    acc = {}
    empty = 0.0
    for e1, w1 in a.items():
        for e2, w2 in b.items():
            joined = po(e1, e2)
            w = w1 * w2
            if is_empty_event(joined):
                empty += w
            else:
                acc[joined] = acc.get(joined, 0.0) + w
    scale = 1.0 - empty
    if scale <= TOLERANCE:
        raise TotalConflictError(
            f"every pattern product landed on the empty event (k={empty!r})"
        )
    return MassAssignment(space, {e: w / scale for e, w in acc.items() if w != 0.0})


def fuse_sequence(sources, po):
    """Strict left fold of :func:`fuse_two` in list order.

    Pattern operators need not be commutative or associative, so the fold
    order is part of the contract and the list is never reordered.
    """
    sources = list(sources)
    if not sources:
        raise ValueError("need at least one source")
    fused = sources[0]
    for nxt in sources[1:]:
        fused = fuse_two(fused, nxt, po)
    return fused


def decide(source, dmo, params=None):
    """Apply a decision operator with optional preference parameters.

    Preference parameters are an opaque key/value mapping; with the
    pignistic operator and no parameters this is plain probability
    transformation.
    """
    return dmo(source, params)


def _max_mass(source, params):
    top = max(mass for _, mass in source.items())
    candidates = [e for e, mass in source.items() if mass >= top - TOLERANCE]
    return min(candidates, key=event_sort_key)


register_pattern_operator(PatternOperator("intersection", lambda a, b: a & b))
register_pattern_operator(PatternOperator("union", lambda a, b: a | b))
register_pattern_operator(PatternOperator("rps-right", rps.right_intersect))
register_decision_operator(DecisionOperator("pignistic", lambda source, params: pignistic(source)))
register_decision_operator(DecisionOperator("max-mass", _max_mass))
