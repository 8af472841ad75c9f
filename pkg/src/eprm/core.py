"""Sample spaces, mass assignments, and the classical set-algebra fusion rules.

Focal events are plain Python values: ``frozenset`` for the set algebra,
``tuple`` for the permutation algebra, and :class:`eprm.rgs.GraphEvent`
for the graph algebra.  Every value here is immutable after construction
and every operation is a pure function, so concurrent use needs no
locking.  The Cartesian mass products are delegated to the kernels in
``eprm._kernels``.
"""

from __future__ import annotations

import math
from collections import Counter
from collections.abc import Mapping

from . import _kernels
from .rgs import GraphEvent, graph_from_json, graph_to_json

#: Absolute tolerance for all mass-value comparisons.
TOLERANCE = 1e-9

#: Multisets are plain Counters; only non-negative multiplicities are used.
Multiset = Counter


class TotalConflictError(ValueError):
    """Raised when fusion pools the entire product mass on the empty event."""


class SampleSpace:
    """Ordered collection of distinct, opaque sample labels."""

    __slots__ = ("elements", "_index")

    def __init__(self, elements):
        elements = tuple(elements)
        if not elements:
            raise ValueError("sample space needs at least one element")
        index = {}
        for pos, label in enumerate(elements):
            if label in index:
                raise ValueError(f"duplicate sample label: {label!r}")
            index[label] = pos
        self.elements = elements
        self._index = index

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, label):
        return label in self._index

    def index(self, label):
        return self._index[label]

    def full_event(self):
        """The whole-space set event."""
        return frozenset(self.elements)

    def __eq__(self, other):
        if not isinstance(other, SampleSpace):
            return NotImplemented
        return self.elements == other.elements

    def __hash__(self):
        return hash(self.elements)

    def __repr__(self):
        return f"SampleSpace({list(self.elements)!r})"


def is_empty_event(event):
    """True for the empty set, empty sequence, or empty graph."""
    return not event


def _coerce_event(event):
    if isinstance(event, frozenset):
        return event
    if isinstance(event, set):
        return frozenset(event)
    if isinstance(event, tuple):
        if len(set(event)) != len(event):
            raise ValueError(f"repeated label in permutation event {event!r}")
        return event
    if isinstance(event, GraphEvent):
        return event
    raise TypeError(
        f"unsupported event type {type(event).__name__}; "
        "use frozenset, tuple or GraphEvent"
    )


def _event_labels(event):
    return event.nodes if isinstance(event, GraphEvent) else event


def event_sort_key(event):
    """Canonical ordering key for events of one algebra."""
    if isinstance(event, GraphEvent):
        return event.sort_key()
    if isinstance(event, frozenset):
        return tuple(sorted(event))
    return tuple(event)


class MassAssignment:
    """A body of evidence: finite map from focal events to mass.

    Duplicate events passed to the constructor are merged additively.  The
    constructor is deliberately permissive about the numeric invariants
    (non-negativity, unit sum, no empty event) so that :func:`validate`
    can report violations instead of aborting; all fusion operations in
    this package produce assignments that satisfy them.
    """

    __slots__ = ("space", "_entries")

    def __init__(self, space, entries):
        if not isinstance(space, SampleSpace):
            space = SampleSpace(space)
        self.space = space
        acc = {}
        items = entries.items() if isinstance(entries, Mapping) else entries
        for event, mass in items:
            event = _coerce_event(event)
            for label in _event_labels(event):
                if label not in space:
                    raise ValueError(f"label {label!r} is not in the sample space")
            acc[event] = acc.get(event, 0.0) + float(mass)
        self._entries = acc

    def items(self):
        return self._entries.items()

    def events(self):
        return self._entries.keys()

    def get(self, event, default=0.0):
        return self._entries.get(_coerce_event(event), default)

    def __getitem__(self, event):
        return self.get(event)

    def __contains__(self, event):
        return _coerce_event(event) in self._entries

    def __iter__(self):
        return iter(self._entries)

    def __len__(self):
        return len(self._entries)

    def total(self):
        return math.fsum(self._entries.values())

    def __eq__(self, other):
        if not isinstance(other, MassAssignment):
            return NotImplemented
        return self.space == other.space and self._entries == other._entries

    def approx_equal(self, other, tol=TOLERANCE):
        """Same focal events, with every mass within ``tol``."""
        if self.space != other.space or self._entries.keys() != other._entries.keys():
            return False
        return all(abs(m - other._entries[e]) <= tol for e, m in self._entries.items())

    def __repr__(self):
        parts = ", ".join(
            f"{event!r}: {mass:.6g}"
            for event, mass in sorted(self._entries.items(), key=lambda kv: event_sort_key(kv[0]))
        )
        return f"MassAssignment({parts})"


def require_shared_space(*sources):
    space = sources[0].space
    for other in sources[1:]:
        if other.space != space:
            raise ValueError("sources are defined over different sample spaces")
    return space


def validate(assignment):
    """Check the mass-constraint invariants; returns violation strings.

    Never raises: an empty list means the assignment is a valid closed-world
    source (non-negative masses summing to one, nothing on the empty event).
    """
    violations = []
    for event, mass in assignment.items():
        if is_empty_event(event):
            violations.append(f"empty event carries mass {mass!r}")
        if mass < 0.0:
            violations.append(f"negative mass {mass!r} for event {event!r}")
    total = assignment.total()
    if abs(total - 1.0) > TOLERANCE:
        violations.append(f"masses sum to {total!r}, expected 1")
    return violations


def _event_masks(source):
    space = source.space
    masks, masses = [], []
    for event, mass in source.items():
        m = 0
        for label in event:
            m |= 1 << space.index(label)
        masks.append(m)
        masses.append(mass)
    return masks, masses


def _mask_to_event(mask, space):
    return frozenset(
        label for pos, label in enumerate(space.elements) if (mask >> pos) & 1
    )


def _masked_product(a, b, use_union):
    masks_a, masses_a = _event_masks(a)
    masks_b, masses_b = _event_masks(b)
    return _kernels.combine_masked(
        masks_a, masses_a, masks_b, masses_b, n_bits=len(a.space), use_union=use_union
    )


def dempster_combine(a, b):
    """Dempster's rule on two set-algebra sources over a shared space.

    Returns ``(fused, conflict)``: the normalized combination plus the raw
    product mass that landed on the empty set.  Raises
    :class:`TotalConflictError` when no non-empty intersection carries mass.
    """
    space = require_shared_space(a, b)
    buckets, conflict = _masked_product(a, b, use_union=False)
    scale = 1.0 - conflict
    if scale <= TOLERANCE:
        raise TotalConflictError(f"sources are in total conflict (k={conflict!r})")
    fused = MassAssignment(
        space, {_mask_to_event(m, space): w / scale for m, w in buckets.items()}
    )
    return fused, conflict


def combine_many(sources):
    """Left fold of :func:`dempster_combine`; order-insensitive up to rounding."""
    sources = list(sources)
    if not sources:
        raise ValueError("need at least one source")
    fused = sources[0]
    for nxt in sources[1:]:
        fused, _ = dempster_combine(fused, nxt)
    return fused


def dcr_combine(a, b):
    """Disjunctive rule: product mass bucketed by event union (conflict-free)."""
    space = require_shared_space(a, b)
    buckets, _ = _masked_product(a, b, use_union=True)
    return MassAssignment(
        space, {_mask_to_event(m, space): w for m, w in buckets.items()}
    )


def pignistic(source):
    """Split each focal event's mass uniformly over its members.

    Expects a valid closed-world source; returns a probability map over
    every sample in the space (zeros included), summing to one.
    """
    probs = {label: 0.0 for label in source.space}
    for event, mass in source.items():
        share = mass / len(event)
        for label in event:
            probs[label] += share
    return probs


def multiset_plus(a, b):
    """Pointwise multiplicity addition; zero-count keys stay absent."""
    return Counter(a) + Counter(b)


def event_to_json(event):
    """Algebra-specific JSON: sorted array (set), ordered array (perm), or
    a ``{"nodes": ..., "edges": ...}`` object (graph)."""
    if isinstance(event, GraphEvent):
        return graph_to_json(event)
    if isinstance(event, frozenset):
        return sorted(event)
    if isinstance(event, tuple):
        return list(event)
    raise TypeError(f"unsupported event type {type(event).__name__}")


def event_from_json(obj, algebra):
    if algebra == "set":
        return frozenset(obj)
    if algebra == "perm":
        return tuple(obj)
    if algebra == "graph":
        return graph_from_json(obj)
    raise ValueError(f"unknown event algebra {algebra!r}")


def mass_to_json(source):
    """Serialize to ``{"space": [...], "entries": [{"event": ..., "mass": ...}]}``
    with entries in canonical event order."""
    entries = sorted(source.items(), key=lambda kv: event_sort_key(kv[0]))
    return {
        "space": list(source.space.elements),
        "entries": [{"event": event_to_json(e), "mass": m} for e, m in entries],
    }


def mass_from_json(doc, algebra="set"):
    """Inverse of :func:`mass_to_json`; the caller states the event algebra."""
    space = SampleSpace(doc["space"])
    entries = [
        (event_from_json(entry["event"], algebra), entry["mass"])
        for entry in doc["entries"]
    ]
    return MassAssignment(space, entries)
