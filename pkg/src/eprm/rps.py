"""Permutation focal elements: ordered intersections and the right
combination rule.

Permutation events are plain tuples of distinct labels.  Order makes the
intersection direction-sensitive, so there is a left and a right variant;
they are mirror images of each other.
"""

from __future__ import annotations

import math

from .core import MassAssignment, TOLERANCE, TotalConflictError, require_shared_space


def left_intersect(a, b):
    """Common elements of the two sequences, in the order of the first."""
    members = set(b)
    return tuple(x for x in a if x in members)


def right_intersect(a, b):
    """Common elements in the order of the second operand.

    Identical to ``left_intersect(b, a)``: the pointed-to operand supplies
    the ordering.
    """
    return left_intersect(b, a)


def pes_size(n):
    """Number of non-empty permutation events over ``n`` samples."""
    if n < 1:
        raise ValueError("sample space size must be at least 1")
    return sum(math.perm(n, i) for i in range(1, n + 1))


def _fuse_pair(a, b):
    acc = {}
    empty = 0.0
    for e1, w1 in a.items():
        for e2, w2 in b.items():
            joined = right_intersect(e1, e2)
            w = w1 * w2
            if joined:
                acc[joined] = acc.get(joined, 0.0) + w
            else:
                empty += w
    scale = 1.0 - empty
    if scale <= TOLERANCE:
        raise TotalConflictError(f"sources are in total conflict (k={empty!r})")
    return MassAssignment(a.space, {e: w / scale for e, w in acc.items() if w != 0.0})


def rps_right_combine(sources):
    """Right-intersection fold over permutation sources.

    Empty intersections pool as conflict and are redistributed by
    normalization at every step, which is equivalent to normalizing the
    whole product chain once.  On singleton-only sources this reduces
    exactly to Dempster combination.
    """
    sources = list(sources)
    if not sources:
        raise ValueError("need at least one source")
    require_shared_space(*sources)
    fused = sources[0]
    for nxt in sources[1:]:
        fused = _fuse_pair(fused, nxt)
    return fused
