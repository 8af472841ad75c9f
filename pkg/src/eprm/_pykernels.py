"""Pure-Python implementations of the hot fusion kernels.

Drop-in twins of the compiled routines in ``eprm._ckernels``; the dispatch
in ``eprm._kernels`` picks whichever is available.  Events are encoded as
bitmasks over sample-space indices, and because Python integers are
unbounded these versions work for sample spaces of any size.
"""

from __future__ import annotations


def combine_masked(masks_a, masses_a, masks_b, masses_b, use_union=False):
    """Cartesian mass product of two sources, bucketed by event bitmask.

    Each pair contributes ``mass_a * mass_b`` to the AND (or, with
    ``use_union``, the OR) of its two masks.  Returns ``(buckets, empty)``:
    the unnormalized mass per surviving non-empty mask, plus the product
    mass that landed on the empty event.  Buckets that sum to exactly zero
    are dropped.
    """
    buckets: dict[int, float] = {}
    empty = 0.0
    if use_union:
        for ma, wa in zip(masks_a, masses_a):
            for mb, wb in zip(masks_b, masses_b):
                key = ma | mb
                if key:
                    buckets[key] = buckets.get(key, 0.0) + wa * wb
                else:
                    empty += wa * wb
    else:
        for ma, wa in zip(masks_a, masses_a):
            for mb, wb in zip(masks_b, masses_b):
                key = ma & mb
                if key:
                    buckets[key] = buckets.get(key, 0.0) + wa * wb
                else:
                    empty += wa * wb
    return {key: w for key, w in buckets.items() if w != 0.0}, empty


def interval_counts(mins, maxs, speeds):
    """Count subset memberships of pooled speeds in per-aircraft intervals.

    ``mins[i]``/``maxs[i]`` bound the observed speed interval of slot ``i``.
    For each pooled speed the set of slots whose interval contains it is
    formed as a bitmask; speeds inside every interval carry no ranking
    information and are skipped, otherwise every non-empty submask gets one
    count.  Returns a dict bitmask -> count.
    """
    k = len(mins)
    full = (1 << k) - 1
    counts: dict[int, int] = {}
    for v in speeds:
        belong = 0
        for i in range(k):
            if mins[i] <= v <= maxs[i]:
                belong |= 1 << i
        if belong == full or belong == 0:
            continue
        sub = belong
        while sub:
            counts[sub] = counts.get(sub, 0) + 1
            sub = (sub - 1) & belong
    return counts
