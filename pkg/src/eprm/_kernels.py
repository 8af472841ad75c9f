"""Kernel selection: compiled extension when present, pure Python otherwise.

Set ``EPRM_DISABLE_EXTENSION=1`` to force the pure-Python kernels (useful
for debugging and for the benchmark baseline).
"""

from __future__ import annotations

import os

import numpy as np

from . import _pykernels

if os.environ.get("EPRM_DISABLE_EXTENSION"):
    _ckernels = None
else:
    try:
        from . import _ckernels  # type: ignore[attr-defined]
    except ImportError:
        _ckernels = None

BACKEND = "compiled" if _ckernels is not None else "python"

# The compiled kernels accumulate into flat arrays of 2**n_bits buckets.
_MAX_COMPILED_BITS = 16


def combine_masked(masks_a, masses_a, masks_b, masses_b, n_bits, use_union=False):
    """Bucketed Cartesian mass product; see ``_pykernels.combine_masked``."""
    if _ckernels is not None and n_bits <= _MAX_COMPILED_BITS:
        return _ckernels.combine_masked(
            np.ascontiguousarray(masks_a, dtype=np.uint64),
            np.ascontiguousarray(masses_a, dtype=np.float64),
            np.ascontiguousarray(masks_b, dtype=np.uint64),
            np.ascontiguousarray(masses_b, dtype=np.float64),
            use_union,
            n_bits,
        )
    return _pykernels.combine_masked(masks_a, masses_a, masks_b, masses_b, use_union)


def interval_counts(mins, maxs, speeds):
    """Interval-membership subset counts; see ``_pykernels.interval_counts``."""
    if _ckernels is not None and len(mins) <= _MAX_COMPILED_BITS:
        return _ckernels.interval_counts(
            np.ascontiguousarray(mins, dtype=np.float64),
            np.ascontiguousarray(maxs, dtype=np.float64),
            np.ascontiguousarray(speeds, dtype=np.float64),
        )
    return _pykernels.interval_counts(mins, maxs, speeds)
