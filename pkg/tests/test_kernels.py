"""Parity between the compiled and pure-Python kernels.

The two implementations must agree bit-for-bit: they perform the same
multiply-adds in the same order, and the extension is compiled with FP
contraction disabled.
"""

import random

import pytest

from eprm import MassAssignment, SampleSpace, dempster_combine, validate
from eprm import _kernels, _pykernels

try:
    from eprm import _ckernels
except ImportError:
    _ckernels = None

needs_extension = pytest.mark.skipif(_ckernels is None, reason="compiled kernels unavailable")


def random_mask_source(rng, n_bits, max_focal=8):
    population = (1 << n_bits) - 1
    masks = rng.sample(range(1, 1 << n_bits), rng.randint(1, min(max_focal, population)))
    weights = [rng.uniform(0.01, 1.0) for _ in masks]
    total = sum(weights)
    return masks, [w / total for w in weights]


@needs_extension
def test_combine_masked_backends_agree_exactly():
    rng = random.Random(51)
    for _ in range(300):
        n_bits = rng.randint(1, 10)
        masks_a, masses_a = random_mask_source(rng, n_bits)
        masks_b, masses_b = random_mask_source(rng, n_bits)
        for union in (False, True):
            py_buckets, py_empty = _pykernels.combine_masked(
                masks_a, masses_a, masks_b, masses_b, union
            )
            c_buckets, c_empty = _kernels.combine_masked(
                masks_a, masses_a, masks_b, masses_b, n_bits=n_bits, use_union=union
            )
            assert c_buckets == py_buckets
            assert c_empty == py_empty


@needs_extension
def test_interval_counts_backends_agree_exactly():
    rng = random.Random(52)
    for _ in range(300):
        k = rng.randint(2, 8)
        mins = [rng.uniform(0.0, 0.5) for _ in range(k)]
        maxs = [lo + rng.uniform(0.0, 0.5) for lo in mins]
        speeds = [rng.uniform(0.0, 1.1) for _ in range(rng.randint(1, 60))]
        assert _kernels.interval_counts(mins, maxs, speeds) == _pykernels.interval_counts(
            mins, maxs, speeds
        )


def test_wide_sample_spaces_fall_back_to_python():
    # 70 labels exceed the compiled kernels' 16-bit bucket space; the
    # dispatch must route to the pure-Python kernels and still be correct.
    space = SampleSpace(range(70))
    a = MassAssignment(space, {frozenset({0, 69}): 0.5, frozenset(range(70)): 0.5})
    b = MassAssignment(space, {frozenset({69}): 1.0})
    fused, conflict = dempster_combine(a, b)
    assert conflict == 0.0
    assert fused[{69}] == 1.0
    assert validate(fused) == []


def test_backend_reports_a_known_name():
    assert _kernels.BACKEND in ("compiled", "python")
