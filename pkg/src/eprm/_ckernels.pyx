# cython: language_level=3
"""Compiled twins of the kernels in ``eprm._pykernels``.

Semantics are documented there; these versions restrict bitmasks to at
most 16 bits so that accumulation can run over flat C arrays.
"""

from libc.stdlib cimport calloc, free


def combine_masked(unsigned long long[::1] masks_a, double[::1] masses_a,
                   unsigned long long[::1] masks_b, double[::1] masses_b,
                   bint use_union, int n_bits):
    cdef Py_ssize_t na = masks_a.shape[0]
    cdef Py_ssize_t nb = masks_b.shape[0]
    cdef size_t size = (<size_t>1) << n_bits
    cdef double* buckets = <double*> calloc(size, sizeof(double))
    if buckets == NULL:
        raise MemoryError()
    cdef Py_ssize_t i, j
    cdef size_t key
    cdef unsigned long long ma
    cdef double wa
    try:
        if use_union:
            for i in range(na):
                ma = masks_a[i]
                wa = masses_a[i]
                for j in range(nb):
                    key = <size_t>(ma | masks_b[j])
                    buckets[key] += wa * masses_b[j]
        else:
            for i in range(na):
                ma = masks_a[i]
                wa = masses_a[i]
                for j in range(nb):
                    key = <size_t>(ma & masks_b[j])
                    buckets[key] += wa * masses_b[j]
        empty = buckets[0]
        result = {}
        for key in range(1, size):
            if buckets[key] != 0.0:
                result[key] = buckets[key]
        return result, empty
    finally:
        free(buckets)


def interval_counts(double[::1] mins, double[::1] maxs, double[::1] speeds):
    cdef int k = mins.shape[0]
    cdef unsigned int full = (1u << k) - 1
    cdef size_t size = (<size_t>1) << k
    cdef long long* counts = <long long*> calloc(size, sizeof(long long))
    if counts == NULL:
        raise MemoryError()
    cdef Py_ssize_t s
    cdef int i
    cdef unsigned int belong, sub
    cdef double v
    try:
        for s in range(speeds.shape[0]):
            v = speeds[s]
            belong = 0
            for i in range(k):
                if mins[i] <= v <= maxs[i]:
                    belong |= 1u << i
            if belong == full or belong == 0:
                continue
            sub = belong
            while sub:
                counts[sub] += 1
                sub = (sub - 1) & belong
        result = {}
        for sub in range(1, size):
            if counts[sub] != 0:
                result[sub] = counts[sub]
        return result
    finally:
        free(counts)
