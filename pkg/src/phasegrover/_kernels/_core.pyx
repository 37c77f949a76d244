# cython: boundscheck=False, wraparound=False, initializedcheck=False, cdivision=True
"""Compiled kernels.

The reduction-shape contract lives in the numpy backend's module
docstring; the two implementations must agree bit for bit on every
additive kernel. Indices are validated by the callers, hence the
disabled bounds checks.
"""

import numpy as np

BACKEND_NAME = "compiled"
BLOCK = 1024

cdef enum:
    _BLOCK = 1024


cdef double complex _leaf_sum(const double complex* x, Py_ssize_t n) noexcept nogil:
    # Pairwise halving of at most BLOCK elements; an odd tail element is
    # carried up unchanged. Identical shape to the numpy backend.
    cdef double complex buf[512]
    cdef Py_ssize_t half, i, m
    if n == 1:
        return x[0]
    half = n // 2
    for i in range(half):
        buf[i] = x[2 * i] + x[2 * i + 1]
    if n & 1:
        buf[half] = x[n - 1]
        m = half + 1
    else:
        m = half
    while m > 1:
        half = m // 2
        for i in range(half):
            buf[i] = buf[2 * i] + buf[2 * i + 1]
        if m & 1:
            buf[half] = buf[m - 1]
            m = half + 1
        else:
            m = half
    return buf[0]


def tree_sum(values):
    """Sum complex128 values with the fixed-shape pairwise tree."""
    arr = np.ascontiguousarray(values, dtype=np.complex128)
    cdef const double complex[::1] view
    cdef double complex[::1] out
    cdef Py_ssize_t n, nblocks, b, start, length
    cdef double complex total
    n = arr.shape[0]
    if n == 0:
        return 0j
    # Blocked evaluation: leaves of width BLOCK reproduce levels 1..10 of
    # the global halving exactly (pairings never straddle 1024-aligned
    # boundaries there), and the loop then reduces the block sums with the
    # same rule, reproducing the remaining levels.
    while n > _BLOCK:
        nblocks = (n + _BLOCK - 1) // _BLOCK
        sums = np.empty(nblocks, dtype=np.complex128)
        view = arr
        out = sums
        with nogil:
            for b in range(nblocks):
                start = b * _BLOCK
                length = n - start
                if length > _BLOCK:
                    length = _BLOCK
                out[b] = _leaf_sum(&view[start], length)
        arr = sums
        n = nblocks
    view = arr
    with nogil:
        total = _leaf_sum(&view[0], n)
    return complex(total.real, total.imag)


def phase_inplace(double complex[::1] buf, const Py_ssize_t[::1] indices, double complex factor):
    """Multiply buf[indices] by a scalar factor, in place."""
    cdef Py_ssize_t i, m = indices.shape[0]
    with nogil:
        for i in range(m):
            buf[indices[i]] = buf[indices[i]] * factor


def add_inplace(double complex[::1] buf, double complex delta):
    """Add a scalar to every element of buf, in place."""
    cdef Py_ssize_t i, n = buf.shape[0]
    with nogil:
        for i in range(n):
            buf[i] = buf[i] + delta


def add_at_inplace(double complex[::1] buf, const Py_ssize_t[::1] indices, double complex delta):
    """Add a scalar to buf[indices], in place."""
    cdef Py_ssize_t i, m = indices.shape[0]
    with nogil:
        for i in range(m):
            buf[indices[i]] = buf[indices[i]] + delta
