"""Pure-numpy kernels, semantically locked to the compiled extension.

The additive kernels (tree_sum, add_inplace, add_at_inplace) must produce
bit-identical results in both backends; the multiplicative one
(phase_inplace) is allowed to differ by rounding only. tree_sum realizes
a fixed-shape pairwise reduction: adjacent elements are paired at every
level and an odd tail element is carried up unchanged, so the addition
tree depends only on the input length, never on chunking or order of
evaluation. Levels 1..10 of that tree never cross 1024-aligned block
boundaries, which lets the compiled backend sum 1024-wide leaves
independently and still match this serial form bit for bit.
"""

from __future__ import annotations

import numpy as np

BACKEND_NAME = "numpy"

# Leaf width of the blocked evaluation in the compiled backend. Kept here
# so tests can assert both backends agree on the decomposition.
BLOCK = 1024


def tree_sum(values: np.ndarray) -> complex:
    """Sum complex128 values with the fixed-shape pairwise tree."""
    x = np.ascontiguousarray(values, dtype=np.complex128)
    n = x.shape[0]
    if n == 0:
        return 0j
    while n > 1:
        half = n // 2
        paired = x[0 : 2 * half : 2] + x[1 : 2 * half : 2]
        if n & 1:
            carried = np.empty(half + 1, dtype=np.complex128)
            carried[:half] = paired
            carried[half] = x[n - 1]
            x = carried
        else:
            x = paired
        n = x.shape[0]
    return complex(x[0])


def phase_inplace(buf: np.ndarray, indices: np.ndarray, factor: complex) -> None:
    """Multiply buf[indices] by a scalar factor, in place."""
    buf[indices] *= factor


def add_inplace(buf: np.ndarray, delta: complex) -> None:
    """Add a scalar to every element of buf, in place."""
    buf += delta


def add_at_inplace(buf: np.ndarray, indices: np.ndarray, delta: complex) -> None:
    """Add a scalar to buf[indices], in place."""
    buf[indices] += delta
