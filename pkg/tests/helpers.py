"""Reference operators built directly from their definitions.

Everything here constructs explicit N x N matrices, giving the tests a
second computational route that shares no code with the package's
kernels or update rules.
"""

from __future__ import annotations

import numpy as np


def reference_conditional_phase(n: int, marked, gamma: float) -> np.ndarray:
    diag = np.ones(n, dtype=np.complex128)
    for i in marked:
        diag[i] = np.exp(1j * gamma)
    return np.diag(diag)


def reference_diffusion(n: int, indices, beta: float) -> np.ndarray:
    if indices is None:
        indices = range(n)
    indices = list(indices)
    s = np.zeros(n, dtype=np.complex128)
    s[indices] = 1.0 / np.sqrt(len(indices))
    return np.eye(n, dtype=np.complex128) + (np.exp(1j * beta) - 1.0) * np.outer(
        s, s.conj()
    )


def reference_grover(
    n: int, marked, beta: float, gamma: float, subspace=None
) -> np.ndarray:
    return reference_diffusion(n, subspace, beta) @ reference_conditional_phase(
        n, marked, gamma
    )


def class_uniform_vector(n: int, marked, k: complex, l: complex) -> np.ndarray:
    amps = np.full(n, l, dtype=np.complex128)
    amps[list(marked)] = k
    return amps
