"""Dense-register engine.

Stores all N amplitudes explicitly and applies the two primitive
operations of phase-generalized search: a conditional phase that
multiplies every marked amplitude by e^{i gamma} (one oracle query), and
a phase diffusion I + (e^{i beta} - 1) P, where P projects onto the
uniform superposition over a chosen index subspace (the full register by
default). Hot loops run on the selected kernel backend; scalar factors
are computed here in Python so both backends perform identical updates.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .collapsed import CollapsedState, PhasePair, single_query_phase
from .errors import DimensionMismatch, NotCollapsible
from .oracle import OracleSpec

_NORM_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class StateVector:
    """Immutable dense register state with unit norm.

    The squared norm must be 1 within 1e-9 at construction; the wrapped
    array is copied and marked read-only.
    """

    amps: np.ndarray

    def __post_init__(self):
        arr = np.array(self.amps, dtype=np.complex128, copy=True, order="C")
        if arr.ndim != 1 or arr.shape[0] < 1:
            raise ValueError("state must be a nonempty 1-d amplitude array")
        norm = float(np.vdot(arr, arr).real)
        if abs(norm - 1.0) > _NORM_TOL:
            raise ValueError(f"state is not normalized: |amps|^2 sums to {norm!r}")
        arr.setflags(write=False)
        object.__setattr__(self, "amps", arr)

    @property
    def dim(self) -> int:
        return int(self.amps.shape[0])

    def probabilities(self) -> np.ndarray:
        """Per-index measurement probabilities |amplitude|^2."""
        return np.abs(self.amps) ** 2


@dataclass(frozen=True, eq=False)
class SubspaceSpec:
    """Sorted distinct indices spanning a diffusion subspace."""

    indices: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "indices", tuple(self.indices))
        if len(self.indices) < 1:
            raise ValueError("subspace needs at least one index")
        prev = -1
        for idx in self.indices:
            if isinstance(idx, bool) or not isinstance(idx, int):
                raise ValueError(f"subspace index must be an integer, got {idx!r}")
            if idx < 0:
                raise ValueError(f"subspace index must be nonnegative, got {idx}")
            if idx <= prev:
                raise ValueError("subspace indices must be strictly increasing")
            prev = idx

    @property
    def size(self) -> int:
        return len(self.indices)

    def as_array(self) -> np.ndarray:
        arr = np.asarray(self.indices, dtype=np.intp)
        arr.setflags(write=False)
        return arr


@dataclass(frozen=True, eq=False)
class MeasurementReport:
    """Outcome summary of a search run."""

    success_probability: float
    oracle_queries: int | None = None
    shots: int | None = None
    seed: int | None = None
    shot_counts: np.ndarray | None = None
    per_index_probabilities: np.ndarray | None = None

    def __post_init__(self):
        p = float(self.success_probability)
        if not 0.0 <= p <= 1.0:
            raise ValueError(f"success probability must lie in [0, 1], got {p!r}")
        object.__setattr__(self, "success_probability", p)
        if self.per_index_probabilities is not None:
            dist = np.asarray(self.per_index_probabilities, dtype=float)
            total = float(dist.sum())
            if dist.min(initial=0.0) < -1e-12 or abs(total - 1.0) > 1e-9:
                raise ValueError("per-index probabilities must form a distribution")


def uniform_state(n_total: int) -> StateVector:
    """Uniform superposition over all n_total basis states."""
    if isinstance(n_total, bool) or not isinstance(n_total, int) or n_total < 1:
        raise ValueError(f"register size must be a positive integer, got {n_total!r}")
    return StateVector(np.full(n_total, 1.0 / math.sqrt(n_total), dtype=np.complex128))


def uniform_state_on_subspace(n_total: int, subspace: SubspaceSpec) -> StateVector:
    """Uniform superposition over the subspace indices, zero elsewhere."""
    if isinstance(n_total, bool) or not isinstance(n_total, int) or n_total < 1:
        raise ValueError(f"register size must be a positive integer, got {n_total!r}")
    if subspace.indices[-1] >= n_total:
        raise DimensionMismatch(
            f"subspace index {subspace.indices[-1]} outside register of size {n_total}"
        )
    amps = np.zeros(n_total, dtype=np.complex128)
    amps[subspace.as_array()] = 1.0 / math.sqrt(subspace.size)
    return StateVector(amps)


def _require_same_dim(state: StateVector, oracle: OracleSpec) -> None:
    if oracle.n_total != state.dim:
        raise DimensionMismatch(
            f"oracle register size {oracle.n_total} != state size {state.dim}"
        )


def apply_conditional_phase(
    state: StateVector, oracle: OracleSpec, gamma: float
) -> StateVector:
    """Multiply every marked amplitude by e^{i gamma}. One oracle query."""
    _require_same_dim(state, oracle)
    gamma = float(gamma)
    if not math.isfinite(gamma):
        raise ValueError(f"gamma must be finite, got {gamma!r}")
    buf = state.amps.copy()
    _kernels.phase_inplace(buf, oracle.marked_array, cmath.exp(1j * gamma))
    return StateVector(buf)


def apply_diffusion(
    state: StateVector, subspace: SubspaceSpec | None, beta: float
) -> StateVector:
    """Apply I + (e^{i beta} - 1) P for the uniform projector P.

    With subspace None, P projects onto the uniform superposition of the
    whole register; otherwise only the subspace amplitudes change. The
    update adds (e^{i beta} - 1) * mean(subspace amplitudes) to each
    subspace entry; the mean uses the fixed-shape reduction tree and the
    scalar products happen here so both kernel backends add the same
    delta.
    """
    beta = float(beta)
    if not math.isfinite(beta):
        raise ValueError(f"beta must be finite, got {beta!r}")
    coef = cmath.exp(1j * beta) - 1.0
    buf = state.amps.copy()
    if subspace is None:
        mu = _kernels.tree_sum(buf) / state.dim
        _kernels.add_inplace(buf, coef * mu)
    else:
        if subspace.indices[-1] >= state.dim:
            raise DimensionMismatch(
                f"subspace index {subspace.indices[-1]} outside register "
                f"of size {state.dim}"
            )
        idx = subspace.as_array()
        mu = _kernels.tree_sum(buf[idx]) / subspace.size
        _kernels.add_at_inplace(buf, idx, coef * mu)
    return StateVector(buf)


def apply_grover(
    state: StateVector,
    oracle: OracleSpec,
    phases: PhasePair,
    subspace: SubspaceSpec | None = None,
) -> StateVector:
    """One search step: conditional phase, then phase diffusion.

    Costs exactly one oracle query. The diffusion acts on the full
    register unless a subspace is given.
    """
    _require_same_dim(state, oracle)
    stepped = apply_conditional_phase(state, oracle, phases.gamma)
    return apply_diffusion(stepped, subspace, phases.beta)


def success_probability(state: StateVector, oracle: OracleSpec) -> float:
    """Total probability of measuring a marked index."""
    _require_same_dim(state, oracle)
    if oracle.t == 0:
        return 0.0
    marked = state.amps[oracle.marked_array]
    p = float(np.sum(marked.real**2 + marked.imag**2))
    return min(1.0, max(0.0, p))


def collapse(state: StateVector, oracle: OracleSpec, tol: float = 1e-9) -> CollapsedState:
    """Reduce a dense state to its two class amplitudes.

    Requires the amplitudes to be uniform within each class (marked and
    unmarked) up to ``tol`` in maximum modulus deviation; raises
    NotCollapsible otherwise. Empty classes yield an exact 0 amplitude.
    """
    _require_same_dim(state, oracle)
    n, t = oracle.n_total, oracle.t
    idx = oracle.marked_array
    mask = np.ones(n, dtype=bool)
    mask[idx] = False
    unmarked = state.amps[mask]
    marked = state.amps[idx]

    k = _kernels.tree_sum(marked) / t if t else 0j
    l = _kernels.tree_sum(unmarked) / (n - t) if n - t else 0j
    worst = 0.0
    if t:
        worst = float(np.max(np.abs(marked - k)))
    if n - t:
        worst = max(worst, float(np.max(np.abs(unmarked - l))))
    if worst > tol:
        raise NotCollapsible(
            f"class amplitudes deviate by {worst:.3e} (tolerance {tol:.3e})"
        )
    return CollapsedState(k, l, n, t)


def embed(collapsed: CollapsedState, oracle: OracleSpec) -> StateVector:
    """Expand a two-amplitude state onto the oracle's register."""
    if oracle.n_total != collapsed.n_total or oracle.t != collapsed.n_marked:
        raise DimensionMismatch(
            f"oracle ({oracle.n_total}, {oracle.t}) does not match state "
            f"({collapsed.n_total}, {collapsed.n_marked})"
        )
    amps = np.full(oracle.n_total, collapsed.unmarked_amp, dtype=np.complex128)
    amps[oracle.marked_array] = collapsed.marked_amp
    return StateVector(amps)


def single_query_search(
    oracle: OracleSpec,
) -> tuple[float, StateVector, MeasurementReport]:
    """Run the one-query search on the dense engine.

    Solves for the matched phase, applies one search step to the uniform
    state and reports the success probability. A step contains exactly
    one conditional-phase evaluation, so the query count is 1.
    """
    gamma = single_query_phase(oracle.n_total, oracle.t)
    final = apply_grover(uniform_state(oracle.n_total), oracle, PhasePair.matched(gamma))
    report = MeasurementReport(
        success_probability=success_probability(final, oracle),
        oracle_queries=1,
    )
    return gamma, final, report


def sample_measurement(state: StateVector, shots: int, seed: int) -> np.ndarray:
    """Draw measurement outcomes; returns per-index counts of length N.

    Inverse-CDF sampling from a PCG64 stream, so a fixed seed gives a
    fixed histogram.
    """
    if isinstance(shots, bool) or not isinstance(shots, int) or shots < 0:
        raise ValueError(f"shots must be a nonnegative integer, got {shots!r}")
    rng = np.random.Generator(np.random.PCG64(seed))
    cum = np.cumsum(state.probabilities())
    draws = rng.random(shots)
    outcomes = np.searchsorted(cum, draws, side="right")
    np.clip(outcomes, 0, state.dim - 1, out=outcomes)
    return np.bincount(outcomes, minlength=state.dim).astype(np.int64)
