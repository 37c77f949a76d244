"""Reduced two-amplitude dynamics for phase-generalized amplitude search.

When every marked state carries one common amplitude and every unmarked
state another, one search step keeps that shape. The whole evolution then
lives in two complex numbers: ``marked_amp`` (shared by the t marked
states) and ``unmarked_amp`` (shared by the remaining N - t). This module
implements that reduced step, the closed form for the classic half-turn
phase choice, and the phase that finishes the search in a single oracle
query whenever t >= N/4.

One step with reflection phase beta and oracle phase gamma maps
(k, l) = (marked_amp, unmarked_amp) to

    k' = ((e^{i b} - 1) t + N) / N * e^{i g} * k + (e^{i b} - 1)(N - t)/N * l
    l' = (e^{i b} - 1) t / N * e^{i g} * k + ((e^{i b} - 1)(N - t) + N)/N * l

which conserves t|k|^2 + (N - t)|l|^2.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .errors import InfeasibleSingleQuery, InvalidCount

TWO_PI = 2.0 * math.pi

# Constructor guard on the conserved norm. Deliberately looser than the
# comparison tolerances used in tests so long trajectories stay valid.
_NORM_TOL = 1e-6


@dataclass(frozen=True)
class PhasePair:
    """Reflection phase ``beta`` and oracle phase ``gamma``, in radians.

    Both must be finite and lie in [0, 2*pi]; the dynamics is periodic, so
    callers reduce out-of-range values before constructing a pair.
    """

    beta: float
    gamma: float

    def __post_init__(self):
        for label, value in (("beta", self.beta), ("gamma", self.gamma)):
            value = float(value)
            if not math.isfinite(value):
                raise ValueError(f"{label} must be finite, got {value!r}")
            if not 0.0 <= value <= TWO_PI:
                raise ValueError(
                    f"{label} must lie in [0, 2*pi], got {value!r}"
                )
            object.__setattr__(self, label, value)

    @classmethod
    def matched(cls, phase: float) -> "PhasePair":
        """Pair with equal reflection and oracle phase."""
        return cls(phase, phase)


@dataclass(frozen=True)
class CollapsedState:
    """Two-amplitude description of a register state.

    ``n_marked`` of the ``n_total`` basis states share ``marked_amp``; the
    rest share ``unmarked_amp``. The conserved norm
    ``t |k|^2 + (N - t) |l|^2`` must be 1 within a small guard. When every
    state is marked the unmarked amplitude is a spectator (its weight is
    zero); steps carry it as exactly 0, and symmetrically for t = 0.
    """

    marked_amp: complex
    unmarked_amp: complex
    n_total: int
    n_marked: int

    def __post_init__(self):
        n, t = self.n_total, self.n_marked
        if isinstance(n, bool) or not isinstance(n, int) or n < 1:
            raise InvalidCount(f"register size must be a positive integer, got {n!r}")
        if isinstance(t, bool) or not isinstance(t, int) or not 0 <= t <= n:
            raise InvalidCount(f"marked count must lie in [0, {n}], got {t!r}")
        k = complex(self.marked_amp)
        l = complex(self.unmarked_amp)
        if not (cmath.isfinite(k) and cmath.isfinite(l)):
            raise ValueError("amplitudes must be finite")
        object.__setattr__(self, "marked_amp", k)
        object.__setattr__(self, "unmarked_amp", l)
        norm = t * abs(k) ** 2 + (n - t) * abs(l) ** 2
        if abs(norm - 1.0) > _NORM_TOL:
            raise ValueError(
                f"state is not normalized: t|k|^2 + (N-t)|l|^2 = {norm!r}"
            )

    @classmethod
    def uniform(cls, n_total: int, n_marked: int) -> "CollapsedState":
        """Uniform superposition over all ``n_total`` states."""
        if isinstance(n_total, bool) or not isinstance(n_total, int) or n_total < 1:
            raise InvalidCount(
                f"register size must be a positive integer, got {n_total!r}"
            )
        if (
            isinstance(n_marked, bool)
            or not isinstance(n_marked, int)
            or not 0 <= n_marked <= n_total
        ):
            raise InvalidCount(
                f"marked count must lie in [0, {n_total}], got {n_marked!r}"
            )
        amp = 1.0 / math.sqrt(n_total)
        k = complex(amp) if n_marked > 0 else 0j
        l = complex(amp) if n_marked < n_total else 0j
        return cls(k, l, n_total, n_marked)


@dataclass(frozen=True)
class TrajectoryRecord:
    """One point of an iterated search: step index, state, success probability."""

    step: int
    state: CollapsedState
    success_probability: float


def _one_step_pair(
    n_total: int,
    n_marked: int,
    exp_beta: complex,
    exp_gamma: complex,
    inv_sqrt_n: float,
) -> tuple[complex, complex]:
    """One step applied to the uniform state, with exponentials precomputed.

    Single shared arithmetic path for single_step_from_uniform, the
    residual scan and the sweep command, so their values agree bit for bit.
    """
    frac = n_marked / n_total
    cross = (exp_beta - 1.0) * (exp_gamma - 1.0) * frac
    k1 = (cross + exp_gamma + exp_beta - 1.0) * inv_sqrt_n
    l1 = (cross + exp_beta) * inv_sqrt_n
    return k1, l1


def grover_step_collapsed(state: CollapsedState, phases: PhasePair) -> CollapsedState:
    """Apply one search step to a reduced state.

    Conserves the norm exactly in exact arithmetic. At t = N the unmarked
    amplitude is carried as exactly 0 (the marked one picks up the phase
    factor e^{i(beta+gamma)}), and symmetrically at t = 0.
    """
    n, t = state.n_total, state.n_marked
    eb = cmath.exp(1j * phases.beta)
    eg = cmath.exp(1j * phases.gamma)
    k, l = state.marked_amp, state.unmarked_amp
    if t == n:
        return CollapsedState(eb * eg * k, 0j, n, t)
    if t == 0:
        return CollapsedState(0j, eb * l, n, t)
    d = eb - 1.0
    k2 = ((d * t + n) / n) * eg * k + (d * (n - t) / n) * l
    l2 = (d * t / n) * eg * k + ((d * (n - t) + n) / n) * l
    return CollapsedState(k2, l2, n, t)


def single_step_from_uniform(
    n_total: int, n_marked: int, phases: PhasePair
) -> CollapsedState:
    """State after one step applied to the uniform superposition.

    Requires 1 <= n_marked <= n_total. Evaluates the one-step formula
    directly, so the unmarked amplitude is well defined for every phase
    pair even at n_marked = n_total, where it carries zero weight.
    """
    _require_counts(n_total, n_marked, t_min=1)
    k1, l1 = _one_step_pair(
        n_total,
        n_marked,
        cmath.exp(1j * phases.beta),
        cmath.exp(1j * phases.gamma),
        1.0 / math.sqrt(n_total),
    )
    return CollapsedState(k1, l1, n_total, n_marked)


def single_query_phase(n_total: int, n_marked: int) -> float:
    """Matched phase that zeroes every unmarked amplitude in one step.

    Returns the principal solution ``arccos(1 - N/(2t))`` in [0, pi]; its
    reflection ``2*pi - gamma`` is the only other solution in [0, 2*pi)
    and is not returned. Feasible exactly when 4t >= N, which is checked
    in integer arithmetic before any floating-point rounding.

    Raises:
        InvalidCount: n_marked outside [1, n_total].
        InfeasibleSingleQuery: 4 * n_marked < n_total.
    """
    _require_counts(n_total, n_marked, t_min=1)
    if 4 * n_marked < n_total:
        raise InfeasibleSingleQuery(
            f"one-query search needs t >= N/4: t={n_marked}, N={n_total}"
        )
    x = 1.0 - n_total / (2.0 * n_marked)
    # x lies in [-1, 0.5] exactly; the clamp only absorbs rounding.
    return math.acos(min(1.0, max(-1.0, x)))


def pi_phase_trajectory(n_total: int, n_marked: int, step: int) -> CollapsedState:
    """Closed form for the half-turn phase choice beta = gamma = pi.

    With theta = arcsin(sqrt(t/N)), step j from uniform gives

        k_j = (-1)^j sin((2j+1) theta) / sqrt(t)
        l_j = (-1)^j cos((2j+1) theta) / sqrt(N - t)

    matching the iterated step componentwise. Requires 1 <= t <= N - 1.
    """
    _require_counts(n_total, n_marked, t_min=1)
    if n_marked >= n_total:
        raise InvalidCount(
            f"closed form needs an unmarked state: t={n_marked}, N={n_total}"
        )
    if not isinstance(step, int) or isinstance(step, bool) or step < 0:
        raise ValueError(f"step must be a nonnegative integer, got {step!r}")
    theta = math.asin(math.sqrt(n_marked / n_total))
    sign = -1.0 if step % 2 else 1.0
    angle = (2 * step + 1) * theta
    k = sign * math.sin(angle) / math.sqrt(n_marked)
    l = sign * math.cos(angle) / math.sqrt(n_total - n_marked)
    return CollapsedState(complex(k), complex(l), n_total, n_marked)


def collapsed_success_probability(state: CollapsedState) -> float:
    """Probability that measuring the register yields a marked state."""
    p = state.n_marked * abs(state.marked_amp) ** 2
    return min(1.0, max(0.0, p))


def iterate_collapsed(
    initial: CollapsedState, phases: PhasePair, steps: int
) -> list[TrajectoryRecord]:
    """Record states 0..steps of repeated application of one phase pair."""
    if not isinstance(steps, int) or isinstance(steps, bool) or steps < 0:
        raise ValueError(f"steps must be a nonnegative integer, got {steps!r}")
    state = initial
    records = [TrajectoryRecord(0, state, collapsed_success_probability(state))]
    for j in range(1, steps + 1):
        state = grover_step_collapsed(state, phases)
        records.append(TrajectoryRecord(j, state, collapsed_success_probability(state)))
    return records


def phase_grid(steps: int) -> list[float]:
    """Evenly spaced grid over [0, 2*pi] including both endpoints.

    Point i is (2*pi * i) / (steps - 1); every consumer shares this exact
    expression so scans and sweeps agree bit for bit.
    """
    if not isinstance(steps, int) or isinstance(steps, bool) or steps < 2:
        raise ValueError(f"grid needs at least 2 steps, got {steps!r}")
    return [TWO_PI * i / (steps - 1) for i in range(steps)]


def min_unmarked_residual(n_total: int, n_marked: int, grid_steps: int) -> float:
    """Smallest |unmarked amplitude| after one step over a phase-pair grid.

    Scans the (beta, gamma) grid of :func:`phase_grid` and returns the
    minimal one-step unmarked modulus from the uniform state. Strictly
    positive when 4t < N (no phase pair can cancel the unmarked states in
    one query); near zero when t >= N/4 and the grid contains a point
    close to the matched solution.
    """
    _require_counts(n_total, n_marked, t_min=1)
    grid = phase_grid(grid_steps)
    exp_gammas = [cmath.exp(1j * g) for g in grid]
    inv_sqrt_n = 1.0 / math.sqrt(n_total)
    best = math.inf
    for beta in grid:
        eb = cmath.exp(1j * beta)
        for eg in exp_gammas:
            residual = abs(
                _one_step_pair(n_total, n_marked, eb, eg, inv_sqrt_n)[1]
            )
            if residual < best:
                best = residual
    return best


def _require_counts(n_total: int, n_marked: int, t_min: int) -> None:
    if isinstance(n_total, bool) or not isinstance(n_total, int) or n_total < 1:
        raise InvalidCount(f"register size must be a positive integer, got {n_total!r}")
    if (
        isinstance(n_marked, bool)
        or not isinstance(n_marked, int)
        or not t_min <= n_marked <= n_total
    ):
        raise InvalidCount(
            f"marked count must lie in [{t_min}, {n_total}], got {n_marked!r}"
        )
