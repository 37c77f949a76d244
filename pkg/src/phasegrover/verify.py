"""Self-check suites wiring the two engines against each other.

Four deterministic suites: norm preservation on the dense engine,
cross-engine agreement on class-uniform states, the one-query certainty
identity, and the half-turn closed form. Each suite has its own default
tolerance tuned to its arithmetic depth; a caller-supplied tolerance
overrides all of them.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .collapsed import (
    TWO_PI,
    CollapsedState,
    PhasePair,
    collapsed_success_probability,
    grover_step_collapsed,
    pi_phase_trajectory,
    single_query_phase,
    single_step_from_uniform,
)
from .oracle import OracleSpec, generate_oracle
from .statevector import (
    StateVector,
    SubspaceSpec,
    apply_conditional_phase,
    apply_diffusion,
    apply_grover,
    collapse,
    embed,
    uniform_state,
)

DEFAULT_TOLERANCES = {
    "unitarity": 1e-12,
    "cross_engine": 1e-11,
    "one_query_certainty": 1e-10,
    "half_turn_closed_form": 1e-9,
}


@dataclass(frozen=True)
class SuiteResult:
    """Outcome of one verification suite."""

    name: str
    cases: int
    failures: int
    worst_deviation: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.failures == 0


def _random_state(rng: np.random.Generator, n: int) -> StateVector:
    raw = rng.normal(size=n) + 1j * rng.normal(size=n)
    return StateVector(raw / np.linalg.norm(raw))


def _random_collapsed(rng: np.random.Generator, n: int, t: int) -> CollapsedState:
    k = complex(rng.normal(), rng.normal())
    l = complex(rng.normal(), rng.normal())
    scale = math.sqrt(t * abs(k) ** 2 + (n - t) * abs(l) ** 2)
    return CollapsedState(k / scale, l / scale, n, t)


def unitarity_suite(
    max_n: int = 64, tol: float | None = None, cases: int = 1000, seed: int = 0
) -> SuiteResult:
    """Random dense-engine steps must preserve the squared norm."""
    tol = DEFAULT_TOLERANCES["unitarity"] if tol is None else tol
    rng = np.random.Generator(np.random.PCG64(seed))
    worst = 0.0
    failures = 0
    for _ in range(cases):
        n = int(rng.integers(2, max_n + 1))
        state = _random_state(rng, n)
        beta = float(rng.uniform(0.0, TWO_PI))
        gamma = float(rng.uniform(0.0, TWO_PI))
        t = int(rng.integers(0, n + 1))
        oracle = generate_oracle(n, t, "random", seed=int(rng.integers(2**32)))
        m = int(rng.integers(1, n + 1))
        subspace = SubspaceSpec(
            tuple(sorted(int(i) for i in rng.permutation(n)[:m]))
        )
        kind = int(rng.integers(0, 4))
        if kind == 0:
            out = apply_conditional_phase(state, oracle, gamma)
        elif kind == 1:
            out = apply_diffusion(state, None, beta)
        elif kind == 2:
            out = apply_diffusion(state, subspace, beta)
        else:
            out = apply_grover(state, oracle, PhasePair(beta, gamma))
        dev = abs(float(np.vdot(out.amps, out.amps).real) - 1.0)
        worst = max(worst, dev)
        if dev > tol:
            failures += 1
    return SuiteResult("unitarity", cases, failures, worst, tol)


def cross_engine_suite(
    max_n: int = 64, tol: float | None = None, cases: int = 300, seed: int = 0
) -> SuiteResult:
    """Dense steps and reduced steps must agree on class amplitudes."""
    tol = DEFAULT_TOLERANCES["cross_engine"] if tol is None else tol
    rng = np.random.Generator(np.random.PCG64(seed))
    worst = 0.0
    failures = 0
    for _ in range(cases):
        n = int(rng.integers(2, max_n + 1))
        t = int(rng.integers(1, n))
        oracle = generate_oracle(n, t, "random", seed=int(rng.integers(2**32)))
        phases = PhasePair(float(rng.uniform(0.0, TWO_PI)), float(rng.uniform(0.0, TWO_PI)))
        reduced = _random_collapsed(rng, n, t)
        dense = embed(reduced, oracle)
        steps = int(rng.integers(1, 21))
        dev = 0.0
        for _step in range(steps):
            reduced = grover_step_collapsed(reduced, phases)
            dense = apply_grover(dense, oracle, phases)
            seen = collapse(dense, oracle, tol=1e-6)
            dev = max(
                dev,
                abs(seen.marked_amp - reduced.marked_amp),
                abs(seen.unmarked_amp - reduced.unmarked_amp),
            )
        worst = max(worst, dev)
        if dev > tol:
            failures += 1
    return SuiteResult("cross_engine", cases, failures, worst, tol)


def one_query_certainty_suite(max_n: int = 64, tol: float | None = None) -> SuiteResult:
    """Matched phase from the solver must cancel the unmarked class.

    Exhaustive over every (N, t) with 4t >= N up to max_n: after one step
    from uniform the unmarked amplitude vanishes, the marked one equals
    (e^{i gamma} - 1)/sqrt(N), and the success probability is 1.
    """
    tol = DEFAULT_TOLERANCES["one_query_certainty"] if tol is None else tol
    worst = 0.0
    failures = 0
    cases = 0
    for n in range(4, max_n + 1):
        for t in range(math.ceil(n / 4), n + 1):
            cases += 1
            gamma = single_query_phase(n, t)
            state = single_step_from_uniform(n, t, PhasePair.matched(gamma))
            expected_k = (cmath.exp(1j * gamma) - 1.0) / math.sqrt(n)
            dev = abs(state.unmarked_amp) if t < n else 0.0
            dev = max(dev, abs(state.marked_amp - expected_k))
            dev = max(dev, abs(collapsed_success_probability(state) - 1.0))
            worst = max(worst, dev)
            if dev > tol:
                failures += 1
    return SuiteResult("one_query_certainty", cases, failures, worst, tol)


def half_turn_closed_form_suite(
    max_n: int = 64, tol: float | None = None, max_step: int = 50
) -> SuiteResult:
    """Iterated half-turn steps must match the closed form componentwise."""
    tol = DEFAULT_TOLERANCES["half_turn_closed_form"] if tol is None else tol
    phases = PhasePair.matched(math.pi)
    worst = 0.0
    failures = 0
    cases = 0
    for n in range(2, max_n + 1):
        for t in range(1, n):
            cases += 1
            state = CollapsedState.uniform(n, t)
            dev = 0.0
            for j in range(1, max_step + 1):
                state = grover_step_collapsed(state, phases)
                closed = pi_phase_trajectory(n, t, j)
                dev = max(
                    dev,
                    abs(state.marked_amp - closed.marked_amp),
                    abs(state.unmarked_amp - closed.unmarked_amp),
                )
            worst = max(worst, dev)
            if dev > tol:
                failures += 1
    return SuiteResult("half_turn_closed_form", cases, failures, worst, tol)


def run_all(
    max_n: int = 64, tol: float | None = None, seed: int = 0, cases: int = 1000
) -> list[SuiteResult]:
    """Run every suite; a non-None tol overrides all per-suite defaults."""
    if max_n < 4:
        raise ValueError(f"max_n must be at least 4, got {max_n}")
    return [
        unitarity_suite(max_n=max_n, tol=tol, cases=cases, seed=seed),
        cross_engine_suite(max_n=max_n, tol=tol, cases=max(1, cases // 3), seed=seed),
        one_query_certainty_suite(max_n=max_n, tol=tol),
        half_turn_closed_form_suite(max_n=max_n, tol=tol),
    ]
