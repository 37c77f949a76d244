"""Command line interface.

Subcommands: run (one-query search), trajectory (iterated steps as CSV),
sweep (one-step residual surface over a phase grid) and verify
(self-check suites). Exit codes: 0 success, 1 bad input or I/O, 2
infeasible one-query request (t < N/4), 3 verification or cross-engine
failure.
"""

from __future__ import annotations

import argparse
import cmath
import json
import math
import os
import re
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from . import verify as verify_mod
from .collapsed import (
    TWO_PI,
    CollapsedState,
    PhasePair,
    _one_step_pair,
    _require_counts,
    collapsed_success_probability,
    grover_step_collapsed,
    phase_grid,
    pi_phase_trajectory,
    single_query_phase,
    single_step_from_uniform,
)
from .errors import (
    EngineMismatch,
    InfeasibleSingleQuery,
    ParseError,
    PhaseGroverError,
)
from .oracle import PLACEMENTS, OracleSpec, generate_oracle, parse_oracle
from .statevector import (
    MeasurementReport,
    apply_grover,
    collapse,
    single_query_search,
    success_probability,
    uniform_state,
)

ENGINES = ("statevector", "collapsed", "both")

# Comparison tolerance when running both engines side by side.
DEFAULT_COMPARE_TOL = 1e-10

_CONFIG_KEYS = {
    "oracle", "n", "t", "placement", "seed", "engine", "beta", "gamma",
    "steps", "grid", "tol", "out", "format", "threads", "max_n", "cases",
}

_PHASE_RE = re.compile(
    r"^([+-])?\s*([0-9]*\.?[0-9]*(?:[eE][+-]?[0-9]+)?)\s*\*?\s*pi"
    r"\s*(?:/\s*([0-9]*\.?[0-9]+))?$",
    re.IGNORECASE,
)


def parse_phase(text: str) -> float:
    """Parse a radian value.

    Accepts plain numbers and pi literals: "pi", "2pi", "pi/3", "0.5pi",
    "-pi/2". Values outside [0, 2*pi] are reduced by periodicity, which
    the dynamics cannot distinguish.
    """
    s = str(text).strip()
    try:
        value = float(s)
    except ValueError:
        m = _PHASE_RE.match(s)
        if not m:
            raise ValueError(f"invalid phase literal: {text!r}") from None
        try:
            num = float(m.group(2)) if m.group(2) else 1.0
            den = float(m.group(3)) if m.group(3) else 1.0
        except ValueError:
            raise ValueError(f"invalid phase literal: {text!r}") from None
        sign = -1.0 if m.group(1) == "-" else 1.0
        value = sign * num * math.pi / den
    if not math.isfinite(value):
        raise ValueError(f"phase must be finite, got {text!r}")
    if 0.0 <= value <= TWO_PI:
        return value
    return value % TWO_PI


def _as_phase(value) -> float:
    if isinstance(value, str):
        return parse_phase(value)
    return parse_phase(repr(float(value)))


def _fmt(x: float) -> str:
    # 17 significant digits round-trip any double exactly
    return format(float(x), ".17g")


def _write_text(out: str | None, text: str, stream) -> None:
    if out is None:
        stream.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


@dataclass(frozen=True)
class RunConfig:
    """Resolved inputs of the run subcommand."""

    oracle: OracleSpec
    engine: str = "both"
    tolerance: float = DEFAULT_COMPARE_TOL
    out: str | None = None
    fmt: str = "csv"


def cmd_run(config: RunConfig, stream=None) -> tuple[int, MeasurementReport | None]:
    """One-query search: solve the phase, run the engines, report.

    Returns (exit code, report). Exit 2 when no single-query phase exists
    for the oracle's density.
    """
    stream = sys.stdout if stream is None else stream
    oracle = config.oracle
    n, t = oracle.n_total, oracle.t
    try:
        gamma = single_query_phase(n, t)
    except InfeasibleSingleQuery as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2, None
    phases = PhasePair.matched(gamma)
    reduced = single_step_from_uniform(n, t, phases)
    p_reduced = collapsed_success_probability(reduced)
    if config.engine == "collapsed":
        probability = p_reduced
    else:
        _, final, dense_report = single_query_search(oracle)
        probability = dense_report.success_probability
        if config.engine == "both":
            seen = collapse(final, oracle, tol=1e-6)
            dev = max(
                abs(seen.marked_amp - reduced.marked_amp),
                abs(seen.unmarked_amp - reduced.unmarked_amp),
                abs(probability - p_reduced),
            )
            if dev > config.tolerance:
                raise EngineMismatch(
                    f"engines disagree by {dev:.3e} on n={n} t={t} "
                    f"(tolerance {config.tolerance:.3e})"
                )
    report = MeasurementReport(success_probability=probability, oracle_queries=1)
    lines = [
        f"n={n}",
        f"t={t}",
        f"engine={config.engine}",
        f"gamma={_fmt(gamma)}",
        f"success_probability={_fmt(report.success_probability)}",
        f"oracle_queries={report.oracle_queries}",
    ]
    stream.write("\n".join(lines) + "\n")
    if config.out is not None:
        if config.fmt == "json":
            doc = {
                "n": n,
                "t": t,
                "engine": config.engine,
                "gamma": gamma,
                "success_probability": report.success_probability,
                "oracle_queries": report.oracle_queries,
            }
            artifact = json.dumps(doc, indent=2) + "\n"
        else:
            artifact = (
                "n,t,engine,gamma,success_probability,oracle_queries\n"
                f"{n},{t},{config.engine},{_fmt(gamma)},"
                f"{_fmt(report.success_probability)},{report.oracle_queries}\n"
            )
        _write_text(config.out, artifact, stream)
    return 0, report


def trajectory_rows(
    oracle: OracleSpec,
    phases: PhasePair,
    steps: int,
    engine: str,
    tolerance: float,
) -> tuple[list[dict], bool]:
    """States 0..steps under one repeated phase pair, as plain row dicts.

    With engine "both" the dense run must match the reduced run at every
    step within tolerance, else EngineMismatch. Rows gain a closed-form
    deviation entry when both phases equal pi and 0 < t < N.
    """
    n, t = oracle.n_total, oracle.t
    reduced_rows: list[CollapsedState] = []
    dense_rows: list[CollapsedState] = []
    if engine in ("collapsed", "both"):
        state = CollapsedState.uniform(n, t)
        reduced_rows.append(state)
        for _ in range(steps):
            state = grover_step_collapsed(state, phases)
            reduced_rows.append(state)
    if engine in ("statevector", "both"):
        dense = uniform_state(n)
        dense_rows.append(collapse(dense, oracle))
        for _ in range(steps):
            dense = apply_grover(dense, oracle, phases)
            dense_rows.append(collapse(dense, oracle))
    if engine == "both":
        for j, (a, b) in enumerate(zip(reduced_rows, dense_rows)):
            dev = max(
                abs(a.marked_amp - b.marked_amp),
                abs(a.unmarked_amp - b.unmarked_amp),
            )
            if dev > tolerance:
                raise EngineMismatch(
                    f"engines disagree by {dev:.3e} at step {j} "
                    f"(tolerance {tolerance:.3e})"
                )
    states = dense_rows if engine == "statevector" else reduced_rows
    closed_form = (
        phases.beta == math.pi and phases.gamma == math.pi and 0 < t < n
    )
    rows = []
    for j, state in enumerate(states):
        row = {
            "step": j,
            "marked_amp": state.marked_amp,
            "unmarked_amp": state.unmarked_amp,
            "success_probability": collapsed_success_probability(state),
        }
        if closed_form:
            ref = pi_phase_trajectory(n, t, j)
            row["closed_form_deviation"] = max(
                abs(state.marked_amp - ref.marked_amp),
                abs(state.unmarked_amp - ref.unmarked_amp),
            )
        rows.append(row)
    return rows, closed_form


def cmd_trajectory(
    oracle: OracleSpec,
    phases: PhasePair,
    steps: int,
    engine: str = "both",
    tolerance: float = DEFAULT_COMPARE_TOL,
    out: str | None = None,
    fmt: str = "csv",
    stream=None,
) -> tuple[int, list[dict]]:
    """Write the step-by-step trajectory as CSV or JSON rows."""
    stream = sys.stdout if stream is None else stream
    if not isinstance(steps, int) or isinstance(steps, bool) or steps < 0:
        raise ValueError(f"steps must be a nonnegative integer, got {steps!r}")
    rows, closed_form = trajectory_rows(oracle, phases, steps, engine, tolerance)
    if fmt == "json":
        doc = {
            "n": oracle.n_total,
            "t": oracle.t,
            "beta": phases.beta,
            "gamma": phases.gamma,
            "engine": engine,
            "rows": [
                {
                    "step": r["step"],
                    "marked_re": r["marked_amp"].real,
                    "marked_im": r["marked_amp"].imag,
                    "unmarked_re": r["unmarked_amp"].real,
                    "unmarked_im": r["unmarked_amp"].imag,
                    "success_probability": r["success_probability"],
                    **(
                        {"closed_form_deviation": r["closed_form_deviation"]}
                        if closed_form
                        else {}
                    ),
                }
                for r in rows
            ],
        }
        text = json.dumps(doc, indent=2) + "\n"
    else:
        header = "step,marked_re,marked_im,unmarked_re,unmarked_im,success_probability"
        if closed_form:
            header += ",closed_form_deviation"
        lines = [header]
        for r in rows:
            cells = [
                str(r["step"]),
                _fmt(r["marked_amp"].real),
                _fmt(r["marked_amp"].imag),
                _fmt(r["unmarked_amp"].real),
                _fmt(r["unmarked_amp"].imag),
                _fmt(r["success_probability"]),
            ]
            if closed_form:
                cells.append(_fmt(r["closed_form_deviation"]))
            lines.append(",".join(cells))
        text = "\n".join(lines) + "\n"
    _write_text(out, text, stream)
    return 0, rows


def sweep_surface(
    n_total: int, n_marked: int, grid_steps: int, threads: int = 1
) -> tuple[list[tuple[float, float, float, float]], tuple[float, float, float]]:
    """One-step residual and success surfaces over the phase grid.

    Returns (rows, argmin) where rows hold (beta, gamma, residual,
    success probability) in row-major grid order and argmin is the first
    grid point of minimal residual. Row computations are independent, so
    the thread count never changes the values.
    """
    _require_counts(n_total, n_marked, t_min=1)
    grid = phase_grid(grid_steps)
    exp_gammas = [cmath.exp(1j * g) for g in grid]
    inv_sqrt_n = 1.0 / math.sqrt(n_total)

    def one_row(beta: float) -> list[tuple[float, float, float, float]]:
        eb = cmath.exp(1j * beta)
        out = []
        for g, eg in zip(grid, exp_gammas):
            k1, l1 = _one_step_pair(n_total, n_marked, eb, eg, inv_sqrt_n)
            p = min(1.0, max(0.0, n_marked * abs(k1) ** 2))
            out.append((beta, g, abs(l1), p))
        return out

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            per_beta = list(pool.map(one_row, grid))
    else:
        per_beta = [one_row(b) for b in grid]
    rows = [cell for row in per_beta for cell in row]
    best = min(rows, key=lambda cell: cell[2])
    # first strict minimum in row-major order
    for cell in rows:
        if cell[2] == best[2]:
            best = cell
            break
    return rows, (best[0], best[1], best[2])


def cmd_sweep(
    n_total: int,
    n_marked: int,
    grid_steps: int,
    threads: int = 1,
    out: str | None = None,
    fmt: str = "csv",
    stream=None,
) -> tuple[int, tuple[float, float, float]]:
    """Write the phase-grid sweep; output is byte-stable across thread counts."""
    stream = sys.stdout if stream is None else stream
    if not isinstance(grid_steps, int) or isinstance(grid_steps, bool) or grid_steps < 2:
        raise ValueError(f"grid needs at least 2 steps, got {grid_steps!r}")
    if not isinstance(threads, int) or isinstance(threads, bool) or threads < 1:
        raise ValueError(f"threads must be a positive integer, got {threads!r}")
    rows, argmin = sweep_surface(n_total, n_marked, grid_steps, threads)
    if fmt == "json":
        doc = {
            "n": n_total,
            "t": n_marked,
            "grid": grid_steps,
            "argmin": {
                "beta": argmin[0],
                "gamma": argmin[1],
                "unmarked_residual": argmin[2],
            },
            "rows": [list(cell) for cell in rows],
        }
        text = json.dumps(doc, indent=2) + "\n"
    else:
        lines = ["beta,gamma,unmarked_residual,success_probability"]
        for beta, g, residual, p in rows:
            lines.append(f"{_fmt(beta)},{_fmt(g)},{_fmt(residual)},{_fmt(p)}")
        lines.append(
            f"# argmin beta={_fmt(argmin[0])} gamma={_fmt(argmin[1])} "
            f"unmarked_residual={_fmt(argmin[2])}"
        )
        text = "\n".join(lines) + "\n"
    _write_text(out, text, stream)
    return 0, argmin


def cmd_verify(
    max_n: int = 64,
    tolerance: float | None = None,
    seed: int = 0,
    cases: int = 1000,
    stream=None,
) -> tuple[int, list[verify_mod.SuiteResult]]:
    """Run the self-check suites and print a summary table."""
    stream = sys.stdout if stream is None else stream
    results = verify_mod.run_all(max_n=max_n, tol=tolerance, seed=seed, cases=cases)
    name_w = max(len(r.name) for r in results)
    stream.write(
        f"{'suite':<{name_w}}  {'cases':>6}  {'failures':>8}  "
        f"{'worst':>10}  {'tolerance':>10}  status\n"
    )
    for r in results:
        status = "pass" if r.passed else "FAIL"
        stream.write(
            f"{r.name:<{name_w}}  {r.cases:>6}  {r.failures:>8}  "
            f"{r.worst_deviation:>10.3e}  {r.tolerance:>10.3e}  {status}\n"
        )
    failed = [r for r in results if not r.passed]
    if failed:
        stream.write(f"{len(failed)} suite(s) failed\n")
        return 3, results
    stream.write("all suites passed\n")
    return 0, results


class _Parser(argparse.ArgumentParser):
    # argument errors exit 1; code 2 is reserved for infeasible requests
    def error(self, message):
        self.exit(1, f"{self.prog}: error: {message}\n")


def _add_oracle_opts(p: argparse.ArgumentParser) -> None:
    p.add_argument("--oracle", metavar="PATH", help="oracle JSON file")
    p.add_argument("--n", type=int, help="register size")
    p.add_argument("--t", type=int, help="marked-state count")
    p.add_argument("--placement", choices=PLACEMENTS, help="marked-set layout")
    p.add_argument("--seed", type=int, help="seed for random placement")


def _add_common_opts(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", metavar="PATH", help="JSON config; flags override it")
    p.add_argument("--out", metavar="PATH", help="write output here instead of stdout")
    p.add_argument("--format", dest="fmt", choices=("csv", "json"))
    p.add_argument("--tol", type=float, help="comparison tolerance")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="phasegrover",
        description="Phase-generalized search simulator",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", parents=[], help="one-query search")
    _add_oracle_opts(p_run)
    _add_common_opts(p_run)
    p_run.add_argument("--engine", choices=ENGINES)

    p_traj = sub.add_parser("trajectory", help="iterated steps as CSV/JSON")
    _add_oracle_opts(p_traj)
    _add_common_opts(p_traj)
    p_traj.add_argument("--engine", choices=ENGINES)
    p_traj.add_argument("--beta", help='reflection phase, e.g. "pi" or 1.5')
    p_traj.add_argument("--gamma", help='oracle phase, e.g. "pi/2" or 0.7')
    p_traj.add_argument("--steps", type=int, help="number of steps to record")

    p_sweep = sub.add_parser("sweep", help="one-step phase-grid sweep")
    _add_oracle_opts(p_sweep)
    _add_common_opts(p_sweep)
    p_sweep.add_argument("--grid", type=int, help="grid points per axis")
    p_sweep.add_argument("--threads", type=int, help="worker threads")

    p_verify = sub.add_parser("verify", help="self-check suites")
    p_verify.add_argument("--config", metavar="PATH")
    p_verify.add_argument("--tol", type=float)
    p_verify.add_argument("--max-n", dest="max_n", type=int)
    p_verify.add_argument("--seed", type=int)
    p_verify.add_argument("--cases", type=int)
    return parser


def _load_config(path: str | None) -> dict:
    if path is None:
        return {}
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid config JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ParseError("config must be a JSON object")
    unknown = set(doc) - _CONFIG_KEYS
    if unknown:
        raise ParseError(f"unknown config fields: {sorted(unknown)}")
    return doc


def _require_int(value, what: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ParseError(f"{what} must be an integer, got {value!r}")
    return value


def _resolve_oracle(args, cfg: dict) -> OracleSpec:
    if args.oracle is not None and (args.n is not None or args.t is not None):
        raise ValueError("give either --oracle or --n/--t, not both")
    path = args.oracle if args.oracle is not None else cfg.get("oracle")
    if args.oracle is None and (args.n is not None or args.t is not None):
        path = None
    if path is not None:
        with open(path, encoding="utf-8") as fh:
            return parse_oracle(fh.read())
    n = args.n if args.n is not None else cfg.get("n")
    t = args.t if args.t is not None else cfg.get("t")
    if n is None or t is None:
        raise ValueError("an oracle is required: --oracle PATH or --n N --t T")
    placement = (
        args.placement if args.placement is not None else cfg.get("placement", "first")
    )
    if placement not in PLACEMENTS:
        raise ParseError(f"placement must be one of {PLACEMENTS}, got {placement!r}")
    seed = args.seed if args.seed is not None else cfg.get("seed", 0)
    return generate_oracle(
        _require_int(n, "n"), _require_int(t, "t"), placement, _require_int(seed, "seed")
    )


def _pick(args, cfg: dict, key: str, default):
    value = getattr(args, key, None)
    if value is not None:
        return value
    if key in cfg:
        return cfg[key]
    return default


def _default_threads() -> int:
    env = os.environ.get("PHASEGROVER_THREADS")
    if env is None:
        return 1
    try:
        return max(1, int(env))
    except ValueError:
        return 1


def _dispatch(args) -> int:
    cfg = _load_config(args.config)
    if args.command == "verify":
        max_n = _require_int(_pick(args, cfg, "max_n", 64), "max_n")
        if max_n < 4:
            raise ValueError(f"max_n must be at least 4, got {max_n}")
        tol = _pick(args, cfg, "tol", None)
        seed = _require_int(_pick(args, cfg, "seed", 0), "seed")
        cases = _require_int(_pick(args, cfg, "cases", 1000), "cases")
        code, _ = cmd_verify(max_n, tol, seed, cases)
        return code

    fmt = _pick(args, cfg, "fmt", None) or cfg.get("format", "csv")
    if fmt not in ("csv", "json"):
        raise ParseError(f"format must be csv or json, got {fmt!r}")
    out = _pick(args, cfg, "out", None)
    tol = _pick(args, cfg, "tol", None)
    tolerance = DEFAULT_COMPARE_TOL if tol is None else float(tol)

    if args.command == "sweep":
        oracle = _resolve_oracle(args, cfg)
        grid = _require_int(_pick(args, cfg, "grid", 101), "grid")
        threads = _require_int(
            _pick(args, cfg, "threads", _default_threads()), "threads"
        )
        code, _ = cmd_sweep(
            oracle.n_total, oracle.t, grid, threads=threads, out=out, fmt=fmt
        )
        return code

    engine = _pick(args, cfg, "engine", "both")
    if engine not in ENGINES:
        raise ParseError(f"engine must be one of {ENGINES}, got {engine!r}")
    oracle = _resolve_oracle(args, cfg)

    if args.command == "run":
        code, _ = cmd_run(
            RunConfig(oracle=oracle, engine=engine, tolerance=tolerance, out=out, fmt=fmt)
        )
        return code

    if args.command == "trajectory":
        beta = _as_phase(_pick(args, cfg, "beta", "pi"))
        gamma = _as_phase(_pick(args, cfg, "gamma", "pi"))
        steps = _require_int(_pick(args, cfg, "steps", 10), "steps")
        code, _ = cmd_trajectory(
            oracle,
            PhasePair(beta, gamma),
            steps,
            engine=engine,
            tolerance=tolerance,
            out=out,
            fmt=fmt,
        )
        return code

    raise ValueError(f"unknown command {args.command!r}")


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        if isinstance(exc.code, int):
            return exc.code
        return 0 if exc.code is None else 1
    try:
        return _dispatch(args)
    except InfeasibleSingleQuery as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except EngineMismatch as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (PhaseGroverError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def entry() -> None:
    sys.exit(main())
