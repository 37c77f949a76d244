"""Compare the compiled and numpy kernel backends on the dense engine.

Times the individual kernels and a full search step at several register
sizes, prints a table, and cross-checks that both backends produce the
same step (bit-identical sums, rounding-level agreement on the phase
kernel). Run from the repository root:

    python bench/benchmark_backends.py [--max-power 20] [--repeats 5]
"""

from __future__ import annotations

import argparse
import math
import time

import numpy as np

from phasegrover._kernels import available_backends


def _best_of(repeats: int, fn, *args) -> float:
    best = math.inf
    for _ in range(repeats):
        start = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - start)
    return best


def _grover_step(kernels, amps: np.ndarray, marked: np.ndarray) -> np.ndarray:
    # Mirrors statevector.apply_grover without the wrapper overhead:
    # conditional phase on the marked set, then full-space diffusion.
    buf = amps.copy()
    kernels.phase_inplace(buf, marked, complex(-1.0))
    mu = kernels.tree_sum(buf) / buf.shape[0]
    kernels.add_inplace(buf, -2.0 * mu)
    return buf


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--max-power", type=int, default=20,
                        help="largest register size as a power of two")
    parser.add_argument("--repeats", type=int, default=5,
                        help="timing repetitions; best value is reported")
    args = parser.parse_args()

    backends = available_backends()
    if "compiled" not in backends:
        print("compiled backend not built; timing numpy only")

    rng = np.random.Generator(np.random.PCG64(7))
    print(f"{'n':>9}  {'kernel':<12}  " + "  ".join(f"{name:>12}" for name in backends))
    for power in range(12, args.max_power + 1, 4):
        n = 1 << power
        raw = rng.normal(size=n) + 1j * rng.normal(size=n)
        amps = np.ascontiguousarray(raw / np.linalg.norm(raw))
        marked = np.arange(n // 4, dtype=np.intp)

        rows = {
            "tree_sum": lambda k: k.tree_sum(amps),
            "phase": lambda k: k.phase_inplace(amps.copy(), marked, 1j),
            "add": lambda k: k.add_inplace(amps.copy(), 0.125 + 0.5j),
            "grover_step": lambda k: _grover_step(k, amps, marked),
        }
        for label, fn in rows.items():
            cells = []
            for name, module in backends.items():
                seconds = _best_of(args.repeats, fn, module)
                cells.append(f"{seconds * 1e3:>10.3f}ms")
            print(f"{n:>9}  {label:<12}  " + "  ".join(f"{c:>12}" for c in cells))

        if len(backends) == 2:
            sums = [m.tree_sum(amps) for m in backends.values()]
            assert sums[0] == sums[1], "tree_sum must match bit for bit"
            steps = [_grover_step(m, amps, marked) for m in backends.values()]
            worst = float(np.max(np.abs(steps[0] - steps[1])))
            print(f"{'':>9}  cross-check   tree_sum equal, step max dev {worst:.3e}")


if __name__ == "__main__":
    main()
