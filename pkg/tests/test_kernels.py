import math
import subprocess
import sys

import numpy as np
import pytest

from phasegrover import _kernels
from phasegrover._kernels import available_backends

BACKENDS = available_backends()
LENGTHS = [1, 2, 3, 4, 5, 7, 8, 9, 17, 31, 64, 333, 1000, 1023, 1024, 1025, 2048, 4103]


def halving_reference(values) -> complex:
    """Independent realization of the reduction-shape contract.

    Pair adjacent elements at every level; carry an odd tail element up
    unchanged. Plain Python complex arithmetic, no numpy.
    """
    xs = [complex(v) for v in values]
    while len(xs) > 1:
        nxt = [xs[2 * i] + xs[2 * i + 1] for i in range(len(xs) // 2)]
        if len(xs) & 1:
            nxt.append(xs[-1])
        xs = nxt
    return xs[0] if xs else 0j


def random_values(n, seed):
    rng = np.random.default_rng(seed)
    # wide dynamic range makes summation-order differences visible
    scale = np.exp(rng.uniform(-12, 12, size=n))
    return (rng.normal(size=n) + 1j * rng.normal(size=n)) * scale


@pytest.mark.parametrize("name", sorted(BACKENDS))
class TestTreeSum:
    @pytest.mark.parametrize("n", LENGTHS)
    def test_matches_halving_reference_bitwise(self, name, n):
        x = random_values(n, seed=n)
        assert BACKENDS[name].tree_sum(x) == halving_reference(x)

    def test_empty(self, name):
        assert BACKENDS[name].tree_sum(np.empty(0, dtype=complex)) == 0j

    def test_large_blocked_lengths(self, name):
        # crosses several leaf boundaries plus a ragged tail
        for n in (1 << 17, (1 << 17) + 13):
            x = random_values(n, seed=n)
            assert BACKENDS[name].tree_sum(x) == halving_reference(x)

    def test_accuracy_against_fsum(self, name):
        x = random_values(4103, seed=99)
        exact = complex(
            math.fsum(float(v) for v in x.real), math.fsum(float(v) for v in x.imag)
        )
        got = BACKENDS[name].tree_sum(x)
        assert abs(got - exact) / abs(exact) < 1e-13

    def test_repeatable(self, name):
        x = random_values(3001, seed=5)
        assert BACKENDS[name].tree_sum(x) == BACKENDS[name].tree_sum(x)


@pytest.mark.skipif(len(BACKENDS) < 2, reason="compiled backend not built")
class TestCrossBackend:
    @pytest.mark.parametrize("n", LENGTHS + [1 << 20, (1 << 20) + 13])
    def test_tree_sum_bit_identical(self, n):
        x = random_values(n, seed=n + 1)
        values = {name: mod.tree_sum(x) for name, mod in BACKENDS.items()}
        assert values["numpy"] == values["compiled"]

    def test_add_inplace_bit_identical(self):
        x = random_values(4099, seed=11)
        delta = 0.7071067811865476 - 0.3333333333333333j
        bufs = {}
        for name, mod in BACKENDS.items():
            buf = x.copy()
            mod.add_inplace(buf, delta)
            bufs[name] = buf
        np.testing.assert_array_equal(bufs["numpy"], bufs["compiled"])

    def test_add_at_inplace_bit_identical(self):
        x = random_values(4099, seed=12)
        idx = np.arange(1, 4099, 3, dtype=np.intp)
        delta = -0.25 + 1.5j
        bufs = {}
        for name, mod in BACKENDS.items():
            buf = x.copy()
            mod.add_at_inplace(buf, idx, delta)
            bufs[name] = buf
        np.testing.assert_array_equal(bufs["numpy"], bufs["compiled"])

    def test_phase_inplace_agrees_to_rounding(self):
        # multiplication may contract differently across compilers; sums
        # must be exact but a 1-ulp budget is allowed here
        x = random_values(4099, seed=13)
        idx = np.arange(0, 4099, 2, dtype=np.intp)
        factor = complex(math.cos(1.1), math.sin(1.1))
        bufs = {}
        for name, mod in BACKENDS.items():
            buf = x.copy()
            mod.phase_inplace(buf, idx, factor)
            bufs[name] = buf
        np.testing.assert_allclose(
            bufs["numpy"], bufs["compiled"], rtol=1e-15, atol=0
        )


@pytest.mark.parametrize("name", sorted(BACKENDS))
class TestInplaceKernels:
    def test_phase_touches_only_indices(self, name):
        x = random_values(64, seed=20)
        idx = np.array([3, 17, 40], dtype=np.intp)
        buf = x.copy()
        BACKENDS[name].phase_inplace(buf, idx, 1j)
        rest = np.setdiff1d(np.arange(64), idx)
        np.testing.assert_array_equal(buf[rest], x[rest])
        np.testing.assert_allclose(buf[idx], x[idx] * 1j, rtol=1e-15)

    def test_add_matches_scalar_adds(self, name):
        x = random_values(33, seed=21)
        buf = x.copy()
        BACKENDS[name].add_inplace(buf, 0.5 - 0.25j)
        expected = np.array([v + (0.5 - 0.25j) for v in x])
        np.testing.assert_array_equal(buf, expected)

    def test_add_at_matches_scalar_adds(self, name):
        x = random_values(33, seed=22)
        idx = np.array([0, 5, 32], dtype=np.intp)
        buf = x.copy()
        BACKENDS[name].add_at_inplace(buf, idx, -2.0 + 1j)
        expected = x.copy()
        for i in idx:
            expected[i] = expected[i] + (-2.0 + 1j)
        np.testing.assert_array_equal(buf, expected)

    def test_empty_index_set(self, name):
        x = random_values(8, seed=23)
        buf = x.copy()
        BACKENDS[name].phase_inplace(buf, np.empty(0, dtype=np.intp), 1j)
        BACKENDS[name].add_at_inplace(buf, np.empty(0, dtype=np.intp), 5.0)
        np.testing.assert_array_equal(buf, x)


class TestSelection:
    def test_block_constants_agree(self):
        blocks = {mod.BLOCK for mod in BACKENDS.values()}
        assert blocks == {1024}
        assert _kernels.BLOCK == 1024

    def test_active_backend_is_exported(self):
        assert _kernels.BACKEND in BACKENDS

    def _backend_in_subprocess(self, value):
        env_code = (
            "import os; os.environ['PHASEGROVER_KERNELS']=%r; "
            "import phasegrover; print(phasegrover.kernel_backend)" % value
        )
        return subprocess.run(
            [sys.executable, "-c", env_code], capture_output=True, text=True
        )

    def test_numpy_can_be_forced(self):
        proc = self._backend_in_subprocess("numpy")
        assert proc.returncode == 0
        assert proc.stdout.strip() == "numpy"

    @pytest.mark.skipif("compiled" not in BACKENDS, reason="extension not built")
    def test_compiled_can_be_forced(self):
        proc = self._backend_in_subprocess("compiled")
        assert proc.returncode == 0
        assert proc.stdout.strip() == "compiled"

    def test_unknown_value_fails_import(self):
        proc = self._backend_in_subprocess("turbo")
        assert proc.returncode != 0
        assert "PHASEGROVER_KERNELS" in proc.stderr
