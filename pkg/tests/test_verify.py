import pytest

from phasegrover.verify import (
    DEFAULT_TOLERANCES,
    cross_engine_suite,
    half_turn_closed_form_suite,
    one_query_certainty_suite,
    run_all,
    unitarity_suite,
)


class TestSuites:
    def test_all_pass_at_default_tolerances(self):
        results = run_all(max_n=24, cases=200)
        assert [r.name for r in results] == [
            "unitarity",
            "cross_engine",
            "one_query_certainty",
            "half_turn_closed_form",
        ]
        for result in results:
            assert result.passed, f"{result.name} worst={result.worst_deviation}"
            assert result.cases > 0
            assert result.tolerance == DEFAULT_TOLERANCES[result.name]

    def test_impossible_tolerance_fails(self):
        results = run_all(max_n=8, cases=50, tol=1e-30)
        assert any(r.failures > 0 for r in results)
        assert not all(r.passed for r in results)

    def test_max_n_floor(self):
        with pytest.raises(ValueError):
            run_all(max_n=3)

    def test_deterministic_given_seed(self):
        a = unitarity_suite(max_n=16, cases=64, seed=3)
        b = unitarity_suite(max_n=16, cases=64, seed=3)
        assert a.worst_deviation == b.worst_deviation

    def test_individual_suites(self):
        assert unitarity_suite(max_n=12, cases=40).passed
        assert cross_engine_suite(max_n=12, cases=20).passed
        assert one_query_certainty_suite(max_n=20).passed
        assert half_turn_closed_form_suite(max_n=12, max_step=20).passed

    def test_unitarity_holds_on_large_registers(self):
        result = unitarity_suite(max_n=4096, cases=1000)
        assert result.passed
        assert result.cases == 1000
        assert result.worst_deviation < 1e-12

    def test_certainty_suite_counts_every_pair(self):
        result = one_query_certainty_suite(max_n=8)
        expected = sum(n - (n + 3) // 4 + 1 for n in range(4, 9))
        assert result.cases == expected
