"""
Tests for the acceptance harness
"""

import pytest

import core.acceptance as acceptance
from core.acceptance import CRITERIA, Criterion, CriterionResult, THRESHOLDS, run_acceptance, select
from core.exceptions import NoConvergence


class TestSelect:
    """Filtering criteria"""

    def test_all_by_default(self):
        assert [c.number for c in select()] == list(range(1, 13))

    def test_group(self):
        assert [c.number for c in select(["symbolic"])] == [1, 2, 3, 4]

    def test_number_and_name(self):
        assert [c.name for c in select(["3", "return_time_expansion"])] == ["bracket_table", "return_time_expansion"]

    def test_unknown_selects_nothing(self):
        assert select(["nothing"]) == []

    def test_numbers_are_unique(self):
        assert len({c.number for c in CRITERIA}) == len(CRITERIA)


class TestRunAcceptance:
    """Pass, fail and error paths"""

    def test_symbolic_group_passes(self):
        results = run_acceptance(["symbolic"])
        assert [r.number for r in results] == [1, 2, 3, 4]
        assert all(r.passed for r in results), [r.message for r in results if not r.passed]

    def test_bracket_mismatch_is_reported_not_failed(self):
        result = run_acceptance(["bracket_table"])[0]
        assert result.passed
        assert result.details["printed_mismatch"] == ["rho3,rho4"]

    def test_return_time_passes(self):
        assert run_acceptance(["12"])[0].passed

    def test_return_time_checks_both_bounds(self):
        """A remainder that collapses under halving fails as well as one that grows"""
        assert not run_acceptance(["12"], {"linear_ratio_low": 1e6})[0].passed

    def test_normal_mode_orbits_pass(self):
        result = run_acceptance(["10"])[0]
        assert result.passed, result.message
        for moduli in (result.details["mode1@eps=0.05"]["moduli"], result.details["mode2@eps=0.05"]["moduli"]):
            assert max(abs(m - 1.0) for m in moduli) < 1e-5

    def test_fixed_point_branch_reports_hyperbolic_orbits(self):
        result = run_acceptance(["11"])[0]
        assert result.passed, result.message
        assert all(c <= 10.0 for c in result.details["branch_constants"])
        for eps in (0.005, 0.01, 0.02):
            entry = result.details[f"eps={eps}"]
            assert entry["stability"] == "hyperbolic"
            assert entry["moduli"][0] < 1.0 < entry["moduli"][-1]
        assert "hyperbolic" in result.message

    def test_tampered_threshold_fails_named_criterion(self):
        result = run_acceptance(["normal_mode_orbits"], {"period": 0.0})[0]
        assert not result.passed
        assert result.name == "normal_mode_orbits"

    def test_overrides_do_not_leak(self):
        run_acceptance(["1"], {"period": 0.0})
        assert THRESHOLDS["period"] == 1e-8

    def test_library_error_becomes_failure(self, monkeypatch):
        def broken(t, seed):
            raise NoConvergence("did not converge", 1.0, 3)

        monkeypatch.setattr(acceptance, "CRITERIA", [Criterion(99, "broken", "numeric", broken)])
        result = run_acceptance()[0]
        assert not result.passed
        assert result.message.startswith("NoConvergence")


class TestCriterionResult:
    def test_to_dict(self):
        d = CriterionResult(1, "x", "symbolic", True, "ok", {"a": 1}, 0.12345).to_dict()
        assert d == {"number": 1, "name": "x", "group": "symbolic", "passed": True,
                     "message": "ok", "details": {"a": 1}, "seconds": 0.123}

    @pytest.mark.parametrize("name", sorted(THRESHOLDS))
    def test_thresholds_positive(self, name):
        assert THRESHOLDS[name] > 0
