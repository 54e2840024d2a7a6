"""
Unit tests for the named verification checks.
"""
import pytest

from spherebounds.core import verification
from spherebounds.core.errors import SolverError
from spherebounds.core.verification import Check, available_checks, run_checks

pytestmark = pytest.mark.unit


class TestRegistry:
    """Test check registration and selection."""

    def test_names(self):
        names = {check.name for check in available_checks()}
        assert {"closed-forms", "euclidean-oracle", "exact-line", "sandwich", "critical-plateau",
                "spectral-equality", "circle-bounds", "stereographic", "obstruction"} <= names

    def test_slow_checks_excluded(self):
        fast = {check.name for check in available_checks(include_slow=False)}
        assert "closed-forms" in fast
        assert "gns-limits" not in fast
        assert "critical-raw" not in fast

    def test_obstruction_states_sample_range(self):
        [check] = [c for c in available_checks() if c.name == "obstruction"]
        assert "n = 10, 1e3, 1e5" in check.description
        assert "1e3 at n = 1e5" in check.description

    def test_unknown_name(self):
        with pytest.raises(KeyError, match="no-such-check"):
            run_checks(["closed-forms", "no-such-check"])


class TestRunChecks:
    """Test running checks."""

    @pytest.mark.parametrize("name", ["closed-forms", "circle-bounds", "stereographic", "obstruction"])
    def test_fast_checks_pass(self, name, small_opts):
        [result] = run_checks([name], opts=small_opts)
        assert result.name == name
        assert result.passed, result.detail
        assert result.error is None
        assert result.elapsed >= 0

    def test_library_errors_are_recorded(self, monkeypatch, small_opts):
        def broken(opts, tol):
            raise SolverError("no convergence", {"iterations": 3})

        monkeypatch.setitem(verification._REGISTRY, "broken", Check("broken", "always fails", broken))
        results = run_checks(["broken", "closed-forms"], opts=small_opts)

        assert [r.name for r in results] == ["broken", "closed-forms"]
        assert not results[0].passed
        assert results[0].error == "SolverError: no convergence (iterations=3)"
        assert results[1].passed
