"""
Unit tests for solver options and enums.
"""
import pytest

from spherebounds.core.errors import DataError, DomainError, SolverError
from spherebounds.core.options import Family, Sign, SolverOptions, Spacing

pytestmark = pytest.mark.unit


class TestSolverOptions:
    """Test SolverOptions construction and validation."""

    def test_defaults(self):
        opts = SolverOptions()
        assert opts.grid_size == 128
        assert opts.max_grid_size == 1024
        assert opts.seeds == (0.1, 0.3, 0.6)
        assert opts.jobs == 1

    def test_replace_returns_copy(self):
        opts = SolverOptions()
        other = opts.replace(grid_size=64)
        assert other.grid_size == 64
        assert opts.grid_size == 128

    def test_hashable(self):
        assert hash(SolverOptions()) == hash(SolverOptions())

    @pytest.mark.parametrize("changes", [
        {"grid_size": 4},
        {"grid_size": 256, "max_grid_size": 128},
        {"jobs": 0},
        {"oversample": 0},
        {"residual_tol": 0.0},
        {"seeds": (0.5, 1.5)},
        {"r_max": -1.0},
    ])
    def test_invalid(self, changes):
        with pytest.raises(DomainError):
            SolverOptions(**changes)

    def test_from_dict_unknown_key(self):
        with pytest.raises(DataError, match="Unknown solver option"):
            SolverOptions.from_dict({"grid_size": 64, "colour": "red"})

    def test_from_yaml(self, options_yaml):
        opts = SolverOptions.from_yaml(options_yaml)
        assert opts.grid_size == 64
        assert opts.max_iterations == 5000
        assert opts.seeds == (0.2, 0.4)

    def test_from_yaml_empty(self, temp_dir):
        path = temp_dir / "empty.yaml"
        path.write_text("")
        assert SolverOptions.from_yaml(path) == SolverOptions()

    def test_from_yaml_not_mapping(self, temp_dir):
        path = temp_dir / "list.yaml"
        path.write_text("- 1\n- 2\n")
        with pytest.raises(DataError, match="mapping"):
            SolverOptions.from_yaml(path)

    def test_from_yaml_missing(self, temp_dir):
        with pytest.raises(DataError, match="Cannot read"):
            SolverOptions.from_yaml(temp_dir / "missing.yaml")

    def test_to_dict_round_trip(self):
        opts = SolverOptions(grid_size=64, seeds=(0.25,))
        data = opts.to_dict()
        assert data["seeds"] == [0.25]
        assert SolverOptions.from_dict(data) == opts


class TestEnums:
    """Test enum parsing."""

    @pytest.mark.parametrize("text,expected", [
        ("neg", Sign.MINUS), ("minus", Sign.MINUS), ("-", Sign.MINUS),
        ("pos", Sign.PLUS), ("PLUS", Sign.PLUS), (Sign.PLUS, Sign.PLUS),
    ])
    def test_sign_parse(self, text, expected):
        assert Sign.parse(text) is expected

    def test_sign_parse_unknown(self):
        with pytest.raises(DomainError, match="Unknown sign"):
            Sign.parse("sideways")

    def test_family_and_spacing_values(self):
        assert Family("ratio") is Family.RATIO
        assert Spacing("log") is Spacing.LOG


class TestErrors:
    """Test the exception hierarchy."""

    def test_builtin_bases(self):
        assert issubclass(DomainError, ValueError)
        assert issubclass(DataError, ValueError)
        assert issubclass(SolverError, RuntimeError)

    def test_solver_error_diagnostics(self):
        error = SolverError("no bracket", {"b": 2, "a": 1})
        assert error.diagnostics == {"a": 1, "b": 2}
        assert str(error) == "no bracket (a=1, b=2)"
        assert str(SolverError("plain")) == "plain"
