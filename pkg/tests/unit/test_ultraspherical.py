"""
Unit tests for the zonal discretization of S^d.
"""
import math

import numpy as np
import pytest
from scipy.linalg import cholesky, eigh

from spherebounds.core.errors import DataError, DomainError
from spherebounds.core.options import Sign
from spherebounds.core.ultraspherical import (ZonalFunction, assemble_schrodinger, build_grid,
                                              dirichlet_form, evaluate_quotient, integrate,
                                              interpolation_deficit, oversampled_quadrature,
                                              participation_ratio, quadrature_rule)

pytestmark = pytest.mark.unit


@pytest.fixture(params=[1, 2, 3, 5])
def grid(request):
    return build_grid(request.param, 64)


class TestBuildGrid:
    """Test grid construction."""

    def test_weights_are_probability(self, grid):
        assert grid.weights.sum() == pytest.approx(1.0, abs=1e-14)
        assert np.all(grid.weights > 0)

    def test_nodes_ascending_inside_interval(self, grid):
        assert np.all(np.diff(grid.nodes) > 0)
        assert np.all(np.abs(grid.nodes) < 1)

    def test_too_few_nodes(self):
        with pytest.raises(DomainError, match="at least"):
            build_grid(3, 4)

    def test_bad_dimension(self):
        with pytest.raises(DomainError):
            build_grid(0, 32)

    def test_bad_grading(self):
        with pytest.raises(DomainError, match="grading"):
            build_grid(3, 32, grading=0.0)

    def test_repr(self):
        assert repr(build_grid(3, 16)) == "JacobiGrid(d=3, N=16)"
        assert "grading=2.0" in repr(build_grid(3, 16, grading=2.0))

    def test_compatible_with(self):
        a, b = build_grid(3, 16), build_grid(3, 16)
        assert a.compatible_with(b)
        assert not a.compatible_with(build_grid(3, 24))
        assert not a.compatible_with(build_grid(3, 16, grading=1.0))


class TestIntegrate:
    """Test quadrature against moments of dν_d."""

    def test_moments(self, grid):
        d = grid.d
        one = ZonalFunction.constant(grid)
        z = ZonalFunction.from_callable(grid, lambda x: x)
        assert integrate(one) == pytest.approx(1.0, abs=1e-14)
        assert integrate(z) == pytest.approx(0.0, abs=1e-14)
        assert ZonalFunction.from_callable(grid, lambda x: x ** 2).integrate() == pytest.approx(1.0 / (d + 1), rel=1e-12)
        assert ZonalFunction.from_callable(grid, lambda x: 1 + x ** 2).integrate() == pytest.approx(1 + 1.0 / (d + 1), rel=1e-12)
        assert ZonalFunction.from_callable(grid, lambda x: x ** 3).integrate() == pytest.approx(0.0, abs=1e-14)
        assert ZonalFunction.from_callable(grid, lambda x: 1 - x ** 2).integrate() == pytest.approx(d / (d + 1.0), rel=1e-12)

    @pytest.mark.parametrize("d", [1, 3])
    def test_graded_grid_moments(self, d):
        graded = build_grid(d, 128, grading=3.0)
        assert graded.weights.sum() == pytest.approx(1.0, abs=1e-14)
        value = ZonalFunction.from_callable(graded, lambda x: x ** 2).integrate()
        assert value == pytest.approx(1.0 / (d + 1), rel=1e-8)

    def test_grid_convergence(self):
        values = []
        for N in (64, 80):
            f = ZonalFunction.from_callable(build_grid(3, N), lambda x: np.exp(x))
            values.append((integrate(f), dirichlet_form(f)))
        assert abs(values[0][0] - values[1][0]) < 1e-10
        assert abs(values[0][1] - values[1][1]) < 1e-10

    def test_quadrature_rule_matches_grid(self):
        z, w = quadrature_rule(3, 64)
        grid = build_grid(3, 64)
        np.testing.assert_allclose(z, grid.nodes)
        np.testing.assert_allclose(w, grid.weights)


class TestDirichletForm:
    """Test the Dirichlet form."""

    def test_constant(self, grid):
        assert dirichlet_form(ZonalFunction.constant(grid, 3.0)) == pytest.approx(0.0, abs=1e-20)

    def test_linear(self, grid):
        d = grid.d
        f = ZonalFunction.from_callable(grid, lambda x: x)
        assert dirichlet_form(f) == pytest.approx(d / (d + 1.0), rel=1e-12)
        assert dirichlet_form(f) / f.norm(2) ** 2 == pytest.approx(d, rel=1e-12)

    @pytest.mark.parametrize("fn", [lambda x: np.exp(2 * x), lambda x: x ** 5 - x ** 2,
                                    lambda x: np.cos(3 * x), lambda x: x])
    def test_poincare(self, grid, fn):
        """Mean-zero functions satisfy ∫|f'|²(1-z²) >= d‖f‖₂²."""
        f = ZonalFunction.from_callable(grid, fn)
        centred = f.with_values(f.values - f.integrate())
        assert dirichlet_form(centred) >= grid.d * centred.norm(2) ** 2 - 1e-9

    def test_poincare_random_polynomials(self, grid):
        rng = np.random.default_rng(11)
        for _ in range(5):
            coeffs = rng.normal(size=9)
            f = ZonalFunction.from_callable(grid, lambda x: np.polynomial.polynomial.polyval(x, coeffs))
            centred = f.with_values(f.values - f.integrate())
            assert dirichlet_form(centred) >= grid.d * centred.norm(2) ** 2 - 1e-9

    def test_derivative(self):
        grid = build_grid(3, 32)
        f = ZonalFunction.from_callable(grid, lambda x: x ** 2)
        np.testing.assert_allclose(f.derivative().values, 2 * grid.nodes, atol=1e-10)


class TestZonalFunction:
    """Test ZonalFunction helpers."""

    def test_shape_mismatch(self, grid3):
        with pytest.raises(DataError, match="nodal values"):
            ZonalFunction(grid3, np.ones(grid3.N + 1))

    def test_nan_rejected(self, grid3):
        values = np.ones(grid3.N)
        values[3] = math.nan
        with pytest.raises(DataError):
            ZonalFunction(grid3, values)

    def test_norms(self, grid3):
        one = ZonalFunction.constant(grid3)
        assert one.norm(3.0) == pytest.approx(1.0)
        f = ZonalFunction.from_callable(grid3, lambda x: 1 + 0.5 * x)
        assert f.norm(math.inf) == pytest.approx(np.max(1 + 0.5 * grid3.nodes))
        assert f.norm(2.0, oversample=3) == pytest.approx(f.norm(2.0), rel=1e-12)
        with pytest.raises(DomainError):
            f.norm(0.0)

    def test_interpolate_polynomial(self, grid3):
        f = ZonalFunction.from_callable(grid3, lambda x: 1 - 2 * x + x ** 3)
        targets = np.array([-1.0, -0.3, 0.0, 0.77, 1.0])
        np.testing.assert_allclose(f.interpolate(targets), 1 - 2 * targets + targets ** 3, atol=1e-10)

    def test_resample(self, grid3):
        f = ZonalFunction.from_callable(grid3, lambda x: x ** 2)
        fine = f.resample(build_grid(3, 96))
        np.testing.assert_allclose(fine.values, fine.grid.nodes ** 2, atol=1e-10)
        with pytest.raises(DataError):
            f.resample(build_grid(2, 32))

    def test_scaled_and_with_values(self, grid3):
        f = ZonalFunction.constant(grid3, 2.0)
        assert np.all(f.scaled(0.5).values == 1.0)
        assert f.with_values(np.zeros(grid3.N)).integrate() == 0.0

    def test_participation_ratio(self):
        assert participation_ratio(np.ones(10)) == pytest.approx(10.0)
        assert participation_ratio(np.array([0.0, 1.0, 0.0])) == pytest.approx(1.0)

    def test_oversampled_quadrature_identity(self, grid3):
        z, w, P = oversampled_quadrature(grid3, 1)
        assert z is grid3.nodes
        np.testing.assert_array_equal(P, np.eye(grid3.N))
        with pytest.raises(DomainError):
            oversampled_quadrature(grid3, 0)


class TestQuotient:
    """Test F_α and the interpolation deficit."""

    def test_constant_gives_alpha(self, grid3):
        assert evaluate_quotient(ZonalFunction.constant(grid3), 2.5, 3.0) == pytest.approx(2.5)

    @pytest.mark.parametrize("eps", [0.2, 0.6])
    def test_linear_reproduces_h_alpha(self, grid3, eps):
        d, alpha, q = 3, 6.0, 3.0
        f = ZonalFunction.from_callable(grid3, lambda x: 1 + eps * x)
        z, w = quadrature_rule(d, 512)
        expected = (alpha + (d + alpha) * eps ** 2 / (d + 1)) / np.dot(w, np.abs(1 + eps * z) ** q) ** (2 / q)
        assert evaluate_quotient(f, alpha, q) == pytest.approx(expected, rel=1e-10)

    @pytest.mark.parametrize("c", [0.1, 7.0])
    def test_zero_homogeneous(self, grid3, c):
        f = ZonalFunction.from_callable(grid3, lambda x: np.exp(x))
        assert evaluate_quotient(f.scaled(c), 4.0, 3.0) == pytest.approx(evaluate_quotient(f, 4.0, 3.0), rel=1e-12)

    def test_zero_function(self, grid3):
        with pytest.raises(DomainError, match="zero function"):
            evaluate_quotient(ZonalFunction.constant(grid3, 0.0), 1.0, 3.0)

    def test_nonpositive_alpha(self, grid3):
        with pytest.raises(DomainError):
            evaluate_quotient(ZonalFunction.constant(grid3), 0.0, 3.0)

    @pytest.mark.parametrize("q", [1.5, 3.0, 6.0])
    def test_deficit_nonnegative(self, grid3, q):
        f = ZonalFunction.from_callable(grid3, lambda x: 1 + 0.4 * x + 0.2 * x ** 2)
        assert interpolation_deficit(f, q) >= -1e-10

    def test_deficit_undefined_at_two(self, grid3):
        with pytest.raises(DomainError):
            interpolation_deficit(ZonalFunction.constant(grid3), 2.0)


class TestSchrodinger:
    """Test the assembled pencil for -Δ ∓ V."""

    def test_symmetric_and_positive_mass(self, grid3):
        V = ZonalFunction.from_callable(grid3, lambda x: 1 + x ** 2)
        pencil = assemble_schrodinger(V, Sign.MINUS)
        np.testing.assert_array_equal(pencil.A, pencil.A.T)
        np.testing.assert_array_equal(pencil.M, pencil.M.T)
        cholesky(pencil.M)

    @pytest.mark.parametrize("d", [1, 3])
    def test_free_spectrum(self, d):
        grid = build_grid(d, 64)
        pencil = assemble_schrodinger(ZonalFunction.constant(grid, 0.0), Sign.MINUS)
        values, vectors = eigh(pencil.A, pencil.M)
        assert values[0] == pytest.approx(0.0, abs=1e-10)
        u = vectors[:, 0]
        np.testing.assert_allclose(u / u[0], 1.0, atol=1e-8)
        for k in (1, 2, 3):
            assert values[k] == pytest.approx(k * (k + d - 1), rel=1e-6)

    def test_constant_shift(self, grid3):
        for sign, expected in ((Sign.MINUS, -2.0), (Sign.PLUS, 2.0)):
            pencil = assemble_schrodinger(ZonalFunction.constant(grid3, 2.0), sign)
            assert np.linalg.eigvalsh(pencil.standard_form())[0] == pytest.approx(expected, abs=1e-10)

    def test_standard_form_matches_pencil(self, grid3):
        V = ZonalFunction.from_callable(grid3, lambda x: 3 * (1 + x) ** 2)
        pencil = assemble_schrodinger(V, "neg")
        lowest = eigh(pencil.A, pencil.M, eigvals_only=True)[0]
        assert np.linalg.eigvalsh(pencil.standard_form())[0] == pytest.approx(lowest, rel=1e-10)

    def test_grid_mismatch(self, grid3):
        with pytest.raises(DataError, match="lives on"):
            assemble_schrodinger(ZonalFunction.constant(grid3), Sign.MINUS, grid=build_grid(3, 32))
