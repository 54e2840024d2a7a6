"""
Unit tests for the optimal constants μ(α), ν(β) and ξ(α) on S^d.
"""
import math

import numpy as np
import pytest

from spherebounds.core.errors import DomainError
from spherebounds.core.options import Branch, SolverOptions
from spherebounds.core.ultraspherical import ZonalFunction, quadrature_rule
from spherebounds.solvers.euclidean import gns_constant, klt_constants
from spherebounds.core.constants import kappa
from spherebounds.solvers.sphere_constants import (alpha_bounds_d1, alpha_of_mu, cached_grid,
                                                   critical_raw_minimum, linearized_logsob_deficit,
                                                   minimize_quotient, mu, mu_asymptotic,
                                                   mu_closed_form_d1, mu_curve, mu_lower, mu_upper,
                                                   nu, nu_asymptotic, ratio_curve, xi,
                                                   xi_asymptotic, xi_curve)

pytestmark = pytest.mark.unit


class TestExactLine:
    """Test the rigidity branch α <= d/(q-2)."""

    @pytest.mark.parametrize("alpha", [0.5, 1.0, 2.0, 3.0])
    def test_mu_equals_alpha(self, alpha):
        result = mu(alpha, 3, 3.0)
        assert result.value == alpha
        assert result.branch is Branch.EXACT_LINE
        assert result.minimizer is None

    @pytest.mark.parametrize("alpha", [0.5, 2.0, 3.0])
    def test_minimization_agrees(self, opts, alpha):
        result = minimize_quotient(alpha, cached_grid(3, opts.grid_size), 3.0, opts)
        assert result.value == pytest.approx(alpha, abs=1e-8)

    def test_bounds_collapse(self):
        assert mu_lower(2.0, 3, 3.0) == 2.0
        assert mu_upper(2.0, 3, 3.0) == 2.0


class TestSandwich:
    """Test μ₋ <= μ <= μ₊ < α above the line."""

    @pytest.mark.parametrize("alpha", [4.0, 6.0, 10.0])
    def test_sandwich(self, opts, alpha):
        value = mu(alpha, 3, 3.0, opts).value
        assert mu_lower(alpha, 3, 3.0) - 1e-6 <= value
        assert value <= mu_upper(alpha, 3, 3.0, opts) + 1e-6
        assert mu_upper(alpha, 3, 3.0, opts) < alpha

    def test_minimizer_diagnostics(self, opts):
        result = mu(6.0, 3, 3.0, opts)
        assert result.branch is Branch.MINIMIZED
        assert result.diagnostics["el_residual"] < 1e-6
        assert result.minimizer.norm(3.0) == pytest.approx(1.0, rel=1e-10)
        assert result.diagnostics["participation"] >= opts.min_layer_nodes

    def test_explicit_grid_is_kept(self, opts):
        grid = cached_grid(3, 32)
        result = mu(20.0, 3, 3.0, opts, grid=grid)
        assert result.minimizer.grid is grid

    def test_domain(self):
        with pytest.raises(DomainError):
            mu(0.0, 3, 3.0)
        with pytest.raises(DomainError, match="q > 2"):
            mu(1.0, 3, 1.5)


class TestShape:
    """Test monotonicity, concavity and convexity on sampled triples."""

    @pytest.mark.parametrize("a1,a2", [(4.0, 10.0), (4.0, 16.0), (2.0, 8.0)])
    def test_mu_midpoint_concave(self, opts, a1, a2):
        low, mid, high = (mu(a, 3, 3.0, opts).value for a in (a1, 0.5 * (a1 + a2), a2))
        assert low < mid < high
        assert mid >= 0.5 * (low + high) - 1e-6

    def test_alpha_of_mu_midpoint_convex(self, opts):
        m1, m2 = 4.0, 6.0
        low, mid, high = (alpha_of_mu(m, 3, 3.0, opts) for m in (m1, 0.5 * (m1 + m2), m2))
        assert low < mid < high
        assert mid <= 0.5 * (low + high) + 1e-6

    def test_nu_midpoint_concave(self, opts):
        b1, b2 = 6.0, 20.0
        low, mid, high = (nu(b, 3, 1.2, opts).value for b in (b1, 0.5 * (b1 + b2), b2))
        assert low <= mid <= high
        assert mid >= 0.5 * (low + high) - 1e-6

    def test_xi_midpoint_concave(self, opts):
        a1, a2 = 2.0, 10.0
        low, mid, high = (xi(a, 3, 3.0, opts).value for a in (a1, 0.5 * (a1 + a2), a2))
        assert low <= mid <= high
        assert mid >= 0.5 * (low + high) - 1e-6

    @pytest.mark.slow
    def test_alpha_large_mu_trend(self, opts):
        """α(μ)^γ / (L¹(κμ)^p) decreases toward 1 with γ = p - d/2."""
        d, q, p = 3, 3.0, 3.0
        L1 = klt_constants(p - d / 2.0, d, opts=opts)
        ratios = [alpha_of_mu(m, d, q, opts, grading=3.0) ** (p - d / 2.0) / (L1 * (kappa(q, d) * m) ** p)
                  for m in (10.0, 30.0, 100.0)]
        gaps = [abs(r - 1.0) for r in ratios]
        assert gaps[0] > gaps[1] > gaps[2]


class TestLowerBound:
    """Test μ₋."""

    def test_single_branch(self):
        assert mu_lower(4.0, 3, 3.0, s=6.0) == pytest.approx(math.sqrt(3.0), rel=1e-14)

    def test_branch_domain(self):
        with pytest.raises(DomainError, match="s must lie"):
            mu_lower(4.0, 3, 3.0, s=3.0)
        with pytest.raises(DomainError, match="must exceed"):
            mu_lower(0.5, 3, 3.0, s=6.0)

    def test_continuity_at_line(self):
        assert mu_lower(3.001, 3, 3.0) == pytest.approx(3.0, abs=0.01)
        assert mu_lower(3.0 + 1e-9, 3, 3.0) >= 3.0
        assert mu_lower(3.5, 3, 3.0) >= 3.0

    def test_best_dominates_branches(self):
        best = mu_lower(10.0, 3, 3.0)
        for s in (3.5, 4.0, 6.0):
            assert best >= mu_lower(10.0, 3, 3.0, s=s) - 1e-12


class TestUpperBound:
    """Test μ₊ against a dense ε scan."""

    @pytest.mark.parametrize("alpha,expected", [(4.0, 3.94187), (6.0, 5.68105)])
    def test_values(self, alpha, expected):
        assert mu_upper(alpha, 3, 3.0) == pytest.approx(expected, abs=1e-5)

    @pytest.mark.parametrize("alpha", [3.0 + 1e-3, 3.1, 3.5])
    def test_bifurcates_from_line(self, alpha):
        assert mu_upper(2.9, 3, 3.0) == 2.9
        assert mu_upper(alpha, 3, 3.0) < alpha

    def test_dense_scan(self):
        d, q, alpha = 3, 3.0, 6.0
        z, w = quadrature_rule(d, 512)
        eps = np.linspace(0.0, 1.0, 10001)
        powers = (np.abs(1.0 + np.outer(eps, z)) ** q) @ w
        h = (alpha + (d + alpha) * eps ** 2 / (d + 1)) / powers ** (2 / q)
        value = mu_upper(alpha, d, q)
        assert value <= h.min() + 1e-12
        assert value >= h.min() - 1e-6


class TestCriticalPlateau:
    """Test q = 2*."""

    @pytest.mark.parametrize("alpha", [1.0, 2.0, 10.0])
    def test_plateau(self, alpha):
        result = mu(alpha, 3, 6.0)
        assert result.value == 0.75
        assert result.branch is Branch.CRITICAL_PLATEAU

    def test_below_threshold_is_line(self):
        assert mu(0.5, 3, 6.0).branch is Branch.EXACT_LINE

    def test_raw_value_never_below_plateau(self, opts):
        result = mu(1.5, 3, 6.0, opts, diagnose_plateau=True)
        assert result.value == 0.75
        assert result.diagnostics["raw_value"] >= 0.75 - 1e-12

    def test_raw_needs_finite_exponent(self):
        with pytest.raises(DomainError):
            critical_raw_minimum(1.5, 2, 64)

    @pytest.mark.slow
    def test_raw_refinement(self, opts):
        coarse = critical_raw_minimum(1.5, 3, 512, opts)
        refined = critical_raw_minimum(1.5, 3, 1024, opts)
        assert 0.75 <= coarse <= 0.7875
        assert 0.75 <= refined <= coarse + 1e-4


class TestInverse:
    """Test α(μ)."""

    def test_line(self):
        assert alpha_of_mu(2.0, 3, 3.0) == 2.0

    @pytest.mark.parametrize("alpha", [4.0, 6.0])
    def test_round_trip(self, opts, alpha):
        value = mu(alpha, 3, 3.0, opts).value
        assert alpha_of_mu(value, 3, 3.0, opts) == pytest.approx(alpha, rel=1e-5)

    def test_no_inverse_on_plateau(self):
        with pytest.raises(DomainError, match="plateau"):
            alpha_of_mu(0.8, 3, 6.0)

    def test_positive(self):
        with pytest.raises(DomainError):
            alpha_of_mu(-1.0, 3, 3.0)


class TestCircle:
    """Test d = 1, q = ∞ in closed form."""

    def test_closed_form(self):
        result = mu(2.0, 1, math.inf)
        assert result.branch is Branch.CLOSED_FORM
        assert result.value == pytest.approx(mu_closed_form_d1(2.0))
        assert result.value < 2.0

    @pytest.mark.parametrize("mu_val", [0.5, 1.0, 2.0, 5.0])
    def test_inverse_within_bounds(self, mu_val):
        alpha = alpha_of_mu(mu_val, 1, math.inf)
        low, high = alpha_bounds_d1(mu_val)
        assert low <= alpha <= high
        assert mu_closed_form_d1(alpha) == pytest.approx(mu_val, rel=1e-12)

    def test_bounds(self):
        assert alpha_bounds_d1(1.0) == (1.0, 1.0 + math.pi ** 2)
        with pytest.raises(DomainError):
            alpha_bounds_d1(0.0)


class TestAsymptote:
    """Test the semiclassical asymptote."""

    def test_unit_alpha(self, opts):
        expected = gns_constant(3.0, 3, opts).constant / kappa(3.0, 3)
        assert mu_asymptotic(1.0, 3, 3.0, opts) == pytest.approx(expected)

    def test_scaling(self, opts):
        assert mu_asymptotic(16.0, 3, 3.0, opts) == pytest.approx(4.0 * mu_asymptotic(1.0, 3, 3.0, opts))


class TestNu:
    """Test ν(β) for 0 < q < 2."""

    def test_line(self):
        result = nu(3.0, 3, 1.2)
        assert result.value == 3.0
        assert result.branch is Branch.EXACT_LINE

    @pytest.mark.parametrize("beta", [6.0, 20.0])
    def test_below_beta(self, opts, beta):
        result = nu(beta, 3, 1.2, opts)
        assert result.value <= beta + 1e-9
        assert result.branch is Branch.MINIMIZED
        assert result.minimizer.norm(2.0) == pytest.approx(1.0)

    def test_small_beta_ratio(self, opts):
        """Below one, no profile beats the constant for small β: ν(β)/β is exactly 1."""
        results = [nu(beta, 2, 0.5, opts) for beta in (0.1, 0.01)]
        ratios = [r.value / beta for r, beta in zip(results, (0.1, 0.01))]
        assert ratios == [1.0, 1.0]
        assert all(r.branch is Branch.MINIMIZED for r in results)
        assert all(r.diagnostics["seed"] == "constant" for r in results)

    def test_domain(self):
        with pytest.raises(DomainError):
            nu(1.0, 3, 2.5)
        with pytest.raises(DomainError):
            nu(0.0, 3, 1.2)
        with pytest.raises(DomainError):
            nu_asymptotic(1.0, 3, 3.0)


class TestXi:
    """Test the logarithmic Sobolev constant."""

    def test_small_alpha_is_line(self, opts):
        assert xi(0.5, 3, 3.0, opts).value == pytest.approx(0.5, rel=1e-9)

    @pytest.mark.parametrize("alpha", [2.0, 5.0, 10.0])
    def test_between_mu_and_alpha(self, opts, alpha):
        value = xi(alpha, 3, 3.0, opts).value
        assert value <= alpha
        assert value >= mu(alpha, 3, 3.0, opts).value - 1e-6

    def test_linearized_deficit(self, opts, grid3):
        xi_value = xi(5.0, 3, 3.0, opts).value
        u = ZonalFunction.from_callable(grid3, lambda x: 1 + 0.3 * x)
        assert linearized_logsob_deficit(u, 5.0, 3.0, xi_value) >= -1e-9

    def test_domain(self):
        with pytest.raises(DomainError, match="max"):
            xi(1.0, 3, 1.5)
        with pytest.raises(DomainError):
            xi_asymptotic(1.0, 1, 1.0)

    def test_asymptote_formula(self):
        d, p, alpha = 3, 3.0, 100.0
        t = 2 * p / d - 1
        bracket = p * math.log((t + 1) / t) + d / 2 * math.log(math.pi * math.e * d * t / (2 * alpha)) \
            - math.log(2 * math.pi ** 2)
        assert xi_asymptotic(alpha, d, p) == pytest.approx(alpha * math.exp(bracket / p))

    @pytest.mark.slow
    def test_large_alpha_trend(self, opts):
        gaps = [abs(xi(a, 3, 3.0, opts).value / xi_asymptotic(a, 3, 3.0) - 1.0) for a in (50.0, 500.0)]
        assert gaps[1] <= gaps[0] + 1e-3


class TestCurves:
    """Test curve sampling."""

    def test_mu_curve(self, opts):
        curve = mu_curve([1.0, 4.0, 6.0], 3, 3.0, opts)
        assert curve.ok
        assert curve.branches == ["exact_line", "minimized", "minimized"]
        assert np.all(curve.lower - 1e-6 <= curve.value)
        assert np.all(curve.value <= curve.upper + 1e-6)
        assert np.all(np.diff(curve.value) > 0)
        assert curve.metadata["d"] == 3

    def test_mu_curve_without_asymptote(self, opts):
        curve = mu_curve([0.5, 2.0], 1, math.inf, opts, with_asymptote=False)
        assert curve.asymptote is None
        assert curve.branches == ["closed_form", "closed_form"]

    def test_failures_are_recorded(self, opts):
        curve = mu_curve([1.0, -1.0], 3, 3.0, opts, with_asymptote=False)
        assert not curve.ok
        assert curve.status[0] == "ok"
        assert curve.status[1].startswith("error")
        assert math.isnan(curve.value[1])

    def test_parallel_matches_serial(self, opts):
        serial = mu_curve([2.0, 5.0], 3, 3.0, opts, with_asymptote=False)
        parallel = mu_curve([2.0, 5.0], 3, 3.0, opts.replace(jobs=2), with_asymptote=False)
        np.testing.assert_allclose(parallel.value, serial.value, rtol=1e-12)

    def test_ratio_curve(self, opts):
        curve = ratio_curve([2.0, 10.0], 3, 3.0, opts)
        assert curve.ok
        assert np.all(curve.value > 0)

    def test_xi_curve_departure(self, opts):
        curve = xi_curve([0.5, 20.0], 3, 3.0, opts)
        assert curve.ok
        assert curve.metadata["departure"] == 20.0
        np.testing.assert_array_equal(curve.upper, [0.5, 20.0])

    def test_explicit_seeds(self, opts):
        grid = cached_grid(3, 64)
        seeded = minimize_quotient(6.0, grid, 3.0, opts.replace(seeds=(0.3,)), seeds=[0.3])
        assert seeded.value <= 6.0
        assert seeded.diagnostics["grid_size"] == 64


def test_solver_options_are_respected():
    opts = SolverOptions(grid_size=32, max_grid_size=32)
    assert mu(20.0, 3, 3.0, opts).minimizer.grid.N == 32
