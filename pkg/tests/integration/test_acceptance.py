"""
End-to-end acceptance tests: closed forms, the mu curve, the spectral bounds
and the stereographic identities at the reference parameter values.
"""
import math

import numpy as np
import pytest

from spherebounds import Sweep
from spherebounds.core.constants import _sobolev_from_gamma, _sobolev_from_surface, sobolev_constant
from spherebounds.core.options import Branch
from spherebounds.solvers.euclidean import gns_constant, klt_constants
from spherebounds.solvers.spectral import (Potential, dual_klt_report, klt_report, logsob_report,
                                           obstruction_ratio, random_potential)
from spherebounds.solvers.sphere_constants import (alpha_bounds_d1, alpha_of_mu, cached_grid,
                                                   critical_raw_minimum, minimize_quotient, mu,
                                                   mu_lower, mu_upper, xi)

pytestmark = pytest.mark.integration


class TestClosedForms:

    def test_exact_constants(self):
        assert gns_constant(math.inf, 1).constant == 2.0
        assert klt_constants(0.5, 1) == 0.5

    @pytest.mark.parametrize("d", range(3, 11))
    def test_sobolev_forms_agree(self, d):
        assert _sobolev_from_gamma(d) == pytest.approx(_sobolev_from_surface(d), rel=1e-12)


class TestMuCurve:
    """The optimal constant mu(alpha) for d = q = 3."""

    @pytest.mark.parametrize("alpha", [0.5, 1.0, 2.0, 3.0])
    def test_exact_line(self, alpha, small_opts):
        result = mu(alpha, 3, 3.0, small_opts)
        assert result.value == alpha
        assert result.branch is Branch.EXACT_LINE
        minimized = minimize_quotient(alpha, cached_grid(3, small_opts.grid_size), 3.0, small_opts)
        assert minimized.value == pytest.approx(alpha, abs=1e-8)

    @pytest.mark.parametrize("alpha", [4.0, 6.0, 10.0, 20.0])
    def test_sandwich(self, alpha, opts):
        value = mu(alpha, 3, 3.0, opts).value
        assert mu_lower(alpha, 3, 3.0) - 1e-6 <= value <= mu_upper(alpha, 3, 3.0, opts) + 1e-6 < alpha

    @pytest.mark.parametrize("alpha", [1.0, 2.0, 10.0])
    def test_critical_plateau(self, alpha):
        assert mu(alpha, 3, 6.0).value == 0.75

    @pytest.mark.slow
    def test_critical_raw_minimum(self, opts):
        coarse = critical_raw_minimum(1.5, 3, 512, opts)
        refined = critical_raw_minimum(1.5, 3, 1024, opts)
        assert 0.75 <= refined <= coarse + 1e-4
        assert coarse <= 0.7875

    @pytest.mark.slow
    def test_semiclassical_ratio(self, opts):
        result = Sweep("ratio").dimension(3).exponent(3.0).over(10.0, 500.0, steps=12) \
            .graded(3.0).with_options(opts).run()
        ratio = result.column("ratio")
        assert result.ok
        assert np.all(np.diff(ratio) >= -1e-3)
        assert ratio[-1] >= 0.9


class TestSpectralBounds:
    """Equality cases and random potentials."""

    def test_constant_equality(self, opts):
        grid = cached_grid(3, opts.grid_size)
        assert abs(klt_report(Potential.constant(grid, 2.5), 3.0, 3, opts).slack) < 1e-9
        assert abs(dual_klt_report(Potential.constant(grid, 4.0), 2.0, 3, opts).slack) < 1e-9

    @pytest.mark.parametrize("mu_val", [0.5, 1.0, 2.0, 5.0])
    def test_circle_bounds(self, mu_val):
        low, high = alpha_bounds_d1(mu_val)
        assert low <= alpha_of_mu(mu_val, 1, math.inf) <= high

    @pytest.mark.slow
    def test_random_potentials(self, small_opts):
        grid = cached_grid(3, small_opts.grid_size)
        xi_value = xi(5.0, 3, 3.0, small_opts, grid=grid).value
        for seed in range(20):
            V = random_potential(grid, seed)
            W = random_potential(grid, seed, positive=True)
            assert klt_report(V, 3.0, 3, small_opts).passed
            assert dual_klt_report(W, 2.0, 3, small_opts).passed
            assert logsob_report(V, 5.0, 3.0, 3, small_opts, xi_value=xi_value).passed

    def test_small_potential_obstruction(self):
        ratios = [obstruction_ratio(n, 2, 1.0) for n in (1e1, 1e3, 1e5)]
        assert ratios[0] < ratios[1] < ratios[2]
        assert ratios[2] > 1e3
        assert ratios[1] == pytest.approx(1e3 / (4 * math.pi), rel=1e-6)


@pytest.mark.slow
def test_gns_limits(opts):
    assert gns_constant(2.01, 3, opts).constant == pytest.approx(1.0, rel=0.05)
    near = gns_constant(0.99 * 6.0, 3, opts).constant
    assert near == pytest.approx(1.0 / sobolev_constant(3), rel=0.06)
