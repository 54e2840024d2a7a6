"""
Named end-to-end checks behind ``spherebounds verify``.

Every check returns a CheckResult; checks marked slow only run on request.
"""
import logging
import math
import time
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from .constants import (_sobolev_from_gamma, _sobolev_from_surface, sobolev_constant,
                        sobolev_identity_residual)
from .errors import SphereBoundsError
from .options import SolverOptions

logger = logging.getLogger(__name__)

CheckFn = Callable[[SolverOptions, float], Tuple[bool, str]]


@dataclass(frozen=True)
class Check:
    name: str
    description: str
    fn: CheckFn
    slow: bool = False


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str
    elapsed: float
    error: Optional[str] = None
    extras: Dict[str, float] = field(default_factory=dict)


_REGISTRY: Dict[str, Check] = {}


def register(name: str, description: str, slow: bool = False):
    """Decorator adding a check to the registry under ``name``."""
    def decorator(fn: CheckFn) -> CheckFn:
        _REGISTRY[name] = Check(name, description, fn, slow)
        return fn
    return decorator


def available_checks(include_slow: bool = True) -> List[Check]:
    return [c for c in _REGISTRY.values() if include_slow or not c.slow]


def run_checks(names: Optional[Sequence[str]] = None, slow: bool = False,
               opts: Optional[SolverOptions] = None, tol: float = 1e-7) -> List[CheckResult]:
    """Run the selected checks in registration order.

    Unknown names raise KeyError. Library errors inside a check fail that
    check and are recorded, the remaining checks still run.
    """
    opts = opts or SolverOptions()
    if names:
        unknown = [n for n in names if n not in _REGISTRY]
        if unknown:
            raise KeyError(f"Unknown check(s): {', '.join(unknown)}")
        selected = [_REGISTRY[n] for n in names]
    else:
        selected = available_checks(include_slow=slow)

    results = []
    for check in selected:
        start = time.perf_counter()
        try:
            passed, detail = check.fn(opts, tol)
            error = None
        except SphereBoundsError as exc:
            logger.warning("check %s raised %s", check.name, exc)
            passed, detail, error = False, "raised", f"{type(exc).__name__}: {exc}"
        elapsed = time.perf_counter() - start
        logger.info("%s: %s (%.1fs)", check.name, "ok" if passed else "FAILED", elapsed)
        results.append(CheckResult(check.name, passed, detail, elapsed, error))
    return results


@register("closed-forms", "K_{inf,1} = 2, L1_{1/2,1} = 1/2, S_d forms and the Sobolev identity")
def _closed_forms(opts: SolverOptions, tol: float) -> Tuple[bool, str]:
    from ..solvers.euclidean import gns_constant, klt_constants

    k = gns_constant(math.inf, 1, opts).constant
    l1 = klt_constants(0.5, 1, opts=opts)
    forms = max(abs(_sobolev_from_gamma(d) - _sobolev_from_surface(d)) / sobolev_constant(d)
                for d in range(3, 11))
    identity = max(sobolev_identity_residual(d) for d in range(3, 11))
    passed = k == 2.0 and l1 == 0.5 and forms < 1e-12 and identity < 1e-10
    return passed, f"K={k}, L1={l1}, S_d forms {forms:.1e}, identity {identity:.1e}"


@register("euclidean-oracle", "ground state of (d, q) = (1, 4) against sqrt(2) sech and K_{4,1} = 4/sqrt(3)")
def _euclidean_oracle(opts: SolverOptions, tol: float) -> Tuple[bool, str]:
    from ..solvers.euclidean import gns_constant, ground_state_radial

    profile = ground_state_radial(1, 4.0, opts)
    mask = profile.r_nodes <= 20.0
    exact = math.sqrt(2.0) / np.cosh(profile.r_nodes[mask])
    error = float(np.max(np.abs(profile.values[mask] - exact)))
    K = gns_constant(4.0, 1, opts).constant
    passed = error < 1e-8 and abs(K - 4.0 / math.sqrt(3.0)) < 1e-6
    return passed, f"profile error {error:.1e}, K={K:.10f}"


@register("gns-limits", "K_{q,d} near q = 2 and near the critical exponent", slow=True)
def _gns_limits(opts: SolverOptions, tol: float) -> Tuple[bool, str]:
    from ..solvers.euclidean import gns_constant

    near_two = gns_constant(2.01, 3, opts).constant
    near_critical = gns_constant(0.99 * 6.0, 3, opts).constant
    target = 1.0 / sobolev_constant(3)
    passed = abs(near_two - 1.0) < 0.05 and abs(near_critical - target) < 0.06 * target
    return passed, f"K(2.01)={near_two:.5f}, K(0.99*2*)={near_critical:.5f} vs 1/S_3={target:.5f}"


@register("exact-line", "mu(alpha) = alpha for alpha <= d/(q-2), d = q = 3")
def _exact_line(opts: SolverOptions, tol: float) -> Tuple[bool, str]:
    from ..solvers.sphere_constants import cached_grid, minimize_quotient, mu

    grid = cached_grid(3, opts.grid_size)
    worst = 0.0
    for alpha in (0.5, 1.0, 2.0, 3.0):
        if mu(alpha, 3, 3.0, opts).value != alpha:
            return False, f"mu({alpha}) is not alpha"
        worst = max(worst, abs(minimize_quotient(alpha, grid, 3.0, opts).value - alpha))
    return worst < 1e-8, f"max |minimized - alpha| = {worst:.1e}"


@register("sandwich", "mu_lower <= mu <= mu_upper < alpha for d = q = 3")
def _sandwich(opts: SolverOptions, tol: float) -> Tuple[bool, str]:
    from ..solvers.sphere_constants import mu, mu_lower, mu_upper

    for alpha in (4.0, 6.0, 10.0, 20.0):
        value = mu(alpha, 3, 3.0, opts).value
        lower, upper = mu_lower(alpha, 3, 3.0), mu_upper(alpha, 3, 3.0, opts)
        if not (lower - 1e-6 <= value <= upper + 1e-6 < alpha):
            return False, f"alpha={alpha}: {lower} <= {value} <= {upper} < {alpha} fails"
    return True, "all four points sandwiched"


@register("ratio-trend", "mu/mu_asymp increases toward 1 on [10, 500]", slow=True)
def _ratio_trend(opts: SolverOptions, tol: float) -> Tuple[bool, str]:
    from .sweep import Sweep

    result = Sweep("ratio").dimension(3).exponent(3.0).over(10.0, 500.0, steps=12).graded(3.0) \
        .with_options(opts).run()
    ratio = result.column("ratio")
    monotone = bool(np.all(np.diff(ratio) >= -1e-3))
    return result.ok and monotone and ratio[-1] >= 0.9, f"ratio from {ratio[0]:.4f} to {ratio[-1]:.4f}"


@register("critical-plateau", "mu = alpha_* = 3/4 for d = 3, q = 6")
def _critical_plateau(opts: SolverOptions, tol: float) -> Tuple[bool, str]:
    from ..solvers.sphere_constants import mu

    values = [mu(alpha, 3, 6.0, opts).value for alpha in (1.0, 2.0, 10.0)]
    return all(v == 0.75 for v in values), f"values {values}"


@register("critical-raw", "raw minimization at alpha = 1.5 stays within 5% above alpha_*", slow=True)
def _critical_raw(opts: SolverOptions, tol: float) -> Tuple[bool, str]:
    from ..solvers.sphere_constants import critical_raw_minimum

    coarse = critical_raw_minimum(1.5, 3, 512, opts)
    refined = critical_raw_minimum(1.5, 3, 1024, opts)
    passed = 0.75 <= refined <= coarse + 1e-4 and coarse <= 0.7875
    return passed, f"N=512: {coarse:.6f}, N=1024: {refined:.6f}"


@register("spectral-equality", "equality cases of the spectral bounds")
def _spectral_equality(opts: SolverOptions, tol: float) -> Tuple[bool, str]:
    from ..solvers.spectral import Potential, dual_klt_report, equality_potential, klt_report
    from ..solvers.sphere_constants import alpha_of_mu, cached_grid

    grid = cached_grid(3, opts.grid_size)
    constant = klt_report(Potential.constant(grid, 1.0), 3.0, 3, opts, tol)
    dual = dual_klt_report(Potential.constant(grid, 2.0), 2.0, 3, opts, tol)
    equality = klt_report(equality_potential(6.0, 3, 3.0, opts), 3.0, 3, opts, tol)
    relative = abs(equality.slack) / alpha_of_mu(6.0, 3, 3.0, opts)
    passed = abs(constant.slack) < 1e-9 and abs(dual.slack) < 1e-9 and relative < 1e-5
    return passed, (f"constant slack {constant.slack:.1e}, dual slack {dual.slack:.1e}, "
                    f"equality relative slack {relative:.1e}")


@register("spectral-properties", "20 random potentials for each bound", slow=True)
def _spectral_properties(opts: SolverOptions, tol: float) -> Tuple[bool, str]:
    from ..solvers.spectral import dual_klt_report, klt_report, logsob_report, random_potential
    from ..solvers.sphere_constants import cached_grid, xi

    grid = cached_grid(3, opts.grid_size)
    xi_value = xi(5.0, 3, 3.0, opts, grid=grid).value
    worst = math.inf
    for seed in range(20):
        V = random_potential(grid, opts.seed + seed)
        W = random_potential(grid, opts.seed + seed, positive=True)
        reports = (klt_report(V, 3.0, 3, opts, tol), dual_klt_report(W, 2.0, 3, opts, tol),
                   logsob_report(V, 5.0, 3.0, 3, opts, tol, xi_value=xi_value))
        worst = min(worst, *(r.slack for r in reports))
    return worst >= -tol, f"smallest slack {worst:.2e}"


@register("circle-bounds", "alpha(mu) in [mu, mu + pi^2 mu^2] on S^1 with q = infinity")
def _circle_bounds(opts: SolverOptions, tol: float) -> Tuple[bool, str]:
    from ..solvers.sphere_constants import alpha_bounds_d1, alpha_of_mu

    for mu_val in (0.5, 1.0, 2.0, 5.0):
        alpha = alpha_of_mu(mu_val, 1, math.inf, opts)
        low, high = alpha_bounds_d1(mu_val)
        if not low <= alpha <= high:
            return False, f"alpha({mu_val}) = {alpha} outside [{low}, {high}]"
    return True, "all four inside"


@register("stereographic", "energy identities and the Aubin-Talenti integral")
def _stereographic(opts: SolverOptions, tol: float) -> Tuple[bool, str]:
    from ..solvers.stereographic import aubin_talenti, aubin_talenti_delta, energy_identity_check, gaussian

    at = energy_identity_check(aubin_talenti(3, 1.0), 2.0, 6.0, 3)
    gauss = energy_identity_check(gaussian(1.0), 2.0, 3.0, 4)
    delta_small = aubin_talenti_delta(3, 1e-3)
    bounds = all(aubin_talenti_delta(3, eps) <= eps * math.pi / 4.0 for eps in (0.1, 0.5))
    passed = at.passed(1e-6) and gauss.passed(1e-6) and delta_small < 1e-2 and bounds
    return passed, (f"residuals {max(at.energy_residual, at.power_residual):.1e}, "
                    f"{max(gauss.energy_residual, gauss.power_residual):.1e}; delta(3,1e-3)={delta_small:.2e}")


@register("obstruction", "semiclassical ratio grows over n = 10, 1e3, 1e5 (d = 2, gamma = 1) "
                          "and exceeds 1e3 at n = 1e5")
def _obstruction(opts: SolverOptions, tol: float) -> Tuple[bool, str]:
    from ..solvers.spectral import obstruction_ratio

    ratios = [obstruction_ratio(n, 2, 1.0) for n in (1e1, 1e3, 1e5)]
    growing = ratios[0] < ratios[1] < ratios[2]
    return growing and ratios[-1] > 1e3, "ratios " + ", ".join(f"{r:.3g}" for r in ratios)
