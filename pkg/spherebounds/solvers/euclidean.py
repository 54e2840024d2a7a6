"""
Euclidean Gagliardo-Nirenberg-Sobolev constants and one bound state
Keller-Lieb-Thirring constants.

For 2 < q < 2*, K_{q,d} is the best constant in

    K ‖v‖_q² <= ‖∇v‖² + ‖v‖²,

attained by the radial ground state w of -Δw + w = w^{q-1}, and equal to
‖w‖_q^{q-2}. For 0 < q < 2 the dual constant

    K*_{q,d} = inf (‖∇v‖² + ‖v‖_q²) / ‖v‖²

is attained by a compactly supported profile built from the solution of
-Δu + u^{q-1} = u. Both profiles are found by bisection shooting on the
central value. Radial symmetry of optimizers is assumed throughout.
"""
import logging
import math
from dataclasses import dataclass, field, replace
from functools import lru_cache
from typing import Any, Dict, Optional, Tuple

import numpy as np
from scipy.integrate import quad, simpson, solve_ivp
from scipy.linalg import eigh_tridiagonal
from scipy.special import gammaln, kve

from ..core.constants import ProblemParams, critical_exponent, exponents, sobolev_constant
from ..core.errors import DomainError, SolverError
from ..core.options import Branch, SolverOptions

logger = logging.getLogger(__name__)

OVERSHOOT = "overshoot"
UNDERSHOOT = "undershoot"

# relative disagreement between bracketing trajectories that ends the trusted region
_SPLIT_TOL = 1e-6
_MAX_CENTRAL_VALUE = 1e8
_MAX_BISECTIONS = 200
_DUAL_POTENTIAL_CAP = 1e6


def radial_measure(d: int) -> float:
    """|S^{d-1}| = 2 π^{d/2} / Γ(d/2); equals 2 for d = 1."""
    return float(2.0 * math.exp(0.5 * d * math.log(math.pi) - gammaln(d / 2.0)))


def default_r_max(q: float) -> float:
    """Truncation radius: the ground state widens like (q-2)^{-1/2} as q → 2."""
    return 30.0 + 12.0 / math.sqrt(abs(q - 2.0))


@dataclass(frozen=True, eq=False)
class RadialProfile:
    """A radial function sampled on a uniform grid of [0, r_max].

    ``scale`` is the dilation applied to the shooting solution (1 for GNS
    ground states); ``focusing`` selects the equation whose residual is
    reported: -Δw + w = w^{q-1} or, for the dual problem, -Δu + u^{q-1} = u.
    """
    r_nodes: np.ndarray
    values: np.ndarray
    derivatives: np.ndarray
    d: int
    q: float
    central_value: float
    scale: float = 1.0
    focusing: bool = True

    @property
    def r_max(self) -> float:
        return float(self.r_nodes[-1])

    def residuals(self) -> np.ndarray:
        """Euler-Lagrange residual on interior nodes, w'' by a five-point stencil of w'."""
        r, w, dw = self.r_nodes, self.values, self.derivatives
        h = r[1] - r[0]
        ddw = (-dw[4:] + 8.0 * dw[3:-1] - 8.0 * dw[1:-3] + dw[:-4]) / (12.0 * h)
        ri, wi, dwi = r[2:-2], w[2:-2], dw[2:-2]
        laplacian = (ddw + (self.d - 1) * dwi / ri) / self.scale ** 2
        nonlinear = np.abs(wi) ** (self.q - 2.0) * wi if self.focusing else \
            np.where(wi > 0, np.abs(wi) ** (self.q - 1.0), 0.0)
        if self.focusing:
            return laplacian - wi + nonlinear
        return laplacian + wi - nonlinear

    def max_residual(self) -> float:
        return float(np.max(np.abs(self.residuals())))


@dataclass
class GnsResult:
    """Optimal constant with the profile and norms it was read from.

    ``norms`` is (‖∇w‖², ‖w‖², ‖w‖_q²) with Lebesgue measure on R^d.
    """
    constant: float
    profile: Optional[RadialProfile] = None
    norms: Optional[Tuple[float, float, float]] = None
    branch: Branch = Branch.MINIMIZED
    diagnostics: Dict[str, Any] = field(default_factory=dict)


class RadialShooter:
    """Shoot w'' + (d-1)w'/r = σ(w - |w|^{q-2}w) from w(0) = a.

    σ = +1 is the focusing ground-state equation (q > 2), σ = -1 the
    absorbing equation of the dual problem (q < 2). The state carries the
    running integrals ∫w'² r^{d-1}, ∫w² r^{d-1} and ∫|w|^q r^{d-1}.
    """

    def __init__(self, d: int, q: float, r_end: float, opts: SolverOptions):
        self.d = d
        self.q = q
        self.r_end = r_end
        self.opts = opts
        self.focusing = q > 2
        self.calls = 0

    def initial_state(self, a: float) -> Tuple[float, np.ndarray]:
        d, q = self.d, self.q
        forcing = a - a ** (q - 1.0)
        c = (forcing if self.focusing else -forcing) / d
        length = math.sqrt(a / abs(c)) if c != 0 else 1.0
        r0 = 1e-4 * min(1.0, length)
        y0 = np.array([
            a + 0.5 * c * r0 ** 2,
            c * r0,
            c ** 2 * r0 ** (d + 2) / (d + 2),
            a ** 2 * r0 ** d / d,
            a ** q * r0 ** d / d,
        ])
        return r0, y0

    def _floor(self, a: float) -> float:
        return 1e-9 * a

    def _rhs_focusing(self, r, y):
        w, dw = y[0], y[1]
        rd = r ** (self.d - 1)
        aw = abs(w)
        ddw = -(self.d - 1) * dw / r + w - aw ** (self.q - 2.0) * w
        return [dw, ddw, dw * dw * rd, w * w * rd, aw ** self.q * rd]

    def _rhs_absorbing(self, r, y, tiny):
        w, dw = y[0], y[1]
        rd = r ** (self.d - 1)
        wp = max(w, tiny)
        ddw = -(self.d - 1) * dw / r - w + wp ** (self.q - 1.0)
        return [dw, ddw, dw * dw * rd, w * w * rd, wp ** self.q * rd]

    def energy(self, y) -> float:
        """u'²/2 - u^q/q + u²/2, nonincreasing along absorbing trajectories."""
        u = max(y[0], 0.0)
        return 0.5 * y[1] ** 2 - u ** self.q / self.q + 0.5 * y[0] ** 2

    def shoot(self, a: float, dense: bool = False):
        """Integrate from w(0) = a and classify the trajectory."""
        self.calls += 1
        r0, y0 = self.initial_state(a)

        if self.focusing:
            def crossing(r, y):
                return y[0]

            def turning(r, y):
                return y[1]

            crossing.terminal, crossing.direction = True, -1
            turning.terminal, turning.direction = True, 1
            rhs = self._rhs_focusing
        else:
            floor = self._floor(a)
            tiny = 1e-3 * floor

            def crossing(r, y):
                return y[0] - floor

            def turning(r, y):
                return self.energy(y)

            crossing.terminal, crossing.direction = True, -1
            turning.terminal, turning.direction = True, -1

            def rhs(r, y):
                return self._rhs_absorbing(r, y, tiny)

        sol = solve_ivp(rhs, (r0, self.r_end), y0, method="DOP853",
                        rtol=self.opts.shooting_rtol, atol=self.opts.shooting_atol,
                        events=(crossing, turning), dense_output=dense, max_step=1.0)
        if sol.status == -1:
            raise SolverError("radial integration failed",
                              {"central_value": a, "message": sol.message, "d": self.d, "q": self.q})

        if self.focusing:
            if sol.t_events[0].size:
                outcome = OVERSHOOT
            elif sol.t_events[1].size:
                outcome = UNDERSHOOT
            else:
                # a growing positive mode turns back up
                outcome = UNDERSHOOT if sol.y[0, -1] + sol.y[1, -1] > 0 else OVERSHOOT
        else:
            if self.energy(y0) < 0 or sol.t_events[1].size:
                outcome = UNDERSHOOT
            elif sol.t_events[0].size:
                outcome = OVERSHOOT
            else:
                outcome = OVERSHOOT if self.energy(sol.y[:, -1]) > 0 else UNDERSHOOT
        return outcome, sol

    def bracket(self) -> Tuple[float, float, int]:
        """Bisect on the central value between an undershoot and an overshoot."""
        lo = 1.0
        if self.focusing:
            hi = 2.0
        else:
            hi = 2.0 * max(1.0, (2.0 / self.q) ** (1.0 / (2.0 - self.q)))
        while self.shoot(hi)[0] == UNDERSHOOT:
            lo, hi = hi, 2.0 * hi
            if hi > _MAX_CENTRAL_VALUE:
                raise SolverError("no overshooting central value found",
                                  {"d": self.d, "q": self.q, "last_tried": hi})
        logger.debug("Shooting bracket d=%d q=%g: [%g, %g]", self.d, self.q, lo, hi)

        iterations = 0
        while hi - lo > self.opts.bisection_xtol * hi and iterations < _MAX_BISECTIONS:
            mid = 0.5 * (lo + hi)
            if mid in (lo, hi):
                break
            if self.shoot(mid)[0] == OVERSHOOT:
                hi = mid
            else:
                lo = mid
            iterations += 1
        logger.debug("Shooting converged after %d bisections: w(0) in [%.15g, %.15g]",
                     iterations, lo, hi)
        return lo, hi, iterations


def _bessel_tail(d: int, r_s: float, w_s: float):
    """Decaying solution C r^{-ν} K_ν(r) of Δw = w, ν = d/2 - 1, matched at r_s."""
    nu = d / 2.0 - 1.0
    base = r_s ** (-nu) * kve(nu, r_s)

    def value(r):
        r = np.asarray(r, dtype=float)
        return w_s * r ** (-nu) * kve(nu, r) * np.exp(-(r - r_s)) / base

    def derivative(r):
        r = np.asarray(r, dtype=float)
        return -w_s * r ** (-nu) * kve(nu + 1.0, r) * np.exp(-(r - r_s)) / base

    return value, derivative


def _check_ground_state_range(d: int, q: float) -> None:
    if math.isinf(q):
        raise DomainError("q = infinity has no H¹ ground state; use gns_constant")
    if not q > 2:
        raise DomainError(f"ground states require q > 2, got {q}")
    if d >= 3 and q >= critical_exponent(d):
        raise DomainError(f"ground states require q < 2* = {critical_exponent(d)} for d = {d}")


def _shoot_ground_state(d: int, q: float, opts: SolverOptions):
    """Ground state profile together with its norm integrals and diagnostics."""
    r_max = opts.r_max if opts.r_max is not None else default_r_max(q)
    shooter = RadialShooter(d, q, r_max, opts)
    lo, hi, iterations = shooter.bracket()
    _, sol_lo = shooter.shoot(lo, dense=True)
    _, sol_hi = shooter.shoot(hi, dense=True)

    r_start = max(sol_lo.t[0], sol_hi.t[0])
    r_stop = min(sol_lo.t[-1], sol_hi.t[-1])
    r_check = np.linspace(r_start, r_stop, 20001)
    y_lo, y_hi = sol_lo.sol(r_check), sol_hi.sol(r_check)
    gap = np.abs(y_lo[0] - y_hi[0]) / (np.abs(y_lo[0]) + np.abs(y_hi[0]) + 1e-300)
    split = np.nonzero(gap > _SPLIT_TOL)[0]
    idx = split[0] - 1 if split.size else r_check.size - 1
    if idx < 1:
        raise SolverError("shooting trajectories separate immediately",
                          {"d": d, "q": q, "bracket": (lo, hi)})
    r_s = float(r_check[idx])
    y_s = 0.5 * (y_lo[:, idx] + y_hi[:, idx])
    w_s = float(y_s[0])
    if w_s <= 0:
        raise SolverError("trusted region ends at a non-positive value", {"r_split": r_s, "w": w_s})

    central = 0.5 * (lo + hi)
    tail, tail_derivative = _bessel_tail(d, r_s, w_s)
    tail_grad = quad(lambda r: tail_derivative(r) ** 2 * r ** (d - 1), r_s, np.inf, limit=200)[0]
    tail_mass = quad(lambda r: tail(r) ** 2 * r ** (d - 1), r_s, np.inf, limit=200)[0]
    tail_q = quad(lambda r: tail(r) ** q * r ** (d - 1), r_s, np.inf, limit=200)[0]

    measure = radial_measure(d)
    grad = measure * (y_s[2] + tail_grad)
    mass = measure * (y_s[3] + tail_mass)
    power = measure * (y_s[4] + tail_q)

    r_nodes = np.linspace(0.0, r_max, opts.radial_nodes)
    values = np.empty_like(r_nodes)
    derivs = np.empty_like(r_nodes)
    inner = r_nodes < r_start
    c = (central - central ** (q - 1.0)) / d
    values[inner] = central + 0.5 * c * r_nodes[inner] ** 2
    derivs[inner] = c * r_nodes[inner]
    trusted = (r_nodes >= r_start) & (r_nodes <= r_s)
    avg = 0.5 * (sol_lo.sol(r_nodes[trusted]) + sol_hi.sol(r_nodes[trusted]))
    values[trusted], derivs[trusted] = avg[0], avg[1]
    outer = r_nodes > r_s
    values[outer] = tail(r_nodes[outer])
    derivs[outer] = tail_derivative(r_nodes[outer])

    if values[-1] > opts.decay_tol:
        logger.warning("Ground state d=%d q=%g has w(r_max)=%.3g above decay_tol=%.1g",
                       d, q, values[-1], opts.decay_tol)

    profile = RadialProfile(r_nodes=r_nodes, values=values, derivatives=derivs, d=d, q=q,
                            central_value=central)
    diagnostics = {
        "bisections": iterations,
        "integrations": shooter.calls,
        "bracket": (lo, hi),
        "r_split": r_s,
        "w_split": w_s,
        "r_max": r_max,
        "pohozaev_residual": abs(grad + mass - power) / power,
    }
    return profile, (grad, mass, power), diagnostics


def ground_state_radial(d: int, q: float, opts: Optional[SolverOptions] = None) -> RadialProfile:
    """Positive decreasing solution of w'' + (d-1)w'/r - w + w^{q-1} = 0.

    Found by bisection on w(0): overshooting trajectories cross zero,
    undershooting ones turn back up. Beyond the radius where the two
    bracketing trajectories separate the profile continues as the matched
    decaying Bessel solution.
    """
    _check_ground_state_range(d, q)
    return _shoot_ground_state(d, q, opts or SolverOptions())[0]


@lru_cache(maxsize=64)
def _gns_cached(q: float, d: int, opts: SolverOptions) -> GnsResult:
    if d == 1 and math.isinf(q):
        return GnsResult(constant=2.0, branch=Branch.CLOSED_FORM,
                         diagnostics={"source": "Agmon inequality"})
    if math.isinf(q):
        raise DomainError("q = infinity is only admissible for d = 1")
    if not q > 2:
        raise DomainError(f"gns_constant requires q > 2, got {q}")
    if d >= 3:
        q_crit = critical_exponent(d)
        if q > q_crit * (1.0 + 1e-14):
            raise DomainError(f"q = {q} exceeds 2* = {q_crit}")
        if q >= q_crit:
            return GnsResult(constant=1.0 / sobolev_constant(d), branch=Branch.CLOSED_FORM,
                             diagnostics={"source": "Sobolev constant"})

    profile, (grad, mass, power), diagnostics = _shoot_ground_state(d, q, opts)
    lq2 = power ** (2.0 / q)
    constant = power ** ((q - 2.0) / q)
    diagnostics["quotient"] = (grad + mass) / lq2
    diagnostics["max_residual"] = profile.max_residual()
    logger.info("K_{%g,%d} = %.12g (w(0) = %.10g)", q, d, constant, profile.central_value)
    return GnsResult(constant=constant, profile=profile, norms=(grad, mass, lq2),
                     diagnostics=diagnostics)


def gns_constant(q: float, d: int, opts: Optional[SolverOptions] = None) -> GnsResult:
    """Optimal constant K_{q,d} of the Gagliardo-Nirenberg-Sobolev inequality.

    (q=∞, d=1) returns 2 and q = 2* returns 1/S_d; other exponents shoot
    the ground state and return ‖w‖_q^{q-2}. Results are cached per
    (q, d, options).
    """
    return _gns_cached(float(q), int(d), opts or SolverOptions())


def scaling_prefactor(theta: float) -> float:
    """ϑ^{-ϑ}(1-ϑ)^{-(1-ϑ)}, tending to 1 at both ends of (0, 1)."""
    if not 0 < theta < 1:
        raise DomainError(f"theta must lie in (0, 1), got {theta}")
    return math.exp(-theta * math.log(theta) - (1.0 - theta) * math.log1p(-theta))


def gns_scaling_reduce(K_GN: float, q: float, d: int) -> float:
    """K_{q,d} from the scale-invariant constant: ϑ^{-ϑ}(1-ϑ)^{-(1-ϑ)} K_GN."""
    theta = exponents(d, q).theta
    if theta is None or not 0 < theta < 1:
        raise DomainError(f"scaling reduction needs theta in (0, 1), got {theta} for q={q}, d={d}")
    return scaling_prefactor(theta) * K_GN


def gns_scale_invariant_quotient(norms: Tuple[float, float, float], q: float, d: int) -> float:
    """‖∇v‖^{2ϑ} ‖v‖^{2(1-ϑ)} / ‖v‖_q² from (‖∇v‖², ‖v‖², ‖v‖_q²)."""
    grad, mass, lq2 = norms
    theta = exponents(d, q).theta
    return grad ** theta * mass ** (1.0 - theta) / lq2


def optimal_scale(norms: Tuple[float, float, float], q: float, d: int) -> float:
    """λ_⋆ = √(ϑ/(1-ϑ)) ‖v‖₂/‖∇v‖₂, the dilation minimizing the GNS quotient."""
    grad, mass, _ = norms
    theta = exponents(d, q).theta
    if theta is None or not 0 < theta < 1:
        raise DomainError(f"optimal scale needs theta in (0, 1), got {theta}")
    return math.sqrt(theta / (1.0 - theta)) * math.sqrt(mass / grad)


def _dual_scaling(norms: Tuple[float, float, float], q: float, d: int):
    """Minimize (λ²G + λ^e H)/M over dilations v(λx), e = d(q-2)/q < 0."""
    grad, mass, lq2 = norms
    e = d * (q - 2.0) / q
    lam = (-e * lq2 / (2.0 * grad)) ** (1.0 / (2.0 - e))
    value = (lam ** 2 * grad + lam ** e * lq2) / mass
    return lam, value


def dual_scaling_derivative(norms: Tuple[float, float, float], q: float, d: int) -> float:
    """d/dλ of R[v(λ·)] at λ = 1, relative to R[v]."""
    grad, mass, lq2 = norms
    e = d * (q - 2.0) / q
    return (2.0 * grad + e * lq2) / (grad + lq2)


def _dual_gns_shooting(q: float, d: int, opts: SolverOptions) -> GnsResult:
    r_end = opts.r_max if opts.r_max is not None else 60.0
    shooter = RadialShooter(d, q, r_end, opts)
    lo, hi, iterations = shooter.bracket()
    _, sol_lo = shooter.shoot(lo, dense=True)
    _, sol_hi = shooter.shoot(hi, dense=True)

    measure = radial_measure(d)
    y_end = 0.5 * (sol_lo.y[:, -1] + sol_hi.y[:, -1])
    grad, mass = measure * y_end[2], measure * y_end[3]
    lq2 = (measure * y_end[4]) ** (2.0 / q)
    support = 0.5 * (sol_lo.t[-1] + sol_hi.t[-1])

    lam, constant = _dual_scaling((grad, mass, lq2), q, d)

    r_u = np.linspace(0.0, support * 1.05, opts.radial_nodes)
    values = np.zeros_like(r_u)
    derivs = np.zeros_like(r_u)
    central = 0.5 * (lo + hi)
    r_start = max(sol_lo.t[0], sol_hi.t[0])
    r_stop = min(sol_lo.t[-1], sol_hi.t[-1])
    c = (central ** (q - 1.0) - central) / d
    inner = r_u < r_start
    values[inner] = central + 0.5 * c * r_u[inner] ** 2
    derivs[inner] = c * r_u[inner]
    body = (r_u >= r_start) & (r_u <= r_stop)
    avg = 0.5 * (sol_lo.sol(r_u[body]) + sol_hi.sol(r_u[body]))
    values[body] = np.clip(avg[0], 0.0, None)
    derivs[body] = np.where(avg[0] > 0, avg[1], 0.0)

    # minimizer v(r) = u(λ r): nodes shrink by λ, derivatives grow by λ
    profile = RadialProfile(r_nodes=r_u / lam, values=values, derivatives=lam * derivs, d=d, q=q,
                            central_value=central, scale=lam, focusing=False)
    scaled_norms = (lam ** (2 - d) * grad, lam ** (-d) * mass, lam ** (-2.0 * d / q) * lq2)
    diagnostics = {
        "method": "shooting",
        "bisections": iterations,
        "integrations": shooter.calls,
        "bracket": (lo, hi),
        "support_radius": support / lam,
        "scale": lam,
        "scale_consistency": abs(lam ** 2 - constant) / constant,
        "stationarity": dual_scaling_derivative(scaled_norms, q, d),
    }
    if q < 1:
        logger.info("K*_{%g,%d}: minimizer uniqueness is not asserted for q < 1", q, d)
    return GnsResult(constant=constant, profile=profile, norms=scaled_norms, diagnostics=diagnostics)


def _dual_gns_grid(q: float, d: int, opts: SolverOptions, radius: float = 12.0,
                   nodes: Optional[int] = None) -> GnsResult:
    """Direct minimization on a P1 radial grid with Dirichlet data at ``radius``.

    Alternates the Hölder-dual potential W = ‖u‖_q^{2-q}|u|^{q-2}, for which
    ∫Wu² = ‖u‖_q², with the ground state of -Δ + W.
    """
    n = nodes or opts.radial_nodes
    r = np.linspace(0.0, radius, n)
    a, b = r[:-1], r[1:]
    h = b - a
    moment = (b ** d - a ** d) / d
    first = (b ** (d + 1) - a ** (d + 1)) / (d + 1)
    right = (first - a * moment) / h
    left = moment - right
    measure = radial_measure(d)

    mass = np.zeros(n)
    mass[:-1] += left
    mass[1:] += right
    stiff = moment / h ** 2
    diag = np.zeros(n)
    diag[:-1] += stiff
    diag[1:] += stiff
    # Dirichlet node at r = radius is dropped
    m = measure * mass[:-1]
    k_diag = measure * diag[:-1]
    k_off = -measure * stiff[:-1]
    scaled_off = k_off / np.sqrt(m[:-1] * m[1:])

    def quotient(x):
        kx = k_diag * x
        kx[:-1] += k_off * x[1:]
        kx[1:] += k_off * x[:-1]
        lq = np.dot(m, np.abs(x) ** q) ** (1.0 / q)
        return (np.dot(x, kx) + lq ** 2) / np.dot(m, x ** 2), lq

    x = np.exp(-0.5 * r[:-1] ** 2)
    value, lq = quotient(x)
    tol = max(opts.stagnation_tol, 1e-11)
    iterations = 0
    for iterations in range(1, min(opts.max_iterations, 5000) + 1):
        W = lq ** (2.0 - q) * np.maximum(np.abs(x), 1e-300) ** (q - 2.0)
        W = np.minimum(W, _DUAL_POTENTIAL_CAP)
        _, vecs = eigh_tridiagonal(k_diag / m + W, scaled_off, select="i", select_range=(0, 0))
        x = np.abs(vecs[:, 0] / np.sqrt(m))
        new_value, lq = quotient(x)
        if abs(value - new_value) <= tol * new_value:
            value = new_value
            break
        value = new_value
    else:
        logger.warning("K*_{%g,%d} grid minimization stopped at the iteration limit", q, d)

    x = x / x[0]
    grad = float(value * np.dot(m, x ** 2) - quotient(x)[1] ** 2)
    profile_values = np.append(x, 0.0)
    profile = RadialProfile(r_nodes=r, values=profile_values,
                            derivatives=np.gradient(profile_values, r), d=d, q=q,
                            central_value=1.0, focusing=False)
    _, lq = quotient(x)
    norms = (grad, float(np.dot(m, x ** 2)), lq ** 2)
    return GnsResult(constant=float(value), profile=profile, norms=norms,
                     diagnostics={"method": "grid", "iterations": iterations, "radius": radius,
                                  "nodes": n})


def _dual_gns_extrapolated(q: float, d: int, opts: SolverOptions) -> GnsResult:
    """P1 minima on n and 2n-1 nodes combined by Richardson extrapolation in h²."""
    coarse = _dual_gns_grid(q, d, opts)
    fine = _dual_gns_grid(q, d, opts, nodes=2 * opts.radial_nodes - 1)
    constant = (4.0 * fine.constant - coarse.constant) / 3.0
    diagnostics = dict(fine.diagnostics, coarse=coarse.constant, fine=fine.constant)
    return replace(fine, constant=constant, diagnostics=diagnostics)


def dual_gns_constant(q: float, d: int, opts: Optional[SolverOptions] = None,
                      method: str = "shooting") -> GnsResult:
    """Dual constant K*_{q,d} = inf (‖∇v‖² + ‖v‖_q²)/‖v‖² for 0 < q < 2.

    ``method="shooting"`` bisects on the central value of -Δu + u^{q-1} = u
    and rescales to the stationary dilation; ``method="grid"`` is the
    direct finite-element minimization, extrapolated in the mesh size,
    used as a cross-check.
    """
    opts = opts or SolverOptions()
    if not 0 < q < 2:
        raise DomainError(f"dual_gns_constant requires 0 < q < 2, got {q}")
    if method == "shooting":
        result = _dual_gns_shooting(q, d, opts)
    elif method == "grid":
        result = _dual_gns_extrapolated(q, d, opts)
    else:
        raise DomainError(f"Unknown method: {method!r}")
    logger.info("K*_{%g,%d} = %.12g (%s)", q, d, result.constant, method)
    return result


def klt_constants(gamma: float, d: int, negative: bool = True,
                  opts: Optional[SolverOptions] = None) -> float:
    """One bound state Keller-Lieb-Thirring constant.

    ``negative=True`` gives L¹_{γ,d} = K_{q,d}^{-p} with p = γ + d/2;
    ``negative=False`` gives L¹_{-γ,d} = (K*_{q,d})^{-γ} with p = γ - d/2.
    """
    if negative:
        if d >= 3 and gamma < 0:
            raise DomainError(f"gamma must be >= 0 for d = {d}, got {gamma}")
        if d == 2 and not gamma > 0:
            raise DomainError(f"gamma must be > 0 for d = 2, got {gamma}")
        if d == 1 and gamma < 0.5:
            raise DomainError(f"gamma must be >= 1/2 for d = 1, got {gamma}")
        p = gamma + d / 2.0
        q = ProblemParams.from_p(d, p).q
        if d >= 3 and math.isclose(q, critical_exponent(d), rel_tol=1e-12):
            q = critical_exponent(d)
        return gns_constant(q, d, opts).constant ** (-p)

    if not gamma > d / 2.0:
        raise DomainError(f"positive-potential branch needs gamma > d/2 = {d / 2.0}, got {gamma}")
    p = gamma - d / 2.0
    q = 2.0 * p / (p + 1.0)
    return dual_gns_constant(q, d, opts).constant ** (-gamma)


def rescale_pair(r: np.ndarray, v: np.ndarray, phi: np.ndarray, lam: float):
    """(v(λ·), λ² φ(λ·)) on the dilated nodes r/λ, keeping nodal values."""
    return np.asarray(r) / lam, np.asarray(v), lam ** 2 * np.asarray(phi)


def rayleigh_ratio(r: np.ndarray, v: np.ndarray, phi: np.ndarray, d: int, p: float) -> float:
    """∫(φv² - |∇v|²) / (‖v‖² ‖φ‖_p^{2p/(2p-d)}) for radial samples.

    Dilation invariant: ``rayleigh_ratio(*rescale_pair(r, v, phi, λ), d, p)``
    does not depend on λ.
    """
    if not 2 * p > d:
        raise DomainError(f"Rayleigh ratio requires p > d/2, got p={p}, d={d}")
    r = np.asarray(r, dtype=float)
    v = np.asarray(v, dtype=float)
    phi = np.asarray(phi, dtype=float)
    jac = radial_measure(d) * r ** (d - 1)
    dv = np.gradient(v, r)
    numerator = simpson((phi * v ** 2 - dv ** 2) * jac, x=r)
    mass = simpson(v ** 2 * jac, x=r)
    phi_norm = simpson(np.abs(phi) ** p * jac, x=r) ** (1.0 / p)
    return float(numerator / (mass * phi_norm ** (2.0 * p / (2.0 * p - d))))


def agmon_ratio(u: np.ndarray, x: np.ndarray) -> float:
    """(‖u‖₂² + ‖u'‖₂²)/‖u‖_∞² on the line; at least 2 for u ∈ H¹(R)."""
    u = np.asarray(u, dtype=float)
    x = np.asarray(x, dtype=float)
    du = np.gradient(u, x)
    return float((simpson(u ** 2, x=x) + simpson(du ** 2, x=x)) / np.max(np.abs(u)) ** 2)
