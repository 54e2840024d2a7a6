"""
Optimal interpolation constants on S^d.

For q > 2, μ(α) is the best constant in

    ‖∇u‖² + α‖u‖₂² >= μ(α) ‖u‖_q²        (dσ norms)

and is computed by minimizing the quotient over zonal functions. For q < 2,
ν(β) is the best constant in ‖∇u‖² + β‖u‖_q² >= ν(β)‖u‖₂², and ξ(α) is the
logarithmic Sobolev analogue. Rigidity gives the exact branches μ(α) = α for
α <= d/(q-2), ν(β) = β for β <= d/(2-q) (q >= 1) and the plateau μ = α_* at
q = 2*. Zonal minimizers are assumed.
"""
import logging
import math
from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.linalg import LinAlgError, cho_factor, cho_solve, eigh, solve
from scipy.optimize import brentq, minimize_scalar
from scipy.special import xlogy

from ..core.constants import ProblemParams, critical_exponent, exponents, kappa, sphere_surface
from ..core.errors import DomainError, SolverError, SphereBoundsError
from ..core.options import Branch, SolverOptions
from ..core.ultraspherical import (JacobiGrid, ZonalFunction, build_grid, dirichlet_form,
                                   oversampled_quadrature,
                                   participation_ratio, quadrature_rule)
from .euclidean import dual_gns_constant, gns_constant
from .stereographic import aubin_talenti_sphere

logger = logging.getLogger(__name__)

_UPPER_RULE_NODES = 512
_UPPER_SCAN_POINTS = 201
_POTENTIAL_CAP = 1e8
_U2_FLOOR = 1e-300

Seed = Union[float, ZonalFunction]


@dataclass
class ConstantResult:
    """A sphere constant and how it was obtained.

    For the EXACT_LINE branch ``value`` is the input parameter itself.
    """
    value: float
    branch: Branch
    minimizer: Optional[ZonalFunction] = None
    diagnostics: Dict[str, Any] = field(default_factory=dict)


@dataclass
class CurveSample:
    """A constant sampled along a parameter grid, with its bounds."""
    family: str
    parameter: np.ndarray
    value: np.ndarray
    lower: Optional[np.ndarray] = None
    upper: Optional[np.ndarray] = None
    asymptote: Optional[np.ndarray] = None
    branches: List[str] = field(default_factory=list)
    status: List[str] = field(default_factory=list)
    metadata: Dict[str, Any] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(s == "ok" for s in self.status)


@lru_cache(maxsize=16)
def cached_grid(d: int, N: int, grading: Optional[float] = None) -> JacobiGrid:
    """Grids are immutable; reuse them across evaluations."""
    return build_grid(d, N, grading)


def _superquadratic(d: int, q: float) -> ProblemParams:
    params = exponents(d, q)
    if not params.superquadratic:
        raise DomainError(f"mu requires q > 2, got {q}")
    return params


class _QuotientProblem:
    """The quotient F_α in scaled coordinates y = √w u.

    The numerator is yᵀ(C + α)y; the denominator uses either the grid
    quadrature or an oversampled rule through the interpolation matrix.
    """

    def __init__(self, grid: JacobiGrid, alpha: float, q: float, oversample: int = 1):
        self.grid = grid
        self.alpha = alpha
        self.q = q
        self.H = grid.stiffness + alpha * np.eye(grid.N)
        self.cho = cho_factor(self.H)
        self.sqw = grid.sqrt_weights
        if oversample > 1:
            _, self.fine_weights, self.P = oversampled_quadrature(grid, oversample)
        else:
            self.P = None

    def nodal(self, y: np.ndarray) -> np.ndarray:
        return y / self.sqw

    def power(self, y: np.ndarray) -> float:
        u = self.nodal(y)
        if self.P is None:
            return float(np.dot(self.grid.weights, np.abs(u) ** self.q))
        return float(np.dot(self.fine_weights, np.abs(self.P @ u) ** self.q))

    def nonlinear(self, y: np.ndarray) -> np.ndarray:
        """Gradient of ‖u‖_q^q / q with respect to y."""
        u = self.nodal(y)
        if self.P is None:
            return np.abs(u) ** (self.q - 2.0) * y
        fu = self.P @ u
        return (self.P.T @ (self.fine_weights * np.abs(fu) ** (self.q - 2.0) * fu)) / self.sqw

    def nonlinear_jacobian(self, y: np.ndarray) -> np.ndarray:
        u = self.nodal(y)
        if self.P is None:
            return np.diag((self.q - 1.0) * np.abs(u) ** (self.q - 2.0))
        fu = self.P @ u
        inner = (self.q - 1.0) * self.fine_weights * np.abs(fu) ** (self.q - 2.0)
        return (self.P.T @ (inner[:, None] * self.P)) / np.outer(self.sqw, self.sqw)

    def normalize(self, y: np.ndarray) -> np.ndarray:
        if np.sum(y) < 0:
            y = -y
        power = self.power(y)
        if not power > 0:
            raise SolverError("iterate collapsed to zero", {"alpha": self.alpha, "q": self.q})
        return y / power ** (1.0 / self.q)

    def quotient(self, y: np.ndarray) -> float:
        """F_α for a y with ‖u‖_q = 1."""
        return float(y @ (self.H @ y))

    def el_residual(self, y: np.ndarray, value: float) -> float:
        """Relative nodal residual of -Δu + αu - μ|u|^{q-2}u."""
        forcing = value * self.nonlinear(y)
        residual = (self.H @ y - forcing) / self.sqw
        return float(np.max(np.abs(residual)) / np.max(np.abs(forcing / self.sqw)))


def _iterate(problem: _QuotientProblem, y: np.ndarray, opts: SolverOptions) -> Tuple[np.ndarray, float, int]:
    """Conditional-gradient steps y ← (C+α)⁻¹∇‖u‖_q^q, renormalized.

    The q-power is convex for q >= 2, so every step lowers the quotient.
    """
    y = problem.normalize(y)
    value = problem.quotient(y)
    window = deque([value], maxlen=opts.stagnation_window + 1)
    iterations = 0
    for iterations in range(1, opts.max_iterations + 1):
        y = problem.normalize(cho_solve(problem.cho, problem.nonlinear(y)))
        value = problem.quotient(y)
        window.append(value)
        if len(window) == window.maxlen and window[0] - value <= opts.stagnation_tol * value:
            break
    return y, value, iterations


def _newton_polish(problem: _QuotientProblem, y: np.ndarray, value: float,
                   steps: int) -> Tuple[np.ndarray, float, int]:
    """Newton on (C+α)z = |u|^{q-2}z, kept only if the quotient does not rise."""
    q = problem.q
    z = value ** (1.0 / (q - 2.0)) * y
    taken = 0
    for taken in range(1, steps + 1):
        residual = problem.H @ z - problem.nonlinear(z)
        jacobian = problem.H - problem.nonlinear_jacobian(z)
        try:
            step = solve(jacobian, residual, assume_a="sym")
        except (LinAlgError, ValueError):
            break
        z = z - step
        if not np.all(np.isfinite(z)):
            return y, value, taken
        if np.linalg.norm(step) <= 1e-14 * np.linalg.norm(z):
            break
    try:
        polished = problem.normalize(z)
    except SolverError:
        return y, value, taken
    polished_value = problem.quotient(polished)
    if polished_value <= value * (1.0 + 1e-13):
        return polished, polished_value, taken
    logger.debug("Newton polish rejected: %.15g > %.15g", polished_value, value)
    return y, value, taken


def _seed_functions(grid: JacobiGrid, alpha: float, params: ProblemParams, opts: SolverOptions,
                    seeds: Optional[Sequence[Seed]],
                    warm_start: Optional[ZonalFunction]) -> List[Tuple[str, np.ndarray]]:
    z = grid.nodes
    candidates: List[Tuple[str, np.ndarray]] = []
    if seeds is None:
        for eps in opts.seeds:
            candidates.append((f"linear:{eps}", 1.0 + eps * z))
        if not params.is_critical:
            _, eps_star = _mu_upper(alpha, params.d, params.q, opts)
            if 0 < eps_star < 1:
                candidates.append((f"upper:{eps_star:.6g}", 1.0 + eps_star * z))
        if params.line_threshold > 0 and alpha > 10.0 * params.line_threshold:
            candidates.append(("bump", 1.0 / np.cosh(np.sqrt(2.0 * alpha * (1.0 - z)))))
        if params.is_critical:
            for eps in (0.5, 0.2, 0.1, 0.05):
                candidates.append((f"aubin_talenti:{eps}", aubin_talenti_sphere(z, params.d, eps)))
    else:
        for seed in seeds:
            if isinstance(seed, ZonalFunction):
                candidates.append(("given", seed.resample(grid).values))
            else:
                candidates.append((f"linear:{seed}", 1.0 + float(seed) * z))
    if warm_start is not None:
        candidates.append(("warm_start", warm_start.resample(grid).values))
    return candidates


def minimize_quotient(alpha: float, grid: JacobiGrid, q: float, opts: Optional[SolverOptions] = None,
                      seeds: Optional[Sequence[Seed]] = None,
                      warm_start: Optional[ZonalFunction] = None) -> ConstantResult:
    """Minimize F_α over zonal functions on ``grid`` from several seeds.

    Each seed runs the monotone H¹ iteration until the quotient stagnates,
    then Newton steps on the Euler-Lagrange equation. The constant function
    is always a candidate, so the result never exceeds α.
    """
    opts = opts or SolverOptions()
    if not alpha > 0:
        raise DomainError(f"alpha must be positive, got {alpha}")
    params = _superquadratic(grid.d, q)
    if math.isinf(q):
        raise DomainError("q = infinity is handled in closed form")
    problem = _QuotientProblem(grid, alpha, q, opts.oversample)

    best_y = problem.normalize(grid.sqrt_weights.copy())
    best_value = problem.quotient(best_y)
    best = {"seed": "constant", "iterations": 0, "newton_steps": 0}
    for label, u0 in _seed_functions(grid, alpha, params, opts, seeds, warm_start):
        y, value, iterations = _iterate(problem, grid.sqrt_weights * u0, opts)
        y, value, newton = _newton_polish(problem, y, value, opts.newton_steps)
        logger.debug("alpha=%g seed %s: %.15g after %d iterations", alpha, label, value, iterations)
        if value < best_value:
            best_y, best_value = y, value
            best = {"seed": label, "iterations": iterations, "newton_steps": newton}
        if iterations >= opts.max_iterations:
            logger.warning("alpha=%g seed %s hit the iteration limit", alpha, label)

    minimizer = ZonalFunction(grid, problem.nodal(best_y))
    diagnostics = dict(best)
    diagnostics.update({
        "grid_size": grid.N,
        "grading": grid.grading,
        "oversample": opts.oversample,
        "el_residual": problem.el_residual(best_y, best_value),
        "participation": participation_ratio(minimizer.values),
    })
    return ConstantResult(value=best_value, branch=Branch.MINIMIZED, minimizer=minimizer,
                          diagnostics=diagnostics)


_CRITICAL_SEED_WIDTHS = (0.1, 0.05)


def _critical_raw(alpha: float, grid: JacobiGrid, opts: SolverOptions,
                  oversample: int = 3) -> ConstantResult:
    """Minimize at q = 2* from Aubin-Talenti seeds only.

    With ``oversample`` >= 3 the q-norm of every grid polynomial is integrated
    exactly, so the discrete value can never drop below α_*.
    """
    d = grid.d
    seeds = [ZonalFunction(grid, aubin_talenti_sphere(grid.nodes, d, eps)) for eps in _CRITICAL_SEED_WIDTHS]
    raw_opts = opts.replace(oversample=max(oversample, opts.oversample),
                            max_iterations=min(opts.max_iterations, 2000), newton_steps=0)
    return minimize_quotient(alpha, grid, critical_exponent(d), raw_opts, seeds=seeds)


def critical_raw_minimum(alpha: float, d: int, N: int, opts: Optional[SolverOptions] = None) -> float:
    """Raw discrete minimum of the critical quotient on an N-node grid, for α > α_*."""
    opts = opts or SolverOptions()
    if d < 3:
        raise DomainError(f"the critical exponent is finite only for d >= 3, got d = {d}")
    return _critical_raw(alpha, cached_grid(d, N), opts).value


def mu_closed_form_d1(alpha: float) -> float:
    """μ(α) = √α tanh(π√α)/π on the circle with q = ∞."""
    k = math.sqrt(alpha)
    return k * math.tanh(math.pi * k) / math.pi


def mu(alpha: float, d: int, q: float, opts: Optional[SolverOptions] = None,
       grid: Optional[JacobiGrid] = None, grading: Optional[float] = None,
       warm_start: Optional[ZonalFunction] = None, diagnose_plateau: bool = False) -> ConstantResult:
    """Optimal constant μ(α) for 2 < q <= 2*.

    Exact branches are returned without numerics. Otherwise the quotient is
    minimized; the grid is doubled while the minimizer is carried by fewer
    than ``opts.min_layer_nodes`` nodes. An explicit ``grid`` is used as given.
    """
    opts = opts or SolverOptions()
    if not alpha > 0:
        raise DomainError(f"alpha must be positive, got {alpha}")
    params = _superquadratic(d, q)

    if math.isinf(q):
        return ConstantResult(value=mu_closed_form_d1(alpha), branch=Branch.CLOSED_FORM,
                              diagnostics={"optimizer": "cosh(sqrt(alpha)(pi - |theta|))"})
    if alpha <= params.line_threshold:
        return ConstantResult(value=alpha, branch=Branch.EXACT_LINE)
    if params.is_critical:
        diagnostics: Dict[str, Any] = {}
        if diagnose_plateau:
            raw = _critical_raw(alpha, grid or cached_grid(d, opts.grid_size, grading), opts)
            diagnostics = {"raw_value": raw.value, **raw.diagnostics}
        return ConstantResult(value=params.alpha_star, branch=Branch.CRITICAL_PLATEAU,
                              diagnostics=diagnostics)

    adaptive = grid is None
    grid = grid or cached_grid(d, opts.grid_size, grading)
    result = minimize_quotient(alpha, grid, q, opts, warm_start=warm_start)
    while (adaptive and participation_ratio(result.minimizer.values) < opts.min_layer_nodes
           and 2 * grid.N <= opts.max_grid_size):
        logger.info("mu(alpha=%g): minimizer spans %.1f nodes, doubling grid to N=%d",
                    alpha, participation_ratio(result.minimizer.values), 2 * grid.N)
        grid = cached_grid(d, 2 * grid.N, grid.grading)
        result = minimize_quotient(alpha, grid, q, opts, warm_start=result.minimizer)
    return result


def _theta(s: float, q: float) -> float:
    return s * (q - 2.0) / (q * (s - 2.0))


def _lower_branch(alpha: float, d: int, q: float, s: float) -> float:
    th = _theta(s, q)
    return (d / (s - 2.0)) ** th * alpha ** (1.0 - th)


def mu_lower(alpha: float, d: int, q: float, s: Union[float, str] = "best") -> float:
    """Lower bound (d/(s-2))^θ α^{1-θ}, θ = s(q-2)/(q(s-2)), for q < s <= 2*.

    ``s="best"`` maximizes over admissible s and returns α on the exact line.
    For q = ∞ on the circle the bracket μ <= α <= μ + π²μ² is inverted instead.
    """
    params = _superquadratic(d, q)
    if not alpha > 0:
        raise DomainError(f"alpha must be positive, got {alpha}")
    if math.isinf(q):
        if s != "best":
            raise DomainError("no interpolation branch lies above q = infinity")
        # invert α <= μ + π²μ²
        return (math.sqrt(1.0 + 4.0 * math.pi ** 2 * alpha) - 1.0) / (2.0 * math.pi ** 2)
    s_max = params.q_critical if d >= 3 else max(10.0 * q, 100.0)

    if s != "best":
        s = float(s)
        if not q < s <= s_max:
            raise DomainError(f"s must lie in (q, 2*] = ({q}, {s_max}], got {s}")
        if not alpha > d / (s - 2.0):
            raise DomainError(f"alpha = {alpha} must exceed d/(s-2) = {d / (s - 2.0)}")
        return _lower_branch(alpha, d, q, s)

    if alpha <= params.line_threshold:
        return alpha
    s_min = max(q, 2.0 + d / alpha)
    candidates = np.linspace(s_min, s_max, 401)[1:]
    values = np.array([_lower_branch(alpha, d, q, s) for s in candidates])
    i = int(np.argmax(values))
    lo = candidates[max(i - 1, 0)] if i > 0 else 0.5 * (s_min + candidates[0])
    hi = candidates[min(i + 1, candidates.size - 1)]
    best = float(values[i])
    if hi > lo:
        refined = minimize_scalar(lambda s: -_lower_branch(alpha, d, q, s), bounds=(lo, hi),
                                  method="bounded", options={"xatol": 1e-12})
        best = max(best, float(-refined.fun))
    if s_min == q:
        # s -> q+ gives the line value d/(q-2)
        best = max(best, params.line_threshold)
    return min(best, alpha)


@lru_cache(maxsize=8)
def _upper_rule(d: int) -> Tuple[np.ndarray, np.ndarray]:
    return quadrature_rule(d, _UPPER_RULE_NODES)


def _h_alpha(eps: float, alpha: float, d: int, q: float) -> float:
    """(α + (d+α)ε²/(d+1)) / (∫|1+εz|^q dν_d)^{2/q}."""
    numerator = alpha + (d + alpha) * eps ** 2 / (d + 1.0)
    if math.isinf(q):
        return numerator / (1.0 + abs(eps)) ** 2
    z, w = _upper_rule(d)
    return numerator / np.dot(w, np.abs(1.0 + eps * z) ** q) ** (2.0 / q)


def _mu_upper(alpha: float, d: int, q: float, opts: Optional[SolverOptions] = None) -> Tuple[float, float]:
    opts = opts or SolverOptions()
    params = _superquadratic(d, q)
    if alpha <= params.line_threshold:
        return alpha, 0.0
    eps_grid = np.linspace(0.0, 1.0, _UPPER_SCAN_POINTS)
    values = np.array([_h_alpha(e, alpha, d, q) for e in eps_grid])
    i = int(np.argmin(values))
    lo, hi = eps_grid[max(i - 1, 0)], eps_grid[min(i + 1, eps_grid.size - 1)]
    best_eps, best = float(eps_grid[i]), float(values[i])
    refined = minimize_scalar(_h_alpha, bounds=(lo, hi), args=(alpha, d, q), method="bounded",
                              options={"xatol": opts.golden_xtol})
    if refined.fun < best:
        best_eps, best = float(refined.x), float(refined.fun)
    return min(best, alpha), best_eps


def mu_upper(alpha: float, d: int, q: float, opts: Optional[SolverOptions] = None) -> float:
    """μ₊(α) = min over ε ∈ [0, 1] of the quotient of 1 + εz."""
    return _mu_upper(alpha, d, q, opts)[0]


def mu_asymptotic(alpha: float, d: int, q: float, opts: Optional[SolverOptions] = None) -> float:
    """Semiclassical asymptote (K_{q,d}/κ_{q,d}) α^{1-ϑ}."""
    params = _superquadratic(d, q)
    K = gns_constant(q, d, opts).constant
    return K / kappa(q, d) * alpha ** (1.0 - params.theta)


def alpha_of_mu(mu_val: float, d: int, q: float, opts: Optional[SolverOptions] = None,
                grading: Optional[float] = None, grid: Optional[JacobiGrid] = None) -> float:
    """Inverse of the increasing map α ↦ μ(α).

    Bisection (Brent) on μ(·) - μ between μ and the α at which the
    Sobolev-interpolation lower bound reaches μ.
    """
    opts = opts or SolverOptions()
    if not mu_val > 0:
        raise DomainError(f"mu must be positive, got {mu_val}")
    params = _superquadratic(d, q)

    if math.isinf(q):
        k = brentq(lambda k: k * math.tanh(math.pi * k) - math.pi * mu_val,
                   0.0, math.pi * mu_val + 1.0, xtol=1e-15, rtol=1e-15)
        return k * k
    if params.is_critical and mu_val >= params.alpha_star:
        raise DomainError(f"mu = {mu_val} is on the critical plateau mu = alpha_* = "
                          f"{params.alpha_star}; alpha(mu) is undefined")
    if mu_val <= params.line_threshold:
        return mu_val

    s = params.q_critical if d >= 3 else 2.0 * q
    th = _theta(s, q)
    upper = (mu_val / (d / (s - 2.0)) ** th) ** (1.0 / (1.0 - th))
    upper = max(upper, mu_val) * 1.01

    state: Dict[str, Optional[ZonalFunction]] = {"warm": None}

    def gap(alpha: float) -> float:
        result = mu(alpha, d, q, opts, grid=grid, grading=grading, warm_start=state["warm"])
        if result.minimizer is not None:
            state["warm"] = result.minimizer
        return result.value - mu_val

    alpha = brentq(gap, mu_val, upper, xtol=1e-12 * mu_val, rtol=1e-12)
    logger.debug("alpha(mu=%g) = %.12g", mu_val, alpha)
    return alpha


def alpha_bounds_d1(mu_val: float) -> Tuple[float, float]:
    """(μ, μ + π²μ²), the bracket of α(μ) on the circle."""
    if not mu_val > 0:
        raise DomainError(f"mu must be positive, got {mu_val}")
    return mu_val, mu_val + math.pi ** 2 * mu_val ** 2


def _ground_state(H: np.ndarray) -> Tuple[float, np.ndarray]:
    values, vectors = eigh(H, subset_by_index=[0, 0])
    y = vectors[:, 0]
    return float(values[0]), (y if y.sum() >= 0 else -y)


def _nu_quotient(grid: JacobiGrid, u: np.ndarray, beta: float, q: float) -> float:
    f = ZonalFunction(grid, u)
    return (dirichlet_form(f) + beta * f.norm(q) ** 2) / f.norm(2) ** 2


def nu(beta: float, d: int, q: float, opts: Optional[SolverOptions] = None,
       grid: Optional[JacobiGrid] = None) -> ConstantResult:
    """Optimal constant ν(β) for 0 < q < 2.

    Minimized by alternating the Hölder-dual potential
    W = ‖u‖_q^{2-q}|u|^{q-2} with the ground state of -Δ + βW; iterates
    stay nonnegative.
    """
    opts = opts or SolverOptions()
    if not beta > 0:
        raise DomainError(f"beta must be positive, got {beta}")
    if not 0 < q < 2:
        raise DomainError(f"nu requires 0 < q < 2, got {q}")
    params = exponents(d, q)
    if q >= 1 and beta <= params.line_threshold:
        return ConstantResult(value=beta, branch=Branch.EXACT_LINE)

    grid = grid or cached_grid(d, opts.grid_size)
    z, sqw = grid.nodes, grid.sqrt_weights
    seeds: List[Tuple[str, np.ndarray]] = [(f"linear:{eps}", 1.0 + eps * z) for eps in opts.seeds]
    if q < 1:
        seeds += [("cap:1", 1.0 + z), ("cap:2", (1.0 + z) ** 2)]
    if beta > 10.0 * params.line_threshold:
        seeds.append(("bump", np.exp(-beta * (1.0 - z))))

    best_value, best_u, best = beta, np.ones(grid.N), {"seed": "constant", "iterations": 0}
    for label, u in seeds:
        value = _nu_quotient(grid, u, beta, q)
        window = deque([value], maxlen=opts.stagnation_window + 1)
        iterations = 0
        for iterations in range(1, opts.max_iterations + 1):
            f = ZonalFunction(grid, u)
            W = f.norm(q) ** (2.0 - q) * np.maximum(np.abs(u), _U2_FLOOR) ** (q - 2.0)
            W = np.minimum(W, _POTENTIAL_CAP)
            _, y = _ground_state(grid.stiffness + beta * np.diag(W))
            u = np.abs(y) / sqw
            value = _nu_quotient(grid, u, beta, q)
            window.append(value)
            if len(window) == window.maxlen and window[0] - value <= opts.stagnation_tol * value:
                break
        logger.debug("nu(beta=%g) seed %s: %.15g after %d iterations", beta, label, value, iterations)
        if value < best_value:
            best_value, best_u, best = value, u, {"seed": label, "iterations": iterations}

    minimizer = ZonalFunction(grid, best_u / ZonalFunction(grid, best_u).norm(2))
    diagnostics = dict(best, grid_size=grid.N)
    return ConstantResult(value=min(best_value, beta), branch=Branch.MINIMIZED,
                          minimizer=minimizer, diagnostics=diagnostics)


def nu_asymptotic(beta: float, d: int, q: float, opts: Optional[SolverOptions] = None) -> float:
    """K*_{q,d} (κ_{q,d} β)^δ."""
    params = exponents(d, q)
    if params.superquadratic:
        raise DomainError(f"nu_asymptotic requires q < 2, got {q}")
    K_star = dual_gns_constant(q, d, opts).constant
    return K_star * (kappa(q, d) * beta) ** params.delta


def _check_logsob(d: int, p: float) -> None:
    if not p > max(1.0, d / 2.0):
        raise DomainError(f"xi requires p > max(1, d/2) = {max(1.0, d / 2.0)}, got {p}")


def _entropy_functional(grid: JacobiGrid, u: np.ndarray, alpha: float, p: float) -> Tuple[float, float]:
    """(J, D) with J = p log(1 + D/α) - ∫u² log u² for ‖u‖₂ = 1."""
    f = ZonalFunction(grid, u)
    D = dirichlet_form(f)
    u2 = u ** 2
    entropy = float(np.dot(grid.weights, xlogy(u2, u2)))
    return p * math.log1p(D / alpha) - entropy, D


def xi(alpha: float, d: int, p: float, opts: Optional[SolverOptions] = None,
       grid: Optional[JacobiGrid] = None) -> ConstantResult:
    """Logarithmic Sobolev constant ξ(α) = α exp(J_min / p).

    J is minimized by majorize-minimize steps: W = -log u² and u ← ground
    state of -Δ + ((α + D)/p) W, which never increase J.
    """
    opts = opts or SolverOptions()
    if not alpha > 0:
        raise DomainError(f"alpha must be positive, got {alpha}")
    _check_logsob(d, p)
    grid = grid or cached_grid(d, opts.grid_size)
    z, sqw = grid.nodes, grid.sqrt_weights

    t = 2.0 * p / d - 1.0
    s2 = d * t / (4.0 * alpha)
    seeds: List[Tuple[str, np.ndarray]] = [("gaussian", np.exp(-(1.0 - z) / (2.0 * s2)))]
    seeds += [(f"linear:{eps}", 1.0 + eps * z) for eps in opts.seeds]

    best_J, best_u, best = 0.0, np.ones(grid.N), {"seed": "constant", "iterations": 0}
    for label, u in seeds:
        u = u / ZonalFunction(grid, u).norm(2)
        J, D = _entropy_functional(grid, u, alpha, p)
        window = deque([J], maxlen=opts.stagnation_window + 1)
        iterations = 0
        for iterations in range(1, opts.max_iterations + 1):
            W = -np.log(np.maximum(u ** 2, _U2_FLOOR))
            _, y = _ground_state(grid.stiffness + ((alpha + D) / p) * np.diag(W))
            u = np.abs(y) / sqw
            u = u / ZonalFunction(grid, u).norm(2)
            J, D = _entropy_functional(grid, u, alpha, p)
            window.append(J)
            if len(window) == window.maxlen and window[0] - J <= opts.stagnation_tol * max(abs(J), 1.0):
                break
        logger.debug("xi(alpha=%g) seed %s: J=%.15g after %d iterations", alpha, label, J, iterations)
        if J < best_J:
            best_J, best_u, best = J, u, {"seed": label, "iterations": iterations}

    value = alpha * math.exp(best_J / p)
    diagnostics = dict(best, J=best_J, grid_size=grid.N)
    return ConstantResult(value=min(value, alpha), branch=Branch.MINIMIZED,
                          minimizer=ZonalFunction(grid, best_u), diagnostics=diagnostics)


def xi_asymptotic(alpha: float, d: int, p: float) -> float:
    """Gaussian-scaling asymptote of ξ(α) for large α."""
    _check_logsob(d, p)
    t = 2.0 * p / d - 1.0
    bracket = (p * math.log((t + 1.0) / t)
               + 0.5 * d * math.log(math.pi * math.e * d * t / (2.0 * alpha))
               - math.log(sphere_surface(d)))
    return alpha * math.exp(bracket / p)


def linearized_logsob_deficit(u: ZonalFunction, alpha: float, p: float, xi_value: float) -> float:
    """‖∇u‖² - (α/p)∫u² log(u²/‖u‖²) - α log(ξ/α)‖u‖², nonnegative."""
    norm2 = u.norm(2) ** 2
    u2 = u.values ** 2
    entropy = float(np.dot(u.grid.weights, xlogy(u2, u2 / norm2)))
    return dirichlet_form(u) - alpha / p * entropy - alpha * math.log(xi_value / alpha) * norm2


def _evaluate_points(fn: Callable[[float], Dict[str, Any]], parameters: Sequence[float],
                     jobs: int) -> List[Dict[str, Any]]:
    """Evaluate ``fn`` on every parameter, recording failures per point in order."""
    def guarded(x: float) -> Dict[str, Any]:
        try:
            row = fn(x)
            row.setdefault("status", "ok")
            return row
        except SphereBoundsError as exc:
            logger.warning("point %g failed: %s", x, exc)
            return {"status": f"error: {exc}"}

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(guarded, parameters))
    return [guarded(x) for x in parameters]


def _column(rows: List[Dict[str, Any]], key: str) -> np.ndarray:
    return np.array([row.get(key, math.nan) for row in rows], dtype=float)


def mu_curve(alphas: Sequence[float], d: int, q: float, opts: Optional[SolverOptions] = None,
             grading: Optional[float] = None, with_asymptote: bool = True) -> CurveSample:
    """μ, μ₋, μ₊ and the asymptote along ``alphas``."""
    opts = opts or SolverOptions()
    params = _superquadratic(d, q)

    def point(alpha: float) -> Dict[str, Any]:
        result = mu(alpha, d, q, opts, grading=grading)
        row = {
            "value": result.value,
            "branch": result.branch.value,
            "lower": mu_lower(alpha, d, q),
            "upper": mu_upper(alpha, d, q, opts) if not params.is_critical else min(alpha, params.alpha_star),
        }
        if with_asymptote:
            row["asymptote"] = mu_asymptotic(alpha, d, q, opts)
        return row

    rows = _evaluate_points(point, alphas, opts.jobs)
    return CurveSample(
        family="mu",
        parameter=np.asarray(alphas, dtype=float),
        value=_column(rows, "value"),
        lower=_column(rows, "lower"),
        upper=_column(rows, "upper"),
        asymptote=_column(rows, "asymptote") if with_asymptote else None,
        branches=[row.get("branch", "") for row in rows],
        status=[row["status"] for row in rows],
        metadata={"d": d, "q": q, "grid_size": opts.grid_size, "grading": grading},
    )


def ratio_curve(alphas: Sequence[float], d: int, q: float, opts: Optional[SolverOptions] = None,
                grading: Optional[float] = None) -> CurveSample:
    """μ(α)/μ_asymp(α) along ``alphas``."""
    opts = opts or SolverOptions()
    _superquadratic(d, q)

    def point(alpha: float) -> Dict[str, Any]:
        result = mu(alpha, d, q, opts, grading=grading)
        return {"value": result.value / mu_asymptotic(alpha, d, q, opts), "branch": result.branch.value}

    rows = _evaluate_points(point, alphas, opts.jobs)
    return CurveSample(family="ratio", parameter=np.asarray(alphas, dtype=float),
                       value=_column(rows, "value"), branches=[r.get("branch", "") for r in rows],
                       status=[r["status"] for r in rows],
                       metadata={"d": d, "q": q, "grid_size": opts.grid_size, "grading": grading})


def nu_curve(betas: Sequence[float], d: int, q: float, opts: Optional[SolverOptions] = None) -> CurveSample:
    """ν(β) with the trivial upper bound β and the asymptote."""
    opts = opts or SolverOptions()

    def point(beta: float) -> Dict[str, Any]:
        result = nu(beta, d, q, opts)
        return {"value": result.value, "branch": result.branch.value, "upper": beta,
                "asymptote": nu_asymptotic(beta, d, q, opts)}

    rows = _evaluate_points(point, betas, opts.jobs)
    return CurveSample(family="nu", parameter=np.asarray(betas, dtype=float),
                       value=_column(rows, "value"), upper=_column(rows, "upper"),
                       asymptote=_column(rows, "asymptote"),
                       branches=[r.get("branch", "") for r in rows],
                       status=[r["status"] for r in rows],
                       metadata={"d": d, "q": q, "grid_size": opts.grid_size})


def xi_curve(alphas: Sequence[float], d: int, p: float, opts: Optional[SolverOptions] = None) -> CurveSample:
    """ξ(α) with the bound α and the Gaussian asymptote.

    ``metadata["departure"]`` is the first sampled α with ξ(α) < α - 1e-9,
    or None when ξ stays on the line.
    """
    opts = opts or SolverOptions()

    def point(alpha: float) -> Dict[str, Any]:
        result = xi(alpha, d, p, opts)
        return {"value": result.value, "branch": result.branch.value, "upper": alpha,
                "asymptote": xi_asymptotic(alpha, d, p)}

    rows = _evaluate_points(point, alphas, opts.jobs)
    parameter = np.asarray(alphas, dtype=float)
    values = _column(rows, "value")
    below = np.nonzero(values < parameter - 1e-9)[0]
    departure = float(parameter[below[0]]) if below.size else None
    return CurveSample(family="xi", parameter=parameter, value=values,
                       upper=_column(rows, "upper"), asymptote=_column(rows, "asymptote"),
                       branches=[r.get("branch", "") for r in rows],
                       status=[r["status"] for r in rows],
                       metadata={"d": d, "p": p, "grid_size": opts.grid_size, "departure": departure})
