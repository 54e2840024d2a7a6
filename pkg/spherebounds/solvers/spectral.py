"""
Ground-state energies of -Δ ∓ V on S^d and the sharp bounds they satisfy.

For V >= 0 with ‖V‖_p = μ (dσ norms), |λ₁(-Δ-V)| <= α(μ), the inverse of
μ(α). For W > 0 with β = ‖W⁻¹‖_p⁻¹, λ₁(-Δ+W) >= ν(β). The logarithmic
Sobolev constant ξ(α) controls exp(-λ₁(-Δ+W)/α). Each report computes λ₁
on a JacobiGrid, evaluates the bound and returns the slack.
"""
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Optional, Tuple, Union

import numpy as np
from scipy.interpolate import BarycentricInterpolator
from scipy.linalg import eigh
from scipy.special import eval_jacobi, logsumexp

from ..core.constants import ProblemParams, critical_exponent, exponents, sphere_surface
from ..core.errors import DataError, DomainError
from ..core.options import PotentialKind, Sign, SolverOptions
from ..core.ultraspherical import JacobiGrid, ZonalFunction, assemble_schrodinger, dirichlet_form
from .euclidean import klt_constants
from .sphere_constants import alpha_of_mu, cached_grid, mu, nu, xi

logger = logging.getLogger(__name__)

_LOG_FLOOR = 1e-300


@dataclass(frozen=True)
class Potential:
    """A zonal potential, used as -Δ - V or -Δ + W."""
    kind: PotentialKind
    function: ZonalFunction
    parameter: Optional[float] = None
    label: str = ""

    @property
    def grid(self) -> JacobiGrid:
        return self.function.grid

    @property
    def values(self) -> np.ndarray:
        return self.function.values

    @classmethod
    def constant(cls, grid: JacobiGrid, c: float) -> "Potential":
        return cls(PotentialKind.CONSTANT, ZonalFunction.constant(grid, c), parameter=float(c),
                   label=f"const:{c}")

    @classmethod
    def nodal(cls, grid: JacobiGrid, values, label: str = "nodal") -> "Potential":
        return cls(PotentialKind.NODAL, ZonalFunction(grid, values), label=label)

    @classmethod
    def from_csv(cls, path: Union[str, Path], grid: JacobiGrid) -> "Potential":
        """Read a two-column (z, value) table with a header row onto ``grid``.

        Tables sampled at the grid nodes are taken as is; anything else is
        interpolated barycentrically.
        """
        path = Path(path)
        try:
            with path.open(encoding="utf-8") as handle:
                header = handle.readline()
                table = np.loadtxt(handle, delimiter=",", ndmin=2)
        except (OSError, ValueError) as exc:
            raise DataError(f"Cannot read potential table {path}: {exc}") from exc
        if not header.strip() or _is_numeric_row(header):
            raise DataError(f"{path} must start with a header row")
        if table.shape[1] != 2 or table.shape[0] < 2:
            raise DataError(f"{path} must hold at least two rows of (z, value)")
        z, values = table[:, 0], table[:, 1]
        if np.any(np.abs(z) > 1.0):
            raise DataError(f"{path}: latitudes must lie in [-1, 1]")
        if z.size == grid.N and np.allclose(np.sort(z), np.sort(grid.nodes), rtol=0, atol=1e-12):
            order = np.argsort(z)
            nodal = np.empty(grid.N)
            nodal[np.argsort(grid.nodes)] = values[order]
        else:
            nodal = BarycentricInterpolator(z, values)(grid.nodes)
        logger.debug("Loaded %d samples from %s", z.size, path)
        return cls.nodal(grid, nodal, label=f"file:{path.name}")

    def positive_part_norm(self, p: float) -> float:
        """‖V₊‖_p in dσ."""
        return ZonalFunction(self.grid, np.maximum(self.values, 0.0)).norm(p)

    def inverse_norm(self, p: float) -> float:
        """β = ‖W⁻¹‖_p⁻¹ in dσ."""
        self.require_positive()
        return float(np.dot(self.grid.weights, self.values ** (-p)) ** (-1.0 / p))

    def omega_integral(self, power: float) -> float:
        """∫ V₊^power dω = |S^d| ∫ V₊^power dσ."""
        positive = np.maximum(self.values, 0.0)
        if power < 0:
            self.require_positive()
            positive = self.values
        return sphere_surface(self.grid.d) * float(np.dot(self.grid.weights, positive ** power))

    def require_positive(self) -> None:
        if not np.all(self.values > 0):
            raise DomainError(f"potential {self.label or self.kind.value} must be positive at every node")


def _is_numeric_row(line: str) -> bool:
    try:
        [float(cell) for cell in line.split(",")]
    except ValueError:
        return False
    return True


@dataclass
class EigenReport:
    """λ₁ against one sharp bound.

    ``slack`` is positive when the inequality holds; ``extras`` carries the
    companion dσ/dω forms and semiclassical ratios.
    """
    inequality: str
    lambda1: float
    bound: float
    slack: float
    norm: float
    tol: float = 1e-7
    extras: Dict[str, Any] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.slack >= -self.tol

    def to_dict(self) -> Dict[str, Any]:
        data = {"inequality": self.inequality, "lambda1": self.lambda1, "bound": self.bound,
                "slack": self.slack, "norm": self.norm, "passed": self.passed}
        data.update(self.extras)
        return data


def ground_state(pot: Potential, sign: Union[Sign, str]) -> Tuple[float, ZonalFunction]:
    """Lowest eigenpair of the assembled pencil, eigenfunction normalized in L²(dσ)."""
    pencil = assemble_schrodinger(pot.function, Sign.parse(sign))
    values, vectors = eigh(pencil.standard_form(), subset_by_index=[0, 0])
    y = vectors[:, 0]
    if y.sum() < 0:
        y = -y
    return float(values[0]), ZonalFunction(pot.grid, pencil.nodal_values(y))


def lambda1(pot: Potential, sign: Union[Sign, str] = Sign.MINUS,
            grid: Optional[JacobiGrid] = None) -> float:
    """λ₁(-Δ - V) for ``sign=minus``, λ₁(-Δ + W) for ``sign=plus`` (W > 0)."""
    sign = Sign.parse(sign)
    if grid is not None and not grid.compatible_with(pot.grid):
        raise DataError(f"Potential lives on {pot.grid!r}, operator requested on {grid!r}")
    if sign is Sign.PLUS:
        pot.require_positive()
    return ground_state(pot, sign)[0]


def rayleigh_quotient(pot: Potential, sign: Union[Sign, str], u: ZonalFunction) -> float:
    """(‖∇u‖² ∓ ∫V u²)/‖u‖² with the pencil's quadrature."""
    pencil = assemble_schrodinger(pot.function, Sign.parse(sign))
    return float(u.values @ pencil.A @ u.values / (u.values @ pencil.M @ u.values))


def _subcritical(d: int, q: float) -> ProblemParams:
    params = exponents(d, q)
    if not params.superquadratic or params.is_critical or math.isinf(q):
        raise DomainError(f"equality potentials need 2 < q < 2*, got q = {q} for d = {d}")
    return params


def equality_potential(mu_val: float, d: int, q: float, opts: Optional[SolverOptions] = None,
                       grading: Optional[float] = None) -> Potential:
    """V = μ u^{q-2} from the minimizer u of μ(α) at α = α(μ), with ‖u‖_q = 1.

    Then ‖V‖_p = μ and u is the ground state of -Δ - V with eigenvalue -α.
    On the exact line the minimizer is constant and V = μ.
    """
    opts = opts or SolverOptions()
    if not mu_val > 0:
        raise DomainError(f"mu must be positive, got {mu_val}")
    params = _subcritical(d, q)
    grid = cached_grid(d, opts.grid_size, grading)
    if mu_val <= params.line_threshold:
        pot = Potential.constant(grid, mu_val)
        return Potential(PotentialKind.EQUALITY, pot.function, parameter=mu_val, label=f"equality:{mu_val}")

    alpha = alpha_of_mu(mu_val, d, q, opts, grading=grading)
    result = mu(alpha, d, q, opts, grading=grading)
    u = result.minimizer
    u = u.scaled(1.0 / u.norm(q))
    V = u.with_values(mu_val * np.abs(u.values) ** (q - 2.0))
    achieved = V.norm(params.p)
    logger.info("equality potential mu=%g: alpha=%.12g, |V|_p=%.15g", mu_val, alpha, achieved)
    return Potential(PotentialKind.EQUALITY, V, parameter=mu_val, label=f"equality:{mu_val}")


def dual_equality_potential(beta: float, d: int, q: float, opts: Optional[SolverOptions] = None) -> Potential:
    """W = β ‖u‖_q^{2-q} u^{q-2} from the minimizer u of ν(β).

    Then ‖W⁻¹‖_p⁻¹ = β and λ₁(-Δ+W) = ν(β) up to the solver tolerance.
    """
    opts = opts or SolverOptions()
    if not 0 < q < 2:
        raise DomainError(f"dual equality potentials need 0 < q < 2, got {q}")
    result = nu(beta, d, q, opts)
    grid = result.minimizer.grid if result.minimizer is not None else cached_grid(d, opts.grid_size)
    if result.minimizer is None:
        values = np.full(grid.N, float(beta))
    else:
        u = result.minimizer
        if not np.all(u.values > 0):
            raise DomainError("the nu minimizer vanishes at a node; W would be infinite")
        values = beta * u.norm(q) ** (2.0 - q) * u.values ** (q - 2.0)
    return Potential(PotentialKind.EQUALITY, ZonalFunction(grid, values), parameter=beta,
                     label=f"dual_equality:{beta}")


def _check_klt_exponent(p: float, d: int) -> bool:
    """Admissible p for the negative-potential bound; True on the critical clause p = d/2."""
    if d >= 3 and math.isclose(p, d / 2.0, rel_tol=1e-12):
        return True
    if d == 1 and p == 1:
        return False
    if not p > max(1.0, d / 2.0):
        raise DomainError(f"p must exceed max(1, d/2) = {max(1.0, d / 2.0)}, got {p}")
    return False


def klt_report(V: Potential, p: float, d: int, opts: Optional[SolverOptions] = None,
               tol: float = 1e-7) -> EigenReport:
    """|λ₁(-Δ-V)| against α(‖V₊‖_p).

    When ‖V₊‖_p <= d(p-1)/2 the bound is the exact line and the report also
    carries |λ₁|^p against ∫V₊^p in dσ and dω. Above it, the ratio
    |λ₁|^γ/(L¹_{γ,d}∫V₊^{γ+d/2}dω) with γ = p - d/2 is attached.
    """
    opts = opts or SolverOptions()
    if V.grid.d != d:
        raise DataError(f"potential lives on S^{V.grid.d}, report requested for d = {d}")
    critical = _check_klt_exponent(p, d)
    params = ProblemParams.from_p(d, p)
    q = critical_exponent(d) if critical else params.q
    norm = V.positive_part_norm(p)
    lam = lambda1(V, Sign.MINUS)
    extras: Dict[str, Any] = {"p": p, "d": d}

    if norm == 0.0:
        bound = 0.0
    elif critical:
        if norm > params.alpha_star:
            raise DomainError(f"p = d/2: the bound is only known for ‖V‖_p <= alpha_* = {params.alpha_star}")
        bound = norm
    else:
        bound = alpha_of_mu(norm, d, q, opts, grid=V.grid)

    energy = max(-lam, 0.0)
    line = d * (p - 1.0) / 2.0 if not critical else params.alpha_star
    if norm <= line:
        sigma_integral = float(np.dot(V.grid.weights, np.maximum(V.values, 0.0) ** p))
        extras["small_norm_sigma_slack"] = sigma_integral - energy ** p
        extras["small_norm_omega_slack"] = V.omega_integral(p) - energy ** p
    elif p > d / 2.0:
        gamma = p - d / 2.0
        L1 = klt_constants(gamma, d, negative=True, opts=opts)
        extras["semiclassical_ratio"] = energy ** gamma / (L1 * V.omega_integral(p))
        extras["L1"] = L1

    report = EigenReport(inequality="klt", lambda1=lam, bound=bound, slack=bound + lam,
                         norm=norm, tol=tol, extras=extras)
    logger.debug("klt: lambda1=%.12g bound=%.12g slack=%.3g", lam, bound, report.slack)
    return report


def dual_klt_report(W: Potential, p: float, d: int, opts: Optional[SolverOptions] = None,
                    tol: float = 1e-7) -> EigenReport:
    """λ₁(-Δ+W) against ν(β), β = ‖W⁻¹‖_p⁻¹.

    For p >= 1 and β <= d(p+1)/2 the bound is β itself and λ₁^{-p} <= ∫W^{-p}
    is reported; otherwise the ratio λ₁^{-γ}/(L¹_{-γ,d}∫W^{-p}dω) with
    γ = p + d/2.
    """
    opts = opts or SolverOptions()
    if not p > 0:
        raise DomainError(f"p must be positive, got {p}")
    if W.grid.d != d:
        raise DataError(f"potential lives on S^{W.grid.d}, report requested for d = {d}")
    W.require_positive()
    q = 2.0 * p / (p + 1.0)
    beta = W.inverse_norm(p)
    lam = lambda1(W, Sign.PLUS)
    bound = nu(beta, d, q, opts, grid=W.grid).value
    extras: Dict[str, Any] = {"p": p, "d": d, "beta": beta}

    if p >= 1 and beta <= d * (p + 1.0) / 2.0:
        sigma_integral = float(np.dot(W.grid.weights, W.values ** (-p)))
        extras["small_beta_sigma_slack"] = sigma_integral - lam ** (-p)
        extras["small_beta_omega_slack"] = W.omega_integral(-p) - lam ** (-p)
    else:
        gamma = p + d / 2.0
        L1 = klt_constants(gamma, d, negative=False, opts=opts)
        extras["semiclassical_ratio"] = lam ** (-gamma) / (L1 * W.omega_integral(-p))
        extras["L1"] = L1

    return EigenReport(inequality="dual_klt", lambda1=lam, bound=bound, slack=lam - bound,
                       norm=beta, tol=tol, extras=extras)


def logsob_report(W: Potential, alpha: float, p: float, d: int, opts: Optional[SolverOptions] = None,
                  tol: float = 1e-7, xi_value: Optional[float] = None) -> EigenReport:
    """exp(-λ₁(-Δ+W)/α) against (α/ξ(α)) (∫exp(-pW/α) dσ)^{1/p}.

    W may change sign. The slack is the difference of the logarithms.
    """
    opts = opts or SolverOptions()
    if not alpha > 0:
        raise DomainError(f"alpha must be positive, got {alpha}")
    if W.grid.d != d:
        raise DataError(f"potential lives on S^{W.grid.d}, report requested for d = {d}")
    if xi_value is None:
        xi_value = xi(alpha, d, p, opts, grid=W.grid).value
    lam = ground_state(W, Sign.PLUS)[0]
    log_mean = float(logsumexp(-p * W.values / alpha, b=W.grid.weights))
    log_bound = math.log(alpha / xi_value) + log_mean / p
    slack = log_bound + lam / alpha
    return EigenReport(inequality="logsob", lambda1=lam, bound=math.exp(log_bound), slack=slack,
                       norm=math.exp(log_mean / p), tol=tol,
                       extras={"p": p, "d": d, "xi": xi_value, "lhs": math.exp(-lam / alpha)})


def optimal_logsob_potential(u: ZonalFunction, alpha: float, p: float) -> Potential:
    """W = -(α/p) log(u²/‖u‖²), for which ∫exp(-pW/α) dσ = 1."""
    u2 = u.values ** 2 / u.norm(2) ** 2
    values = -(alpha / p) * np.log(np.maximum(u2, _LOG_FLOOR))
    return Potential(PotentialKind.EQUALITY, u.with_values(values), parameter=alpha,
                     label=f"logsob_equality:{alpha}")


def logsob_equality_gap(alpha: float, d: int, p: float, opts: Optional[SolverOptions] = None) -> EigenReport:
    """Report for the potential built from the ξ-minimizer.

    ``extras["relative_gap"]`` is the achieved gap. It vanishes while ξ(α) = α;
    beyond that the minimizer carries Dirichlet energy D > 0 and the gap is
    bounded by ``extras["trial_gap"]`` = D/α - log(1 + D/α).
    """
    opts = opts or SolverOptions()
    result = xi(alpha, d, p, opts)
    u = result.minimizer
    W = optimal_logsob_potential(u, alpha, p)
    report = logsob_report(W, alpha, p, d, opts, xi_value=result.value)
    energy = dirichlet_form(u) / u.norm(2) ** 2
    report.extras["relative_gap"] = abs(report.slack)
    report.extras["dirichlet"] = energy
    report.extras["trial_gap"] = energy / alpha - math.log1p(energy / alpha)
    return report


def random_potential(grid: JacobiGrid, seed: int, degree: int = 4, positive: bool = False,
                     amplitude: Optional[Tuple[float, float]] = None) -> Potential:
    """Seeded low-degree Jacobi expansion.

    Nonnegative potentials are clipped at 0; positive ones are shifted above
    a floor of 5% of their range.
    """
    rng = np.random.default_rng(seed)
    a = grid.d / 2.0 - 1.0
    coefficients = rng.uniform(-1.0, 1.0, degree + 1) / (1.0 + np.arange(degree + 1))
    shape = sum(c * eval_jacobi(k, a, a, grid.nodes) for k, c in enumerate(coefficients))
    shape = shape / max(np.max(np.abs(shape)), 1e-12)
    low, high = amplitude or (0.5, 20.0)
    scale = rng.uniform(low, high)
    if positive:
        span = np.ptp(shape)
        values = scale * (shape - shape.min() + 0.05 * max(span, 1.0))
    else:
        values = scale * np.clip(shape + rng.uniform(0.0, 1.0), 0.0, None)
    return Potential(PotentialKind.NODAL, ZonalFunction(grid, values), parameter=float(seed),
                     label=f"random:{seed}")


def obstruction_ratio(n: float, d: int, gamma: float, grid: Optional[JacobiGrid] = None) -> float:
    """|λ₁|^γ / ∫V_n^{γ+d/2} dω for the constant V_n = 1/n, which grows like n^{d/2}."""
    if not n > 0:
        raise DomainError(f"n must be positive, got {n}")
    grid = grid or cached_grid(d, 16)
    V = Potential.constant(grid, 1.0 / n)
    lam = lambda1(V, Sign.MINUS)
    return abs(lam) ** gamma / V.omega_integral(gamma + d / 2.0)
