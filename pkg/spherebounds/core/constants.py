"""
Closed-form geometric constants and exponent algebra.

Conventions: dσ is the uniform probability measure on S^d and dω the surface
measure, so dω = |S^d| dσ. The exponent q = ∞ is represented by ``math.inf``
and is only meaningful for d = 1.
"""
import logging
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.special import gamma as gamma_fn
from scipy.special import gammaln

from .errors import BranchError, DomainError, SolverError

logger = logging.getLogger(__name__)

# relative agreement required between the two closed forms of S_d
_SOBOLEV_CROSSCHECK_TOL = 1e-10


def _check_dimension(d, minimum: int = 1) -> int:
    if isinstance(d, bool) or int(d) != d:
        raise DomainError(f"Dimension must be an integer, got {d!r}")
    d = int(d)
    if d < minimum:
        raise DomainError(f"Dimension must be >= {minimum}, got {d}")
    return d


def sphere_surface(d: int) -> float:
    """Area |S^d| = 2 π^{(d+1)/2} / Γ((d+1)/2) of the unit d-sphere."""
    d = _check_dimension(d)
    return float(2.0 * math.pi ** ((d + 1) / 2) / gamma_fn((d + 1) / 2))


def jacobi_normalization(d: int) -> float:
    """Z_d = √π Γ(d/2) / Γ((d+1)/2), the mass of (1 - z²)^{d/2-1} dz on [-1, 1]."""
    d = _check_dimension(d)
    return float(math.exp(0.5 * math.log(math.pi) + gammaln(d / 2) - gammaln((d + 1) / 2)))


def critical_exponent(d: int) -> float:
    """Sobolev exponent 2* = 2d/(d-2), infinite for d <= 2."""
    d = _check_dimension(d)
    return 2.0 * d / (d - 2) if d >= 3 else math.inf


def alpha_star(d: int) -> float:
    """Threshold α_* = d(d-2)/4, zero for d <= 2."""
    d = _check_dimension(d)
    return d * (d - 2) / 4.0 if d >= 3 else 0.0


def kappa(q: float, d: int) -> float:
    """κ_{q,d} = |S^d|^{1-2/q}; q = ∞ gives |S^d| and requires d = 1."""
    d = _check_dimension(d)
    if not q > 0:
        raise DomainError(f"kappa requires q > 0, got {q}")
    if math.isinf(q):
        if d != 1:
            raise DomainError("q = infinity is only admissible for d = 1")
        return sphere_surface(d)
    return sphere_surface(d) ** (1.0 - 2.0 / q)


def _sobolev_from_surface(d: int) -> float:
    return 4.0 / (d * (d - 2) * sphere_surface(d) ** (2.0 / d))


def _sobolev_from_gamma(d: int) -> float:
    log_ratio = gammaln(d) - gammaln(d / 2)
    return math.exp(2.0 * log_ratio / d) / (math.pi * d * (d - 2))


def sobolev_constant(d: int) -> float:
    """Optimal S_d in ‖v‖²_{2*} <= S_d ‖∇v‖² on R^d, d >= 3.

    Evaluated from the Γ-function closed form and checked against the
    |S^d|-based form.
    """
    d = _check_dimension(d)
    if d < 3:
        raise DomainError(f"Sobolev constant requires d >= 3 (2* is infinite for d = {d})")
    value = _sobolev_from_gamma(d)
    other = _sobolev_from_surface(d)
    if abs(value - other) > _SOBOLEV_CROSSCHECK_TOL * value:
        raise SolverError("closed forms of the Sobolev constant disagree",
                          {"gamma_form": value, "surface_form": other, "d": d})
    return value


def duplication_residual(x: float) -> float:
    """Relative residual of Γ(x)Γ(x+1/2) = 2^{1-2x} √π Γ(2x)."""
    lhs = gamma_fn(x) * gamma_fn(x + 0.5)
    rhs = 2.0 ** (1.0 - 2.0 * x) * math.sqrt(math.pi) * gamma_fn(2.0 * x)
    return float(abs(lhs - rhs) / abs(rhs))


@dataclass(frozen=True)
class ProblemParams:
    """Dimension, exponent and every exponent derived from them.

    For q > 2: p = q/(q-2), γ = p - d/2, ϑ = d(q-2)/(2q).
    For q < 2: p = q/(2-q), γ = p + d/2, δ = 2q/(2d - q(d-2)).
    """
    d: int
    q: float
    p: float
    gamma: float
    theta: Optional[float]
    delta: Optional[float]
    alpha_star: float
    q_critical: float

    @property
    def superquadratic(self) -> bool:
        return self.q > 2

    @property
    def is_critical(self) -> bool:
        return self.d >= 3 and self.q == self.q_critical

    @property
    def line_threshold(self) -> float:
        """End of the exact line: d/(q-2) for q > 2, d/(2-q) for q < 2."""
        if self.superquadratic:
            return 0.0 if math.isinf(self.q) else self.d / (self.q - 2.0)
        return self.d / (2.0 - self.q)

    @classmethod
    def from_p(cls, d: int, p: float, superquadratic: bool = True) -> "ProblemParams":
        """Recover the exponent q from p: q = 2p/(p-1) or q = 2p/(p+1)."""
        if not p > 0:
            raise DomainError(f"p must be positive, got {p}")
        if superquadratic:
            if p < 1:
                raise DomainError(f"p must be >= 1 for q > 2, got {p}")
            q = math.inf if p == 1 else 2.0 * p / (p - 1.0)
        else:
            q = 2.0 * p / (p + 1.0)
        return exponents(d, q)

    @classmethod
    def from_gamma(cls, d: int, gamma: float, negative_potential: bool = True) -> "ProblemParams":
        """Exponents of the Lieb-Thirring problem with moment γ.

        Negative potentials use p = γ + d/2, positive ones p = γ - d/2.
        """
        d = _check_dimension(d)
        p = gamma + d / 2.0 if negative_potential else gamma - d / 2.0
        return cls.from_p(d, p, superquadratic=negative_potential)


def exponents(d: int, q: float) -> ProblemParams:
    """Populate ProblemParams for (d, q), choosing the branch by the sign of q - 2."""
    d = _check_dimension(d)
    if not q > 0:
        raise DomainError(f"Exponent q must be positive, got {q}")
    if q == 2:
        raise BranchError("q = 2 has no (p, gamma) branch; use the log-Sobolev constant xi")
    q_crit = critical_exponent(d)
    a_star = alpha_star(d)
    q = float(q)

    if q > 2:
        if math.isinf(q):
            if d != 1:
                raise DomainError("q = infinity is only admissible for d = 1")
            p, theta = 1.0, 0.5
        else:
            if d >= 3 and q > q_crit * (1.0 + 1e-14):
                raise DomainError(f"q = {q} exceeds the critical exponent 2* = {q_crit} for d = {d}")
            p = q / (q - 2.0)
            theta = d * (q - 2.0) / (2.0 * q)
        return ProblemParams(d=d, q=q, p=p, gamma=p - d / 2.0, theta=theta, delta=None,
                             alpha_star=a_star, q_critical=q_crit)

    p = q / (2.0 - q)
    delta = 2.0 * q / (2.0 * d - q * (d - 2.0))
    return ProblemParams(d=d, q=q, p=p, gamma=p + d / 2.0, theta=None, delta=delta,
                         alpha_star=a_star, q_critical=q_crit)


@dataclass(frozen=True)
class GeometryConstants:
    """|S^d|, κ_{q,d}, Z_d and (for d >= 3) S_d."""
    d: int
    q: float
    sphere_surface: float
    kappa: float
    Z_d: float
    sobolev: Optional[float] = None

    @classmethod
    def for_problem(cls, d: int, q: float) -> "GeometryConstants":
        d = _check_dimension(d)
        return cls(
            d=d,
            q=q,
            sphere_surface=sphere_surface(d),
            kappa=kappa(q, d),
            Z_d=jacobi_normalization(d),
            sobolev=sobolev_constant(d) if d >= 3 else None,
        )


def sobolev_identity_residual(d: int) -> float:
    """|1 - α_* κ_{2*,d} S_d|, which vanishes by stereographic projection."""
    d = _check_dimension(d, minimum=3)
    return abs(1.0 - alpha_star(d) * kappa(critical_exponent(d), d) * sobolev_constant(d))


def as_float_array(values) -> np.ndarray:
    """Convert to a float64 array, rejecting NaNs."""
    from .errors import DataError

    array = np.asarray(values, dtype=float)
    if np.isnan(array).any():
        raise DataError("NaN encountered in numerical data")
    return array
