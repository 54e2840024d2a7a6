"""
Stereographic projection between S^d and R^d.

The South Pole z = -1 maps to the origin and the equator to the unit
sphere; the North Pole z = 1 has no image. A radial function v on R^d and
the zonal function u(z) = (1 - z)^{-(d-2)/2} v(r(z)) are related by

    ∫|∇u|² dω + α ∫u² dω = ∫|∇v|² dx + (α - α_*) ∫v² (2/(1+r²))² dx
    ∫|u|^q dω = ∫|v|^q (2/(1+r²))^{d-(d-2)q/2} dx.
"""
import logging
import math
from dataclasses import dataclass
from typing import Callable, Dict, Tuple

import numpy as np
from scipy.integrate import quad
from scipy.special import beta as beta_fn

from ..core.constants import _check_dimension, alpha_star, critical_exponent, sphere_surface
from ..core.errors import DataError, DomainError, PoleError
from ..core.options import Direction
from ..core.ultraspherical import quadrature_rule
from .euclidean import radial_measure

logger = logging.getLogger(__name__)

_QUAD_OPTS = dict(epsabs=0.0, epsrel=1e-12, limit=400)
_SPHERE_NODES = 512

ArrayFn = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class SpherePoint:
    """A point (ρφ, z) of S^d with ρ = √(1 - z²) and φ ∈ S^{d-1}."""
    z: float
    direction: Tuple[float, ...]

    def __post_init__(self):
        if not -1.0 <= self.z <= 1.0:
            raise DomainError(f"z must lie in [-1, 1], got {self.z}")

    @property
    def rho(self) -> float:
        return math.sqrt(max(0.0, 1.0 - self.z * self.z))

    def embedding(self) -> np.ndarray:
        """Coordinates in R^{d+1}."""
        return np.append(self.rho * np.asarray(self.direction, dtype=float), self.z)


@dataclass(frozen=True)
class PlanePoint:
    x: Tuple[float, ...]

    @property
    def r(self) -> float:
        return float(np.linalg.norm(self.x))

    @property
    def direction(self) -> Tuple[float, ...]:
        r = self.r
        if r == 0.0:
            e = np.zeros(len(self.x))
            e[0] = 1.0
            return tuple(e)
        return tuple(np.asarray(self.x, dtype=float) / r)


def plane_radius(z) -> np.ndarray:
    """r = √((1+z)/(1-z))."""
    z = np.asarray(z, dtype=float)
    if np.any(z >= 1.0):
        raise PoleError("the North Pole z = 1 has no stereographic image")
    return np.sqrt((1.0 + z) / (1.0 - z))


def sphere_height(r) -> np.ndarray:
    """z = (r² - 1)/(r² + 1)."""
    r2 = np.asarray(r, dtype=float) ** 2
    return (r2 - 1.0) / (r2 + 1.0)


def project(y: SpherePoint) -> PlanePoint:
    r = float(plane_radius(y.z))
    return PlanePoint(tuple(r * np.asarray(y.direction, dtype=float)))


def inverse_project(x: PlanePoint) -> SpherePoint:
    r2 = x.r ** 2
    return SpherePoint(z=(r2 - 1.0) / (r2 + 1.0), direction=x.direction)


def conformal_exponent(d: int) -> float:
    """(d - 2)/2 for d >= 3; lower dimensions carry no conformal weight."""
    d = _check_dimension(d)
    return (d - 2) / 2.0 if d >= 3 else 0.0


def weight_exponent(d: int, q: float) -> float:
    """d - (d-2)q/2, the power of 2/(1+r²) in the q-norm identity."""
    return d - (d - 2) * q / 2.0


def pushforward(values, coordinates, direction: Direction, d: int) -> Tuple[np.ndarray, np.ndarray]:
    """Move a profile across the projection.

    ``plane_to_sphere`` takes v at radii r and returns (z, u); ``sphere_to_plane``
    takes u at heights z and returns (r, v). The two are mutually inverse.
    """
    direction = Direction(direction)
    a = conformal_exponent(d)
    values = np.asarray(values, dtype=float)
    if direction is Direction.PLANE_TO_SPHERE:
        r = np.asarray(coordinates, dtype=float)
        return sphere_height(r), ((r ** 2 + 1.0) / 2.0) ** a * values
    z = np.asarray(coordinates, dtype=float)
    return plane_radius(z), (1.0 - z) ** a * values


@dataclass(frozen=True)
class AnalyticProfile:
    """A radial profile v(r) with its derivative v'(r)."""
    name: str
    value: ArrayFn
    derivative: ArrayFn

    def on_sphere(self, d: int) -> Tuple[ArrayFn, ArrayFn]:
        """(u, du/dz) for the pushforward u(z) = (1-z)^{-a} v(r(z))."""
        a = conformal_exponent(d)

        def u(z):
            z = np.asarray(z, dtype=float)
            return (1.0 - z) ** (-a) * self.value(plane_radius(z))

        def du(z):
            z = np.asarray(z, dtype=float)
            r = plane_radius(z)
            dr_dz = 1.0 / (np.maximum(r, 1e-300) * (1.0 - z) ** 2)
            return (a * (1.0 - z) ** (-a - 1.0) * self.value(r)
                    + (1.0 - z) ** (-a) * self.derivative(r) * dr_dz)

        return u, du


def aubin_talenti(d: int, eps: float = 1.0) -> AnalyticProfile:
    """v_ε(r) = (ε/(ε² + r²))^{(d-2)/2}, the optimizers of the Sobolev inequality."""
    d = _check_dimension(d, minimum=3)
    if not eps > 0:
        raise DomainError(f"eps must be positive, got {eps}")
    a = (d - 2) / 2.0

    def value(r):
        return (eps / (eps ** 2 + np.asarray(r, dtype=float) ** 2)) ** a

    def derivative(r):
        r = np.asarray(r, dtype=float)
        return -2.0 * a * r / (eps ** 2 + r ** 2) * value(r)

    return AnalyticProfile(f"aubin_talenti(eps={eps})", value, derivative)


def gaussian(scale: float = 1.0) -> AnalyticProfile:
    """v(r) = exp(-(r/scale)²)."""
    if not scale > 0:
        raise DomainError(f"scale must be positive, got {scale}")

    def value(r):
        return np.exp(-(np.asarray(r, dtype=float) / scale) ** 2)

    def derivative(r):
        r = np.asarray(r, dtype=float)
        return -2.0 * r / scale ** 2 * value(r)

    return AnalyticProfile(f"gaussian(scale={scale})", value, derivative)


def aubin_talenti_sphere(z, d: int, eps: float) -> np.ndarray:
    """Closed-form pushforward (ε/(ε²(1-z) + 1 + z))^{(d-2)/2} of v_ε."""
    z = np.asarray(z, dtype=float)
    return (eps / (eps ** 2 * (1.0 - z) + 1.0 + z)) ** ((d - 2) / 2.0)


def _radial_integral(fn: Callable[[float], float], d: int, scale: float = 1.0) -> float:
    """|S^{d-1}| ∫₀^∞ fn(r) r^{d-1} dr, split at the profile scale and at 1."""
    def integrand(r):
        return float(fn(r)) * r ** (d - 1)

    breaks = sorted({0.0, min(scale, 1.0), max(scale, 1.0)})
    total = 0.0
    for lo, hi in zip(breaks[:-1], breaks[1:]):
        if hi > lo:
            total += quad(integrand, lo, hi, **_QUAD_OPTS)[0]
    tail = quad(integrand, breaks[-1], np.inf, **_QUAD_OPTS)[0]
    total += tail
    if not math.isfinite(total):
        raise DataError("plane-side integral diverges")
    logger.debug("radial integral %.15g (tail %.3g)", total, tail)
    return radial_measure(d) * total


def _sphere_integral(values: np.ndarray, weights: np.ndarray, d: int) -> float:
    total = float(np.dot(weights, values))
    if not math.isfinite(total):
        raise DataError("sphere-side integral diverges")
    return sphere_surface(d) * total


@dataclass
class IdentityReport:
    """Both sides of the energy and q-norm identities, in dω and dx."""
    d: int
    alpha: float
    q: float
    sphere_energy: float
    plane_energy: float
    sphere_power: float
    plane_power: float

    @property
    def energy_residual(self) -> float:
        return abs(self.sphere_energy - self.plane_energy) / abs(self.plane_energy)

    @property
    def power_residual(self) -> float:
        return abs(self.sphere_power - self.plane_power) / abs(self.plane_power)

    def passed(self, tol: float = 1e-6) -> bool:
        return self.energy_residual <= tol and self.power_residual <= tol

    def to_dict(self) -> Dict[str, float]:
        return {
            "sphere_energy": self.sphere_energy,
            "plane_energy": self.plane_energy,
            "energy_residual": self.energy_residual,
            "sphere_power": self.sphere_power,
            "plane_power": self.plane_power,
            "power_residual": self.power_residual,
        }


def energy_identity_check(v: AnalyticProfile, alpha: float, q: float, d: int,
                          sphere_nodes: int = _SPHERE_NODES, scale: float = 1.0) -> IdentityReport:
    """Evaluate both sides of the two identities by independent quadratures."""
    d = _check_dimension(d, minimum=3)
    if not q > 0:
        raise DomainError(f"q must be positive, got {q}")
    a_star = alpha_star(d)
    z, w = quadrature_rule(d, sphere_nodes)
    u, du = v.on_sphere(d)
    u_z, du_z = u(z), du(z)
    sphere_energy = _sphere_integral((1.0 - z ** 2) * du_z ** 2 + alpha * u_z ** 2, w, d)
    sphere_power = _sphere_integral(np.abs(u_z) ** q, w, d)

    def energy_density(r):
        conformal = (2.0 / (1.0 + r * r)) ** 2
        return v.derivative(r) ** 2 + (alpha - a_star) * v.value(r) ** 2 * conformal

    k = weight_exponent(d, q)

    def power_density(r):
        return abs(v.value(r)) ** q * (2.0 / (1.0 + r * r)) ** k

    report = IdentityReport(
        d=d, alpha=alpha, q=q,
        sphere_energy=sphere_energy,
        plane_energy=_radial_integral(energy_density, d, scale),
        sphere_power=sphere_power,
        plane_power=_radial_integral(power_density, d, scale),
    )
    logger.debug("identity check for %s: energy %.3g, power %.3g",
                 v.name, report.energy_residual, report.power_residual)
    return report


def aubin_talenti_delta(d: int, eps: float) -> float:
    """δ(d, ε) = ∫₀^∞ (ε/(ε²+r²))^{d-2} r^{d-1}/(1+r²)² dr, which vanishes as ε → 0."""
    d = _check_dimension(d, minimum=3)
    if not eps > 0:
        raise DomainError(f"eps must be positive, got {eps}")

    def integrand(r):
        return (eps / (eps ** 2 + r * r)) ** (d - 2) * r ** (d - 1) / (1.0 + r * r) ** 2

    breaks = sorted({0.0, eps, 1.0}) if eps != 1.0 else [0.0, 1.0]
    total = sum(quad(integrand, lo, hi, **_QUAD_OPTS)[0] for lo, hi in zip(breaks[:-1], breaks[1:]))
    return total + quad(integrand, breaks[-1], np.inf, **_QUAD_OPTS)[0]


def sobolev_norm_v1(d: int) -> float:
    """‖(1+r²)^{-(d-2)/2}‖_{2*} on R^d, from ∫ r^{d-1}(1+r²)^{-d} dr = B(d/2, d/2)/2."""
    d = _check_dimension(d, minimum=3)
    power = radial_measure(d) * 0.5 * beta_fn(d / 2.0, d / 2.0)
    return float(power ** (1.0 / critical_exponent(d)))


def critical_quotient_bound(alpha: float, d: int, eps: float) -> float:
    """Quotient F_α of the Aubin-Talenti function u_ε at q = 2*.

    Equals α_* + 4|S^{d-1}||S^d|^{-2/d}(α - α_*) δ(d, ε)/‖v₁‖²_{2*}, so it
    tends to α_* as ε → 0.
    """
    d = _check_dimension(d, minimum=3)
    if not alpha > 0:
        raise DomainError(f"alpha must be positive, got {alpha}")
    a_star = alpha_star(d)
    coefficient = 4.0 * radial_measure(d) * sphere_surface(d) ** (-2.0 / d)
    return a_star + coefficient * (alpha - a_star) * aubin_talenti_delta(d, eps) / sobolev_norm_v1(d) ** 2
