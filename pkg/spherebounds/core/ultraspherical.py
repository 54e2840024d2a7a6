"""
Zonal discretization of S^d.

A zonal function depends only on the latitude z ∈ [-1, 1]; on such
functions the uniform probability measure of S^d reduces to

    dν_d(z) = Z_d^{-1} (1 - z²)^{d/2 - 1} dz

and |∇f|² to (1 - z²)|f'(z)|². All sphere integrals in this package are
taken against dν_d (the probability measure dσ); reporting code multiplies
by |S^d| when the surface measure dω is needed.

Minimizers of the sphere functionals are assumed zonal, as in the
ultraspherical reduction; nothing here validates that on the full sphere.
"""
import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Tuple

import numpy as np
from scipy.special import roots_jacobi, roots_legendre

from .constants import as_float_array, jacobi_normalization
from .errors import DataError, DomainError
from .options import Sign

logger = logging.getLogger(__name__)

MIN_NODES = 8


def _barycentric_weights(t: np.ndarray) -> np.ndarray:
    """Weights 1/∏_{k≠j}(t_j - t_k) for ascending nodes, scaled to max 1.

    Products are accumulated in log form so that large node counts do not
    overflow.
    """
    n = t.size
    diff = t[:, None] - t[None, :]
    np.fill_diagonal(diff, 1.0)
    log_mag = -np.sum(np.log(np.abs(diff)), axis=1)
    log_mag -= log_mag.max()
    signs = np.where((n - 1 - np.arange(n)) % 2 == 0, 1.0, -1.0)
    return signs * np.exp(log_mag)


def _differentiation_matrix(t: np.ndarray, bary: np.ndarray) -> np.ndarray:
    diff = t[:, None] - t[None, :]
    np.fill_diagonal(diff, 1.0)
    D = (bary[None, :] / bary[:, None]) / diff
    np.fill_diagonal(D, 0.0)
    # negative sum trick: rows annihilate constants exactly
    np.fill_diagonal(D, -D.sum(axis=1))
    return D


def _interpolation_rows(t_nodes: np.ndarray, bary: np.ndarray, targets: np.ndarray) -> np.ndarray:
    targets = np.atleast_1d(np.asarray(targets, dtype=float))
    diff = targets[:, None] - t_nodes[None, :]
    exact = diff == 0.0
    diff[exact] = 1.0
    terms = bary[None, :] / diff
    P = terms / terms.sum(axis=1, keepdims=True)
    hit_rows = exact.any(axis=1)
    if hit_rows.any():
        P[hit_rows] = exact[hit_rows].astype(float)
    return P


def _node_data(d: int, N: int, grading: Optional[float]):
    """Interpolation coordinate t, latitude z, weights, ρ = √(1-z²) and dz/dt."""
    if grading is None:
        a = d / 2.0 - 1.0
        t, w = roots_jacobi(N, a, a)
        order = np.argsort(t)
        t, w = t[order], w[order]
        z = t.copy()
        rho = np.sqrt((1.0 - z) * (1.0 + z))
        dz_dt = np.ones_like(t)
        total = w.sum()
        logger.debug("Gauss-Jacobi d=%d N=%d: weight mass %.16g vs Z_d %.16g",
                     d, N, total, jacobi_normalization(d))
    else:
        s, ws = roots_legendre(N)
        t = 0.5 * (s + 1.0)
        ws = 0.5 * ws
        scale = math.pi / math.sinh(grading)
        theta = scale * np.sinh(grading * t)
        dtheta = scale * grading * np.cosh(grading * t)
        z = np.cos(theta)
        rho = np.sin(theta)
        w = ws * rho ** (d - 1) * dtheta
        dz_dt = -rho * dtheta
    w = w / w.sum()
    return t, z, w, rho, dz_dt


@dataclass(frozen=True, eq=False)
class JacobiGrid:
    """Quadrature and differentiation data for dν_d on [-1, 1].

    ``nodes`` are latitudes z_i, ``weights`` sum to one. ``coordinate`` is the
    variable the barycentric interpolant lives in: z itself for Gauss-Jacobi
    grids, the mapped Legendre variable s ∈ (0, 1) for pole-graded grids.
    ``gradient`` maps nodal values to √(1-z²) f'(z) and ``stiffness`` is the
    Dirichlet form in the coordinates y = √w f.
    """
    d: int
    N: int
    nodes: np.ndarray
    weights: np.ndarray
    coordinate: np.ndarray
    bary: np.ndarray
    diff: np.ndarray
    gradient: np.ndarray
    stiffness: np.ndarray
    grading: Optional[float] = None
    sqrt_weights: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "sqrt_weights", np.sqrt(self.weights))

    def coordinate_of(self, z) -> np.ndarray:
        """Map latitudes to the interpolation coordinate."""
        z = np.clip(np.asarray(z, dtype=float), -1.0, 1.0)
        if self.grading is None:
            return z
        theta = np.arccos(z)
        return np.arcsinh(theta * math.sinh(self.grading) / math.pi) / self.grading

    def interpolation_matrix(self, z) -> np.ndarray:
        """Rows evaluating the nodal interpolant at the latitudes ``z``."""
        return _interpolation_rows(self.coordinate, self.bary, self.coordinate_of(z))

    def compatible_with(self, other: "JacobiGrid") -> bool:
        if self is other:
            return True
        return (self.d == other.d and self.N == other.N and self.grading == other.grading
                and np.array_equal(self.nodes, other.nodes))

    def __repr__(self) -> str:
        graded = f", grading={self.grading}" if self.grading is not None else ""
        return f"JacobiGrid(d={self.d}, N={self.N}{graded})"


def build_grid(d: int, N: int, grading: Optional[float] = None) -> JacobiGrid:
    """Build a quadrature/differentiation grid for zonal functions on S^d.

    Args:
        d: Sphere dimension (>= 1).
        N: Number of nodes (>= 8).
        grading: ``None`` for Gauss-Jacobi nodes with weight (1-z²)^{d/2-1};
            a positive value κ clusters nodes at the North Pole through
            θ = π sinh(κs)/sinh κ on Gauss-Legendre nodes s ∈ (0, 1).

    Returns:
        An immutable JacobiGrid.
    """
    if isinstance(d, bool) or int(d) != d or d < 1:
        raise DomainError(f"Dimension must be an integer >= 1, got {d!r}")
    if int(N) != N or N < MIN_NODES:
        raise DomainError(f"Grid needs at least {MIN_NODES} nodes, got {N}")
    if grading is not None and not grading > 0:
        raise DomainError(f"grading must be positive, got {grading}")
    d, N = int(d), int(N)

    t, z, w, rho, dz_dt = _node_data(d, N, grading)
    bary = _barycentric_weights(t)
    D_t = _differentiation_matrix(t, bary)
    D_z = D_t / dz_dt[:, None]
    G = rho[:, None] * D_z

    sq = np.sqrt(w)
    B = sq[:, None] * G / sq[None, :]
    C = B.T @ B
    C = 0.5 * (C + C.T)

    logger.debug("Built grid d=%d N=%d grading=%s", d, N, grading)
    return JacobiGrid(d=d, N=N, nodes=z, weights=w, coordinate=t, bary=bary,
                      diff=D_z, gradient=G, stiffness=C, grading=grading)


def oversampled_quadrature(grid: JacobiGrid, factor: int) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Fine nodes, fine weights and the interpolation matrix onto them.

    With ``factor`` = 1 the grid's own quadrature and the identity are returned.
    """
    if factor < 1:
        raise DomainError(f"oversampling factor must be >= 1, got {factor}")
    if factor == 1:
        return grid.nodes, grid.weights, np.eye(grid.N)
    _, z_fine, w_fine, _, _ = _node_data(grid.d, factor * grid.N, grid.grading)
    return z_fine, w_fine, grid.interpolation_matrix(z_fine)


def quadrature_rule(d: int, N: int, grading: Optional[float] = None) -> Tuple[np.ndarray, np.ndarray]:
    """Nodes and dν_d weights without the differentiation data."""
    if N < 1:
        raise DomainError(f"quadrature needs at least one node, got {N}")
    _, z, w, _, _ = _node_data(int(d), int(N), grading)
    return z, w


def participation_ratio(values: np.ndarray) -> float:
    """(Σu²)²/Σu⁴ over the nodes: the number of nodes carrying the profile."""
    u2 = np.asarray(values, dtype=float) ** 2
    return float(u2.sum() ** 2 / np.sum(u2 ** 2))


@dataclass(frozen=True, eq=False)
class ZonalFunction:
    """Nodal values of a function of z on a JacobiGrid."""
    grid: JacobiGrid
    values: np.ndarray

    def __post_init__(self):
        values = as_float_array(self.values)
        if values.shape != (self.grid.N,):
            raise DataError(f"Expected {self.grid.N} nodal values, got shape {values.shape}")
        if not np.all(np.isfinite(values)):
            raise DataError("Zonal function values must be finite")
        object.__setattr__(self, "values", values)

    @classmethod
    def from_callable(cls, grid: JacobiGrid, fn: Callable[[np.ndarray], np.ndarray]) -> "ZonalFunction":
        return cls(grid, np.broadcast_to(np.asarray(fn(grid.nodes), dtype=float), (grid.N,)).copy())

    @classmethod
    def constant(cls, grid: JacobiGrid, value: float = 1.0) -> "ZonalFunction":
        return cls(grid, np.full(grid.N, float(value)))

    def with_values(self, values) -> "ZonalFunction":
        return ZonalFunction(self.grid, values)

    def scaled(self, factor: float) -> "ZonalFunction":
        return ZonalFunction(self.grid, factor * self.values)

    def integrate(self) -> float:
        return integrate(self)

    def norm(self, q: float, oversample: int = 1) -> float:
        """(∫|f|^q dν_d)^{1/q}; q = ∞ gives the nodal maximum."""
        if math.isinf(q):
            return float(np.max(np.abs(self.values)))
        if not q > 0:
            raise DomainError(f"norm exponent must be positive, got {q}")
        if oversample > 1:
            _, w_fine, P = oversampled_quadrature(self.grid, oversample)
            return float(np.dot(w_fine, np.abs(P @ self.values) ** q) ** (1.0 / q))
        return float(np.dot(self.grid.weights, np.abs(self.values) ** q) ** (1.0 / q))

    def derivative(self) -> "ZonalFunction":
        """df/dz at the nodes."""
        return ZonalFunction(self.grid, self.grid.diff @ self.values)

    def interpolate(self, z) -> np.ndarray:
        """Evaluate the barycentric interpolant at arbitrary latitudes."""
        return self.grid.interpolation_matrix(z) @ self.values

    def resample(self, grid: JacobiGrid) -> "ZonalFunction":
        if grid.d != self.grid.d:
            raise DataError(f"Cannot resample from d={self.grid.d} to d={grid.d}")
        return ZonalFunction(grid, self.interpolate(grid.nodes))


def _check_finite(values: np.ndarray) -> np.ndarray:
    if np.isnan(values).any():
        raise DataError("NaN encountered in zonal function")
    return values


def integrate(f: ZonalFunction) -> float:
    """Quadrature value of ∫ f dν_d."""
    return float(np.dot(f.grid.weights, _check_finite(f.values)))


def dirichlet_form(f: ZonalFunction) -> float:
    """∫ |f'|² (1 - z²) dν_d."""
    grad = f.grid.gradient @ _check_finite(f.values)
    return float(np.dot(f.grid.weights, grad ** 2))


def evaluate_quotient(f: ZonalFunction, alpha: float, q: float, oversample: int = 1) -> float:
    """F_α[f] = (∫|f'|²ν dν_d + α∫|f|² dν_d) / ‖f‖_q².

    Homogeneous of degree zero in f.
    """
    if not alpha > 0:
        raise DomainError(f"alpha must be positive, got {alpha}")
    denominator = f.norm(q, oversample=oversample) ** 2
    if denominator == 0.0:
        raise DomainError("quotient undefined for the zero function")
    return (dirichlet_form(f) + alpha * f.norm(2) ** 2) / denominator


def interpolation_deficit(f: ZonalFunction, q: float) -> float:
    """‖∇f‖² - d/(q-2)(‖f‖_q² - ‖f‖₂²), nonnegative for q ∈ [1,2) ∪ (2,2*]."""
    if q == 2:
        raise DomainError("interpolation deficit is undefined at q = 2")
    d = f.grid.d
    return dirichlet_form(f) - d / (q - 2.0) * (f.norm(q) ** 2 - f.norm(2) ** 2)


@dataclass(frozen=True, eq=False)
class SchrodingerPencil:
    """Symmetric pencil (A, M) for -Δ ∓ V on zonal functions.

    A is the nodal Dirichlet form plus ∓ the weighted potential, M = diag(w)
    the dσ mass form. ``standard_form`` gives the equivalent symmetric
    matrix in the coordinates y = √w u, whose eigenvalues are those of the
    pencil.
    """
    grid: JacobiGrid
    A: np.ndarray
    M: np.ndarray
    potential: np.ndarray
    sign: Sign

    def standard_form(self) -> np.ndarray:
        signed = -self.potential if self.sign is Sign.MINUS else self.potential
        return self.grid.stiffness + np.diag(signed)

    def nodal_values(self, y: np.ndarray) -> np.ndarray:
        """Recover nodal values u from scaled coordinates y = √w u."""
        return y / self.grid.sqrt_weights


def assemble_schrodinger(V: ZonalFunction, sign: Sign, grid: Optional[JacobiGrid] = None) -> SchrodingerPencil:
    """Assemble the symmetric pencil of -Δ ∓ V on the potential's grid.

    Passing ``grid`` asserts that V lives on it; a mismatch is a data error.
    """
    sign = Sign.parse(sign)
    if grid is not None and not grid.compatible_with(V.grid):
        raise DataError(f"Potential lives on {V.grid!r}, operator requested on {grid!r}")
    grid = V.grid
    v = _check_finite(V.values)
    weighted_grad = grid.sqrt_weights[:, None] * grid.gradient
    A = weighted_grad.T @ weighted_grad
    signed = -v if sign is Sign.MINUS else v
    A = A + np.diag(grid.weights * signed)
    A = 0.5 * (A + A.T)
    M = np.diag(grid.weights)
    return SchrodingerPencil(grid=grid, A=A, M=M, potential=v, sign=sign)
