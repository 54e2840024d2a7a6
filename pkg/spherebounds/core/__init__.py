"""
Core modules for spherebounds.
"""
from .constants import GeometryConstants, ProblemParams, exponents, sobolev_constant, sphere_surface
from .errors import SphereBoundsError
from .options import Branch, Family, Sign, SolverOptions, Spacing
from .ultraspherical import JacobiGrid, ZonalFunction, build_grid

__all__ = [
    'GeometryConstants',
    'ProblemParams',
    'exponents',
    'sobolev_constant',
    'sphere_surface',
    'SphereBoundsError',
    'Branch',
    'Family',
    'Sign',
    'SolverOptions',
    'Spacing',
    'JacobiGrid',
    'ZonalFunction',
    'build_grid',
]
