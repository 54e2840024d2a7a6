"""
spherebounds - optimal interpolation constants on spheres

Computes the sharp constants of interpolation inequalities on S^d, their
Euclidean counterparts, and the eigenvalue bounds for Schrödinger
operators on the sphere they imply.

Main entry points:
- mu, nu, xi: optimal sphere constants
- gns_constant, dual_gns_constant, klt_constants: Euclidean constants
- klt_report, dual_klt_report, logsob_report: spectral bounds
- Sweep: fluent API for the curve sweeps
"""

from .core.errors import (BranchError, DataError, DomainError, PoleError, SolverError,
                          SphereBoundsError)
from .core.options import SolverOptions
from .core.sweep import Sweep, SweepResult, SweepSpec, run_sweep
from .solvers.euclidean import dual_gns_constant, gns_constant, klt_constants
from .solvers.spectral import Potential, dual_klt_report, klt_report, logsob_report
from .solvers.sphere_constants import alpha_of_mu, mu, mu_lower, mu_upper, nu, xi

__version__ = '0.1.0'
__all__ = [
    'SphereBoundsError',
    'DomainError',
    'BranchError',
    'PoleError',
    'DataError',
    'SolverError',
    'SolverOptions',
    'Sweep',
    'SweepSpec',
    'SweepResult',
    'run_sweep',
    'gns_constant',
    'dual_gns_constant',
    'klt_constants',
    'Potential',
    'klt_report',
    'dual_klt_report',
    'logsob_report',
    'mu',
    'mu_lower',
    'mu_upper',
    'alpha_of_mu',
    'nu',
    'xi',
]
