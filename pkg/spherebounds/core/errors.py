"""
Exception hierarchy for spherebounds.

Domain and data problems subclass ValueError so callers that only know the
builtin still catch them; solver failures subclass RuntimeError and carry the
diagnostics gathered up to the point of failure.
"""
from typing import Any, Dict, Optional


class SphereBoundsError(Exception):
    """Base class for all spherebounds errors."""


class DomainError(SphereBoundsError, ValueError):
    """An argument lies outside the range where a formula or solver applies."""


class BranchError(DomainError):
    """The exponent q = 2 has no (p, gamma) branch; use the log-Sobolev constant."""


class PoleError(DomainError):
    """Stereographic projection of the North Pole."""


class DataError(SphereBoundsError, ValueError):
    """Malformed numerical data: NaNs, mismatched grids, unreadable files."""


class SolverError(SphereBoundsError, RuntimeError):
    """An iterative solver failed to converge or to bracket a root."""

    def __init__(self, message: str, diagnostics: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.diagnostics = dict(diagnostics or {})

    def __str__(self) -> str:
        base = super().__str__()
        if not self.diagnostics:
            return base
        details = ", ".join(f"{k}={v}" for k, v in sorted(self.diagnostics.items()))
        return f"{base} ({details})"
