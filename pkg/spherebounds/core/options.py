"""
Solver configuration and the small enums shared across modules.
"""
from dataclasses import asdict, dataclass, fields, replace
from enum import Enum
from pathlib import Path
from typing import Any, Dict, Mapping, Optional, Tuple, Union

import yaml

from .errors import DataError, DomainError


class Branch(Enum):
    """How a sphere constant was obtained."""
    EXACT_LINE = "exact_line"  # rigidity: the constant equals its parameter
    CRITICAL_PLATEAU = "critical_plateau"  # q = 2*, alpha > alpha_*
    MINIMIZED = "minimized"  # numerical minimization over zonal functions
    CLOSED_FORM = "closed_form"  # d = 1, q = infinity


class Sign(Enum):
    """Sign of the potential in -Laplacian -/+ V."""
    MINUS = "minus"
    PLUS = "plus"

    @classmethod
    def parse(cls, value: Union[str, "Sign"]) -> "Sign":
        """Accept enum members and the CLI spellings neg/pos."""
        if isinstance(value, Sign):
            return value
        aliases = {"neg": cls.MINUS, "minus": cls.MINUS, "-": cls.MINUS,
                   "pos": cls.PLUS, "plus": cls.PLUS, "+": cls.PLUS}
        try:
            return aliases[str(value).lower()]
        except KeyError:
            raise DomainError(f"Unknown sign: {value!r}") from None


class Family(Enum):
    """Curve families produced by sweeps."""
    MU = "mu"
    NU = "nu"
    XI = "xi"
    RATIO = "ratio"


class Spacing(Enum):
    """Parameter spacing for sweeps."""
    LINEAR = "linear"
    LOG = "log"


class Direction(Enum):
    """Direction of the conformal pushforward."""
    SPHERE_TO_PLANE = "sphere_to_plane"
    PLANE_TO_SPHERE = "plane_to_sphere"


class PotentialKind(Enum):
    """Origin of a potential table."""
    CONSTANT = "constant"
    NODAL = "nodal"
    EQUALITY = "equality"


@dataclass(frozen=True)
class SolverOptions:
    """Numerical knobs for every solver in the package.

    Instances are immutable; use ``replace`` to derive variants.
    """
    grid_size: int = 128
    max_grid_size: int = 1024
    min_layer_nodes: float = 8.0
    max_iterations: int = 20000
    stagnation_tol: float = 1e-12
    stagnation_window: int = 50
    newton_steps: int = 8
    residual_tol: float = 1e-6
    bisection_xtol: float = 1e-12
    golden_xtol: float = 1e-10
    seeds: Tuple[float, ...] = (0.1, 0.3, 0.6)
    r_max: Optional[float] = None
    radial_nodes: int = 4001
    shooting_rtol: float = 1e-12
    shooting_atol: float = 1e-14
    decay_tol: float = 1e-10
    jobs: int = 1
    seed: int = 0
    oversample: int = 1

    def __post_init__(self):
        if self.grid_size < 8:
            raise DomainError(f"grid_size must be >= 8, got {self.grid_size}")
        if self.max_grid_size < self.grid_size:
            raise DomainError("max_grid_size must be >= grid_size")
        if self.max_iterations < 1 or self.stagnation_window < 1:
            raise DomainError("iteration limits must be positive")
        if self.jobs < 1:
            raise DomainError(f"jobs must be >= 1, got {self.jobs}")
        if self.oversample < 1:
            raise DomainError(f"oversample must be >= 1, got {self.oversample}")
        if self.radial_nodes < 101:
            raise DomainError("radial_nodes must be >= 101")
        if self.r_max is not None and self.r_max <= 0:
            raise DomainError("r_max must be positive")
        for name in ("stagnation_tol", "residual_tol", "bisection_xtol", "golden_xtol",
                     "shooting_rtol", "shooting_atol", "decay_tol"):
            if getattr(self, name) <= 0:
                raise DomainError(f"{name} must be positive")
        # YAML hands us lists
        object.__setattr__(self, "seeds", tuple(float(s) for s in self.seeds))
        if any(not 0 < s < 1 for s in self.seeds):
            raise DomainError("seed amplitudes must lie in (0, 1)")

    @classmethod
    def from_dict(cls, mapping: Mapping[str, Any]) -> "SolverOptions":
        """Build options from a mapping, rejecting unknown keys."""
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(mapping) - known)
        if unknown:
            raise DataError(f"Unknown solver option(s): {', '.join(unknown)}")
        return cls(**dict(mapping))

    @classmethod
    def from_yaml(cls, path: Union[str, Path]) -> "SolverOptions":
        """Load options from a YAML file holding a single mapping."""
        path = Path(path)
        try:
            data = yaml.safe_load(path.read_text(encoding="utf-8"))
        except (OSError, yaml.YAMLError) as exc:
            raise DataError(f"Cannot read solver options from {path}: {exc}") from exc
        if data is None:
            return cls()
        if not isinstance(data, dict):
            raise DataError(f"{path} must contain a mapping of option names to values")
        return cls.from_dict(data)

    def replace(self, **changes: Any) -> "SolverOptions":
        """Return a copy with some fields changed."""
        return replace(self, **changes)

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data["seeds"] = list(self.seeds)
        return data
