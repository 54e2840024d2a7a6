"""
Parameter sweeps with a fluent API.
"""
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

import numpy as np

from .constants import exponents
from .errors import DataError, DomainError
from .options import Family, SolverOptions, Spacing

logger = logging.getLogger(__name__)

# column layout per family: (parameter, value, lower, upper, asymptote)
_COLUMNS = {
    Family.MU: ("alpha", "mu", "mu_lower", "mu_upper", "mu_asymp"),
    Family.RATIO: ("alpha", "ratio", None, None, None),
    Family.NU: ("beta", "nu", None, "nu_upper", "nu_asymp"),
    Family.XI: ("alpha", "xi", None, "xi_upper", "xi_asymp"),
}


@dataclass(frozen=True)
class SweepSpec:
    """What to sweep and where to write it.

    ``exponent`` is q for the mu/ratio/nu families and p for xi.
    """
    family: Family
    d: int
    exponent: float
    start: float
    stop: float
    steps: int
    spacing: Spacing = Spacing.LOG
    grid_size: int = 128
    grading: Optional[float] = None
    output: Optional[Path] = None

    def __post_init__(self):
        object.__setattr__(self, "family", Family(self.family))
        object.__setattr__(self, "spacing", Spacing(self.spacing))
        if self.steps < 2:
            raise DomainError(f"steps must be >= 2, got {self.steps}")
        if not self.start < self.stop:
            raise DomainError(f"sweep range must satisfy min < max, got [{self.start}, {self.stop}]")
        if not self.start > 0:
            raise DomainError(f"sweep parameters must be positive, got min = {self.start}")
        if self.family is Family.XI:
            if not self.exponent > max(1.0, self.d / 2.0):
                raise DomainError(f"xi sweeps need p > max(1, d/2), got p = {self.exponent}")
        else:
            params = exponents(self.d, self.exponent)
            if (self.family is Family.NU) == params.superquadratic:
                side = "q < 2" if self.family is Family.NU else "q > 2"
                raise DomainError(f"{self.family.value} sweeps need {side}, got q = {self.exponent}")

    def parameters(self) -> np.ndarray:
        if self.spacing is Spacing.LOG:
            return np.geomspace(self.start, self.stop, self.steps)
        return np.linspace(self.start, self.stop, self.steps)

    @property
    def columns(self) -> List[str]:
        return [c for c in _COLUMNS[self.family] if c is not None] + (
            ["branch", "status"] if self.family is not Family.RATIO else ["status"])


@dataclass
class SweepResult:
    """Rows of a finished sweep plus the metadata that produced them."""
    spec: SweepSpec
    rows: List[Dict[str, Any]]
    metadata: Dict[str, Any] = field(default_factory=dict)

    @property
    def failed(self) -> int:
        return sum(1 for row in self.rows if row["status"] != "ok")

    @property
    def ok(self) -> bool:
        return self.failed == 0

    def column(self, name: str) -> np.ndarray:
        return np.array([row[name] for row in self.rows], dtype=float)

    def to_dict(self) -> Dict[str, Any]:
        return {"metadata": dict(self.metadata), "columns": self.spec.columns, "rows": self.rows}

    def to_csv(self) -> str:
        from ..formatters.csv import CSVFormatter
        return CSVFormatter().format(self.to_dict())

    def to_json(self, pretty: bool = True) -> str:
        from ..formatters.json import JSONFormatter
        return JSONFormatter(pretty=pretty).format(self.to_dict())

    def to_jsonl(self) -> str:
        from ..formatters.json import JSONLFormatter
        return JSONLFormatter().format(self.to_dict())


class Sweep:
    """
    Fluent builder for sweeps.

    Example:
        result = (Sweep("mu")
            .dimension(3)
            .exponent(3.0)
            .over(0.5, 20.0, steps=40, spacing="log")
            .grid(128)
            .run())
    """

    def __init__(self, family: Union[str, Family]):
        self._family = Family(family)
        self._d: Optional[int] = None
        self._exponent: Optional[float] = None
        self._range: Optional[tuple] = None
        self._spacing = Spacing.LOG
        self._grid_size: Optional[int] = None
        self._grading: Optional[float] = None
        self._output: Optional[Path] = None
        self._options = SolverOptions()

    def dimension(self, d: int) -> 'Sweep':
        self._d = d
        return self

    def exponent(self, value: float) -> 'Sweep':
        """Set q (or p for the xi family)."""
        self._exponent = value
        return self

    def over(self, start: float, stop: float, steps: int,
             spacing: Union[str, Spacing] = Spacing.LOG) -> 'Sweep':
        self._range = (start, stop, steps)
        self._spacing = Spacing(spacing)
        return self

    def grid(self, size: int) -> 'Sweep':
        self._grid_size = size
        return self

    def graded(self, grading: float) -> 'Sweep':
        """Cluster nodes at the pole, for layer-shaped minimizers."""
        self._grading = grading
        return self

    def jobs(self, n: int) -> 'Sweep':
        self._options = self._options.replace(jobs=n)
        return self

    def with_options(self, opts: SolverOptions) -> 'Sweep':
        self._options = opts
        return self

    def write_to(self, path: Union[str, Path]) -> 'Sweep':
        self._output = Path(path)
        return self

    def spec(self) -> SweepSpec:
        if self._d is None or self._exponent is None or self._range is None:
            raise DomainError("a sweep needs dimension(), exponent() and over()")
        start, stop, steps = self._range
        return SweepSpec(
            family=self._family, d=self._d, exponent=self._exponent,
            start=start, stop=stop, steps=steps, spacing=self._spacing,
            grid_size=self._grid_size or self._options.grid_size,
            grading=self._grading, output=self._output,
        )

    def run(self) -> SweepResult:
        return run_sweep(self.spec(), self._options)


def _curve(spec: SweepSpec, opts: SolverOptions):
    from ..solvers import sphere_constants as sc

    parameters = spec.parameters()
    if spec.family is Family.MU:
        return sc.mu_curve(parameters, spec.d, spec.exponent, opts, grading=spec.grading)
    if spec.family is Family.RATIO:
        return sc.ratio_curve(parameters, spec.d, spec.exponent, opts, grading=spec.grading)
    if spec.family is Family.NU:
        return sc.nu_curve(parameters, spec.d, spec.exponent, opts)
    return sc.xi_curve(parameters, spec.d, spec.exponent, opts)


def _cell(values: Optional[np.ndarray], i: int) -> float:
    return float(values[i]) if values is not None else math.nan


def run_sweep(spec: SweepSpec, opts: Optional[SolverOptions] = None) -> SweepResult:
    """Evaluate every sweep row, in parameter order, and optionally write the CSV.

    Failures are recorded per row in the status column rather than raised.
    """
    opts = opts or SolverOptions()
    opts = opts.replace(grid_size=spec.grid_size, max_grid_size=max(spec.grid_size, opts.max_grid_size))
    logger.info("Sweeping %s for d=%d, exponent=%g over %d points",
                spec.family.value, spec.d, spec.exponent, spec.steps)
    curve = _curve(spec, opts)
    names = _COLUMNS[spec.family]
    rows: List[Dict[str, Any]] = []
    for i, x in enumerate(curve.parameter):
        series = (curve.parameter, curve.value, curve.lower, curve.upper, curve.asymptote)
        row: Dict[str, Any] = {}
        for name, values in zip(names, series):
            if name is not None:
                row[name] = float(x) if values is curve.parameter else _cell(values, i)
        if spec.family is not Family.RATIO:
            row["branch"] = curve.branches[i]
        row["status"] = curve.status[i]
        rows.append(row)

    metadata = dict(curve.metadata)
    metadata.update({"family": spec.family.value, "spacing": spec.spacing.value,
                     "steps": spec.steps, "seed": opts.seed})
    result = SweepResult(spec=spec, rows=rows, metadata=metadata)
    if result.failed:
        logger.warning("%d of %d sweep rows failed", result.failed, len(rows))
    if spec.output is not None:
        try:
            spec.output.write_text(result.to_csv(), encoding="utf-8")
        except OSError as exc:
            raise DataError(f"Cannot write sweep output to {spec.output}: {exc}") from exc
        logger.info("Wrote %d rows to %s", len(rows), spec.output)
    return result
