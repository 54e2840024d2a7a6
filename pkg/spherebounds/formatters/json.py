"""
JSON formatters for sweep and report output.
"""
import json
import math
from typing import Any, Dict

import numpy as np

from .base import Formatter


def _clean(value: Any) -> Any:
    """Make numpy scalars, paths and NaN JSON-safe."""
    if isinstance(value, dict):
        return {str(k): _clean(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_clean(v) for v in value]
    if isinstance(value, np.ndarray):
        return [_clean(v) for v in value.tolist()]
    if isinstance(value, np.generic):
        value = value.item()
    if isinstance(value, float) and not math.isfinite(value):
        return None
    if isinstance(value, (str, int, float, bool)) or value is None:
        return value
    return str(value)


class JSONFormatter(Formatter):
    """Format results as a single JSON document."""

    def __init__(self, pretty: bool = True, indent: int = 2, **options):
        """
        Initialize JSON formatter.

        Args:
            pretty: Pretty-print JSON with indentation
            indent: Number of spaces for indentation
            **options: Additional formatting options
        """
        super().__init__(**options)
        self.pretty = pretty
        self.indent = indent if pretty else None

    def format(self, data: Dict[str, Any]) -> str:
        self.validate_data(data)
        return json.dumps(_clean(data), indent=self.indent, ensure_ascii=False, sort_keys=False)


class JSONLFormatter(Formatter):
    """Format results as JSON Lines: one metadata line, then one line per row."""

    def format(self, data: Dict[str, Any]) -> str:
        self.validate_data(data)

        lines = [json.dumps({'type': 'metadata', 'data': _clean(data['metadata'])}, ensure_ascii=False)]
        for row in data['rows']:
            lines.append(json.dumps({'type': 'row', 'data': _clean(row)}, ensure_ascii=False))

        return '\n'.join(lines) + '\n'
