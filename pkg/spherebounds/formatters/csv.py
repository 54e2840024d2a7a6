"""
CSV formatter: header row, floats at full precision.
"""
import csv
import io
import math
from typing import Any, Dict, List

from .base import StreamingFormatter


def format_number(value: Any, digits: int = 17) -> str:
    """Render floats with ``digits`` significant digits; other values via str()."""
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, float):
        if math.isnan(value):
            return 'nan'
        return f"{value:.{digits}g}"
    if value is None:
        return ''
    return str(value)


class CSVFormatter(StreamingFormatter):
    """Format rows as CSV with a header line."""

    def __init__(self, digits: int = 17, delimiter: str = ',', **options):
        super().__init__(**options)
        self.digits = digits
        self.delimiter = delimiter

    def _line(self, cells: List[str]) -> str:
        buffer = io.StringIO()
        csv.writer(buffer, delimiter=self.delimiter, lineterminator='\n').writerow(cells)
        return buffer.getvalue()

    def format_header(self, metadata: Dict[str, Any], columns: List[str]) -> str:
        return self._line(columns)

    def format_row(self, row: Dict[str, Any], columns: List[str]) -> str:
        return self._line([format_number(row.get(name), self.digits) for name in columns])
