"""
Base formatter interface for output generation.
"""
from abc import ABC, abstractmethod
from typing import Any, Dict, List

from ..core.errors import DataError


class Formatter(ABC):
    """Abstract base class for all formatters."""

    def __init__(self, **options):
        """
        Initialize formatter with options.

        Args:
            **options: Formatter-specific options
        """
        self.options = options

    @abstractmethod
    def format(self, data: Dict[str, Any]) -> str:
        """
        Format tabular results into an output string.

        Args:
            data: Mapping with ``metadata``, ``rows`` and optionally ``columns``

        Returns:
            Formatted string output
        """
        pass

    def validate_data(self, data: Dict[str, Any]) -> bool:
        """
        Validate input data structure.

        Args:
            data: Data to validate

        Returns:
            True if valid, raises DataError if not
        """
        for key in ('metadata', 'rows'):
            if key not in data:
                raise DataError(f"Missing required key: {key}")

        if not isinstance(data['rows'], list):
            raise DataError("'rows' must be a list")

        return True

    def columns(self, data: Dict[str, Any]) -> List[str]:
        """Column order: explicit ``columns`` or the keys of the first row."""
        if data.get('columns'):
            return list(data['columns'])
        return list(data['rows'][0]) if data['rows'] else []

    def get_option(self, key: str, default: Any = None) -> Any:
        return self.options.get(key, default)


class StreamingFormatter(Formatter):
    """Base class for formatters that emit one chunk per row."""

    @abstractmethod
    def format_header(self, metadata: Dict[str, Any], columns: List[str]) -> str:
        pass

    @abstractmethod
    def format_row(self, row: Dict[str, Any], columns: List[str]) -> str:
        pass

    def format_footer(self, metadata: Dict[str, Any]) -> str:
        return ''

    def format(self, data: Dict[str, Any]) -> str:
        self.validate_data(data)
        columns = self.columns(data)

        parts = [self.format_header(data['metadata'], columns)]
        for row in data['rows']:
            parts.append(self.format_row(row, columns))
        parts.append(self.format_footer(data['metadata']))

        return ''.join(parts)
