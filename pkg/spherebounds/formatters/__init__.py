"""
Output formatters for sweep and report data.
"""
from .base import Formatter, StreamingFormatter
from .csv import CSVFormatter, format_number
from .json import JSONFormatter, JSONLFormatter
from .plot import PlotScriptFormatter

__all__ = [
    'Formatter',
    'StreamingFormatter',
    'CSVFormatter',
    'JSONFormatter',
    'JSONLFormatter',
    'PlotScriptFormatter',
    'format_number',
]
