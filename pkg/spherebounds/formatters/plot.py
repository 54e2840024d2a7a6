"""
Gnuplot script referencing a sweep CSV.
"""
from typing import Any, Dict, List

from ..core.errors import DataError
from .base import Formatter

_STYLES = {
    'mu': 'lw 2 title "mu"',
    'mu_lower': 'dt 2 title "lower bound"',
    'mu_upper': 'dt 3 title "upper bound"',
    'mu_asymp': 'dt 4 title "asymptote"',
    'ratio': 'lw 2 title "mu / mu_asymp"',
    'nu': 'lw 2 title "nu"',
    'nu_upper': 'dt 3 title "beta"',
    'nu_asymp': 'dt 4 title "asymptote"',
    'xi': 'lw 2 title "xi"',
    'xi_upper': 'dt 3 title "alpha"',
    'xi_asymp': 'dt 4 title "asymptote"',
}


class PlotScriptFormatter(Formatter):
    """Emit a plain-text gnuplot script that plots the numeric CSV columns.

    Options:
        csv_path: path of the data file the script reads (required)
        output: image written by the script, ``<csv stem>.png`` by default
        logscale: put the parameter axis on a log scale
    """

    def format(self, data: Dict[str, Any]) -> str:
        self.validate_data(data)
        csv_path = self.get_option('csv_path')
        if not csv_path:
            raise DataError("PlotScriptFormatter needs the csv_path option")
        columns: List[str] = self.columns(data)
        metadata = data['metadata']
        image = self.get_option('output') or f"{str(csv_path).rsplit('.', 1)[0]}.png"

        lines = [
            '# gnuplot script',
            'set datafile separator ","',
            'set key autotitle columnhead',
            'set terminal pngcairo size 900,600',
            f'set output "{image}"',
            f'set xlabel "{columns[0]}"' if columns else '',
        ]
        title = ', '.join(f"{k}={metadata[k]}" for k in ('family', 'd', 'q', 'p') if metadata.get(k) is not None)
        if title:
            lines.append(f'set title "{title}"')
        if self.get_option('logscale', metadata.get('spacing') == 'log'):
            lines.append('set logscale x')

        plots = []
        for index, name in enumerate(columns[1:], start=2):
            if name in _STYLES:
                plots.append(f'"{csv_path}" using 1:{index} with lines {_STYLES[name]}')
        lines.append('plot ' + ', \\\n     '.join(plots))

        return '\n'.join(line for line in lines if line) + '\n'
