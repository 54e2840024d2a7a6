#!/usr/bin/env python3
"""
spherebounds CLI - optimal constants, sweeps and spectral checks on S^d.
"""
import argparse
import logging
import math
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional

from rich.console import Console
from rich.logging import RichHandler
from rich.panel import Panel
from rich.table import Table
from rich.text import Text

from .core.errors import DataError, DomainError, SolverError
from .core.options import Family, Sign, SolverOptions, Spacing
from .core.sweep import SweepResult, SweepSpec, run_sweep
from .formatters.csv import format_number

console = Console()
err_console = Console(stderr=True)

logger = logging.getLogger("spherebounds")

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_SOLVER = 2
EXIT_USAGE = 3


class _ArgumentParser(argparse.ArgumentParser):
    """argparse with usage errors mapped to exit code 3."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _parse_q(text: str) -> float:
    if text.lower() in ("inf", "infinity", "oo"):
        return math.inf
    return float(text)


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--d", type=int, default=3, help="Sphere dimension (default: 3)")
    parser.add_argument("--grid", type=int, metavar="N", help="Number of grid nodes")
    parser.add_argument("--grading", type=float, metavar="K",
                        help="Cluster grid nodes at the pole with strength K")
    parser.add_argument("--config", metavar="PATH", help="YAML file with solver options")
    parser.add_argument("--tol", type=float, default=1e-7, help="Slack tolerance (default: 1e-7)")
    parser.add_argument("--seed", type=int, help="Random seed")
    parser.add_argument("--jobs", type=int, metavar="N", help="Parallel sweep rows")
    parser.add_argument("--out", metavar="PATH", help="Output file (default: stdout)")
    parser.add_argument("-f", "--format", choices=["csv", "json", "jsonl", "table"], default=None,
                        help="Output format (default: csv for sweeps, table otherwise)")


def _add_range(parser: argparse.ArgumentParser, default_min: float, default_max: float) -> None:
    group = parser.add_argument_group("Sweep Range")
    group.add_argument("--min", type=float, default=default_min, dest="start")
    group.add_argument("--max", type=float, default=default_max, dest="stop")
    group.add_argument("--steps", type=int, default=40)
    group.add_argument("--spacing", choices=[s.value for s in Spacing], default=Spacing.LOG.value)
    group.add_argument("--plot-script", metavar="PATH", help="Also write a gnuplot script for the CSV")


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(
        prog="spherebounds",
        description="Optimal interpolation constants and Schrödinger eigenvalue bounds on spheres",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  spherebounds constants --d 3 --q 3
  spherebounds mu --d 3 --q 3 --alpha 6
  spherebounds alpha-of-mu --d 3 --q 3 --mu 6
  spherebounds mu-sweep --d 3 --q 3 --min 0.5 --max 20 --steps 40 --out fig1.csv
  spherebounds ratio-sweep --d 3 --q 3 --min 10 --max 500 --grading 3 --out fig2.csv
  spherebounds eigen --d 3 --p 3 --potential equality:6 --sign neg
  spherebounds verify --slow
""",
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="Debug logging")
    parser.add_argument("-q", "--quiet", action="store_true", help="Only warnings and errors")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_ArgumentParser)

    p = sub.add_parser("constants", help="Exponents and closed-form geometric constants")
    _add_common(p)
    p.add_argument("--q", type=_parse_q, help="Exponent q")
    p.add_argument("--p", type=float, help="Exponent p (q = 2p/(p-1))")

    for name, help_text in (("gns", "Euclidean constant K_{q,d}, q > 2"),
                            ("dual-gns", "Euclidean constant K*_{q,d}, q < 2")):
        p = sub.add_parser(name, help=help_text)
        _add_common(p)
        p.add_argument("--q", type=_parse_q, required=True)
        if name == "dual-gns":
            p.add_argument("--method", choices=["shooting", "grid"], default="shooting")

    p = sub.add_parser("mu", help="Optimal constant mu(alpha), q > 2")
    _add_common(p)
    p.add_argument("--q", type=_parse_q, required=True)
    p.add_argument("--alpha", type=float, required=True)

    p = sub.add_parser("nu", help="Optimal constant nu(beta), q < 2")
    _add_common(p)
    p.add_argument("--q", type=float, required=True)
    p.add_argument("--beta", type=float, required=True)

    p = sub.add_parser("xi", help="Logarithmic Sobolev constant xi(alpha)")
    _add_common(p)
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--alpha", type=float, required=True)

    p = sub.add_parser("alpha-of-mu", help="Inverse of mu(alpha)")
    _add_common(p)
    p.add_argument("--q", type=_parse_q, required=True)
    p.add_argument("--mu", type=float, required=True)

    for name, family, lo, hi in (("mu-sweep", Family.MU, 0.5, 20.0), ("ratio-sweep", Family.RATIO, 10.0, 500.0),
                                 ("nu-sweep", Family.NU, 0.1, 50.0), ("xi-sweep", Family.XI, 0.5, 50.0)):
        p = sub.add_parser(name, help=f"Sweep the {family.value} curve")
        _add_common(p)
        if family is Family.XI:
            p.add_argument("--p", type=float, required=True)
        else:
            p.add_argument("--q", type=_parse_q, required=True)
        _add_range(p, lo, hi)
        p.set_defaults(family=family)

    p = sub.add_parser("eigen", help="lambda_1 of -Laplacian -/+ V against its sharp bound")
    _add_common(p)
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--potential", required=True, metavar="SPEC",
                   help="const:C | file:PATH | equality:MU (equality:BETA for --sign pos)")
    p.add_argument("--sign", choices=["neg", "pos"], default="neg")
    p.add_argument("--alpha", type=float, help="Also check the exponential bound at this alpha")

    p = sub.add_parser("verify", help="Run the acceptance checks")
    _add_common(p)
    p.add_argument("--slow", action="store_true", help="Include the slow checks")
    p.add_argument("--check", action="append", metavar="NAME", help="Run only this check (repeatable)")
    p.add_argument("--list", action="store_true", help="List checks and exit")

    return parser


def _configure_logging(verbose: bool, quiet: bool) -> None:
    level = logging.DEBUG if verbose else logging.WARNING if quiet else logging.INFO
    logging.basicConfig(level=level, format="%(message)s", datefmt="[%X]", force=True,
                        handlers=[RichHandler(console=err_console, show_path=False)])


def _options(args) -> SolverOptions:
    opts = SolverOptions.from_yaml(args.config) if args.config else SolverOptions()
    changes: Dict[str, Any] = {}
    if args.grid is not None:
        changes["grid_size"] = args.grid
        changes["max_grid_size"] = max(args.grid, opts.max_grid_size)
    if args.seed is not None:
        changes["seed"] = args.seed
    if args.jobs is not None:
        changes["jobs"] = args.jobs
    return opts.replace(**changes) if changes else opts


def _emit(data: Dict[str, Any], args, title: str) -> None:
    """Write a {metadata, rows} payload in the requested format."""
    fmt = args.format or "table"
    if fmt == "table":
        table = Table(title=title, show_header=True, header_style="bold")
        columns = data.get("columns") or (list(data["rows"][0]) if data["rows"] else [])
        for name in columns:
            table.add_column(name, justify="right" if name not in ("branch", "status", "name") else "left")
        for row in data["rows"]:
            table.add_row(*[format_number(row.get(name), 12) for name in columns])
        if args.out:
            with Path(args.out).open("w", encoding="utf-8") as handle:
                Console(file=handle, width=200).print(table)
        else:
            console.print(table)
        return

    from .formatters.csv import CSVFormatter
    from .formatters.json import JSONFormatter, JSONLFormatter
    formatter = {"csv": CSVFormatter(), "json": JSONFormatter(), "jsonl": JSONLFormatter()}[fmt]
    output = formatter.format(data)
    if args.out:
        Path(args.out).write_text(output, encoding="utf-8")
    else:
        print(output, end="")


def _record(metadata: Dict[str, Any], **row: Any) -> Dict[str, Any]:
    return {"metadata": metadata, "rows": [row]}


def _cmd_constants(args, opts: SolverOptions) -> int:
    from .core.constants import GeometryConstants, ProblemParams, exponents

    if args.p is not None:
        params = ProblemParams.from_p(args.d, args.p)
    elif args.q is not None:
        params = exponents(args.d, args.q)
    else:
        raise DomainError("constants needs --q or --p")
    geometry = GeometryConstants.for_problem(args.d, params.q)
    row = {
        "d": params.d, "q": params.q, "p": params.p, "gamma": params.gamma,
        "theta": params.theta, "delta": params.delta, "alpha_star": params.alpha_star,
        "q_critical": params.q_critical, "line_threshold": params.line_threshold,
        "sphere_surface": geometry.sphere_surface, "kappa": geometry.kappa,
        "Z_d": geometry.Z_d, "sobolev": geometry.sobolev,
    }
    _emit(_record({"command": "constants"}, **row), args, "Constants")
    return EXIT_OK


def _cmd_gns(args, opts: SolverOptions) -> int:
    from .solvers.euclidean import dual_gns_constant, gns_constant

    if args.command == "gns":
        result = gns_constant(args.q, args.d, opts)
    else:
        result = dual_gns_constant(args.q, args.d, opts, method=args.method)
    row = {"d": args.d, "q": args.q, "constant": result.constant, "branch": result.branch.value}
    row.update({k: v for k, v in result.diagnostics.items() if isinstance(v, (int, float, str))})
    _emit(_record({"command": args.command}, **row), args, f"{args.command} constant")
    return EXIT_OK


def _cmd_constant(args, opts: SolverOptions) -> int:
    from .solvers import sphere_constants as sc

    if args.command == "mu":
        result = sc.mu(args.alpha, args.d, args.q, opts, grading=args.grading)
        row = {"alpha": args.alpha, "mu": result.value,
               "mu_lower": sc.mu_lower(args.alpha, args.d, args.q),
               "mu_upper": sc.mu_upper(args.alpha, args.d, args.q, opts)}
    elif args.command == "nu":
        result = sc.nu(args.beta, args.d, args.q, opts)
        row = {"beta": args.beta, "nu": result.value}
    else:
        result = sc.xi(args.alpha, args.d, args.p, opts)
        row = {"alpha": args.alpha, "xi": result.value, "xi_asymp": sc.xi_asymptotic(args.alpha, args.d, args.p)}
    row["branch"] = result.branch.value
    row.update({k: v for k, v in result.diagnostics.items() if isinstance(v, (int, float, str))})
    _emit(_record({"command": args.command, "d": args.d}, **row), args, args.command)
    return EXIT_OK


def _cmd_alpha_of_mu(args, opts: SolverOptions) -> int:
    from .solvers.sphere_constants import alpha_bounds_d1, alpha_of_mu

    alpha = alpha_of_mu(args.mu, args.d, args.q, opts, grading=args.grading)
    row: Dict[str, Any] = {"mu": args.mu, "alpha": alpha}
    code = EXIT_OK
    if args.d == 1 and math.isinf(args.q):
        low, high = alpha_bounds_d1(args.mu)
        row.update(lower=low, upper=high)
        if not low <= alpha <= high:
            code = EXIT_VIOLATION
    _emit(_record({"command": "alpha-of-mu", "d": args.d, "q": args.q}, **row), args, "alpha(mu)")
    return code


def _sweep_violations(result: SweepResult, tol: float) -> int:
    if result.spec.family is not Family.MU:
        return 0
    bad = 0
    for row in result.rows:
        if row["status"] == "ok" and not (row["mu_lower"] - tol <= row["mu"] <= row["mu_upper"] + tol):
            bad += 1
    return bad


def _cmd_sweep(args, opts: SolverOptions) -> int:
    exponent = args.p if args.family is Family.XI else args.q
    spec = SweepSpec(family=args.family, d=args.d, exponent=exponent, start=args.start, stop=args.stop,
                     steps=args.steps, spacing=Spacing(args.spacing), grid_size=opts.grid_size,
                     grading=args.grading)
    if args.quiet:
        result = run_sweep(spec, opts)
    else:
        with console.status(f"[bold green]Sweeping {spec.family.value}..."):
            result = run_sweep(spec, opts)

    args.format = args.format or "csv"
    _emit(result.to_dict(), args, f"{spec.family.value} sweep")
    if args.plot_script:
        from .formatters.plot import PlotScriptFormatter
        csv_path = args.out or "sweep.csv"
        script = PlotScriptFormatter(csv_path=csv_path).format(result.to_dict())
        Path(args.plot_script).write_text(script, encoding="utf-8")

    violations = _sweep_violations(result, 1e-6)
    if not args.quiet and args.out:
        summary = Text()
        summary.append("Sweep finished\n", style="bold green" if result.ok and not violations else "bold red")
        summary.append(f"Rows: {len(result.rows)} ({result.failed} failed)\n")
        if violations:
            summary.append(f"Bound violations: {violations}\n")
        summary.append(f"Output: {args.out}")
        err_console.print(Panel(summary, title="spherebounds", border_style="green"))
    if result.failed:
        return EXIT_SOLVER
    return EXIT_VIOLATION if violations else EXIT_OK


def _build_potential(spec: str, args, opts: SolverOptions):
    from .solvers import spectral
    from .solvers.sphere_constants import cached_grid

    kind, _, value = spec.partition(":")
    if not value:
        raise DomainError(f"potential must look like kind:value, got {spec!r}")
    grid = cached_grid(args.d, opts.grid_size, args.grading)
    if kind == "const":
        return spectral.Potential.constant(grid, float(value))
    if kind == "file":
        return spectral.Potential.from_csv(value, grid)
    if kind == "equality":
        if Sign.parse(args.sign) is Sign.MINUS:
            q = math.inf if args.p == 1 else 2.0 * args.p / (args.p - 1.0)
            return spectral.equality_potential(float(value), args.d, q, opts, grading=args.grading)
        return spectral.dual_equality_potential(float(value), args.d, 2.0 * args.p / (args.p + 1.0), opts)
    raise DomainError(f"unknown potential kind {kind!r}; use const, file or equality")


def _cmd_eigen(args, opts: SolverOptions) -> int:
    from .solvers import spectral

    pot = _build_potential(args.potential, args, opts)
    sign = Sign.parse(args.sign)
    if sign is Sign.MINUS:
        reports = [spectral.klt_report(pot, args.p, args.d, opts, args.tol)]
    else:
        reports = [spectral.dual_klt_report(pot, args.p, args.d, opts, args.tol)]
    if args.alpha is not None:
        reports.append(spectral.logsob_report(pot, args.alpha, args.p, args.d, opts, args.tol))

    rows = [report.to_dict() for report in reports]
    columns: List[str] = []
    for row in rows:
        columns.extend(k for k in row if k not in columns)
    _emit({"metadata": {"command": "eigen", "potential": args.potential}, "columns": columns, "rows": rows},
          args, "Spectral bounds")
    return EXIT_OK if all(r.passed for r in reports) else EXIT_VIOLATION


def _cmd_verify(args, opts: SolverOptions) -> int:
    from .core.verification import available_checks, run_checks

    if args.list:
        table = Table(title="Checks", show_header=True, header_style="bold")
        table.add_column("name")
        table.add_column("slow")
        table.add_column("description")
        for check in available_checks():
            table.add_row(check.name, "yes" if check.slow else "", check.description)
        console.print(table)
        return EXIT_OK

    try:
        results = run_checks(args.check, slow=args.slow, opts=opts, tol=args.tol)
    except KeyError as exc:
        raise DomainError(str(exc.args[0])) from None
    rows = [{"name": r.name, "status": "ok" if r.passed else "FAILED", "seconds": round(r.elapsed, 2),
             "detail": r.error or r.detail} for r in results]
    _emit({"metadata": {"command": "verify", "slow": args.slow}, "rows": rows}, args, "Verification")
    if any(r.error and r.error.startswith("SolverError") for r in results):
        return EXIT_SOLVER
    return EXIT_OK if all(r.passed for r in results) else EXIT_VIOLATION


_COMMANDS = {
    "constants": _cmd_constants,
    "gns": _cmd_gns,
    "dual-gns": _cmd_gns,
    "mu": _cmd_constant,
    "nu": _cmd_constant,
    "xi": _cmd_constant,
    "alpha-of-mu": _cmd_alpha_of_mu,
    "mu-sweep": _cmd_sweep,
    "ratio-sweep": _cmd_sweep,
    "nu-sweep": _cmd_sweep,
    "xi-sweep": _cmd_sweep,
    "eigen": _cmd_eigen,
    "verify": _cmd_verify,
}


def main(argv: Optional[List[str]] = None) -> int:
    """Main CLI entry point; returns the process exit code."""
    parser = build_parser()
    args = parser.parse_args(argv)
    _configure_logging(args.verbose, args.quiet)

    try:
        opts = _options(args)
        return _COMMANDS[args.command](args, opts)
    except SolverError as e:
        err_console.print(f"[red]Error: {e}[/red]")
        if args.verbose:
            err_console.print_exception()
        return EXIT_SOLVER
    except (DomainError, DataError) as e:
        err_console.print(f"[red]Error: {e}[/red]")
        return EXIT_USAGE
    except OSError as e:
        err_console.print(f"[red]Error: {e}[/red]")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
