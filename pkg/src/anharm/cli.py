"""Command-line front end.

Subcommands:
  series   raw corrections E_k and partial sums for one state
  renorm   trial-frequency optimization of the renormalized partial sum
  numerov  radial shooting eigenvalue for the same potential
  table1   the six benchmark columns against the reference values
  verify   cross-oracle consistency suite

Exit codes: 0 success, 2 configuration error, 3 numerical failure,
4 no optimization root bracketed, 5 failed tolerance checks.

Output formats: a human table (default), CSV with RFC 4180 quoting, or
JSON with one object per row and a fixed key order.  Numbers print with
six decimals unless --full-precision is given.  Payloads carry no
timestamps and root lists are sorted, so identical inputs give
byte-identical CSV/JSON across runs; diagnostics go to standard error.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import sys
from fractions import Fraction

from anharm import numerov
from anharm import table as table_mod
from anharm import verify as verify_mod
from anharm.engine import build_table, energy_corrections
from anharm.errors import (AnharmError, ConfigError, NoRootError,
                           SingularFrequencyError)
from anharm.model import RunConfig, load_config
from anharm.renorm import (MINIMAL_DIFFERENCE, MINIMAL_SENSITIVITY,
                           RenormConfig, optimize_omega0)
from anharm.scalars import ScalarConfig

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3
EXIT_NO_ROOT = 4
EXIT_CHECKS = 5


# ---------------------------------------------------------------- output

def _text_value(value, full: bool) -> str:
    if isinstance(value, bool):
        return "yes" if value else "no"
    if isinstance(value, (int, str)):
        return str(value)
    if isinstance(value, Fraction):
        return str(value) if full else f"{_six(value):.6f}"
    if full:
        # float repr round-trips; mpfr str carries the working precision
        return repr(value) if isinstance(value, float) else str(value)
    return f"{_six(value):.6f}"


def _six(value) -> float:
    # +0.0 folds the negative zero that rounding tiny negatives produces
    return round(float(value), 6) + 0.0


def _json_value(value, full: bool):
    if isinstance(value, (bool, int, str)):
        return value
    if isinstance(value, Fraction):
        return str(value) if full else _six(value)
    if isinstance(value, float):
        return value if full else _six(value)
    return str(value) if full else _six(value)


def _render(rows, fieldnames, args, stream=None) -> None:
    stream = stream or sys.stdout
    full = args.full_precision
    if args.format == "json":
        import json
        for row in rows:
            payload = {key: _json_value(row[key], full) for key in fieldnames}
            stream.write(json.dumps(payload) + "\n")
    elif args.format == "csv":
        writer = csv.writer(stream, lineterminator="\r\n")
        writer.writerow(fieldnames)
        for row in rows:
            writer.writerow([_text_value(row[key], full) for key in fieldnames])
    else:
        cells = [[_text_value(row[key], full) for key in fieldnames]
                 for row in rows]
        widths = [max(len(name), *(len(line[i]) for line in cells)) if cells
                  else len(name) for i, name in enumerate(fieldnames)]
        header = "  ".join(name.rjust(w) for name, w in zip(fieldnames, widths))
        stream.write(header + "\n")
        for line in cells:
            stream.write("  ".join(s.rjust(w) for s, w in zip(line, widths))
                         + "\n")


def _warn(message: str) -> None:
    sys.stderr.write(message + "\n")


# ---------------------------------------------------------------- config

def _run_config(args) -> RunConfig:
    """Config file values with command-line flags taking precedence."""
    config = load_config(args.config)
    order = config.order if getattr(args, "order", None) is None else args.order
    backend = config.scalar.backend
    digits = config.scalar.digits
    if getattr(args, "backend", None) is not None:
        backend = args.backend
    if getattr(args, "digits", None) is not None:
        digits = args.digits
    return RunConfig(config.potential, config.state, order,
                     ScalarConfig(backend=backend, digits=digits))


def _interval(text: str) -> tuple[float, float]:
    try:
        lo_text, hi_text = text.split(":")
        return float(lo_text), float(hi_text)
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"expected LO:HI with numeric endpoints, got {text!r}")


# ------------------------------------------------------------- commands

def cmd_series(args) -> int:
    config = _run_config(args)
    table = build_table(config.potential, config.state, config.order,
                        scalar=config.scalar)
    series = energy_corrections(table)
    rows = [{"k": k,
             "correction": series.correction(k),
             "partial_sum": series.partial_sum(k)}
            for k in range(1, config.order + 1)]
    order = config.order
    if order >= 3:
        tail = [abs(series.correction(k)) for k in range(order - 2, order + 1)]
        if tail[2] > tail[1] > tail[0]:
            _warn(f"warning: raw series diverging: |E_k| strictly increasing "
                  f"over k = {order - 2}..{order}; use the renorm command "
                  "for a convergent resummation")
    _render(rows, ("k", "correction", "partial_sum"), args)
    return EXIT_OK


def cmd_renorm(args) -> int:
    config = _run_config(args)
    # the optimizer runs on floats regardless of the series backend
    config = RunConfig(config.potential, config.state, config.order,
                       ScalarConfig(backend="float",
                                    digits=config.scalar.digits))
    rconfig = RenormConfig(scheme=args.scheme,
                           search_interval=args.search,
                           grid_points=args.grid_points,
                           tolerance=args.tolerance)
    result = optimize_omega0(config.potential, config.state, config.order,
                             rconfig, scalar=config.scalar)
    if result.frequency_extension:
        _warn("note: omega = 0 lies outside the raw expansion; the "
              "renormalized sum is still defined and was computed")
    if args.format == "human":
        lo, hi = result.search_interval
        sys.stdout.write(
            f"order {result.order}, scheme {result.scheme}, "
            f"interval [{lo:g}, {hi:g}]\n"
            f"optimized omega0 = {_text_value(result.omega0, args.full_precision)}\n"
            f"partial sum S_{result.order} = "
            f"{_text_value(result.partial_sum, args.full_precision)}\n"
            "candidate roots:\n")
    winner = float(result.omega0)
    rows = [{"order": result.order,
             "omega0": float(c.omega0),
             "partial_sum": float(c.partial_sum),
             "correction": float(c.correction),
             "curvature": abs(float(c.curvature)),
             "selected": float(c.omega0) == winner}
            for c in result.candidates]
    _render(rows, ("order", "omega0", "partial_sum", "correction",
                   "curvature", "selected"), args)
    return EXIT_OK


def cmd_numerov(args) -> int:
    config = _run_config(args)
    overrides = {key: getattr(args, key) for key in
                 ("r_max", "step", "bracket", "match_fraction", "tolerance")
                 if getattr(args, key) is not None}
    grid = None
    if overrides:
        grid = dataclasses.replace(
            numerov.auto_grid(config.potential, config.state), **overrides)
    energy = numerov.solve_eigenvalue(config.potential, config.state, grid)
    rows = [{"n": config.state.n, "l": config.state.l, "energy": energy}]
    _render(rows, ("n", "l", "energy"), args)
    return EXIT_OK


def _table_matrix(result, args, stream) -> None:
    """Three aligned grids: our values, the reference, and the deltas."""
    full = args.full_precision
    labels = [f"({c.n},{c.l}) {c.coupling_key}" for c in result.columns]
    orders = list(result.orders)

    def grid(title, cell):
        names = ["N"] + labels
        lines = []
        for order in orders + ["E_num"]:
            line = [str(order)]
            for column in result.columns:
                line.append(cell(column, order))
            lines.append(line)
        widths = [max(len(names[i]), *(len(line[i]) for line in lines))
                  for i in range(len(names))]
        stream.write(title + "\n")
        stream.write("  ".join(n.rjust(w) for n, w in zip(names, widths)) + "\n")
        for line in lines:
            stream.write("  ".join(s.rjust(w) for s, w in zip(line, widths))
                         + "\n")
        stream.write("\n")

    def ours(column, order):
        value = column.numeric if order == "E_num" else column.partial_sum(order)
        return _text_value(float(value), full)

    def reference(column, order):
        value = (column.reference_numeric if order == "E_num"
                 else column.reference_sum(order))
        return "-" if value is None else _text_value(value, full)

    def delta(column, order):
        if order == "E_num":
            got, want = column.numeric, column.reference_numeric
        else:
            got, want = column.partial_sum(order), column.reference_sum(order)
        return "-" if want is None else f"{float(got) - float(want):+.2e}"

    grid("partial sums and radial eigenvalue", ours)
    grid("reference values", reference)
    grid("delta (ours - reference)", delta)


def cmd_table1(args) -> int:
    orders = tuple(o for o in table_mod.TABLE_ORDERS if o <= args.max_order)
    if not orders:
        raise ConfigError(
            f"--max-order must be >= {table_mod.TABLE_ORDERS[0]}")
    result = table_mod.compute_table(orders,
                                     digits=args.digits,
                                     grid_points=args.grid_points,
                                     workers=args.workers)
    if args.format == "human":
        _table_matrix(result, args, sys.stdout)
    else:
        rows = []
        for order in result.orders:
            for column in result.columns:
                value = float(column.partial_sum(order))
                ref = column.reference_sum(order)
                rows.append({"order": order, "n": column.n, "l": column.l,
                             "coupling": column.coupling_key, "value": value,
                             "reference": ref,
                             "delta": value - float(ref)})
        for column in result.columns:
            value = float(column.numeric)
            ref = column.reference_numeric
            rows.append({"order": "E_num", "n": column.n, "l": column.l,
                         "coupling": column.coupling_key, "value": value,
                         "reference": ref, "delta": value - float(ref)})
        _render(rows, ("order", "n", "l", "coupling", "value", "reference",
                       "delta"), args)
    failures = [(name, detail) for name, ok, detail in result.checks()
                if not ok]
    if failures:
        for name, detail in failures:
            _warn(f"FAIL {name}: {detail}")
        _warn(f"{len(failures)} tolerance check(s) failed")
        return EXIT_CHECKS
    _warn("all tolerance checks passed")
    return EXIT_OK


def cmd_verify(args) -> int:
    results = verify_mod.run_checks(quick=args.quick)
    if args.format == "human":
        for r in results:
            status = "PASS" if r.passed else "FAIL"
            sys.stdout.write(f"{status}  {r.name}  ({r.seconds:.2f} s)  "
                             f"{r.detail}\n")
    else:
        rows = [{"check": r.name, "passed": r.passed, "detail": r.detail}
                for r in results]
        _render(rows, ("check", "passed", "detail"), args)
    failed = [r.name for r in results if not r.passed]
    if failed:
        _warn("failed checks: " + ", ".join(failed))
        return EXIT_CHECKS
    return EXIT_OK


# --------------------------------------------------------------- parser

def _add_output_flags(parser) -> None:
    parser.add_argument("--format", choices=("human", "csv", "json"),
                        default="human", help="output format")
    parser.add_argument("--full-precision", action="store_true",
                        help="print full working precision instead of "
                             "6 decimals")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="anharm",
        description="Bound-state energies of the spherical anharmonic "
                    "oscillator from the renormalized logarithmic "
                    "perturbation expansion.")
    sub = parser.add_subparsers(dest="command", required=True)

    series = sub.add_parser("series",
                            help="raw corrections E_k and partial sums")
    series.add_argument("config", help="JSON config file")
    series.add_argument("--order", type=int, help="number of corrections")
    series.add_argument("--backend", help="scalar backend "
                                          "(float or exact-rational)")
    series.add_argument("--digits", type=int, help="float backend precision")
    _add_output_flags(series)
    series.set_defaults(func=cmd_series)

    renorm = sub.add_parser("renorm",
                            help="optimize the trial frequency and resum")
    renorm.add_argument("config", help="JSON config file")
    renorm.add_argument("--order", type=int, help="partial sum order N")
    renorm.add_argument("--scheme",
                        choices=(MINIMAL_SENSITIVITY, MINIMAL_DIFFERENCE),
                        default=MINIMAL_SENSITIVITY)
    renorm.add_argument("--search", type=_interval, metavar="LO:HI",
                        help="trial frequency scan interval")
    renorm.add_argument("--grid-points", type=int, default=2000,
                        help="scan resolution")
    renorm.add_argument("--tolerance", type=float, default=1e-12,
                        help="root refinement tolerance")
    renorm.add_argument("--digits", type=int, help="float backend precision")
    _add_output_flags(renorm)
    renorm.set_defaults(func=cmd_renorm)

    numerov_p = sub.add_parser("numerov",
                               help="radial shooting eigenvalue")
    numerov_p.add_argument("config", help="JSON config file")
    numerov_p.add_argument("--r-max", dest="r_max", type=float,
                           help="integration range")
    numerov_p.add_argument("--step", type=float, help="grid spacing")
    numerov_p.add_argument("--bracket", type=_interval, metavar="LO:HI",
                           help="energy bracket")
    numerov_p.add_argument("--match-fraction", dest="match_fraction",
                           type=float, help="matching point as a fraction "
                                            "of r_max")
    numerov_p.add_argument("--tolerance", type=float,
                           help="eigenvalue tolerance")
    _add_output_flags(numerov_p)
    numerov_p.set_defaults(func=cmd_numerov)

    table1 = sub.add_parser("table1",
                            help="benchmark grid against reference values")
    table1.add_argument("--max-order", type=int, default=40,
                        help="highest partial sum order")
    table1.add_argument("--digits", type=int, default=40,
                        help="float backend precision")
    table1.add_argument("--grid-points", type=int, default=2000,
                        help="trial frequency scan resolution")
    table1.add_argument("--workers", type=int,
                        help="process count for the six columns "
                             f"(capped by ${table_mod.WORKER_ENV})")
    _add_output_flags(table1)
    table1.set_defaults(func=cmd_table1)

    verify = sub.add_parser("verify", help="cross-oracle consistency suite")
    verify.add_argument("--quick", action="store_true",
                        help="subset finishing in a few seconds")
    _add_output_flags(verify)
    verify.set_defaults(func=cmd_verify)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except SingularFrequencyError as exc:
        _warn(f"error: {exc}")
        _warn("hint: the renorm command handles omega = 0")
        return EXIT_CONFIG
    except ConfigError as exc:
        _warn(f"error: {exc}")
        return EXIT_CONFIG
    except NoRootError as exc:
        _warn(f"error: {exc}")
        return EXIT_NO_ROOT
    except AnharmError as exc:
        _warn(f"error: {exc}")
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
