"""Command-line front end: ``stablelaw {fit,roll,pdf,sample,ecf}``.

Every subcommand is a thin adapter over library calls; it only reads files,
formats rows and picks the exit code.
"""

from __future__ import annotations

import argparse
import datetime as dt
import io
import json
import math
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .density import DEFAULT_TOL, gaussian_pdf, pdf_grid
from .estimator import EstimationConfig, EstimationError, ecf_comparison, normalize_and_fit
from .market import PRICE_COLUMNS, PriceFormatError, ReturnSeries, log_returns, parse_prices, rolling_fit
from .params import StableDomainError, make_params
from .sampler import sample


class CliError(Exception):
    """Fatal, user-facing error; the message is printed and the exit code is 1."""


@dataclass
class OutputTable:
    columns: list
    rows: list = field(default_factory=list)

    def write(self, stream, fmt: str = "csv", precision: int | None = 6) -> None:
        if fmt == "csv":
            stream.write(",".join(self.columns) + "\n")
            for row in self.rows:
                stream.write(",".join(_csv_cell(v, precision) for v in row) + "\n")
        elif fmt == "json-lines":
            for row in self.rows:
                obj = {c: _json_cell(v, precision) for c, v in zip(self.columns, row)}
                stream.write(json.dumps(obj, separators=(",", ":")) + "\n")
        else:
            raise ValueError(f"unknown format {fmt!r}")


def _fmt_float(v: float, precision: int | None) -> str:
    if not math.isfinite(v):
        return "nan" if math.isnan(v) else ("inf" if v > 0 else "-inf")
    if precision is None:
        return repr(float(v))
    return format(v, f".{precision}g")


def _csv_cell(v, precision) -> str:
    if v is None:
        return ""
    if isinstance(v, (float, np.floating)):
        return _fmt_float(float(v), precision)
    if isinstance(v, (frozenset, set)):
        return ";".join(sorted(v))
    if isinstance(v, dt.date):
        return v.isoformat()
    return str(v)


def _json_cell(v, precision):
    if v is None:
        return None
    if isinstance(v, (float, np.floating)):
        v = float(v)
        if not math.isfinite(v):
            return None
        return v if precision is None else float(_fmt_float(v, precision))
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, (frozenset, set)):
        return sorted(v)
    if isinstance(v, dt.date):
        return v.isoformat()
    return v


def read_series(path: str, column: str = "close") -> ReturnSeries:
    """Load a price file (converted to log-returns) or a one-column sample file."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise CliError(f"{path}: {exc.strerror or exc}") from None
    symbol = Path(path).stem
    first = text.lstrip("﻿").split("\n", 1)[0].strip()
    header = [h.strip() for h in first.split(",")] if first else []
    if "Date" in header:
        try:
            prices = parse_prices(text, column=column, symbol=symbol)
        except PriceFormatError as exc:
            raise CliError(f"{path}: {exc}") from None
        for line_no, msg in prices.report.errors:
            print(f"warning: {path}: line {line_no}: {msg}", file=sys.stderr)
        if len(prices) < 2:
            raise CliError(f"{path}: need at least 2 prices, got {len(prices)}")
        return log_returns(prices)
    if len(header) != 1:
        if not header:
            raise CliError(f"{path}: no data rows")
        raise CliError(f"{path}: unrecognised header {first!r}; expected {','.join(PRICE_COLUMNS)} or a single column")
    values = []
    for line_no, line in enumerate(text.splitlines()[1:], start=2):
        line = line.strip()
        if not line:
            continue
        try:
            values.append(float(line))
        except ValueError:
            raise CliError(f"{path}: line {line_no}: not a number: {line!r}") from None
    if not values:
        raise CliError(f"{path}: no data rows")
    return ReturnSeries((), np.array(values), None, symbol)


def _config(args) -> EstimationConfig:
    try:
        return EstimationConfig(n_k_points=args.k_points, phi_floor=args.phi_floor)
    except ValueError as exc:
        raise CliError(str(exc)) from None


def _params(args):
    try:
        return make_params(args.alpha, args.beta, args.gamma, args.delta)
    except StableDomainError as exc:
        raise CliError(str(exc)) from None


def cmd_fit(args) -> tuple[OutputTable, bool]:
    table = OutputTable([
        "symbol", "n", "alpha", "beta", "gamma", "delta",
        "alpha_gamma_residual", "beta_delta_residual", "iterations", "flags",
    ])
    config = _config(args)
    ok = True
    for path in args.input:
        try:
            series = read_series(path, args.column)
            if len(series) < 100:
                raise CliError(f"{path}: need at least 100 returns, got {len(series)}")
            res = normalize_and_fit(series.returns, config)
        except CliError as exc:
            print(f"error: {exc}", file=sys.stderr)
            ok = False
            continue
        except EstimationError as exc:
            print(f"error: {path}: {exc}", file=sys.stderr)
            ok = False
            continue
        p = res.params
        table.rows.append([
            series.symbol, len(series), p.alpha, p.beta, p.gamma, p.delta,
            res.alpha_gamma_residual, res.beta_delta_residual, res.iterations, res.flags,
        ])
    return table, ok


def cmd_roll(args) -> tuple[OutputTable, bool]:
    series = read_series(args.input[0], args.column)
    if len(series) < args.window + 1:
        raise CliError(
            f"{args.input[0]}: {len(series)} returns but window {args.window} needs at least {args.window + 1}"
        )
    res = rolling_fit(series, args.window, _config(args), n_jobs=args.jobs)
    table = OutputTable(["index", "date", "price", "alpha", "beta", "gamma", "delta", "flags"])
    for j in range(len(res)):
        table.rows.append([
            int(res.indices[j]),
            res.dates[j] if res.dates else None,
            None if res.prices is None else float(res.prices[j]),
            res.alphas[j], res.betas[j], res.gammas[j], res.deltas[j], res.flags[j],
        ])
    return table, True


def cmd_pdf(args) -> tuple[OutputTable, bool]:
    params = _params(args)
    grid = pdf_grid(params, args.x_min, args.x_max, args.n_points, args.tol)
    gauss = gaussian_pdf(params, grid.x_values)
    table = OutputTable(["x", "stable", "gaussian"])
    table.rows = [[x, f, g] for x, f, g in zip(grid.x_values, grid.f_values, gauss)]
    return table, True


def cmd_sample(args) -> tuple[OutputTable, bool]:
    if args.n < 1:
        raise CliError("n must be >= 1")
    batch = sample(_params(args), args.n, args.seed)
    return OutputTable(["value"], [[v] for v in batch.values]), True


def cmd_ecf(args) -> tuple[OutputTable, bool]:
    series = read_series(args.input[0], args.column)
    if len(series) < 100:
        raise CliError(f"{args.input[0]}: need at least 100 returns, got {len(series)}")
    if not (args.k_max > 0 and args.n_k >= 1):
        raise CliError("--k-max must be > 0 and --n-k >= 1")
    k = args.k_max * np.arange(1, args.n_k + 1) / args.n_k
    _, ecf, model = ecf_comparison(series.returns, k, _config(args))
    table = OutputTable(["k", "re_empirical", "im_empirical", "re_fit", "im_fit"])
    table.rows = [
        [kj, e.real, e.imag, m.real, m.imag] for kj, e, m in zip(ecf.k_values, ecf.phi_values, model)
    ]
    return table, True


def _precision(text: str):
    if text == "full":
        return None
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("precision must be >= 1 or 'full'")
    return value


def _jobs(text: str) -> int:
    if text == "max":
        return os.cpu_count() or 1
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("jobs must be >= 1 or 'max'")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output", "-o", help="output file (default: stdout)")
    common.add_argument("--format", choices=["csv", "json-lines"], default="csv")
    common.add_argument("--precision", type=_precision, default=6,
                        help="significant digits, or 'full' for round-trip precision (default 6)")

    estimation = argparse.ArgumentParser(add_help=False)
    estimation.add_argument("--column", choices=["close", "adjclose"], default="close")
    estimation.add_argument("--k-points", type=int, default=10, help="regression points (default 10)")
    estimation.add_argument("--phi-floor", type=float, default=0.3,
                            help="grid ends where |phi_N| first drops below this (default 0.3)")

    params = argparse.ArgumentParser(add_help=False)
    params.add_argument("--alpha", type=float, required=True)
    params.add_argument("--beta", type=float, default=0.0)
    params.add_argument("--gamma", type=float, default=1.0)
    params.add_argument("--delta", type=float, default=0.0)

    parser = argparse.ArgumentParser(prog="stablelaw", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fit", parents=[common, estimation], help="fit one row per input file")
    p.add_argument("--input", "-i", nargs="+", required=True)
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("roll", parents=[common, estimation], help="rolling-window (alpha, beta) tracks")
    p.add_argument("--input", "-i", nargs=1, required=True)
    p.add_argument("--window", type=int, default=1000)
    p.add_argument("--jobs", type=_jobs, default=1, help="worker threads, or 'max'")
    p.set_defaults(func=cmd_roll)

    p = sub.add_parser("pdf", parents=[common, params], help="stable and matched Gaussian densities")
    p.add_argument("--x-min", type=float, default=-10.0)
    p.add_argument("--x-max", type=float, default=10.0)
    p.add_argument("--n-points", type=int, default=201)
    p.add_argument("--tol", type=float, default=DEFAULT_TOL)
    p.set_defaults(func=cmd_pdf)

    p = sub.add_parser("sample", parents=[common, params], help="draw stable variates")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("ecf", parents=[common, estimation], help="empirical vs fitted characteristic function")
    p.add_argument("--input", "-i", nargs=1, required=True)
    p.add_argument("--k-max", type=float, default=5.0, help="largest k on the normalized scale (default 5)")
    p.add_argument("--n-k", type=int, default=100)
    p.set_defaults(func=cmd_ecf)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        table, ok = args.func(args)
    except (CliError, StableDomainError, EstimationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    buffer = io.StringIO()
    table.write(buffer, args.format, args.precision)
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(buffer.getvalue())
    else:
        sys.stdout.write(buffer.getvalue())
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
