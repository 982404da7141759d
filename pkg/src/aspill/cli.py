"""Command-line interface for asymmetric volatility spillover analysis.

Subcommands compose the library stages: fetch (remote data to CSV),
decompose (component export), analyze (tables, net measures, optional
rolling), roll (rolling outputs only), and report (re-render a table).
"""

from __future__ import annotations

import argparse
import dataclasses
import sys
from datetime import date
from pathlib import Path

from .decomposition import ShockSide, TrendSpec, decompose_panel
from .errors import AspillError, PipelineError
from .fred import DEFAULT_CACHE_DIR, fetch_fred
from .panel import Panel, align, load_csv, log_transform, parse_date, write_csv
from .pipeline import RunConfig, config_from_manifest, run_pipeline
from .report import parse_table_csv, render_table
from .version import __version__

_DIRECTIONAL_NOTE = (
    "Directional measures use the received/transmitted convention: volatility "
    "received by variable i is its off-diagonal row sum divided by the variable "
    "count, volatility transmitted is the off-diagonal column sum divided by the "
    "variable count, so each set sums to the total spillover index. The ratio "
    "form sometimes printed for these measures divides a sum by itself and is "
    "identically 100; it is documented here for completeness and never emitted."
)


def _columns_arg(text: str) -> tuple[str, ...]:
    columns = tuple(c.strip() for c in text.split(",") if c.strip())
    if not columns:
        raise argparse.ArgumentTypeError("expected a comma-separated list of column names")
    return columns


def _sides_arg(text: str) -> tuple[ShockSide, ...]:
    sides: list[ShockSide] = []
    for token in text.split(","):
        token = token.strip()
        if not token:
            continue
        try:
            side = ShockSide(token)
        except ValueError:
            raise argparse.ArgumentTypeError(
                f"unknown side {token!r}; choose from pos,neg,sym"
            ) from None
        if side not in sides:
            sides.append(side)
    if not sides:
        raise argparse.ArgumentTypeError("at least one side is required")
    return tuple(sides)


def _trend_arg(text: str) -> TrendSpec:
    try:
        return TrendSpec(text)
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"unknown trend {text!r}; choose from none,drift,trend"
        ) from None


def _date_arg(text: str) -> date:
    try:
        return parse_date(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"cannot parse date {text!r}") from None


def _add_panel_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--input", help="CSV file with a date column and one column per series")
    parser.add_argument("--columns", type=_columns_arg, help="comma-separated value columns")
    parser.add_argument("--date-column", default="date", help="name of the date column")
    parser.add_argument("--log", action="store_true", help="use natural logs of the values")


def _add_model_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--trend", type=_trend_arg, default=TrendSpec.DRIFT,
                        help="deterministic part of the walk: none, drift, or trend")
    parser.add_argument("--lags", type=int, help="fixed lag order; omit to select by criterion")
    parser.add_argument("--lag-select", default="hjc", choices=("hjc", "aic", "sic", "hqc"),
                        help="criterion used when --lags is omitted")
    parser.add_argument("--max-lags", type=int, default=8,
                        help="largest candidate order for lag selection")
    parser.add_argument("--ty-augment", action="store_true",
                        help="estimate one extra unrestricted lag kept out of the propagation")
    parser.add_argument("--sigma-scaling", default="jj", choices=("jj", "ii"),
                        help="variance scaling the shares: jj is the standard generalized form")
    parser.add_argument("--horizon", type=int, default=10, help="forecast horizon n")
    parser.add_argument("--sides", type=_sides_arg, default=(
        ShockSide.POSITIVE, ShockSide.NEGATIVE, ShockSide.SYMMETRIC),
        help="comma-separated subset of pos,neg,sym")
    parser.add_argument("--seed", type=int, help="seed recorded for simulation fixtures")


def _add_rolling_options(parser: argparse.ArgumentParser, required: bool) -> None:
    parser.add_argument("--window", type=int, required=required,
                        help="observations per rolling window")
    parser.add_argument("--step", type=int, default=1, help="stride between windows")
    parser.add_argument("--decompose-per-window", action="store_true",
                        help="re-anchor the component transform inside every window")


def _config_from_args(args: argparse.Namespace, emit_tables: bool) -> RunConfig:
    if args.input is None or args.columns is None:
        raise AspillError("--input and --columns are required (or use --from-manifest)")
    return RunConfig(
        input_path=args.input,
        columns=args.columns,
        out_dir=args.out if args.out is not None else "./results",
        date_column=args.date_column,
        log=args.log,
        trend=args.trend,
        lags=args.lags,
        lag_select=args.lag_select,
        max_lags=args.max_lags,
        ty_augment=args.ty_augment,
        sigma_scaling=args.sigma_scaling,
        horizon=args.horizon,
        sides=args.sides,
        window=args.window,
        step=args.step,
        decompose_per_window=args.decompose_per_window,
        emit_tables=emit_tables,
        seed=args.seed,
    )


def _run_and_report(cfg: RunConfig) -> int:
    manifest = run_pipeline(cfg)
    for side in cfg.sides:
        summary = manifest.sides[side.value]
        line = f"{side.value}: lag={summary['lag']} index={summary['total_spillover']:.2f}%"
        if "rolling" in summary:
            rolling = summary["rolling"]
            line += f" windows={rolling['windows']} gaps={rolling['gaps']}"
        print(line)
    print(f"wrote {Path(cfg.out_dir) / 'manifest.json'}")
    return 0


def _cmd_analyze(args: argparse.Namespace) -> int:
    if args.from_manifest:
        cfg = config_from_manifest(args.from_manifest)
        if args.out is not None:
            cfg = dataclasses.replace(cfg, out_dir=args.out)
    else:
        cfg = _config_from_args(args, emit_tables=True)
    return _run_and_report(cfg)


def _cmd_roll(args: argparse.Namespace) -> int:
    cfg = _config_from_args(args, emit_tables=False)
    return _run_and_report(cfg)


def _cmd_decompose(args: argparse.Namespace) -> int:
    if args.input is None or args.columns is None:
        raise AspillError("--input and --columns are required")
    panel, dropped = load_csv(args.input, args.date_column, args.columns)
    if args.log:
        panel = log_transform(panel)
    decomposed = decompose_panel(panel, args.trend)
    interleaved = []
    for plus, minus in zip(decomposed.plus_panel.series, decomposed.minus_panel.series):
        interleaved += [plus, minus]
    out_path = Path(args.out)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    write_csv(Panel(tuple(interleaved)), out_path, date_column=args.date_column)
    print(f"wrote {out_path} ({len(panel)} rows, {dropped} dropped)")
    return 0


def _cmd_fetch(args: argparse.Namespace) -> int:
    ids = args.series
    date_range = (args.start, args.end)
    panels = []
    for series_id in ids:
        series = fetch_fred(
            series_id, api_key=args.api_key, date_range=date_range, cache_dir=args.cache_dir
        )
        panels.append(Panel((series,)))
        print(f"{series_id}: {len(series)} observations")
    panel = panels[0] if len(panels) == 1 else align(panels)
    out_path = Path(args.out)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    write_csv(panel, out_path)
    print(f"wrote {out_path} ({len(panel)} aligned rows)")
    return 0


def _cmd_report(args: argparse.Namespace) -> int:
    table = parse_table_csv(Path(args.table).read_text(encoding="utf-8"))
    text = render_table(table, args.format)
    if args.out:
        out_path = Path(args.out)
        out_path.parent.mkdir(parents=True, exist_ok=True)
        out_path.write_text(text, encoding="utf-8")
        print(f"wrote {out_path}")
    else:
        print(text, end="")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="aspill",
        description="Asymmetric volatility spillover analysis on positive and "
        "negative cumulative shock components.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    analyze = sub.add_parser(
        "analyze",
        help="full pipeline: tables, net measures, optional rolling outputs",
        epilog=_DIRECTIONAL_NOTE,
    )
    _add_panel_options(analyze)
    _add_model_options(analyze)
    _add_rolling_options(analyze, required=False)
    analyze.add_argument("--out", help="output directory (default ./results)")
    analyze.add_argument(
        "--from-manifest",
        help="re-run the configuration stored in a manifest; an explicit "
        "--out redirects the outputs",
    )
    analyze.set_defaults(func=_cmd_analyze)

    roll = sub.add_parser(
        "roll",
        help="rolling spillover index and chart only",
        epilog=_DIRECTIONAL_NOTE,
    )
    _add_panel_options(roll)
    _add_model_options(roll)
    _add_rolling_options(roll, required=True)
    roll.add_argument("--out", help="output directory", default="./results")
    roll.set_defaults(func=_cmd_roll)

    decompose = sub.add_parser(
        "decompose", help="export positive/negative components as CSV"
    )
    _add_panel_options(decompose)
    decompose.add_argument("--trend", type=_trend_arg, default=TrendSpec.DRIFT,
                           help="deterministic part of the walk: none, drift, or trend")
    decompose.add_argument("--out", required=True, help="output CSV path")
    decompose.set_defaults(func=_cmd_decompose)

    fetch = sub.add_parser("fetch", help="download series from FRED into an aligned CSV")
    fetch.add_argument("--series", type=_columns_arg, required=True,
                       help="comma-separated FRED series ids")
    fetch.add_argument("--start", type=_date_arg, help="first observation date")
    fetch.add_argument("--end", type=_date_arg, help="last observation date")
    fetch.add_argument("--api-key", help="FRED API key; defaults to FRED_API_KEY")
    fetch.add_argument("--cache-dir", default=DEFAULT_CACHE_DIR,
                       help="plain-text cache directory")
    fetch.add_argument("--out", required=True, help="output CSV path")
    fetch.set_defaults(func=_cmd_fetch)

    report = sub.add_parser("report", help="re-render a table CSV as csv, json, or markdown")
    report.add_argument("--table", required=True, help="table CSV produced by analyze")
    report.add_argument("--format", default="markdown", choices=("csv", "json", "markdown"))
    report.add_argument("--out", help="output path; prints to stdout when omitted")
    report.set_defaults(func=_cmd_report)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except PipelineError as exc:
        for side, stage, message in exc.failures:
            print(f"error [{side}/{stage}]: {message}", file=sys.stderr)
        return 1
    except (AspillError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
