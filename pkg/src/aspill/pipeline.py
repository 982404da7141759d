"""End-to-end run orchestration: ingest, transform, estimate, emit.

A run processes each requested shock side independently, writes its
tables, net measures, and optional rolling outputs, and finishes by
writing manifest.json. The manifest holds the resolved configuration and
input digests, never timestamps, so re-running from it reproduces every
output byte for byte; its presence marks a completed run.
"""

from __future__ import annotations

import hashlib
import json
import os
import warnings
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Any

from .connectedness import build_table, compute_fevd, net_measures
from .decomposition import DecomposedPanel, ShockSide, TrendSpec, component_panel, decompose_panel
from .errors import AspillError, ManifestMismatchError, PipelineError
from .panel import Panel, load_csv, log_transform
from .report import render_net_json, render_rolling_csv, render_table
from .rolling import RollingConfig, rolling_tables
from .svgchart import render_plot
from .var_engine import VarSpec, estimate_var, ma_coefficients, select_lag
from .version import __version__

MANIFEST_NAME = "manifest.json"

_ALL_SIDES = (ShockSide.POSITIVE, ShockSide.NEGATIVE, ShockSide.SYMMETRIC)


@dataclass(frozen=True)
class RunConfig:
    """Everything a run needs; serializable into the manifest."""

    input_path: str
    columns: tuple[str, ...]
    out_dir: str
    date_column: str = "date"
    log: bool = False
    trend: TrendSpec = TrendSpec.DRIFT
    lags: int | None = None
    lag_select: str = "hjc"
    max_lags: int = 8
    ty_augment: bool = False
    sigma_scaling: str = "jj"
    horizon: int = 10
    sides: tuple[ShockSide, ...] = _ALL_SIDES
    window: int | None = None
    step: int = 1
    decompose_per_window: bool = False
    emit_tables: bool = True
    seed: int | None = None

    def __post_init__(self) -> None:
        if not self.sides:
            raise ValueError("at least one shock side must be requested")
        if self.horizon < 1:
            raise ValueError(f"horizon must be >= 1, got {self.horizon}")
        if not self.columns:
            raise ValueError("at least one value column must be named")
        if self.lags is not None and self.lags < 1:
            raise ValueError(f"lag order must be >= 1, got {self.lags}")

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {}
        for f in fields(self):
            value = getattr(self, f.name)
            if isinstance(value, TrendSpec):
                value = value.value
            elif f.name == "sides":
                value = [side.value for side in value]
            elif isinstance(value, tuple):
                value = list(value)
            out[f.name] = value
        return out

    @classmethod
    def from_dict(cls, raw: dict[str, Any]) -> "RunConfig":
        data = dict(raw)
        data["columns"] = tuple(data["columns"])
        data["trend"] = TrendSpec(data["trend"])
        data["sides"] = tuple(ShockSide(s) for s in data["sides"])
        return cls(**data)


@dataclass(frozen=True)
class RunManifest:
    """Record of one completed run."""

    version: str
    config: dict[str, Any]
    inputs: dict[str, Any]
    sides: dict[str, Any]

    def to_json(self) -> str:
        payload = {
            "version": self.version,
            "config": self.config,
            "inputs": self.inputs,
            "sides": self.sides,
        }
        return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def _write_text(path: Path, text: str) -> None:
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(text, encoding="utf-8")
    os.replace(tmp, path)


def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def _run_side(
    cfg: RunConfig,
    side: ShockSide,
    panel: Panel,
    decomposed: DecomposedPanel | None,
    labels: tuple[str, ...],
    out_dir: Path,
    stage_box: list[str],
) -> dict[str, Any]:
    summary: dict[str, Any] = {}
    files: dict[str, str] = {}
    caught: list[str] = []

    stage_box[0] = "component"
    side_panel = panel if side is ShockSide.SYMMETRIC else component_panel(decomposed, panel, side)

    with warnings.catch_warnings(record=True) as records:
        warnings.simplefilter("always")
        stage_box[0] = "lag-select"
        lag = cfg.lags if cfg.lags is not None else select_lag(side_panel, cfg.max_lags, cfg.lag_select)
        var_spec = VarSpec(p=lag, ty_extra_lags=1 if cfg.ty_augment else 0)
        stage_box[0] = "estimate"
        fit = estimate_var(side_panel, var_spec)
        stage_box[0] = "fevd"
        ma = ma_coefficients(fit, cfg.horizon)
        fevd = compute_fevd(ma, fit.Gamma, cfg.horizon, cfg.sigma_scaling)
        stage_box[0] = "table"
        table = build_table(fevd.normalized, labels)
        net = net_measures(table)
        caught.extend(str(r.message) for r in records)

    summary["lag"] = lag
    summary["total_spillover"] = table.total_spillover

    if cfg.emit_tables:
        stage_box[0] = "write-tables"
        for fmt, ext in (("csv", "csv"), ("json", "json"), ("markdown", "md")):
            name = f"table_{side.value}.{ext}"
            _write_text(out_dir / name, render_table(table, fmt))
            files[f"table_{ext}"] = name
        net_name = f"net_{side.value}.json"
        _write_text(out_dir / net_name, render_net_json(net))
        files["net_json"] = net_name

    if cfg.window is not None:
        stage_box[0] = "rolling"
        rolling_cfg = RollingConfig(
            window=cfg.window,
            horizon=cfg.horizon,
            var_spec=var_spec,
            trend_spec=cfg.trend,
            shock_side=side,
            step=cfg.step,
            sigma_scaling=cfg.sigma_scaling,
        )
        with warnings.catch_warnings(record=True) as rolling_records:
            warnings.simplefilter("always")
            windows = rolling_tables(panel, rolling_cfg, cfg.decompose_per_window)
            caught.extend(str(r.message) for r in rolling_records)
        series = windows.index_series()
        stage_box[0] = "write-rolling"
        csv_name = f"rolling_{side.value}.csv"
        svg_name = f"rolling_{side.value}.svg"
        _write_text(out_dir / csv_name, render_rolling_csv(series))
        render_plot(series, out_dir / svg_name)
        files["rolling_csv"] = csv_name
        files["rolling_svg"] = svg_name
        gaps = {
            when.isoformat(): reason
            for when, reason in zip(series.window_end_dates, series.gap_reasons)
            if reason is not None
        }
        summary["rolling"] = {"windows": len(series), "gaps": len(gaps), "gap_reasons": gaps}

    summary["files"] = files
    summary["warnings"] = sorted(set(caught))
    return summary


def run_pipeline(cfg: RunConfig) -> RunManifest:
    """Execute a full run and write its outputs plus the manifest.

    Sides fail independently: outputs of completed sides stay on disk,
    and a PipelineError naming every failed (side, stage) is raised at
    the end. The manifest is only written when every side succeeded.
    """
    out_dir = Path(cfg.out_dir)

    input_path = Path(cfg.input_path)
    panel, dropped = load_csv(input_path, cfg.date_column, cfg.columns)
    if cfg.log:
        panel = log_transform(panel)
    labels = tuple(cfg.columns)

    out_dir.mkdir(parents=True, exist_ok=True)
    decomposed = None
    if any(side is not ShockSide.SYMMETRIC for side in cfg.sides):
        decomposed = decompose_panel(panel, cfg.trend)

    side_summaries: dict[str, Any] = {}
    failures: list[tuple[str, str, str]] = []
    first_error: Exception | None = None
    first_site: tuple[str, str] | None = None
    for side in cfg.sides:
        stage_box = ["start"]
        try:
            side_summaries[side.value] = _run_side(
                cfg, side, panel, decomposed, labels, out_dir, stage_box
            )
        except AspillError as exc:
            failures.append((side.value, stage_box[0], str(exc)))
            if first_error is None:
                first_error = exc
                first_site = (side.value, stage_box[0])
    if failures:
        assert first_error is not None and first_site is not None
        raise PipelineError(first_site[0], first_site[1], first_error, failures=failures)

    manifest = RunManifest(
        version=__version__,
        config=cfg.to_dict(),
        inputs={
            "path": cfg.input_path,
            "sha256": _sha256(input_path),
            "date_column": cfg.date_column,
            "columns": list(cfg.columns),
            "rows_loaded": len(panel),
            "rows_dropped": dropped,
        },
        sides=side_summaries,
    )
    _write_text(out_dir / MANIFEST_NAME, manifest.to_json())
    return manifest


def config_from_manifest(path: str | Path) -> RunConfig:
    """Rebuild the RunConfig recorded in a manifest, verifying input digests.

    Raises:
        ManifestMismatchError: the input file changed since the recorded
            run, so a bit-identical reproduction is impossible.
    """
    path = Path(path)
    payload = json.loads(path.read_text(encoding="utf-8"))
    cfg = RunConfig.from_dict(payload["config"])
    input_path = Path(cfg.input_path)
    if not input_path.is_file():
        raise ManifestMismatchError(f"recorded input {cfg.input_path!r} no longer exists")
    digest = _sha256(input_path)
    recorded = payload["inputs"]["sha256"]
    if digest != recorded:
        raise ManifestMismatchError(
            f"input {cfg.input_path!r} digest {digest[:12]} differs from recorded {recorded[:12]}"
        )
    return cfg
