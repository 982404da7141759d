"""Sliding-window spillover indices for dynamic connectedness.

The partial-sum transform is anchored at the first observation, so by
default the decomposition runs once over the full sample and windows
slide over the component series. Windows whose estimation fails are kept
as flagged gaps so the output length is always predictable from the
window and step sizes.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from datetime import date

import numpy as np

from .connectedness import ConnectednessTable, build_table, compute_fevd
from .decomposition import ShockSide, TrendSpec, component_panel, decompose_panel
from .errors import (
    AllWindowsFailedError,
    AspillError,
    InsufficientDataError,
)
from .panel import Panel
from .var_engine import UnstableVarWarning, VarSpec, estimate_var, ma_coefficients


@dataclass(frozen=True)
class RollingConfig:
    """Window geometry plus the estimation settings reused in every window."""

    window: int
    horizon: int
    var_spec: VarSpec
    trend_spec: TrendSpec = TrendSpec.DRIFT
    shock_side: ShockSide = ShockSide.SYMMETRIC
    step: int = 1
    sigma_scaling: str = "jj"

    def __post_init__(self) -> None:
        if self.step < 1:
            raise ValueError(f"step must be >= 1, got {self.step}")
        if self.horizon < 1:
            raise ValueError(f"horizon must be >= 1, got {self.horizon}")
        if self.window < 1:
            raise ValueError(f"window must be >= 1, got {self.window}")


@dataclass(frozen=True, eq=False)
class SpilloverSeries:
    """Index value per window, NaN where the window could not be estimated."""

    side: ShockSide
    window_end_dates: tuple[date, ...]
    index_values: np.ndarray
    gap_reasons: tuple[str | None, ...] = ()

    def __post_init__(self) -> None:
        if not self.gap_reasons:
            object.__setattr__(self, "gap_reasons", (None,) * len(self.window_end_dates))
        if not (len(self.window_end_dates) == self.index_values.size == len(self.gap_reasons)):
            raise ValueError("dates, values, and gap reasons must have equal length")

    def __len__(self) -> int:
        return self.index_values.size


@dataclass(frozen=True, eq=False)
class RollingTables:
    """Full connectedness table per window; None where a window failed."""

    side: ShockSide
    window_end_dates: tuple[date, ...]
    tables: tuple[ConnectednessTable | None, ...]
    gap_reasons: tuple[str | None, ...]

    def index_series(self) -> SpilloverSeries:
        values = np.array(
            [t.total_spillover if t is not None else np.nan for t in self.tables], dtype=float
        )
        return SpilloverSeries(
            side=self.side,
            window_end_dates=self.window_end_dates,
            index_values=values,
            gap_reasons=self.gap_reasons,
        )


def _side_panel(panel: Panel, cfg: RollingConfig) -> Panel:
    if cfg.shock_side is ShockSide.SYMMETRIC:
        return panel
    return component_panel(decompose_panel(panel, cfg.trend_spec), panel, cfg.shock_side)


def _window_table(window_panel: Panel, cfg: RollingConfig, labels: tuple[str, ...]) -> ConnectednessTable:
    fit = estimate_var(window_panel, cfg.var_spec)
    ma = ma_coefficients(fit, cfg.horizon)
    fevd = compute_fevd(ma, fit.Gamma, cfg.horizon, cfg.sigma_scaling)
    return build_table(fevd.normalized, labels)


def rolling_tables(
    panel: Panel, cfg: RollingConfig, decompose_per_window: bool = False
) -> RollingTables:
    """Estimate a connectedness table in every sliding window.

    panel is the raw (untransformed) panel; the shock side in cfg decides
    what each window actually sees. With decompose_per_window the
    partial-sum transform is re-anchored inside every window instead of
    once over the full sample.

    Raises:
        InsufficientDataError: the panel is shorter than one window, or
            the window cannot accommodate the lag structure.
        AllWindowsFailedError: no window produced a table.
    """
    T = len(panel)
    if T < cfg.window:
        raise InsufficientDataError(f"{T} rows cannot fill a window of {cfg.window}")
    min_window = panel.m * cfg.var_spec.p_effective + 10
    if cfg.window <= min_window:
        raise InsufficientDataError(
            f"window {cfg.window} too small for m={panel.m}, lags={cfg.var_spec.p_effective}; "
            f"need more than {min_window}"
        )
    labels = panel.names
    source = panel if decompose_per_window else _side_panel(panel, cfg)

    starts = range(0, T - cfg.window + 1, cfg.step)
    dates: list[date] = []
    tables: list[ConnectednessTable | None] = []
    reasons: list[str | None] = []
    with warnings.catch_warnings(record=True) as records:
        warnings.simplefilter("always")
        for start in starts:
            stop = start + cfg.window
            dates.append(panel.dates[stop - 1])
            window_panel = source.window(start, stop)
            if decompose_per_window and cfg.shock_side is not ShockSide.SYMMETRIC:
                window_panel = component_panel(
                    decompose_panel(window_panel, cfg.trend_spec), window_panel, cfg.shock_side
                )
            try:
                tables.append(_window_table(window_panel, cfg, labels))
                reasons.append(None)
            except AspillError as exc:
                tables.append(None)
                reasons.append(str(exc))
    # One summary instead of a per-window flood; other warnings pass through.
    unstable = sum(1 for r in records if issubclass(r.category, UnstableVarWarning))
    if unstable:
        warnings.warn(
            f"{unstable} of {len(tables)} windows fitted with companion spectral radius above 1",
            UnstableVarWarning,
            stacklevel=2,
        )
    for record in records:
        if not issubclass(record.category, UnstableVarWarning):
            warnings.warn_explicit(
                record.message, record.category, record.filename, record.lineno
            )
    if all(t is None for t in tables):
        raise AllWindowsFailedError(
            f"all {len(tables)} windows failed; last reason: {reasons[-1]}"
        )
    return RollingTables(
        side=cfg.shock_side,
        window_end_dates=tuple(dates),
        tables=tuple(tables),
        gap_reasons=tuple(reasons),
    )


def rolling_index(
    panel: Panel, cfg: RollingConfig, decompose_per_window: bool = False
) -> SpilloverSeries:
    """Spillover index per sliding window; gaps are flagged, not dropped."""
    return rolling_tables(panel, cfg, decompose_per_window).index_series()
