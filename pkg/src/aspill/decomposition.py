"""Split integrated series into cumulative positive and negative components.

A random walk with deterministic part, G_t = c + d t + G_{t-1} + v_t, is
rebuilt as two series that sum back to the original: each takes half of
the deterministic path and accumulates only the positive (respectively
negative) shocks. Connectedness measures computed on the two component
panels separate how good news and bad news propagate.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import SeriesTooShortError
from .panel import Panel, Series

# A trend regression on first differences needs T-1 >= 3 rows so that even
# the two-regressor variant keeps a residual degree of freedom.
_MIN_LENGTH = 4


class TrendSpec(Enum):
    """Deterministic part of the walk: which of c and d are estimated."""

    NONE = "none"
    DRIFT = "drift"
    DRIFT_AND_TREND = "trend"


class ShockSide(Enum):
    """Which transform of the data an analysis runs on."""

    POSITIVE = "pos"
    NEGATIVE = "neg"
    SYMMETRIC = "sym"


@dataclass(frozen=True)
class TrendFit:
    """Estimated deterministic part and the shocks left over.

    residuals holds v_t for t = 1..T-1, aligned with the second through
    last observations of the source series.
    """

    c: float
    d: float
    g0: float
    residuals: np.ndarray


@dataclass(frozen=True, eq=False)
class ComponentPair:
    """Positive and negative cumulative components of one series."""

    plus: Series
    minus: Series
    fit: TrendFit


@dataclass(frozen=True, eq=False)
class DecomposedPanel:
    """Per-series components reassembled into aligned panels."""

    plus_panel: Panel
    minus_panel: Panel
    fits: tuple[TrendFit, ...]


def fit_trend(series: Series, spec: TrendSpec) -> TrendFit:
    """Estimate c and d of the walk by least squares on first differences.

    Differencing turns the level recursion into dG_t = c + d t + v_t,
    a plain regression on {1, t}. Variants force c or d to zero rather
    than dropping the corresponding residual structure.
    """
    g = series.values
    if g.size < _MIN_LENGTH:
        raise SeriesTooShortError(
            f"series {series.name!r}: length {g.size} < {_MIN_LENGTH} needed for trend fit"
        )
    dg = np.diff(g)
    t = np.arange(1, g.size, dtype=float)
    if spec is TrendSpec.NONE:
        c, d = 0.0, 0.0
    elif spec is TrendSpec.DRIFT:
        c, d = float(np.mean(dg)), 0.0
    else:
        design = np.column_stack([np.ones_like(t), t])
        coef, _, rank, _ = np.linalg.lstsq(design, dg, rcond=None)
        if rank < 2:
            raise SeriesTooShortError(f"series {series.name!r}: degenerate trend design")
        c, d = float(coef[0]), float(coef[1])
    residuals = dg - c - d * t
    return TrendFit(c=c, d=d, g0=float(g[0]), residuals=residuals)


def split_shocks(residuals: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Clamp shocks at zero from each side; the two parts sum back exactly."""
    residuals = np.asarray(residuals, dtype=float)
    return np.maximum(residuals, 0.0), np.minimum(residuals, 0.0)


def build_components(series: Series, spec: TrendSpec) -> ComponentPair:
    """Build G+ and G- so that G+[t] + G-[t] reproduces the series.

    Each component carries half of the deterministic path
    c t + d t(t+1)/2 + G_0 plus its own cumulative shocks; at t=0 both
    sides equal G_0 / 2.
    """
    fit = fit_trend(series, spec)
    v_plus, v_minus = split_shocks(fit.residuals)
    t = np.arange(series.values.size, dtype=float)
    deterministic_half = (fit.c * t + fit.d * t * (t + 1.0) / 2.0 + fit.g0) / 2.0
    plus = deterministic_half + np.concatenate([[0.0], np.cumsum(v_plus)])
    minus = deterministic_half + np.concatenate([[0.0], np.cumsum(v_minus)])
    return ComponentPair(
        plus=Series(series.name + "_pos", series.dates, plus),
        minus=Series(series.name + "_neg", series.dates, minus),
        fit=fit,
    )


def decompose_panel(panel: Panel, spec: TrendSpec) -> DecomposedPanel:
    """Apply build_components to every series, reporting all failures at once."""
    pairs: list[ComponentPair] = []
    failures: list[str] = []
    for series in panel.series:
        try:
            pairs.append(build_components(series, spec))
        except SeriesTooShortError as exc:
            failures.append(str(exc))
    if failures:
        raise SeriesTooShortError("; ".join(failures))
    return DecomposedPanel(
        plus_panel=Panel(tuple(pair.plus for pair in pairs)),
        minus_panel=Panel(tuple(pair.minus for pair in pairs)),
        fits=tuple(pair.fit for pair in pairs),
    )


def component_panel(decomposed: DecomposedPanel, source: Panel, side: ShockSide) -> Panel:
    """Panel an analysis side runs on: a component panel or the source itself."""
    if side is ShockSide.POSITIVE:
        return decomposed.plus_panel
    if side is ShockSide.NEGATIVE:
        return decomposed.minus_panel
    return source
