"""Aligned multivariate time-series panels and their CSV ingestion.

A Series is one named, date-indexed column of finite floats; a Panel is a
set of Series sharing one date index. Dates are compared as calendar
dates, never as raw strings, and month-resolution inputs ("2001-07") are
normalized to the first of the month.
"""

from __future__ import annotations

import csv
import os
from dataclasses import dataclass
from datetime import date
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    DuplicateDateError,
    NonPositiveValueError,
    NoOverlapError,
    NoUsableRowsError,
    UnknownColumnError,
)

# Strings treated as a missing observation in CSV cells.
_MISSING_TOKENS = {"", ".", "na", "nan", "null", "none", "#n/a"}


def parse_date(text: str) -> date:
    """Parse an ISO date, accepting YYYY-MM-DD or month-resolution YYYY-MM."""
    raw = text.strip()
    parts = raw.split("-")
    if len(parts) == 2:
        return date(int(parts[0]), int(parts[1]), 1)
    return date.fromisoformat(raw)


def _is_missing(cell: str) -> bool:
    return cell.strip().lower() in _MISSING_TOKENS


@dataclass(frozen=True, eq=False)
class Series:
    """One named series of finite values on strictly increasing dates."""

    name: str
    dates: tuple[date, ...]
    values: np.ndarray

    def __post_init__(self) -> None:
        values = np.asarray(self.values, dtype=float)
        if values.ndim != 1 or values.size == 0:
            raise ValueError(f"series {self.name!r} must hold a non-empty 1-D value array")
        if len(self.dates) != values.size:
            raise ValueError(f"series {self.name!r}: {len(self.dates)} dates vs {values.size} values")
        if not np.all(np.isfinite(values)):
            raise ValueError(f"series {self.name!r} holds non-finite values")
        for prev, cur in zip(self.dates, self.dates[1:]):
            if cur <= prev:
                raise DuplicateDateError(
                    f"series {self.name!r}: dates not strictly increasing at {cur.isoformat()}"
                )
        values.flags.writeable = False
        object.__setattr__(self, "values", values)

    def __len__(self) -> int:
        return self.values.size

    def rename(self, name: str) -> "Series":
        return Series(name, self.dates, self.values.copy())


@dataclass(frozen=True, eq=False)
class Panel:
    """Series sharing identical dates; the unit every estimator consumes."""

    series: tuple[Series, ...]

    def __post_init__(self) -> None:
        if not self.series:
            raise ValueError("panel needs at least one series")
        ref = self.series[0].dates
        for s in self.series[1:]:
            if s.dates != ref:
                raise ValueError(f"series {s.name!r} is not aligned with {self.series[0].name!r}")

    @property
    def m(self) -> int:
        return len(self.series)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(s.name for s in self.series)

    @property
    def dates(self) -> tuple[date, ...]:
        return self.series[0].dates

    def __len__(self) -> int:
        return len(self.series[0])

    @property
    def matrix(self) -> np.ndarray:
        """Observations as a (T, m) float array, one column per series."""
        return np.column_stack([s.values for s in self.series])

    def window(self, start: int, stop: int) -> "Panel":
        """Row slice [start, stop) as a new Panel."""
        dates = self.dates[start:stop]
        return Panel(tuple(Series(s.name, dates, s.values[start:stop].copy()) for s in self.series))

    @classmethod
    def from_matrix(cls, names: Sequence[str], dates: Sequence[date], matrix: np.ndarray) -> "Panel":
        matrix = np.asarray(matrix, dtype=float)
        dates = tuple(dates)
        return cls(tuple(Series(name, dates, matrix[:, j].copy()) for j, name in enumerate(names)))


def load_csv(path: str | Path, date_column: str, value_columns: Sequence[str]) -> tuple[Panel, int]:
    """Read selected columns of a CSV file into a date-sorted Panel.

    Rows where any selected value is missing are dropped; the count of
    dropped rows is returned alongside the panel.

    Raises:
        FileNotFoundError: the file does not exist.
        UnknownColumnError: a named column is absent from the header.
        DuplicateDateError: the same date occurs twice.
        NoUsableRowsError: every row had a missing value.
    """
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"no such file: {path}")
    with path.open(newline="", encoding="utf-8-sig") as handle:
        reader = csv.reader(handle)
        try:
            header = next(reader)
        except StopIteration:
            raise NoUsableRowsError(f"{path}: empty file") from None
        header = [h.strip() for h in header]
        positions: dict[str, int] = {}
        for column in [date_column, *value_columns]:
            if column not in header:
                raise UnknownColumnError(f"{path}: column {column!r} not in header {header}")
            positions[column] = header.index(column)

        rows: list[tuple[date, list[float]]] = []
        dropped = 0
        for line in reader:
            if not line or all(not cell.strip() for cell in line):
                continue
            cells = [line[positions[c]] if positions[c] < len(line) else "" for c in value_columns]
            if any(_is_missing(cell) for cell in cells):
                dropped += 1
                continue
            when = parse_date(line[positions[date_column]])
            rows.append((when, [float(cell) for cell in cells]))

    if not rows:
        raise NoUsableRowsError(f"{path}: no usable rows (dropped {dropped})")
    rows.sort(key=lambda item: item[0])
    for (d1, _), (d2, _) in zip(rows, rows[1:]):
        if d1 == d2:
            raise DuplicateDateError(f"{path}: duplicate date {d1.isoformat()}")

    dates = tuple(item[0] for item in rows)
    matrix = np.array([item[1] for item in rows], dtype=float)
    return Panel.from_matrix(list(value_columns), dates, matrix), dropped


def write_csv(panel: Panel, path: str | Path, date_column: str = "date") -> None:
    """Write a panel as CSV with full-precision (round-trippable) floats."""
    path = Path(path)
    tmp = path.with_name(path.name + ".tmp")
    with tmp.open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow([date_column, *panel.names])
        matrix = panel.matrix
        for i, when in enumerate(panel.dates):
            writer.writerow([when.isoformat(), *[repr(float(v)) for v in matrix[i]]])
    os.replace(tmp, path)


def align(panels: Iterable[Panel]) -> Panel:
    """Inner-join panels on dates, keeping every series on the common dates."""
    panels = list(panels)
    if len(panels) < 2:
        raise ValueError("align needs at least two panels")
    common = set(panels[0].dates)
    for panel in panels[1:]:
        common &= set(panel.dates)
    if not common:
        raise NoOverlapError("panels share no dates")
    keep = tuple(sorted(common))
    out: list[Series] = []
    for panel in panels:
        index = {d: i for i, d in enumerate(panel.dates)}
        rows = [index[d] for d in keep]
        for s in panel.series:
            out.append(Series(s.name, keep, s.values[rows].copy()))
    return Panel(tuple(out))


def log_transform(panel: Panel) -> Panel:
    """Replace every value by its natural log; series names get a _log suffix."""
    out: list[Series] = []
    for s in panel.series:
        bad = np.nonzero(s.values <= 0.0)[0]
        if bad.size:
            when = s.dates[int(bad[0])]
            raise NonPositiveValueError(
                f"series {s.name!r} has non-positive value {s.values[bad[0]]!r} at {when.isoformat()}"
            )
        out.append(Series(s.name + "_log", s.dates, np.log(s.values)))
    return Panel(tuple(out))
