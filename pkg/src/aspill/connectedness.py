"""Generalized forecast-error variance decomposition and spillover measures.

The share of variable i's n-step forecast-error variance attributable to
shocks in variable j is computed without orthogonalizing the shocks, so
results do not depend on variable ordering. Row-normalized shares feed a
connectedness table with from/to margins, a total spillover index, and
net directional and pairwise measures.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DegenerateCovarianceError
from .var_engine import MaCoefficients

_SIGMA_SCALINGS = ("jj", "ii")


@dataclass(frozen=True, eq=False)
class FevdResult:
    """Raw and row-normalized variance-decomposition shares (fractions)."""

    horizon: int
    raw: np.ndarray
    normalized: np.ndarray


@dataclass(frozen=True, eq=False)
class ConnectednessTable:
    """Percent-scaled shares with the margins of a spillover table.

    matrix[i][j] is the share of i's forecast-error variance explained by
    shocks to j, in percent. Margins exclude the diagonal except for
    including_own. aggregates_from and aggregates_to are the full row and
    column sums divided by the variable count.
    """

    labels: tuple[str, ...]
    matrix: np.ndarray
    from_others: np.ndarray
    to_others: np.ndarray
    including_own: np.ndarray
    total_spillover: float
    aggregates_from: np.ndarray
    aggregates_to: np.ndarray

    @property
    def m(self) -> int:
        return len(self.labels)


@dataclass(frozen=True, eq=False)
class NetMeasures:
    """Net directional and pairwise spillovers derived from one table."""

    labels: tuple[str, ...]
    net_directional: np.ndarray
    net_pairwise_simple: np.ndarray
    net_pairwise_scaled: np.ndarray


def gfevd(ma: MaCoefficients, gamma: np.ndarray, n: int, sigma_scaling: str = "jj") -> np.ndarray:
    """Raw generalized variance-decomposition matrix at horizon n.

    Entry (i, j) divides the accumulated squared response of variable i
    to a shock in j, scaled by that shock's variance, by the total
    forecast-error variance of variable i. sigma_scaling selects which
    variance scales the numerator: "jj" is the standard generalized
    form (unit diagonal at n=0); "ii" reproduces a variant that scales
    by the responding variable's own variance instead.
    """
    if sigma_scaling not in _SIGMA_SCALINGS:
        raise ValueError(f"sigma_scaling must be one of {_SIGMA_SCALINGS}, got {sigma_scaling!r}")
    if n < 0:
        raise ValueError(f"horizon must be >= 0, got {n}")
    if n > ma.horizon:
        raise ValueError(f"horizon {n} exceeds the {ma.horizon} MA terms available")
    gamma = np.asarray(gamma, dtype=float)
    sigma_diag = np.diag(gamma)
    if np.any(sigma_diag <= 0.0):
        raise DegenerateCovarianceError("covariance diagonal must be strictly positive")
    m = gamma.shape[0]
    numerator = np.zeros((m, m))
    denominator = np.zeros(m)
    for K in ma.K[: n + 1]:
        A = K @ gamma
        numerator += A * A
        denominator += np.einsum("ij,ij->i", A, K)
    if np.any(denominator <= 0.0):
        raise DegenerateCovarianceError("zero forecast-error variance in at least one equation")
    if sigma_scaling == "jj":
        numerator = numerator / sigma_diag[np.newaxis, :]
    else:
        numerator = numerator / sigma_diag[:, np.newaxis]
    return numerator / denominator[:, np.newaxis]


def normalize_rows(raw: np.ndarray) -> np.ndarray:
    """Scale each row to sum to one."""
    raw = np.asarray(raw, dtype=float)
    sums = raw.sum(axis=1)
    if np.any(sums <= 0.0):
        raise DegenerateCovarianceError("cannot normalize a row with non-positive sum")
    return raw / sums[:, np.newaxis]


def compute_fevd(
    ma: MaCoefficients, gamma: np.ndarray, n: int, sigma_scaling: str = "jj"
) -> FevdResult:
    """Convenience wrapper bundling the raw and normalized decompositions."""
    raw = gfevd(ma, gamma, n, sigma_scaling)
    return FevdResult(horizon=n, raw=raw, normalized=normalize_rows(raw))


def _assemble(matrix_pct: np.ndarray, labels: tuple[str, ...]) -> ConnectednessTable:
    m = matrix_pct.shape[0]
    off_diagonal = matrix_pct - np.diag(np.diag(matrix_pct))
    from_others = off_diagonal.sum(axis=1)
    to_others = off_diagonal.sum(axis=0)
    including_own = matrix_pct.sum(axis=0)
    total = float(off_diagonal.sum() / m)
    return ConnectednessTable(
        labels=labels,
        matrix=matrix_pct,
        from_others=from_others,
        to_others=to_others,
        including_own=including_own,
        total_spillover=total,
        aggregates_from=matrix_pct.sum(axis=1) / m,
        aggregates_to=including_own / m,
    )


def build_table(
    normalized: np.ndarray, labels: Sequence[str], row_sum_tol: float = 1e-6
) -> ConnectednessTable:
    """Assemble the spillover table from row-normalized fractional shares."""
    normalized = np.asarray(normalized, dtype=float)
    labels = tuple(labels)
    if normalized.shape != (len(labels), len(labels)):
        raise ValueError(f"matrix shape {normalized.shape} does not match {len(labels)} labels")
    if np.max(np.abs(normalized.sum(axis=1) - 1.0)) > row_sum_tol:
        raise ValueError("rows of the normalized matrix must sum to 1")
    return _assemble(normalized * 100.0, labels)


def table_from_percent(
    matrix_pct: np.ndarray, labels: Sequence[str], row_sum_tol: float = 0.5
) -> ConnectednessTable:
    """Assemble a table from an already percent-scaled matrix.

    The matrix entries are stored untouched, so a table parsed from a
    rendered file reproduces its source exactly. The looser default
    tolerance accommodates published tables rounded to one decimal.
    """
    matrix_pct = np.asarray(matrix_pct, dtype=float)
    labels = tuple(labels)
    if matrix_pct.shape != (len(labels), len(labels)):
        raise ValueError(f"matrix shape {matrix_pct.shape} does not match {len(labels)} labels")
    if np.max(np.abs(matrix_pct.sum(axis=1) - 100.0)) > row_sum_tol:
        raise ValueError("rows of a percent matrix must sum to 100")
    return _assemble(matrix_pct, labels)


def net_measures(table: ConnectednessTable) -> NetMeasures:
    """Net spillovers: to-minus-from, and both pairwise net matrices.

    net_pairwise_simple works on fractional shares; net_pairwise_scaled
    divides each share by its row sum before differencing and scales to
    percent, which reduces to 100 times the simple measure when rows are
    normalized.
    """
    fractions = table.matrix / 100.0
    row_sums = fractions.sum(axis=1)
    ratio = fractions / row_sums[:, np.newaxis]
    return NetMeasures(
        labels=table.labels,
        net_directional=table.to_others - table.from_others,
        net_pairwise_simple=fractions - fractions.T,
        net_pairwise_scaled=(ratio - ratio.T) * 100.0,
    )


def directional(table: ConnectednessTable) -> tuple[np.ndarray, np.ndarray]:
    """Directional spillovers received from and transmitted to all others.

    Both vectors divide the off-diagonal margins by the variable count,
    so they sum to the total spillover index. This is the received/
    transmitted convention of rolling-spillover analyses; the printed
    ratio form that always yields 100 is intentionally not used.
    """
    return table.from_others / table.m, table.to_others / table.m
