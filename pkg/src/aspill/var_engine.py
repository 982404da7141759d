"""Vector-autoregression estimation, lag selection, and MA coefficients.

Estimation is multivariate least squares on lagged regressors, solved
through an orthogonal decomposition of the design matrix rather than
normal equations. The lag-augmentation option estimates one extra lag as
a nuisance regressor while keeping it out of the moving-average
recursion, so long-memory levels data can be used without differencing.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateCovarianceError, InsufficientDataError, SingularDesignError
from .panel import Panel

_CRITERIA = ("hjc", "aic", "sic", "hqc")


class UnstableVarWarning(UserWarning):
    """The fitted companion matrix has spectral radius above one."""


@dataclass(frozen=True)
class VarSpec:
    """Estimation request: propagation lags plus optional augmentation."""

    p: int
    include_intercept: bool = True
    ty_extra_lags: int = 0

    def __post_init__(self) -> None:
        if self.p < 1:
            raise ValueError(f"lag order must be >= 1, got {self.p}")
        if self.ty_extra_lags < 0:
            raise ValueError(f"extra lags must be >= 0, got {self.ty_extra_lags}")

    @property
    def p_effective(self) -> int:
        return self.p + self.ty_extra_lags


@dataclass(frozen=True, eq=False)
class VarFit:
    """Estimated coefficients and residual moments.

    B holds p_effective matrices; only the first p enter the MA
    recursion. Gamma is degrees-of-freedom corrected and stored exactly
    symmetric.
    """

    names: tuple[str, ...]
    p: int
    p_effective: int
    B0: np.ndarray
    B: tuple[np.ndarray, ...]
    residuals: np.ndarray
    Gamma: np.ndarray
    T_effective: int

    @property
    def m(self) -> int:
        return len(self.names)


@dataclass(frozen=True, eq=False)
class MaCoefficients:
    """Impulse-response matrices K_0..K_n of the fitted model."""

    horizon: int
    K: tuple[np.ndarray, ...]


def _lagged_design(matrix: np.ndarray, lags: int, intercept: bool) -> tuple[np.ndarray, np.ndarray]:
    """Stack Y rows t = lags..T-1 against regressors [1, y_{t-1}, .., y_{t-lags}]."""
    T = matrix.shape[0]
    y = matrix[lags:]
    blocks = [matrix[lags - s : T - s] for s in range(1, lags + 1)]
    x = np.hstack(blocks)
    if intercept:
        x = np.hstack([np.ones((T - lags, 1)), x])
    return y, x


def _solve_ols(y: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Least-squares coefficient matrix, guarding against rank deficiency."""
    coef, _, rank, sv = np.linalg.lstsq(x, y, rcond=None)
    if rank < x.shape[1]:
        condition = float("inf") if sv[-1] == 0.0 else float(sv[0] / sv[-1])
        raise SingularDesignError(
            f"regressor matrix is rank deficient ({rank} < {x.shape[1]})", condition=condition
        )
    return coef


def _companion_radius(B: tuple[np.ndarray, ...], m: int) -> float:
    p = len(B)
    companion = np.zeros((m * p, m * p))
    companion[:m, :] = np.hstack(B)
    if p > 1:
        companion[m:, : m * (p - 1)] = np.eye(m * (p - 1))
    return float(np.max(np.abs(np.linalg.eigvals(companion))))


def estimate_var(panel: Panel, spec: VarSpec) -> VarFit:
    """Fit the model by least squares over the panel's common sample.

    Raises:
        InsufficientDataError: fewer usable rows than regressors plus one.
        SingularDesignError: collinear regressors.
    """
    matrix = panel.matrix
    m = panel.m
    if m < 2:
        raise InsufficientDataError(f"need at least 2 series for a VAR, got {m}")
    p_eff = spec.p_effective
    k = m * p_eff + (1 if spec.include_intercept else 0)
    T_eff = matrix.shape[0] - p_eff
    if T_eff <= k:
        raise InsufficientDataError(
            f"{matrix.shape[0]} rows give {T_eff} usable observations for {k} regressors"
        )
    y, x = _lagged_design(matrix, p_eff, spec.include_intercept)
    coef = _solve_ols(y, x)
    offset = 1 if spec.include_intercept else 0
    B0 = coef[0].copy() if spec.include_intercept else np.zeros(m)
    B = tuple(coef[offset + s * m : offset + (s + 1) * m].T.copy() for s in range(p_eff))
    residuals = y - x @ coef
    gamma = residuals.T @ residuals / (T_eff - k)
    gamma = (gamma + gamma.T) / 2.0
    radius = _companion_radius(B, m)
    if radius > 1.0 + 1e-6:
        warnings.warn(
            f"companion spectral radius {radius:.4f} exceeds 1; impulse responses may diverge",
            UnstableVarWarning,
            stacklevel=2,
        )
    return VarFit(
        names=panel.names,
        p=spec.p,
        p_effective=p_eff,
        B0=B0,
        B=B,
        residuals=residuals,
        Gamma=gamma,
        T_effective=T_eff,
    )


def select_lag(panel: Panel, p_max: int, criterion: str = "hjc") -> int:
    """Pick the lag order minimizing an information criterion.

    All candidates j = 1..p_max are fitted on the same rows (those left
    after dropping p_max initial observations) so their likelihood terms
    are comparable. Ties resolve to the smallest order.
    """
    criterion = criterion.lower()
    if criterion not in _CRITERIA:
        raise ValueError(f"unknown criterion {criterion!r}; expected one of {_CRITERIA}")
    if p_max < 1:
        raise ValueError(f"p_max must be >= 1, got {p_max}")
    matrix = panel.matrix
    m = panel.m
    n = matrix.shape[0] - p_max
    if n <= m * p_max + 1:
        raise InsufficientDataError(
            f"{matrix.shape[0]} rows leave {n} common observations for up to {m * p_max + 1} regressors"
        )
    best_j = 1
    best_value = math.inf
    for j in range(1, p_max + 1):
        y = matrix[p_max:]
        blocks = [matrix[p_max - s : matrix.shape[0] - s] for s in range(1, j + 1)]
        x = np.hstack([np.ones((n, 1)), *blocks])
        coef = _solve_ols(y, x)
        residuals = y - x @ coef
        gamma_ml = residuals.T @ residuals / n
        sign, logdet = np.linalg.slogdet(gamma_ml)
        if sign <= 0:
            raise DegenerateCovarianceError(
                f"residual covariance at lag {j} is not positive definite"
            )
        if criterion == "aic":
            penalty = 2.0 * j * m * m / n
        elif criterion == "sic":
            penalty = j * m * m * math.log(n) / n
        elif criterion == "hqc":
            penalty = 2.0 * j * m * m * math.log(math.log(n)) / n
        else:
            penalty = j * (m * m * math.log(n) + 2.0 * m * m * math.log(math.log(n))) / (2.0 * n)
        value = logdet + penalty
        if value < best_value - 1e-12:
            best_value = value
            best_j = j
    return best_j


def ma_coefficients(fit: VarFit, horizon: int) -> MaCoefficients:
    """Run the recursion K_i = sum_s B_s K_{i-s} up to the horizon.

    Only the first p coefficient matrices propagate; an augmentation lag
    is excluded by construction.
    """
    if horizon < 0:
        raise ValueError(f"horizon must be >= 0, got {horizon}")
    m = fit.m
    B = fit.B[: fit.p]
    K: list[np.ndarray] = [np.eye(m)]
    for i in range(1, horizon + 1):
        acc = np.zeros((m, m))
        for s in range(1, min(i, len(B)) + 1):
            acc += B[s - 1] @ K[i - s]
        K.append(acc)
    return MaCoefficients(horizon=horizon, K=tuple(K))
