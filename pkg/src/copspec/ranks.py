"""Empirical marginal cdf values and rank-based quantile indicator matrices.

All estimators downstream operate on indicators I{Fhat(X_t) <= tau}, where
Fhat is the empirical cdf of the window under consideration.  Because ranks
are invariant under strictly increasing transformations, so is everything
built on top of these matrices (for tie-free data).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy.stats import rankdata

from .core import QuantileGrid


@dataclass(frozen=True)
class IndicatorMatrix:
    """Binary matrix bits[t, j] = I{Fhat(X_{t0+t}) <= tau_j} for one window."""

    bits: np.ndarray
    qgrid: QuantileGrid
    start: int
    length: int

    def column(self, j: int) -> np.ndarray:
        return self.bits[:, j]


def _validate_window(window) -> np.ndarray:
    x = np.asarray(window, dtype=float)
    if x.ndim != 1 or x.size == 0:
        raise ValueError("window must be a non-empty 1-D array")
    if not np.all(np.isfinite(x)):
        raise ValueError("window contains NaN or infinite values")
    return x


def warn_on_ties(x: np.ndarray) -> None:
    """Warn once per call site when tied values are present.

    Tied observations jointly inflate the empirical cdf under the <=-count
    definition used here; the estimators remain well defined but the usual
    continuity assumption on the marginal distribution is violated.
    """
    if np.unique(x).size < x.size:
        warnings.warn(
            "ties detected: empirical cdf counts tied values jointly",
            RuntimeWarning,
            stacklevel=3,
        )


def empirical_cdf_at_points(window) -> np.ndarray:
    """Empirical cdf of the window evaluated at each window point.

    Returns Fhat(X_t) = #{i : X_i <= X_t} / m for t = 0, ..., m-1; every
    value lies in {1/m, 2/m, ..., 1}.
    """
    x = _validate_window(window)
    warn_on_ties(x)
    return rankdata(x, method="max") / x.size


def indicator_matrix(window, qgrid: QuantileGrid, start: int = 0) -> IndicatorMatrix:
    """Quantile indicator matrix bits[t, j] = I{Fhat(X_t) <= tau_j}."""
    ecdf = empirical_cdf_at_points(window)
    bits = ecdf[:, None] <= qgrid.arr[None, :]
    return IndicatorMatrix(bits=bits, qgrid=qgrid, start=start, length=len(ecdf))


def window_ecdf(windows: np.ndarray) -> np.ndarray:
    """Row-wise empirical cdf values for a batch of windows (W, m).

    Fast path used by the subsampling loops; performs no tie warning.
    """
    m = windows.shape[-1]
    return rankdata(windows, axis=-1, method="max") / m


def indicator_bits(ecdf: np.ndarray, levels: np.ndarray) -> np.ndarray:
    """Float indicator array ecdf[..., None] <= levels, ready for the FFT."""
    return (ecdf[..., None] <= levels).astype(np.float64)
