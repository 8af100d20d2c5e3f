"""Benchmark time-reversibility statistics for side-by-side comparisons.

Four classical statistics computed from consecutive pairs (X_t, X_{t+1}):

* ``RR``  - cubic moment difference mean(X_{t+1}^2 X_t - X_{t+1} X_t^2);
* ``CCK`` - mean of the bounded odd transform (D_t)/(1 + D_t^2) of the
  differences D_t = X_{t+1} - X_t;
* ``PP``  - proportion of up-moves minus one half;
* ``BS``  - sup-distance between the empirical bivariate distribution of
  (X_t, X_{t+1}) and its argument swap.

Calibration hook: the reference method for critical values of these
statistics is a local bootstrap, which is out of scope here.
:func:`resampled_pvalue` accepts any caller-supplied null resampler; the
bundled i.i.d. permutation resampler is a desk-scale sanity device only and
is NOT that local bootstrap.
"""

from __future__ import annotations

import numpy as np
import pandas as pd

from .core import as_series

KINDS = ("RR", "CCK", "PP", "BS")


def _bs_statistic(x: np.ndarray) -> float:
    # The empirical field Fhat(x, y) is piecewise constant with jumps at
    # observed values, so the sup is attained on the grid of observed pairs.
    values = np.unique(x)
    a = np.searchsorted(values, x[:-1])
    b = np.searchsorted(values, x[1:])
    counts = np.zeros((values.size, values.size))
    np.add.at(counts, (a, b), 1.0)
    cdf = counts.cumsum(axis=0).cumsum(axis=1) / (x.size - 1)
    return float(np.abs(cdf - cdf.T).max())


def competitor_statistic(kind: str, series) -> float:
    """Evaluate one benchmark statistic on a series of length >= 2."""
    x = as_series(series)
    lead, lag = x[1:], x[:-1]
    if kind == "RR":
        return float(np.mean(lead**2 * lag - lead * lag**2))
    if kind == "CCK":
        diff = lead - lag
        return float(np.mean(diff / (1.0 + diff**2)))
    if kind == "PP":
        return float(np.mean(lead > lag) - 0.5)
    if kind == "BS":
        return _bs_statistic(x)
    raise ValueError(f"unknown competitor kind {kind!r}")


def replication_table(kinds, model, n: int, reps: int, seed: int = 0) -> pd.DataFrame:
    """Monte Carlo table of benchmark statistics, one row per (kind, rep).

    Every replication draws a fresh series from ``model`` (stream keyed by
    (seed, rep)) and evaluates all requested kinds on the same draw.
    Columns: kind, rep, statistic.
    """
    from . import models

    spec = models.as_model_spec(model)
    rows = []
    for rep in range(reps):
        x = models.generate(spec, n, np.random.SeedSequence(seed, spawn_key=(rep,)))
        for kind in kinds:
            rows.append({"kind": kind, "rep": rep, "statistic": competitor_statistic(kind, x)})
    return pd.DataFrame(rows)


def permutation_resampler(rng: np.random.Generator, series: np.ndarray) -> np.ndarray:
    """Uniformly permute the observations (an i.i.d.-only null device)."""
    return rng.permutation(series)


def resampled_pvalue(kind: str, series, resampler=permutation_resampler, reps: int = 199, seed: int = 0) -> float:
    """Monte Carlo p-value of |statistic| against a caller-supplied null.

    ``resampler(rng, series)`` must return one draw from the null
    distribution of the series.  Uses the add-one convention
    (1 + #exceedances) / (reps + 1).
    """
    x = as_series(series)
    observed = abs(competitor_statistic(kind, x))
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    hits = 0
    for _ in range(reps):
        draw = resampler(rng, x)
        if abs(competitor_statistic(kind, draw)) >= observed:
            hits += 1
    return (1 + hits) / (reps + 1)
