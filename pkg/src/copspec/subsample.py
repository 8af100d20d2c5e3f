"""Sliding-window subsampling: deviation statistics, empirical quantiles,
and uniform confidence bands for the integrated copula spectrum.

A statistic is evaluated on every window X_t, ..., X_{t+b-1} (each window
ranked by its own empirical cdf) and the empirical distribution of the
rescaled window statistics calibrates the band half-widths.  Window
statistics are compared on the common frequency grid 2*pi*ell/d using the
exact integer cutoff rule, so the full sample and the windows always use
identical frequency sets.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import pandas as pd

from .core import (
    TWO_PI,
    FrequencyGrid,
    InferenceConfig,
    QuantileGrid,
    SpectralSurface,
    as_series,
    write_csv_with_config,
)
from .ranks import warn_on_ties
from .spectrum import integrated_spectrum, surface_entries, window_surface_reduce


@dataclass
class SubsampleDistribution:
    """Rescaled deviation statistics, one per window start t = 0..n-b."""

    stats: np.ndarray
    b: int
    n: int
    fpc: bool

    def __post_init__(self):
        s = np.asarray(self.stats, dtype=float)
        if s.size != self.n - self.b + 1:
            raise ValueError("expected one statistic per window start")
        if np.any(s < 0):
            raise ValueError("subsample statistics must be nonnegative")
        self.stats = s

    def quantile(self, level: float) -> float:
        return empirical_quantile(self, level)


def fpc_factor(b: int, n: int) -> float:
    """Finite-population correction (1 - b/n)**(-1/2); requires b < n."""
    if b >= n:
        raise ValueError("finite-population correction requires b < n")
    return 1.0 / math.sqrt(1.0 - b / n)


def subsample_surface(series, b: int, t: int, fgrid: FrequencyGrid, qgrid: QuantileGrid) -> SpectralSurface:
    """Integrated spectrum of the window X_t, ..., X_{t+b-1}.

    The window is ranked with its own empirical cdf, so for b = n and t = 0
    the result is identical to the full-sample estimate.
    """
    x = as_series(series)
    if not 0 <= t <= x.size - b:
        raise ValueError(f"window start {t} outside 0..{x.size - b}")
    return integrated_spectrum(x[t : t + b], fgrid, qgrid)


def _part_values(surface: SpectralSurface, part: str, tau1: float, tau2: float) -> np.ndarray:
    i = surface.qgrid.index_of(tau1)
    j = surface.qgrid.index_of(tau2)
    return surface.part(part)[:, i, j]


def d_statistic(
    sub: SpectralSurface,
    full: SpectralSurface,
    part: str,
    tau1: float,
    tau2: float,
    fpc: bool = False,
    b: int | None = None,
    n: int | None = None,
) -> float:
    """Maximum absolute deviation between two surfaces at one quantile pair.

    The maximum runs over all grid frequencies ell = 0..floor(d/2) of the
    chosen part (re or im).  With ``fpc`` the result is multiplied by
    (1 - b/n)**(-1/2).  Symmetric in the two surface arguments.
    """
    if not sub.same_grids(full):
        raise ValueError("surfaces must share frequency and quantile grids")
    dev = float(np.max(np.abs(_part_values(sub, part, tau1, tau2) - _part_values(full, part, tau1, tau2))))
    if fpc:
        if b is None or n is None:
            raise ValueError("fpc requires block and sample lengths")
        dev *= fpc_factor(b, n)
    return dev


def e_statistic(
    sub: SpectralSurface,
    full: SpectralSurface,
    part: str,
    pairs,
    weight_kind: str,
    fpc: bool = False,
    b: int | None = None,
    n: int | None = None,
) -> float:
    """Weighted maximum of d-statistics over a set of quantile pairs."""
    from .inference import weight

    best = 0.0
    for tau1, tau2 in pairs:
        s = float(weight(weight_kind, tau1, tau2))
        if s <= 0.0:
            raise ValueError("weight function must be positive on the pair set")
        best = max(best, d_statistic(sub, full, part, tau1, tau2, fpc=fpc, b=b, n=n) / s)
    return best


def empirical_quantile(dist, level: float) -> float:
    """Smallest statistic value x with #{stats <= x}/count >= level.

    Equals the order statistic of rank ceil(level * count).  ``dist`` may be
    a :class:`SubsampleDistribution` or a plain array.
    """
    stats = dist.stats if isinstance(dist, SubsampleDistribution) else np.asarray(dist, dtype=float)
    count = stats.size
    if count == 0:
        raise ValueError("empty statistic collection")
    if not 0.0 < level <= 1.0:
        raise ValueError("quantile level must lie in (0, 1]")
    k = int(math.ceil(level * count))
    # guard the ceil against floating-point drift around exact multiples
    while k > 1 and (k - 1) / count >= level:
        k -= 1
    while k < count and k / count < level:
        k += 1
    return float(np.sort(stats)[k - 1])


@dataclass
class ConfidenceBand:
    """Per-frequency intervals center +- halfwidth for a set of pairs.

    ``center`` has shape (n_freq, n_pairs); ``halfwidth`` has shape
    (n_pairs,) and is constant over frequencies.
    """

    fgrid: FrequencyGrid
    pairs: tuple
    part: str
    center: np.ndarray
    halfwidth: np.ndarray
    distribution: SubsampleDistribution
    config: dict

    @property
    def lower(self) -> np.ndarray:
        return self.center - self.halfwidth[None, :]

    @property
    def upper(self) -> np.ndarray:
        return self.center + self.halfwidth[None, :]

    def to_frame(self) -> pd.DataFrame:
        ells = self.fgrid.ells
        rows = []
        for p, (tau1, tau2) in enumerate(self.pairs):
            rows.append(
                pd.DataFrame(
                    {
                        "ell": ells,
                        "lambda": TWO_PI * ells / self.fgrid.d,
                        "tau1": tau1,
                        "tau2": tau2,
                        "part": self.part,
                        "lower": self.lower[:, p],
                        "upper": self.upper[:, p],
                        "center": self.center[:, p],
                    }
                )
            )
        return pd.concat(rows, ignore_index=True)

    def to_csv(self, path) -> None:
        write_csv_with_config(self.to_frame(), path, self.config)


def _band_from_devs(cfg, part, pairs, center, devs, svec, n):
    if cfg.fpc and cfg.b < n:
        factor = fpc_factor(cfg.b, n)
    else:
        # at b == n the single window equals the sample and every deviation
        # is exactly zero, so the correction factor is immaterial
        factor = 1.0
    stats = math.sqrt(cfg.b) * factor * devs
    dist = SubsampleDistribution(stats, cfg.b, n, cfg.fpc)
    scale = empirical_quantile(dist, 1.0 - cfg.alpha) / math.sqrt(n)
    return ConfidenceBand(
        fgrid=cfg.fgrid,
        pairs=tuple(pairs),
        part=part,
        center=center,
        halfwidth=scale * svec,
        distribution=dist,
        config={"n": n, **cfg.to_dict()},
    )


def pointwise_band(series, cfg: InferenceConfig, tau1: float, tau2: float, part: str = "re") -> ConfidenceBand:
    """Confidence band uniform in frequency at one fixed quantile pair.

    The half-width is n**(-1/2) times the empirical (1 - alpha)-quantile of
    the rescaled window deviation statistics sqrt(b) * D_t, where D_t is the
    maximum absolute deviation between the window surface and the
    full-sample surface over all grid frequencies (with optional fpc).
    """
    x = as_series(series)
    n = x.size
    cfg.require_block(n)
    warn_on_ties(x)
    lv = np.unique([tau1, tau2])
    full = surface_entries(x, cfg.d, lv)
    i = int(np.searchsorted(lv, tau1))
    j = int(np.searchsorted(lv, tau2))
    center = full.real[:, i, j] if part == "re" else full.imag[:, i, j]

    def reduce_chunk(surfs):
        vals = surfs.real[:, :, i, j] if part == "re" else surfs.imag[:, :, i, j]
        return np.abs(vals - center[None, :]).max(axis=1)

    devs = window_surface_reduce(x, cfg.b, cfg.d, lv, reduce_chunk)
    return _band_from_devs(cfg, part, [(tau1, tau2)], center[:, None], devs, np.ones(1), n)


def uniform_band(series, cfg: InferenceConfig, pairs=None, part: str = "re") -> ConfidenceBand:
    """Confidence band uniform in frequency and quantile pairs.

    Window deviations are first divided by the weight s(tau1, tau2) and
    maximized over the pair set; the band half-width at a pair is the
    common quantile scale multiplied back by s(tau1, tau2).
    """
    from .inference import weight

    x = as_series(series)
    n = x.size
    cfg.require_block(n)
    warn_on_ties(x)
    if pairs is None:
        lv = cfg.quantile_grid.arr
        pairs = [(t1, t2) for t1 in lv for t2 in lv]
    pairs = list(pairs)
    levels = np.unique([t for pair in pairs for t in pair])
    i_idx = np.searchsorted(levels, [p[0] for p in pairs])
    j_idx = np.searchsorted(levels, [p[1] for p in pairs])
    svec = np.array([weight(cfg.weight, t1, t2) for t1, t2 in pairs])
    if np.any(svec <= 0.0):
        raise ValueError("weight function must be positive on the pair set")
    full = surface_entries(x, cfg.d, levels)
    center = full.real[:, i_idx, j_idx] if part == "re" else full.imag[:, i_idx, j_idx]

    def reduce_chunk(surfs):
        vals = surfs.real[:, :, i_idx, j_idx] if part == "re" else surfs.imag[:, :, i_idx, j_idx]
        devs = np.abs(vals - center[None, :, :]).max(axis=1)
        return (devs / svec[None, :]).max(axis=1)

    devs = window_surface_reduce(x, cfg.b, cfg.d, levels, reduce_chunk)
    return _band_from_devs(cfg, part, pairs, center, devs, svec, n)


def coverage_indicator(band: ConfidenceBand, truth: SpectralSurface, mode: str = "uniform") -> bool:
    """True iff the truth lies inside the band at every required grid point.

    ``truth`` must be available on a frequency grid of size N >= d; each
    band frequency 2*pi*ell/d is aligned to the truth grid by rounding down
    to index floor(N*ell/d).  In ``pointwise`` mode the band must hold a
    single quantile pair; ``uniform`` checks all pairs.
    """
    if mode not in ("pointwise", "uniform"):
        raise ValueError("mode must be 'pointwise' or 'uniform'")
    if mode == "pointwise" and len(band.pairs) != 1:
        raise ValueError("pointwise coverage requires a single-pair band")
    n_truth = truth.fgrid.d
    d = band.fgrid.d
    if n_truth < d:
        raise ValueError("truth frequency grid must be at least as fine as the band grid")
    kmap = (n_truth * band.fgrid.ells) // d
    tpart = truth.part(band.part)
    cols = np.empty((band.fgrid.n_points, len(band.pairs)))
    for p, (tau1, tau2) in enumerate(band.pairs):
        i = truth.qgrid.index_of(tau1)
        j = truth.qgrid.index_of(tau2)
        cols[:, p] = tpart[kmap, i, j]
    return bool(np.all(cols >= band.lower) and np.all(cols <= band.upper))
