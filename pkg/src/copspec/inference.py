"""Weight functions, the time-reversibility test, and the tail-symmetry test.

Both tests maximize a rescaled feature of the integrated copula spectrum
over a finite grid of (frequency, quantile pair) points and calibrate the
resulting statistic by subsampling: the p-value is the fraction of window
statistics strictly exceeding the full-sample statistic.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .core import (
    RNG_ALGORITHM,
    FrequencyGrid,
    InferenceConfig,
    as_series,
)
from .ranks import warn_on_ties
from .spectrum import surface_entries, window_surface_reduce
from .subsample import fpc_factor


def weight(kind: str, tau1, tau2):
    """Positive weight s(tau1, tau2) used inside uniform maxima.

    s1 = sqrt(tau1 (1-tau1) tau2 (1-tau2)); s2 = max(tau1, tau2) - tau1*tau2;
    s3 = min(tau1, tau2) - tau1*tau2; s4 = 1; s5 = sqrt(s3).  Vectorized over
    array inputs; boundary levels 0 and 1 are rejected since several kinds
    vanish there.
    """
    t1 = np.asarray(tau1, dtype=float)
    t2 = np.asarray(tau2, dtype=float)
    if np.any(t1 <= 0) or np.any(t1 >= 1) or np.any(t2 <= 0) or np.any(t2 >= 1):
        raise ValueError("quantile levels must lie strictly inside (0, 1)")
    if kind == "s1":
        out = np.sqrt(t1 * (1 - t1) * t2 * (1 - t2))
    elif kind == "s2":
        out = np.maximum(t1, t2) - t1 * t2
    elif kind == "s3":
        out = np.minimum(t1, t2) - t1 * t2
    elif kind == "s4":
        out = np.ones_like(t1)
    elif kind == "s5":
        out = np.sqrt(np.minimum(t1, t2) - t1 * t2)
    else:
        raise ValueError(f"unknown weight kind {kind!r}")
    if out.ndim == 0:
        return float(out)
    return out


@dataclass(frozen=True)
class TestGrid:
    """Finite evaluation set: frequency indices x quantile pairs.

    Frequencies are 2*pi*ell/d for the stored indices; the full evaluation
    set is the product of frequencies and pairs.
    """

    fgrid: FrequencyGrid
    ells: tuple
    pairs: tuple

    def __post_init__(self):
        ells = tuple(int(e) for e in self.ells)
        if any(not 0 <= e <= self.fgrid.d // 2 for e in ells):
            raise ValueError("frequency indices outside the grid range")
        pairs = tuple((float(a), float(b)) for a, b in self.pairs)
        if len(ells) == 0 or len(pairs) == 0:
            raise ValueError("test grid must be non-empty")
        object.__setattr__(self, "ells", ells)
        object.__setattr__(self, "pairs", pairs)

    @property
    def size(self) -> int:
        return len(self.ells) * len(self.pairs)

    def triples(self):
        """All (lambda, tau1, tau2) evaluation points."""
        for ell in self.ells:
            lam = self.fgrid.lam(ell)
            for tau1, tau2 in self.pairs:
                yield (lam, tau1, tau2)


def default_tr_grid(d: int = 32, qstep: int = 8) -> TestGrid:
    """Default time-reversibility grid: all frequencies 2*pi*ell/d for
    ell = 0..floor(d/2) crossed with quantile pairs (k1/qstep, k2/qstep)."""
    fgrid = FrequencyGrid(d)
    levels = [k / qstep for k in range(1, qstep)]
    pairs = [(a, b) for a in levels for b in levels]
    return TestGrid(fgrid, tuple(range(d // 2 + 1)), tuple(pairs))


def default_eq_grid(d: int = 32, denominator: int = 16, numerators=(2, 3, 4)) -> TestGrid:
    """Default tail-symmetry grid: lower-tail levels k/denominator."""
    fgrid = FrequencyGrid(d)
    levels = [k / denominator for k in numerators]
    pairs = [(a, b) for a in levels for b in levels]
    return TestGrid(fgrid, tuple(range(d // 2 + 1)), tuple(pairs))


@dataclass
class TestReport:
    """Test outcome: statistic, subsampled p-value, and configuration echo."""

    kind: str
    statistic: float
    p_value: float
    n: int
    b: int
    d: int
    weight: str
    fpc: bool
    grid_size: int
    config: dict = field(default_factory=dict)

    def __post_init__(self):
        if not 0.0 <= self.p_value <= 1.0:
            raise ValueError("p-value must lie in [0, 1]")
        if self.statistic < 0.0:
            raise ValueError("statistic must be nonnegative")

    def to_dict(self) -> dict:
        return {
            "statistic": self.statistic,
            "p_value": self.p_value,
            "n": self.n,
            "b": self.b,
            "d": self.d,
            "weight": self.weight,
            "fpc": self.fpc,
            "grid_size": self.grid_size,
            "kind": self.kind,
            "config": self.config,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def _grid_arrays(grid: TestGrid, weight_kind: str, reflect: bool):
    """Index arrays into the unique-level axis for the grid pairs.

    With ``reflect`` the levels also include 1 - tau for every tau and the
    reflected pair indices are returned as well.
    """
    taus = [t for pair in grid.pairs for t in pair]
    if reflect:
        taus += [1.0 - t for t in taus]
    levels = np.unique(np.asarray(taus, dtype=float))
    i1 = np.searchsorted(levels, [p[0] for p in grid.pairs])
    i2 = np.searchsorted(levels, [p[1] for p in grid.pairs])
    svec = np.array([weight(weight_kind, a, b) for a, b in grid.pairs])
    ells = np.asarray(grid.ells)
    if not reflect:
        return levels, ells, i1, i2, None, None, svec
    r1 = np.searchsorted(levels, [1.0 - p[0] for p in grid.pairs])
    r2 = np.searchsorted(levels, [1.0 - p[1] for p in grid.pairs])
    return levels, ells, i1, i2, r1, r2, svec


def _tr_feature(surfs, ells, i1, i2, svec):
    """Max over the grid of |Im surface| / s; surfs has shape (..., L, Q, Q)."""
    vals = np.abs(surfs.imag[..., ells, :, :][..., i1, i2]) / svec
    return vals.max(axis=(-2, -1))


def _eq_feature(surfs, ells, i1, i2, r1, r2, svec):
    """Max over the grid of |surface(pair) - surface(reflected pair)| / s."""
    sub = surfs[..., ells, :, :]
    diff = sub[..., i1, i2] - sub[..., r1, r2]
    return (np.abs(diff) / svec).max(axis=(-2, -1))


def _validate_eq_pairs(grid: TestGrid) -> None:
    for tau1, tau2 in grid.pairs:
        if tau1 > 0.5 or tau2 > 0.5:
            raise ValueError("tail-symmetry quantile levels must not exceed 1/2")


def tr_statistic(series, grid: TestGrid, weight_kind: str = "s4") -> float:
    """Full-sample time-reversibility statistic.

    sqrt(n) times the maximum over the grid of the rescaled absolute
    imaginary part of the integrated spectrum.  Zero for grids supported on
    the diagonal tau1 == tau2 or on frequency 0 alone.
    """
    x = as_series(series)
    warn_on_ties(x)
    levels, ells, i1, i2, _, _, svec = _grid_arrays(grid, weight_kind, reflect=False)
    full = surface_entries(x, grid.fgrid.d, levels)
    return math.sqrt(x.size) * float(_tr_feature(full, ells, i1, i2, svec))


def tr_window_statistic(series, b: int, t: int, grid: TestGrid, weight_kind: str = "s4", fpc: bool = False) -> float:
    """Time-reversibility statistic of the window X_t, ..., X_{t+b-1}.

    Scaled by sqrt(b), and additionally by (1 - b/n)**(-1/2) when ``fpc``.
    """
    x = as_series(series)
    if not 0 <= t <= x.size - b:
        raise ValueError(f"window start {t} outside 0..{x.size - b}")
    levels, ells, i1, i2, _, _, svec = _grid_arrays(grid, weight_kind, reflect=False)
    sub = surface_entries(x[t : t + b], grid.fgrid.d, levels)
    value = math.sqrt(b) * float(_tr_feature(sub, ells, i1, i2, svec))
    if fpc:
        value *= fpc_factor(b, x.size)
    return value


def eq_statistic(series, grid: TestGrid, weight_kind: str = "s4") -> float:
    """Full-sample tail-symmetry statistic.

    sqrt(n) times the maximum over the grid of the rescaled modulus of the
    difference between the surface at (tau1, tau2) and at
    (1 - tau1, 1 - tau2).
    """
    _validate_eq_pairs(grid)
    x = as_series(series)
    warn_on_ties(x)
    levels, ells, i1, i2, r1, r2, svec = _grid_arrays(grid, weight_kind, reflect=True)
    full = surface_entries(x, grid.fgrid.d, levels)
    return math.sqrt(x.size) * float(_eq_feature(full, ells, i1, i2, r1, r2, svec))


def eq_window_statistic(series, b: int, t: int, grid: TestGrid, weight_kind: str = "s4", fpc: bool = False) -> float:
    """Tail-symmetry statistic of one window, scaled by sqrt(b) (and fpc)."""
    _validate_eq_pairs(grid)
    x = as_series(series)
    if not 0 <= t <= x.size - b:
        raise ValueError(f"window start {t} outside 0..{x.size - b}")
    levels, ells, i1, i2, r1, r2, svec = _grid_arrays(grid, weight_kind, reflect=True)
    sub = surface_entries(x[t : t + b], grid.fgrid.d, levels)
    value = math.sqrt(b) * float(_eq_feature(sub, ells, i1, i2, r1, r2, svec))
    if fpc:
        value *= fpc_factor(b, x.size)
    return value


def _subsampled_pvalue(x, cfg, full_stat, window_feature) -> float:
    n = x.size
    if cfg.fpc and cfg.b < n:
        factor = fpc_factor(cfg.b, n)
    elif cfg.fpc and cfg.b == n:
        raise ValueError("finite-population correction requires b < n")
    else:
        factor = 1.0
    stats = math.sqrt(cfg.b) * factor * window_feature
    return float(np.mean(stats > full_stat))


def tr_test(series, cfg: InferenceConfig, grid: TestGrid | None = None, variant: str = "tr1") -> TestReport:
    """Subsampling-calibrated test for pairwise time-reversibility.

    The p-value is the fraction of window statistics strictly exceeding the
    full-sample statistic; small p-values indicate time-irreversibility.
    ``variant='tr2'`` recenters each window statistic at the full-sample
    imaginary part (off by default; tends not to improve matters).
    """
    if variant not in ("tr1", "tr2"):
        raise ValueError("variant must be 'tr1' or 'tr2'")
    x = as_series(series)
    n = x.size
    cfg.require_block(n)
    warn_on_ties(x)
    if grid is None:
        grid = default_tr_grid(cfg.d)
    levels, ells, i1, i2, _, _, svec = _grid_arrays(grid, cfg.weight, reflect=False)
    full = surface_entries(x, grid.fgrid.d, levels)
    full_stat = math.sqrt(n) * float(_tr_feature(full, ells, i1, i2, svec))

    if variant == "tr1":
        def reduce_chunk(surfs):
            return _tr_feature(surfs, ells, i1, i2, svec)
    else:
        center = full.imag[ells, :, :][:, i1, i2]

        def reduce_chunk(surfs):
            vals = np.abs(surfs.imag[:, ells, :, :][:, :, i1, i2] - center[None, :, :]) / svec
            return vals.max(axis=(-2, -1))

    feature = window_surface_reduce(x, cfg.b, grid.fgrid.d, levels, reduce_chunk)
    p_value = _subsampled_pvalue(x, cfg, full_stat, feature)
    return TestReport(
        kind="tr" if variant == "tr1" else "tr2",
        statistic=full_stat,
        p_value=p_value,
        n=n,
        b=cfg.b,
        d=grid.fgrid.d,
        weight=cfg.weight,
        fpc=cfg.fpc,
        grid_size=grid.size,
        config={"n": n, "rng": RNG_ALGORITHM, **cfg.to_dict()},
    )


def eq_test(series, cfg: InferenceConfig, grid: TestGrid | None = None) -> TestReport:
    """Subsampling-calibrated test for pairwise tail symmetry.

    Small p-values indicate asymmetry between lower- and upper-tail
    dependence below the grid's tail level.
    """
    x = as_series(series)
    n = x.size
    cfg.require_block(n)
    warn_on_ties(x)
    if grid is None:
        grid = default_eq_grid(cfg.d)
    _validate_eq_pairs(grid)
    levels, ells, i1, i2, r1, r2, svec = _grid_arrays(grid, cfg.weight, reflect=True)
    full = surface_entries(x, grid.fgrid.d, levels)
    full_stat = math.sqrt(n) * float(_eq_feature(full, ells, i1, i2, r1, r2, svec))

    def reduce_chunk(surfs):
        return _eq_feature(surfs, ells, i1, i2, r1, r2, svec)

    feature = window_surface_reduce(x, cfg.b, grid.fgrid.d, levels, reduce_chunk)
    p_value = _subsampled_pvalue(x, cfg, full_stat, feature)
    return TestReport(
        kind="eq",
        statistic=full_stat,
        p_value=p_value,
        n=n,
        b=cfg.b,
        d=grid.fgrid.d,
        weight=cfg.weight,
        fpc=cfg.fpc,
        grid_size=grid.size,
        config={"n": n, "rng": RNG_ALGORITHM, **cfg.to_dict()},
    )
