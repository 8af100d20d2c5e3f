"""Simulation model generators M0-M15.

Families
--------
* M0   i.i.d. standard normal draws.
* M1   QAR(1): X_t = 0.1 * ndtri(U_t) + 1.9 * (U_t - 0.5) * X_{t-1}.
* M2   AR(2): X_t = -0.36 * X_{t-2} + eps_t.
* M3   ARCH(1): X_t = (1/1.9 + 0.9 * X_{t-1}^2)**0.5 * eps_t.
* M4   GARCH(1,1): sigma_t^2 = 0.01 + 0.4 * X_{t-1}^2 + 0.5 * sigma_{t-1}^2.
* M5   EGARCH(1,1,1): ln sigma_t^2 = 0.1 + 0.21 * (|e_{t-1}| - E|e|)
       - 0.2 * e_{t-1} + 0.8 * ln sigma_{t-1}^2 with standardized
       innovations e_t = X_t / sigma_t (E|e| = sqrt(2/pi)); the recursion
       written directly in X_{t-1} is explosive and cannot be simulated.
* M6   AR(1) with Gaussian innovations, coefficient ``param``.
* M7   AR(1) with standard Cauchy innovations, coefficient ``param``.
* M8   Markov chain driven by the asymmetric Gumbel copula C1 (``param`` =
       copula exponent gamma >= 1; gamma = 1 is serial independence).
* M9   Markov chain driven by the zero-total-circulation copula C2
       (``param`` = mixing weight lambda in [0, 1]; lambda = 1 is
       independence).
* M10  two independent M8 chains interleaved (odd/even positions).
* M11  two independent M9 chains interleaved.
* M12  Markov chain driven by the Gumbel copula C3 (``param`` = Kendall tau).
* M13  Markov chain driven by the Clayton copula C4 (``param`` = Kendall tau).
* M14  Markov chain driven by the piecewise-uniform copula C5.
* M15  Markov chain driven by the piecewise-uniform copula C6.

Copula-driven chains update V_t = Cinv(U_t | V_{t-1}) where Cinv is the
generalized inverse of the conditional cdf P(U <= u | V = v), tabulated on a
1000-point equispaced grid.  Recursive and Markov models discard a burn-in
of 1000 steps; deterministic initial states are X = 0 for AR/QAR/ARCH
(innovation 0 for EGARCH), sigma^2 = 0.1 for GARCH, ln sigma^2 = 0.5 for
EGARCH (the stationary mean of the log-variance recursion), and V = 0.5
for the copula chains.

Generation is deterministic given (spec, n, seed); Cauchy innovations use
the inverse-cdf transform tan(pi * (U - 1/2)) for cross-platform
reproducibility.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

import numpy as np
from scipy.signal import lfilter
from scipy.special import ndtri

BURN_IN = 1000
COPULA_GRID_SIZE = 1000

#: Parameter ladder used by the M8-M11 catalog entries ("a" through "g"):
#: gamma**(-1) for M8/M10 and lambda for M9/M11.
PARAM_LADDER = (0.15, 0.29, 0.43, 0.57, 0.71, 0.85, 0.99)
AR_COEFFS = (0.3, 0.5, 0.7)
KENDALL_TAUS = (0.25, 0.5, 0.75)

_PARAM_FAMILIES = {"M6", "M7", "M8", "M9", "M10", "M11", "M12", "M13"}
_COPULA_OF_FAMILY = {"M8": "C1", "M9": "C2", "M10": "C1", "M11": "C2",
                     "M12": "C3", "M13": "C4", "M14": "C5", "M15": "C6"}


@dataclass(frozen=True)
class ModelSpec:
    """One generator family plus its scalar parameter (where applicable)."""

    family: str
    param: float | None = None

    def __post_init__(self):
        fam = self.family
        if not re.fullmatch(r"M(0|1|2|3|4|5|6|7|8|9|10|11|12|13|14|15)", fam):
            raise ValueError(f"unknown model family {fam!r}")
        if fam in _PARAM_FAMILIES:
            if self.param is None:
                raise ValueError(f"family {fam} requires a parameter")
            p = float(self.param)
            if fam in ("M6", "M7") and not abs(p) < 1:
                raise ValueError("AR coefficient must satisfy |phi| < 1")
            if fam in ("M8", "M10") and p < 1:
                raise ValueError("asymmetric Gumbel exponent must be >= 1")
            if fam in ("M9", "M11") and not 0.0 <= p <= 1.0:
                raise ValueError("circulation mixing weight must lie in [0, 1]")
            if fam in ("M12", "M13") and not 0.0 < p < 1.0:
                raise ValueError("Kendall tau must lie in (0, 1)")
            object.__setattr__(self, "param", p)
        elif self.param is not None:
            raise ValueError(f"family {fam} takes no parameter")


def spec_from_name(name: str) -> ModelSpec:
    """Parse catalog names such as 'M0', 'M6a', or 'M8g'."""
    match = re.fullmatch(r"M(\d+)([a-g]?)", name)
    if not match:
        raise ValueError(f"unknown model name {name!r}")
    fam = f"M{int(match.group(1))}"
    letter = match.group(2)
    if fam not in _PARAM_FAMILIES:
        if letter:
            raise ValueError(f"family {fam} takes no variant letter")
        return ModelSpec(fam)
    if not letter:
        raise ValueError(f"family {fam} requires a variant letter")
    idx = ord(letter) - ord("a")
    if fam in ("M6", "M7"):
        values = AR_COEFFS
    elif fam in ("M12", "M13"):
        values = KENDALL_TAUS
    else:
        values = PARAM_LADDER
    if idx >= len(values):
        raise ValueError(f"variant {name!r} out of range")
    value = values[idx]
    if fam in ("M8", "M10"):
        value = 1.0 / value
    return ModelSpec(fam, value)


def as_model_spec(model) -> ModelSpec:
    if isinstance(model, ModelSpec):
        return model
    return spec_from_name(str(model))


def model_catalog() -> list:
    """All (name, spec) pairs with the standard parameterizations."""
    names = [f"M{i}" for i in range(6)]
    names += [f"M{i}{c}" for i in (6, 7) for c in "abc"]
    names += [f"M{i}{c}" for i in (8, 9, 10, 11) for c in "abcdefg"]
    names += [f"M{i}{c}" for i in (12, 13) for c in "abc"]
    names += ["M14", "M15"]
    return [(name, spec_from_name(name)) for name in names]


# ---------------------------------------------------------------------------
# Conditional copula grids


@dataclass
class CopulaGrid:
    """Tabulated conditional cdf P(U <= u_g | V = v_h) on a square grid."""

    family: str
    param: float | None
    u: np.ndarray
    cond_cdf: np.ndarray

    def row_index(self, v: float) -> int:
        g = self.u.size
        return min(max(int(round(v * (g - 1))), 0), g - 1)


def _asym_gumbel_cdf(u, v, gamma, alpha=1.0, beta=0.5):
    uu = np.clip(u, 1e-300, 1.0)
    vv = np.clip(v, 1e-300, 1.0)
    s = ((-alpha * np.log(uu)) ** gamma + (-beta * np.log(vv)) ** gamma) ** (1.0 / gamma)
    out = uu ** (1.0 - alpha) * vv ** (1.0 - beta) * np.exp(-s)
    return np.where((np.asarray(u) <= 0) | (np.asarray(v) <= 0), 0.0, out)


def _gumbel_cdf(u, v, gamma):
    uu = np.clip(u, 1e-300, 1.0)
    vv = np.clip(v, 1e-300, 1.0)
    s = ((-np.log(uu)) ** gamma + (-np.log(vv)) ** gamma) ** (1.0 / gamma)
    out = np.exp(-s)
    return np.where((np.asarray(u) <= 0) | (np.asarray(v) <= 0), 0.0, out)


def _clayton_cdf(u, v, gamma):
    uu = np.clip(u, 1e-12, 1.0)
    vv = np.clip(v, 1e-12, 1.0)
    out = (uu ** (-gamma) + vv ** (-gamma) - 1.0) ** (-1.0 / gamma)
    return np.where((np.asarray(u) <= 0) | (np.asarray(v) <= 0), 0.0, out)


# Support rectangles (v-interval -> u-intervals) of the piecewise-uniform
# densities.  As printed, each band has height 1; the conditional rows are
# normalized so that the conditional cdf ends at exactly 1.
_C2_BANDS = (
    ((0.00, 0.25), ((0.25, 0.50),)),
    ((0.25, 0.50), ((0.75, 1.00),)),
    ((0.50, 0.75), ((0.00, 0.25),)),
    ((0.75, 1.00), ((0.50, 0.75),)),
)
_C5_BANDS = (
    ((0.00, 0.25), ((0.00, 0.25), (0.75, 1.00))),
    ((0.25, 0.50), ((0.50, 1.00),)),
    ((0.50, 0.75), ((0.25, 0.75),)),
    ((0.75, 1.00), ((0.00, 0.50),)),
)
_C6_BANDS = (
    ((0.00, 0.50), ((0.25, 0.75),)),
    ((0.50, 1.00), ((0.00, 0.25), (0.75, 1.00))),
)


def _band_overlap(u: np.ndarray, intervals) -> np.ndarray:
    """Length of [0, u] intersected with a union of disjoint intervals."""
    total = np.zeros_like(u)
    for lo, hi in intervals:
        total += np.clip(u - lo, 0.0, hi - lo)
    return total


def _band_rows(u: np.ndarray, bands, mix: float | None) -> np.ndarray:
    """Conditional cdf rows for the piecewise-uniform families.

    With ``mix`` (the C2 lambda), the row is mix * u plus (1 - mix) times
    the normalized band cdf; otherwise it is the normalized band cdf alone.
    """
    g = u.size
    rows = np.empty((g, g))
    v = u  # same equispaced grid for the conditioning variable
    for (vlo, vhi), intervals in bands:
        length = sum(hi - lo for lo, hi in intervals)
        mask = (v >= vlo) & (v < vhi) if vhi < 1.0 else (v >= vlo)
        band_cdf = _band_overlap(u, intervals) / length
        row = band_cdf if mix is None else mix * u + (1.0 - mix) * band_cdf
        rows[mask] = row
    return rows


_grid_cache: dict = {}


def build_copula_grid(family: str, param: float | None = None, grid_size: int = COPULA_GRID_SIZE) -> CopulaGrid:
    """Tabulate the conditional cdf of one copula family on a square grid.

    For the closed-form families (C1 asymmetric Gumbel, C3 Gumbel, C4
    Clayton) the conditional cdf in u given V = v is obtained by a central
    finite difference of the copula in v with step 1/grid_size; each row is
    made monotone and normalized to end at 1.  For the piecewise-uniform
    families (C2, C5, C6) the rows are computed analytically.
    """
    key = (family, None if param is None else round(float(param), 12), grid_size)
    cached = _grid_cache.get(key)
    if cached is not None:
        return cached
    u = np.linspace(0.0, 1.0, grid_size)
    if family in ("C1", "C3", "C4"):
        if param is None:
            raise ValueError(f"family {family} requires a parameter")
        gamma = float(param)
        if family in ("C1", "C3") and gamma < 1:
            raise ValueError("Gumbel-type exponent must be >= 1")
        if family == "C4" and gamma <= 0:
            raise ValueError("Clayton exponent must be positive")
        cdf = {"C1": _asym_gumbel_cdf, "C3": _gumbel_cdf, "C4": _clayton_cdf}[family]
        step = 1.0 / grid_size
        vlo = np.clip(u - step, 0.0, 1.0)
        vhi = np.clip(u + step, 0.0, 1.0)
        uu = u[None, :]
        rows = (cdf(uu, vhi[:, None], gamma) - cdf(uu, vlo[:, None], gamma)) / (vhi - vlo)[:, None]
        rows = np.maximum.accumulate(rows, axis=1)
        rows = np.clip(rows / rows[:, -1:], 0.0, 1.0)
    elif family == "C2":
        if param is None or not 0.0 <= param <= 1.0:
            raise ValueError("circulation mixing weight must lie in [0, 1]")
        rows = _band_rows(u, _C2_BANDS, float(param))
    elif family == "C5":
        rows = _band_rows(u, _C5_BANDS, None)
    elif family == "C6":
        rows = _band_rows(u, _C6_BANDS, None)
    else:
        raise ValueError(f"unknown copula family {family!r}")
    grid = CopulaGrid(family=family, param=param, u=u, cond_cdf=rows)
    _grid_cache[key] = grid
    return grid


def conditional_inverse(grid: CopulaGrid, u: float, v: float) -> float:
    """Generalized inverse: smallest grid point with conditional cdf >= u.

    The nearest tabulated row to ``v`` is used and the result is clamped to
    the grid interior, so values stay inside (0, 1).
    """
    row = grid.cond_cdf[grid.row_index(v)]
    g = grid.u.size
    idx = int(np.searchsorted(row, u, side="left"))
    idx = min(max(idx, 1), g - 2)
    return float(grid.u[idx])


def copula_spec(spec: ModelSpec) -> tuple:
    """Copula family and parameter backing one chain model.

    Kendall's tau parameterizations are converted here: the Gumbel chain
    (M12) uses gamma = 1/(1 - tau) and the Clayton chain (M13) uses
    gamma = 2 tau/(1 - tau).
    """
    fam = spec.family
    if fam not in _COPULA_OF_FAMILY and fam not in ("M10", "M11"):
        raise ValueError(f"family {fam} is not copula-driven")
    if fam in ("M10", "M11"):
        fam = "M8" if fam == "M10" else "M9"
    if fam == "M12":
        return "C3", 1.0 / (1.0 - spec.param)
    if fam == "M13":
        return "C4", 2.0 * spec.param / (1.0 - spec.param)
    return _COPULA_OF_FAMILY[fam], spec.param


def _copula_chain(grid: CopulaGrid, n: int, rng: np.random.Generator, burn_in: int) -> np.ndarray:
    cond = grid.cond_cdf
    ugrid = grid.u
    g = ugrid.size
    draws = rng.random(burn_in + n)
    out = np.empty(n)
    v = 0.5
    for t in range(burn_in + n):
        row = min(max(int(round(v * (g - 1))), 0), g - 1)
        idx = int(np.searchsorted(cond[row], draws[t], side="left"))
        if idx < 1:
            idx = 1
        elif idx > g - 2:
            idx = g - 2
        v = ugrid[idx]
        if t >= burn_in:
            out[t - burn_in] = v
    return out


# ---------------------------------------------------------------------------
# Generators


def _ar1(phi: float, innov: np.ndarray, n: int) -> np.ndarray:
    return lfilter([1.0], [1.0, -phi], innov)[-n:]


def generate(model, n: int, seed=0, burn_in: int = BURN_IN, grid_size: int = COPULA_GRID_SIZE) -> np.ndarray:
    """Draw a length-n series from one model; deterministic given the seed.

    ``seed`` may be an integer, a ``numpy.random.SeedSequence``, or a
    ``numpy.random.Generator``.
    """
    spec = as_model_spec(model)
    if n < 1:
        raise ValueError("series length must be >= 1")
    rng = np.random.default_rng(seed)
    fam = spec.family
    total = burn_in + n

    if fam == "M0":
        return rng.standard_normal(n)
    if fam == "M1":
        us = rng.random(total)
        z = ndtri(np.clip(us, 1e-300, 1.0 - 1e-16))
        x = 0.0
        out = np.empty(total)
        for t in range(total):
            x = 0.1 * z[t] + 1.9 * (us[t] - 0.5) * x
            out[t] = x
        return out[-n:]
    if fam == "M2":
        eps = rng.standard_normal(total)
        return lfilter([1.0], [1.0, 0.0, 0.36], eps)[-n:]
    if fam == "M3":
        eps = rng.standard_normal(total)
        x = 0.0
        out = np.empty(total)
        for t in range(total):
            x = math.sqrt(1.0 / 1.9 + 0.9 * x * x) * eps[t]
            out[t] = x
        return out[-n:]
    if fam == "M4":
        eps = rng.standard_normal(total)
        x, sig2 = 0.0, 0.1
        out = np.empty(total)
        for t in range(total):
            sig2 = 0.01 + 0.4 * x * x + 0.5 * sig2
            x = math.sqrt(sig2) * eps[t]
            out[t] = x
        return out[-n:]
    if fam == "M5":
        eps = rng.standard_normal(total)
        mean_abs = math.sqrt(2.0 / math.pi)  # E|eps| for a standard normal
        e_prev, lnsig2 = 0.0, 0.5
        out = np.empty(total)
        for t in range(total):
            lnsig2 = 0.1 + 0.21 * (abs(e_prev) - mean_abs) - 0.2 * e_prev + 0.8 * lnsig2
            out[t] = math.exp(0.5 * lnsig2) * eps[t]
            e_prev = eps[t]
        return out[-n:]
    if fam == "M6":
        return _ar1(spec.param, rng.standard_normal(total), n)
    if fam == "M7":
        nu = np.tan(np.pi * (rng.random(total) - 0.5))
        return _ar1(spec.param, nu, n)
    if fam in ("M10", "M11"):
        family, cop_param = copula_spec(spec)
        grid = build_copula_grid(family, cop_param, grid_size)
        rng_a, rng_b = rng.spawn(2)
        n_even = (n + 1) // 2
        n_odd = n // 2
        chain_a = _copula_chain(grid, n_even, rng_a, burn_in)
        chain_b = _copula_chain(grid, max(n_odd, 1), rng_b, burn_in)
        out = np.empty(n)
        out[0::2] = chain_a
        out[1::2] = chain_b[:n_odd]
        return out
    if fam in ("M8", "M9", "M12", "M13", "M14", "M15"):
        family, cop_param = copula_spec(spec)
        grid = build_copula_grid(family, cop_param, grid_size)
        return _copula_chain(grid, n, rng, burn_in)
    raise ValueError(f"unknown model family {fam!r}")  # unreachable
