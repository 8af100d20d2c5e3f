"""Shared domain types: series validation, frequency and quantile grids,
spectral surfaces, and the inference configuration.

Frequencies are represented by the integer pair (ell, d) with value
2*pi*ell/d, so that aligning the full-sample and subsample frequency sets
never depends on floating-point comparisons.  All types in this module are
immutable after construction and safe to share across parallel workers.
"""

from __future__ import annotations

import dataclasses
import json
import math
from dataclasses import dataclass, field

import numpy as np
import pandas as pd

#: Identifier of the random number machinery persisted into result files.
#: Streams are numpy PCG64 generators keyed by ``SeedSequence``; replication
#: r of a run with master seed s uses ``SeedSequence(s, spawn_key=(r,))``.
RNG_ALGORITHM = "numpy-pcg64-seedseq"

TWO_PI = 2.0 * math.pi

WEIGHT_KINDS = ("s1", "s2", "s3", "s4", "s5")


def as_series(values) -> np.ndarray:
    """Validate and return a raw observation series as a 1-D float array.

    Every entry must be finite and the series must contain at least two
    observations.
    """
    x = np.asarray(values, dtype=float)
    if x.ndim != 1:
        raise ValueError("series must be one-dimensional")
    if x.size < 2:
        raise ValueError("series must contain at least two observations")
    if not np.all(np.isfinite(x)):
        raise ValueError("series contains NaN or infinite values")
    return x


def rule_of_thumb_block(n: int) -> int:
    """Default subsampling block length for a series of length ``n``.

    Returns the largest power of two 2**j with 4 <= j <= 8 that does not
    exceed 2 * n**(2/3).  Grows with ``n`` and is capped at 256.
    """
    if n < 32:
        raise ValueError("series too short for rule-of-thumb block")
    block = 0
    for j in range(4, 9):
        # 2**j <= 2 * n**(2/3) iff 2**(3j) <= 8 * n**2, checked in exact
        # integer arithmetic so powers of two on the boundary are kept
        if 2 ** (3 * j) <= 8 * n * n:
            block = 2**j
    if block == 0:  # unreachable for n >= 32, kept as a guard
        raise ValueError("series too short for rule-of-thumb block")
    return block


@dataclass(frozen=True)
class FrequencyGrid:
    """Evaluation frequencies 2*pi*ell/d for ell = 0, ..., floor(d/2).

    Only the integer ``d`` is stored; the float frequencies are derived on
    demand, which keeps equality checks on grid points exact.
    """

    d: int

    def __post_init__(self):
        if int(self.d) != self.d or self.d < 2:
            raise ValueError("frequency grid size d must be an integer >= 2")
        object.__setattr__(self, "d", int(self.d))

    @property
    def n_points(self) -> int:
        return self.d // 2 + 1

    @property
    def ells(self) -> np.ndarray:
        return np.arange(self.n_points)

    @property
    def lambdas(self) -> np.ndarray:
        """Frequency values in radians, monotone increasing in [0, pi]."""
        return TWO_PI * self.ells / self.d

    def lam(self, ell: int) -> float:
        if not 0 <= ell <= self.d // 2:
            raise ValueError(f"frequency index {ell} outside 0..{self.d // 2}")
        return TWO_PI * ell / self.d

    def to_dict(self) -> dict:
        return {"d": self.d}

    @classmethod
    def from_dict(cls, data: dict) -> "FrequencyGrid":
        return cls(d=int(data["d"]))


@dataclass(frozen=True)
class QuantileGrid:
    """Strictly increasing quantile levels inside the open unit interval."""

    levels: tuple

    def __post_init__(self):
        lv = tuple(float(t) for t in self.levels)
        if len(lv) == 0:
            raise ValueError("quantile grid must contain at least one level")
        arr = np.asarray(lv)
        if np.any(arr <= 0.0) or np.any(arr >= 1.0):
            raise ValueError("quantile levels must lie strictly inside (0, 1)")
        if np.any(np.diff(arr) <= 0.0):
            raise ValueError("quantile levels must be strictly increasing")
        object.__setattr__(self, "levels", lv)

    @classmethod
    def regular(cls, q: int) -> "QuantileGrid":
        """Equispaced levels k/q for k = 1, ..., q-1."""
        if q < 2:
            raise ValueError("regular grid denominator must be >= 2")
        return cls(tuple(k / q for k in range(1, q)))

    @property
    def arr(self) -> np.ndarray:
        return np.asarray(self.levels)

    def __len__(self) -> int:
        return len(self.levels)

    def index_of(self, tau: float) -> int:
        """Index of an exact grid level; raises if ``tau`` is not on the grid."""
        for i, t in enumerate(self.levels):
            if t == tau:
                return i
        raise ValueError(f"quantile level {tau!r} not on grid")

    def to_dict(self) -> dict:
        return {"levels": list(self.levels)}

    @classmethod
    def from_dict(cls, data: dict) -> "QuantileGrid":
        return cls(tuple(data["levels"]))


@dataclass
class SpectralSurface:
    """Complex estimate indexed by (frequency, tau1, tau2).

    ``entries[ell, i, j]`` is the value at frequency 2*pi*ell/d and the
    quantile pair (levels[i], levels[j]).  Valid surfaces vanish at ell = 0,
    satisfy entries[ell, j, i] == conj(entries[ell, i, j]), and have a real
    diagonal.
    """

    entries: np.ndarray
    fgrid: FrequencyGrid
    qgrid: QuantileGrid

    def __post_init__(self):
        e = np.asarray(self.entries, dtype=complex)
        expected = (self.fgrid.n_points, len(self.qgrid), len(self.qgrid))
        if e.shape != expected:
            raise ValueError(f"surface shape {e.shape} does not match grids {expected}")
        self.entries = e

    def value(self, ell: int, tau1: float, tau2: float) -> complex:
        i = self.qgrid.index_of(tau1)
        j = self.qgrid.index_of(tau2)
        return complex(self.entries[ell, i, j])

    def part(self, which: str) -> np.ndarray:
        """Real or imaginary part of the whole surface as a float array."""
        if which == "re":
            return self.entries.real
        if which == "im":
            return self.entries.imag
        raise ValueError("part must be 're' or 'im'")

    def same_grids(self, other: "SpectralSurface") -> bool:
        return self.fgrid == other.fgrid and self.qgrid == other.qgrid

    def to_frame(self) -> pd.DataFrame:
        lv = self.qgrid.arr
        ells = self.fgrid.ells
        L, Q = len(ells), len(lv)
        ell_col = np.repeat(ells, Q * Q)
        t1 = np.tile(np.repeat(lv, Q), L)
        t2 = np.tile(lv, L * Q)
        flat = self.entries.reshape(-1)
        return pd.DataFrame(
            {
                "ell": ell_col,
                "lambda": TWO_PI * ell_col / self.fgrid.d,
                "tau1": t1,
                "tau2": t2,
                "re": flat.real,
                "im": flat.imag,
            }
        )

    def to_csv(self, path, config: dict | None = None) -> None:
        write_csv_with_config(self.to_frame(), path, config)

    @classmethod
    def from_frame(cls, frame: pd.DataFrame, d: int) -> "SpectralSurface":
        levels = np.unique(frame["tau1"].to_numpy())
        qgrid = QuantileGrid(tuple(levels))
        fgrid = FrequencyGrid(d)
        L, Q = fgrid.n_points, len(qgrid)
        if len(frame) != L * Q * Q:
            raise ValueError("surface frame has unexpected number of rows")
        frame = frame.sort_values(["ell", "tau1", "tau2"], kind="stable")
        entries = (
            frame["re"].to_numpy() + 1j * frame["im"].to_numpy()
        ).reshape(L, Q, Q)
        return cls(entries, fgrid, qgrid)

    @classmethod
    def from_csv(cls, path) -> "SpectralSurface":
        config = read_csv_config(path)
        frame = pd.read_csv(path, comment="#", float_precision="round_trip")
        d = int(config.get("d", 2 * int(frame["ell"].max())))
        return cls.from_frame(frame, d)

    def to_json(self) -> str:
        return json.dumps(
            {
                "fgrid": self.fgrid.to_dict(),
                "qgrid": self.qgrid.to_dict(),
                "re": self.entries.real.reshape(-1).tolist(),
                "im": self.entries.imag.reshape(-1).tolist(),
            }
        )

    @classmethod
    def from_json(cls, text: str) -> "SpectralSurface":
        data = json.loads(text)
        fgrid = FrequencyGrid.from_dict(data["fgrid"])
        qgrid = QuantileGrid.from_dict(data["qgrid"])
        L, Q = fgrid.n_points, len(qgrid)
        entries = (
            np.asarray(data["re"]) + 1j * np.asarray(data["im"])
        ).reshape(L, Q, Q)
        return cls(entries, fgrid, qgrid)


@dataclass(frozen=True)
class InferenceConfig:
    """Settings shared by the subsampling procedures.

    ``b`` is the block length, ``d`` the frequency grid size, ``alpha`` the
    level, ``fpc`` toggles the finite-population correction factor
    (1 - b/n)**(-1/2) on window statistics, ``weight`` selects one of the
    weight functions s1..s5, and ``seed`` keys all random streams.
    """

    b: int
    d: int = 32
    alpha: float = 0.05
    fpc: bool = True
    weight: str = "s4"
    quantile_grid: QuantileGrid = field(default_factory=lambda: QuantileGrid.regular(16))
    seed: int = 0

    def __post_init__(self):
        if int(self.b) != self.b or self.b <= 1:
            raise ValueError("block length b must be an integer > 1")
        object.__setattr__(self, "b", int(self.b))
        if self.d < 2:
            raise ValueError("frequency grid size d must be >= 2")
        if not 0.0 < self.alpha < 1.0:
            raise ValueError("alpha must lie in (0, 1)")
        if self.weight not in WEIGHT_KINDS:
            raise ValueError(f"weight must be one of {WEIGHT_KINDS}")
        if int(self.seed) != self.seed or self.seed < 0:
            raise ValueError("seed must be a nonnegative integer")

    def require_block(self, n: int) -> None:
        if self.b > n:
            raise ValueError(f"block length {self.b} exceeds series length {n}")

    @property
    def fgrid(self) -> FrequencyGrid:
        return FrequencyGrid(self.d)

    def to_dict(self) -> dict:
        return {
            "b": self.b,
            "d": self.d,
            "alpha": self.alpha,
            "fpc": self.fpc,
            "weight": self.weight,
            "quantile_grid": self.quantile_grid.to_dict(),
            "seed": self.seed,
            "rng": RNG_ALGORITHM,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "InferenceConfig":
        return cls(
            b=int(data["b"]),
            d=int(data.get("d", 32)),
            alpha=float(data.get("alpha", 0.05)),
            fpc=bool(data.get("fpc", True)),
            weight=str(data.get("weight", "s4")),
            quantile_grid=QuantileGrid.from_dict(
                data.get("quantile_grid", {"levels": list(QuantileGrid.regular(16).levels)})
            ),
            seed=int(data.get("seed", 0)),
        )

    def replace(self, **kw) -> "InferenceConfig":
        return dataclasses.replace(self, **kw)


def write_csv_with_config(frame: pd.DataFrame, path, config: dict | None) -> None:
    """Write a CSV file, prefixed by the resolved configuration as a comment.

    Floats are written with the shortest representation that round-trips
    bit-exactly (pandas' default float formatting drops the 17th digit).
    """
    with open(path, "w", newline="") as handle:
        if config is not None:
            handle.write("# copspec-config: " + json.dumps(config, sort_keys=True) + "\n")
        frame.to_csv(handle, index=False, float_format=lambda v: repr(float(v)))


def read_csv_config(path) -> dict:
    """Read the configuration comment embedded at the top of a result CSV."""
    with open(path) as handle:
        for line in handle:
            if line.startswith("# copspec-config: "):
                return json.loads(line[len("# copspec-config: "):])
            if not line.startswith("#"):
                break
    return {}


#: Keys accepted in flat config files, with their parsers.
CONFIG_FILE_KEYS = {
    "b": int,
    "d": int,
    "alpha": float,
    "fpc": None,  # parsed by _parse_bool below
    "weight": str,
    "qstep": int,
    "seed": int,
    "threads": int,
}


def _parse_bool(text: str) -> bool:
    lowered = text.strip().lower()
    if lowered in ("1", "true", "yes", "on"):
        return True
    if lowered in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"cannot parse boolean value {text!r}")


def read_flat_config(path) -> dict:
    """Read settings from a flat key/value file.

    One ``key = value`` (or ``key: value``) pair per line; blank lines and
    ``#`` comments are ignored.  Recognized keys: b, d, alpha, fpc, weight,
    qstep, seed, threads.
    """
    values = {}
    with open(path) as handle:
        for lineno, raw in enumerate(handle, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            sep = "=" if "=" in line else ":"
            if sep not in line:
                raise ValueError(f"{path}:{lineno}: expected 'key = value', got {raw.strip()!r}")
            key, _, text = (part.strip() for part in line.partition(sep))
            if key not in CONFIG_FILE_KEYS:
                raise ValueError(f"{path}:{lineno}: unknown config key {key!r}")
            parser = CONFIG_FILE_KEYS[key] or _parse_bool
            values[key] = parser(text)
    return values
