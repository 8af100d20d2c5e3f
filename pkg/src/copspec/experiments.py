"""Seeded Monte Carlo experiment harness.

Runs repeated coverage or size/power replications over (model, n)
configurations and aggregates rejection or coverage rates with their
binomial standard errors.  Replication r of model index mi at length n
draws from the stream keyed by SeedSequence(seed, spawn_key=(mi, n, r)),
so results are identical for any worker count.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import pandas as pd

from . import models
from .core import (
    RNG_ALGORITHM,
    FrequencyGrid,
    InferenceConfig,
    QuantileGrid,
    SpectralSurface,
    rule_of_thumb_block,
)
from .inference import eq_test, tr_test
from .spectrum import iid_truth_surface
from .subsample import coverage_indicator, pointwise_band, uniform_band

EXPERIMENT_KINDS = (
    "coverage-pointwise",
    "coverage-uniform",
    "size-power-tr",
    "size-power-eq",
)


@dataclass(frozen=True)
class ExperimentSpec:
    """One experiment: a kind, model names, sample sizes, and a config.

    ``block`` overrides the subsampling block length; when None the
    rule-of-thumb block for each n is used.  ``pair`` is the quantile pair
    for pointwise coverage; ``part`` selects the surface part under test.
    """

    kind: str
    models: tuple
    ns: tuple
    reps: int
    config: InferenceConfig
    block: int | None = None
    pair: tuple = (0.5, 0.5)
    part: str = "re"

    def __post_init__(self):
        if self.kind not in EXPERIMENT_KINDS:
            raise ValueError(f"unknown experiment kind {self.kind!r}")
        if self.reps < 1:
            raise ValueError("reps must be >= 1")
        object.__setattr__(self, "models", tuple(self.models))
        object.__setattr__(self, "ns", tuple(int(n) for n in self.ns))
        if self.part not in ("re", "im"):
            raise ValueError("part must be 're' or 'im'")
        for n in self.ns:
            block = self.block if self.block is not None else rule_of_thumb_block(n)
            if not 1 < block <= n:
                raise ValueError(f"block {block} invalid for series length {n}")

    def block_for(self, n: int) -> int:
        return self.block if self.block is not None else rule_of_thumb_block(n)

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "models": list(self.models),
            "ns": list(self.ns),
            "reps": self.reps,
            "block": self.block,
            "pair": list(self.pair),
            "part": self.part,
            "config": self.config.to_dict(),
            "rng": RNG_ALGORITHM,
        }


@dataclass
class ExperimentResult:
    rows: pd.DataFrame
    summary: list
    spec: ExperimentSpec


def _rep_stream(seed: int, model_index: int, n: int, rep: int) -> np.random.SeedSequence:
    return np.random.SeedSequence(seed, spawn_key=(model_index, n, rep))


def _coverage_rep(task):
    kind, name, model_index, n, cfg, pair, part, rep, truth = task
    x = models.generate(name, n, _rep_stream(cfg.seed, model_index, n, rep))
    if kind == "coverage-pointwise":
        band = pointwise_band(x, cfg, pair[0], pair[1], part)
        mode = "pointwise"
    else:
        band = uniform_band(x, cfg, None, part)
        mode = "uniform"
    return 1 if coverage_indicator(band, truth, mode) else 0


def _sizepower_rep(task):
    kind, name, model_index, n, cfg, rep = task
    x = models.generate(name, n, _rep_stream(cfg.seed, model_index, n, rep))
    report = tr_test(x, cfg) if kind == "size-power-tr" else eq_test(x, cfg)
    return report.p_value


def _pointwise_truth_grid(cfg: InferenceConfig, pair) -> QuantileGrid:
    return QuantileGrid(tuple(sorted(set(pair))))


def exact_iid_truth(cfg: InferenceConfig, spec: ExperimentSpec) -> SpectralSurface:
    """Exact truth surface for the serially independent model M0."""
    if spec.kind == "coverage-pointwise":
        qgrid = _pointwise_truth_grid(cfg, spec.pair)
    else:
        qgrid = cfg.quantile_grid
    return iid_truth_surface(FrequencyGrid(cfg.d), qgrid)


def run_experiment(
    spec: ExperimentSpec,
    workers: int = 1,
    truth_surfaces: dict | None = None,
) -> ExperimentResult:
    """Execute all replications and aggregate rates.

    For coverage experiments each model/n needs a truth surface:  M0 uses
    the exact closed form automatically; any other model requires an entry
    ``truth_surfaces[(model, n)]`` holding a surface on a grid at least as
    fine as the band grid (simulated via :func:`copspec.spectrum.monte_carlo_truth`).
    """
    coverage = spec.kind.startswith("coverage")
    rows = []
    summary = []
    for model_index, name in enumerate(spec.models):
        for n in spec.ns:
            cfg = spec.config.replace(b=spec.block_for(n))
            cfg.require_block(n)
            if coverage:
                if name == "M0":
                    truth = exact_iid_truth(cfg, spec)
                else:
                    if truth_surfaces is None or (name, n) not in truth_surfaces:
                        raise ValueError(
                            f"coverage for model {name} needs a simulated truth surface"
                        )
                    truth = truth_surfaces[(name, n)]
                tasks = [
                    (spec.kind, name, model_index, n, cfg, tuple(spec.pair), spec.part, rep, truth)
                    for rep in range(spec.reps)
                ]
                values = _run_tasks(_coverage_rep, tasks, workers)
                outcomes = [int(v) for v in values]
            else:
                tasks = [
                    (spec.kind, name, model_index, n, cfg, rep) for rep in range(spec.reps)
                ]
                values = _run_tasks(_sizepower_rep, tasks, workers)
                outcomes = [int(p < cfg.alpha) for p in values]
            for rep, (value, outcome) in enumerate(zip(values, outcomes)):
                rows.append(
                    {
                        "kind": spec.kind,
                        "model": name,
                        "n": n,
                        "b": cfg.b,
                        "rep": rep,
                        "value": float(value),
                        "outcome": outcome,
                    }
                )
            rate = float(np.mean(outcomes))
            summary.append(
                {
                    "kind": spec.kind,
                    "model": name,
                    "n": n,
                    "b": cfg.b,
                    "reps": spec.reps,
                    "rate": rate,
                    "std_error": float(np.sqrt(rate * (1.0 - rate) / spec.reps)),
                }
            )
    return ExperimentResult(pd.DataFrame(rows), summary, spec)


def _run_tasks(fn, tasks, workers: int):
    if workers > 1 and len(tasks) > 1:
        from concurrent.futures import ProcessPoolExecutor

        chunk = max(1, len(tasks) // (workers * 8))
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(fn, tasks, chunksize=chunk))
    return [fn(t) for t in tasks]
