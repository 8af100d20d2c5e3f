"""Acceptance gate: one test per criterion, each printing a pass/fail line.

The Monte Carlo criteria are deterministic given the fixed seeds below.
Run with ``pytest tests/test_acceptance.py -v -s`` to see the per-criterion
lines live; the full module takes a few minutes on one core.
"""

import math
import time

import numpy as np
import pytest

from copspec.core import FrequencyGrid, InferenceConfig, QuantileGrid, rule_of_thumb_block
from copspec.competitors import competitor_statistic, replication_table
from copspec.experiments import ExperimentSpec, run_experiment
from copspec.inference import weight
from copspec.ranks import indicator_bits, window_ecdf
from copspec.spectrum import (
    iid_truth_surface,
    integrated_spectrum,
    integrated_spectrum_lagform,
    lag_weights,
    monte_carlo_truth,
    rank_dft,
)
from copspec.subsample import SubsampleDistribution, empirical_quantile, pointwise_band

pytestmark = pytest.mark.filterwarnings("ignore:ties detected")


def _report(num: int, name: str, ok: bool, detail: str) -> str:
    line = f"criterion {num} [{name}]: {'PASS' if ok else 'FAIL'} ({detail})"
    print(line)
    return line


def test_criterion_1_form_equivalence():
    rng = np.random.default_rng(101)
    start = time.perf_counter()
    worst = 0.0
    qgrid = QuantileGrid((0.25, 0.5, 0.75))
    for trial in range(200):
        n = int(rng.integers(6, 65))
        x = rng.standard_normal(n)
        d = int(rng.choice([2, 8, 16, 32]))
        surf = integrated_spectrum(x, FrequencyGrid(d), qgrid)
        for ell in range(d // 2 + 1):
            for i, t1 in enumerate(qgrid.levels):
                for j, t2 in enumerate(qgrid.levels):
                    a = surf.entries[ell, i, j]
                    b = integrated_spectrum_lagform(x, ell, d, t1, t2)
                    worst = max(worst, abs(a - b) / (1.0 + abs(a)))
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-10 and elapsed < 60.0
    line = _report(1, "form equivalence", ok, f"worst rel dev {worst:.2e}, {elapsed:.1f}s")
    assert ok, line


def test_criterion_2_iid_truth():
    fgrid, qgrid = FrequencyGrid(32), QuantileGrid.regular(8)
    mean_surface = monte_carlo_truth("M0", 512, 2000, fgrid, qgrid, seed=202)
    truth = iid_truth_surface(fgrid, qgrid)
    re_err = float(np.max(np.abs(mean_surface.entries.real - truth.entries.real)))
    im_err = float(np.max(np.abs(mean_surface.entries.imag)))
    ok = re_err <= 0.005 and im_err <= 0.005
    line = _report(2, "iid truth", ok, f"max |Re err| {re_err:.4f}, max |Im| {im_err:.4f}")
    assert ok, line


def test_criterion_3_coverage():
    cfg = InferenceConfig(b=128, d=32, alpha=0.05, fpc=True, weight="s4",
                          quantile_grid=QuantileGrid.regular(16), seed=303)
    point = run_experiment(
        ExperimentSpec("coverage-pointwise", ("M0",), (512,), 500, cfg, block=128, pair=(0.5, 0.5))
    ).summary[0]["rate"]
    uniform = run_experiment(
        ExperimentSpec("coverage-uniform", ("M0",), (512,), 500, cfg, block=128)
    ).summary[0]["rate"]
    ok = 0.92 <= point <= 0.98 and 0.90 <= uniform <= 0.98
    line = _report(3, "coverage", ok, f"pointwise {point:.3f} in [0.92,0.98], uniform {uniform:.3f} in [0.90,0.98]")
    assert ok, line


def test_criterion_4_tr_size_and_power():
    cfg = InferenceConfig(b=128, d=32, alpha=0.05, fpc=True, weight="s4", seed=404)
    sizes = run_experiment(
        ExperimentSpec("size-power-tr", ("M0", "M6a"), (512,), 500, cfg, block=128)
    ).summary
    size_m0, size_m6a = sizes[0]["rate"], sizes[1]["rate"]
    power = run_experiment(
        ExperimentSpec("size-power-tr", ("M1",), (128, 1024), 500, cfg)
    ).summary
    p128, p1024 = power[0]["rate"], power[1]["rate"]
    size_ok = 0.02 <= size_m0 <= 0.09 and 0.02 <= size_m6a <= 0.09
    power_ok = (p1024 - p128 >= 0.2) and (p1024 - size_m0 >= 0.2)
    ok = size_ok and power_ok
    line = _report(
        4,
        "TR size and power",
        ok,
        f"size M0 {size_m0:.3f}, M6a {size_m6a:.3f} (need [0.02,0.09]); "
        f"power M1 n=128 {p128:.3f}, n=1024 {p1024:.3f}",
    )
    assert ok, line


def test_criterion_5_eq_size_and_power():
    cfg = InferenceConfig(b=128, d=32, alpha=0.05, fpc=True, weight="s4", seed=505)
    size_m0 = run_experiment(
        ExperimentSpec("size-power-eq", ("M0",), (512,), 500, cfg, block=128)
    ).summary[0]["rate"]
    power = run_experiment(
        ExperimentSpec("size-power-eq", ("M13c",), (128, 1024), 500, cfg)
    ).summary
    p128, p1024 = power[0]["rate"], power[1]["rate"]
    size_ok = 0.02 <= size_m0 <= 0.09
    power_ok = p1024 - p128 >= 0.2
    ok = size_ok and power_ok
    line = _report(
        5,
        "EQ size and power",
        ok,
        f"size M0 {size_m0:.3f} (need [0.02,0.09]); power M13c n=128 {p128:.3f}, n=1024 {p1024:.3f}",
    )
    assert ok, line


def test_criterion_6_invariant_suite():
    start = time.perf_counter()
    rng = np.random.default_rng(606)
    levels = QuantileGrid.regular(4).arr
    n, d, cases = 16, 8, 1000

    series = rng.standard_normal((cases, n))
    bits = indicator_bits(window_ecdf(series), levels)
    dfts = np.fft.fft(bits, axis=1)[:, 1:, :]
    from copspec.spectrum import integrate_rank_dfts

    surfs = integrate_rank_dfts(dfts, n, d)

    hermitian = np.allclose(surfs, np.conj(np.swapaxes(surfs, 2, 3)), atol=1e-12)
    diag = np.einsum("clii->cli", surfs)
    diag_real = np.allclose(diag.imag, 0.0, atol=1e-12)
    diag_monotone = bool(np.all(np.diff(diag.real, axis=1) >= -1e-12))

    # centering invariance of the rank DFT
    shifts = rng.uniform(-2.0, 2.0, size=cases)
    centering = all(
        np.allclose(rank_dft(bits[i]), rank_dft(bits[i] - shifts[i]), atol=1e-9)
        for i in range(cases)
    )

    # rank invariance under a strictly increasing transform
    mapped_bits = indicator_bits(window_ecdf(np.exp(series)), levels)
    rank_invariant = np.array_equal(bits, mapped_bits)

    # lag weight bounds
    weights_ok = True
    for _ in range(1000):
        wn = int(rng.integers(2, 257))
        wd = int(rng.choice([2, 8, 16, 32]))
        ell = int(rng.integers(0, wd // 2 + 1))
        w = lag_weights(wn, ell, wd)
        center = wn - 1
        if abs(w[center]) > math.pi + 1e-9:
            weights_ok = False
            break
        k = np.arange(1, wn)
        mags = np.abs(w[center + 1 :])
        bound = np.where(k <= wn // 2, 2 * np.pi / k, 2 * np.pi / (wn - k))
        if np.any(mags > bound + 1e-9):
            weights_ok = False
            break

    # b = n degeneracy: the subsample distribution is {0} and bands are flat
    degenerate = True
    cfg = InferenceConfig(b=n, d=d, fpc=False, quantile_grid=QuantileGrid.regular(4))
    for i in range(cases):
        band = pointwise_band(series[i], cfg, 0.5, 0.5)
        if band.distribution.stats.tolist() != [0.0] or band.halfwidth[0] != 0.0:
            degenerate = False
            break

    # empirical quantile equals the ceil(level * count) order statistic
    quantile_ok = True
    for _ in range(1000):
        count = int(rng.integers(1, 60))
        stats = rng.random(count)
        level = float(rng.uniform(0.001, 1.0))
        got = empirical_quantile(SubsampleDistribution(stats, 2, count + 1, False), level)
        if got != np.sort(stats)[math.ceil(level * count) - 1]:
            quantile_ok = False
            break

    elapsed = time.perf_counter() - start
    checks = {
        "hermitian": hermitian,
        "diag-real": diag_real,
        "diag-monotone": diag_monotone,
        "centering": centering,
        "rank-invariance": rank_invariant,
        "weight-bounds": weights_ok,
        "b=n-degeneracy": degenerate,
        "quantile-identity": quantile_ok,
    }
    ok = all(checks.values()) and elapsed < 60.0
    failed = [k for k, v in checks.items() if not v]
    line = _report(6, "invariant suite", ok, f"failed: {failed or 'none'}, {elapsed:.1f}s")
    assert ok, line


def test_criterion_7_block_rule():
    ns = [100, 128, 200, 256, 400, 512, 700, 1024]
    got = [rule_of_thumb_block(n) for n in ns]
    want = [32, 32, 64, 64, 64, 128, 128, 128]
    ok = got == want
    line = _report(7, "block rule", ok, f"{got}")
    assert ok, line


def test_criterion_8_competitor_sanity():
    hand_ok = (
        competitor_statistic("PP", [1.0, 2.0, 3.0]) == pytest.approx(0.5)
        and competitor_statistic("RR", np.full(8, 2.0)) == pytest.approx(0.0)
        and competitor_statistic("CCK", [0.0, 1.0, 0.0]) == pytest.approx(0.0)
        and competitor_statistic("BS", [1.0, 2.0]) == pytest.approx(1.0)
    )
    reps, n = 1000, 256
    table = replication_table(("RR", "CCK", "PP", "BS"), "M0", n, reps, seed=808)
    details, mc_ok = [], True
    for kind, group in table.groupby("kind", sort=False):
        values = group["statistic"].to_numpy()
        mean = values.mean()
        se = values.std(ddof=1) / math.sqrt(reps)
        inside = abs(mean) <= 3.0 * se
        mc_ok = mc_ok and inside
        details.append(f"{kind} mean {mean:.5f} (3se {3 * se:.5f})")
    ok = hand_ok and mc_ok
    line = _report(8, "competitor sanity", ok, f"hand {hand_ok}; " + "; ".join(details))
    assert ok, line
