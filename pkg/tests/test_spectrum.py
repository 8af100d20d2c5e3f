import warnings

import numpy as np
import pytest

from conftest import brute_dft, brute_rank_cumulant, brute_surface_value
from copspec.core import FrequencyGrid, QuantileGrid
from copspec.models import ModelSpec
from copspec.spectrum import (
    cr_periodogram,
    iid_truth,
    iid_truth_surface,
    integrated_spectrum,
    integrated_spectrum_lagform,
    lag_weights,
    monte_carlo_truth,
    rank_cumulant,
    rank_dft,
)

QGRID = QuantileGrid((0.25, 0.5, 0.75))


class TestRankDft:
    def test_constant_columns_vanish(self):
        assert np.allclose(rank_dft(np.ones(4)), 0.0, atol=1e-12)
        assert np.allclose(rank_dft(np.zeros(6)), 0.0, atol=1e-12)

    def test_two_point_example(self):
        assert rank_dft(np.array([1.0, 0.0]))[0] == pytest.approx(1.0)

    def test_matches_direct_sum(self):
        rng = np.random.default_rng(0)
        bits = (rng.random(17) < 0.4).astype(float)
        fast = rank_dft(bits)
        for s in range(1, 17):
            assert abs(fast[s - 1] - brute_dft(bits, s)) < 1e-10

    def test_conjugate_symmetry(self):
        rng = np.random.default_rng(1)
        bits = (rng.random(12) < 0.5).astype(float)
        vals = rank_dft(bits)
        for s in range(1, 12):
            assert vals[s - 1] == pytest.approx(np.conj(vals[12 - s - 1]), abs=1e-10)

    def test_centering_invariance(self):
        # subtracting any constant from a column leaves frequencies s >= 1 alone
        rng = np.random.default_rng(2)
        for c in (0.3, 1.0, -2.5):
            bits = (rng.random(16) < 0.6).astype(float)
            assert np.allclose(rank_dft(bits), rank_dft(bits - c), atol=1e-9)


class TestCrPeriodogram:
    def test_two_point_value(self):
        vals = cr_periodogram([1.0, 2.0], 0.5, 0.5)
        assert vals[0] == pytest.approx(1.0 / (4.0 * np.pi))

    def test_zero_below_smallest_rank(self):
        vals = cr_periodogram([5.0, 1.0, 3.0], 0.2, 0.7)
        assert np.allclose(vals, 0.0, atol=1e-12)

    def test_diagonal_real_nonnegative(self):
        rng = np.random.default_rng(3)
        vals = cr_periodogram(rng.standard_normal(20), 0.3, 0.3)
        assert np.allclose(vals.imag, 0.0, atol=1e-12)
        assert np.all(vals.real >= -1e-12)


class TestIntegratedSpectrum:
    def test_zero_at_frequency_zero(self):
        rng = np.random.default_rng(4)
        surf = integrated_spectrum(rng.standard_normal(32), FrequencyGrid(8), QGRID)
        assert np.all(surf.entries[0] == 0.0)

    def test_hermitian_and_real_diagonal(self):
        rng = np.random.default_rng(5)
        surf = integrated_spectrum(rng.standard_normal(48), FrequencyGrid(16), QGRID)
        swapped = np.conj(np.swapaxes(surf.entries, 1, 2))
        assert np.allclose(surf.entries, swapped, atol=1e-12)
        diag = np.einsum("lii->li", surf.entries)
        assert np.allclose(diag.imag, 0.0, atol=1e-12)
        assert np.all(np.diff(diag.real, axis=0) >= -1e-12)

    def test_matches_definitional_sum(self):
        rng = np.random.default_rng(6)
        x = rng.standard_normal(12)
        surf = integrated_spectrum(x, FrequencyGrid(8), QGRID)
        for ell in range(5):
            for i, t1 in enumerate(QGRID.levels):
                for j, t2 in enumerate(QGRID.levels):
                    want = brute_surface_value(x, ell, 8, t1, t2)
                    assert abs(surf.entries[ell, i, j] - want) < 1e-10

    def test_matches_lagform_iid_example(self):
        rng = np.random.default_rng(7)
        x = rng.standard_normal(8)
        surf = integrated_spectrum(x, FrequencyGrid(8), QGRID)
        for ell in range(5):
            for i, t1 in enumerate(QGRID.levels):
                for j, t2 in enumerate(QGRID.levels):
                    other = integrated_spectrum_lagform(x, ell, 8, t1, t2)
                    a = surf.entries[ell, i, j]
                    assert abs(a - other) <= 1e-10 * (1 + abs(a))

    def test_rank_invariance(self):
        rng = np.random.default_rng(8)
        x = rng.standard_normal(30)
        base = integrated_spectrum(x, FrequencyGrid(8), QGRID)
        mapped = integrated_spectrum(np.exp(x), FrequencyGrid(8), QGRID)
        assert np.array_equal(base.entries, mapped.entries)


class TestLagWeights:
    def test_half_frequency_weight_at_lag_zero(self):
        w = lag_weights(8, 8, 16)  # ell/d = 1/2, so lambda = pi
        assert w[7] == pytest.approx(np.pi)

    def test_zero_below_first_fourier_frequency(self):
        w = lag_weights(8, 1, 16)  # lambda = pi/8 < 2*pi/8
        assert np.allclose(w, 0.0)

    def test_conjugate_symmetry_and_bounds(self):
        rng = np.random.default_rng(9)
        for _ in range(25):
            n = int(rng.integers(2, 257))
            d = int(rng.choice([2, 8, 16, 32]))
            ell = int(rng.integers(0, d // 2 + 1))
            w = lag_weights(n, ell, d)
            center = n - 1
            assert abs(w[center]) <= np.pi + 1e-12
            for k in range(1, n):
                assert w[center - k] == pytest.approx(np.conj(w[center + k]), abs=1e-12)
                if k <= n // 2:
                    assert abs(w[center + k]) <= 2 * np.pi / k + 1e-9
                else:
                    assert abs(w[center + k]) <= 2 * np.pi / (n - k) + 1e-9


class TestRankCumulant:
    def test_lag_zero_half_level(self):
        assert rank_cumulant([3.0, 1.0, 4.0, 2.0], 0, 0.5, 0.5) == pytest.approx(0.25)

    def test_degenerate_first_level(self):
        # below the smallest rank the first indicator column is identically 0
        x = [3.0, 1.0, 4.0, 2.0]
        tau1, tau2 = 0.1, 0.6
        ecdf = np.array([0.75, 0.25, 1.0, 0.5])
        want = np.mean(-tau1 * ((ecdf <= tau2) - tau2))
        assert rank_cumulant(x, 0, tau1, tau2) == pytest.approx(want)

    def test_matches_double_loop(self):
        rng = np.random.default_rng(10)
        for _ in range(40):
            m = int(rng.integers(2, 15))
            x = rng.standard_normal(m)
            k = int(rng.integers(-(m - 1), m))
            t1, t2 = rng.uniform(0.05, 0.95, size=2)
            assert rank_cumulant(x, k, t1, t2) == pytest.approx(
                brute_rank_cumulant(x, k, t1, t2), abs=1e-14
            )

    def test_out_of_range_lag(self):
        with pytest.raises(ValueError):
            rank_cumulant([1.0, 2.0], 2, 0.5, 0.5)


class TestLagform:
    def test_zero_at_frequency_zero(self):
        rng = np.random.default_rng(11)
        x = rng.standard_normal(9)
        assert integrated_spectrum_lagform(x, 0, 8, 0.3, 0.6) == 0.0

    def test_matches_frequency_form_on_random_series(self):
        rng = np.random.default_rng(12)
        x = rng.standard_normal(6)
        surf = integrated_spectrum(x, FrequencyGrid(8), QGRID)
        for ell in range(5):
            got = integrated_spectrum_lagform(x, ell, 8, 0.25, 0.75)
            want = surf.entries[ell, 0, 2]
            assert abs(got - want) <= 1e-10 * (1 + abs(want))

    def test_constant_series_forms_agree(self):
        x = np.ones(10)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            surf = integrated_spectrum(x, FrequencyGrid(8), QGRID)
            got = integrated_spectrum_lagform(x, 3, 8, 0.25, 0.5)
        assert abs(got - surf.entries[3, 0, 1]) <= 1e-10


class TestIidTruth:
    def test_reference_values(self):
        assert iid_truth(np.pi, 0.5, 0.5) == pytest.approx(0.125)
        assert iid_truth(0.0, 0.3, 0.8) == 0.0
        assert iid_truth(np.pi, 0.25, 0.75) == pytest.approx(0.03125)

    def test_surface_matches_scalar(self):
        surf = iid_truth_surface(FrequencyGrid(8), QGRID)
        assert surf.entries[4, 1, 1] == pytest.approx(iid_truth(np.pi, 0.5, 0.5))
        assert np.allclose(surf.entries.imag, 0.0)

    def test_domain_validation(self):
        with pytest.raises(ValueError):
            iid_truth(4.0, 0.5, 0.5)
        with pytest.raises(ValueError):
            iid_truth(1.0, 0.0, 0.5)


class TestMonteCarloTruth:
    def test_single_rep_equals_plain_estimate(self):
        fgrid = FrequencyGrid(8)
        truth = monte_carlo_truth("M0", 64, 1, fgrid, QGRID, seed=5)
        from copspec.models import generate

        x = generate("M0", 64, np.random.SeedSequence(5, spawn_key=(0,)))
        direct = integrated_spectrum(x, fgrid, QGRID)
        assert np.array_equal(truth.entries, direct.entries)

    def test_seed_determinism(self):
        fgrid = FrequencyGrid(8)
        a = monte_carlo_truth(ModelSpec("M0"), 32, 5, fgrid, QGRID, seed=9)
        b = monte_carlo_truth(ModelSpec("M0"), 32, 5, fgrid, QGRID, seed=9)
        assert np.array_equal(a.entries, b.entries)

    def test_worker_count_does_not_change_result(self):
        fgrid = FrequencyGrid(8)
        serial = monte_carlo_truth("M0", 32, 6, fgrid, QGRID, seed=2, workers=1, chunk=2)
        parallel = monte_carlo_truth("M0", 32, 6, fgrid, QGRID, seed=2, workers=2, chunk=2)
        assert np.array_equal(serial.entries, parallel.entries)

    def test_rejects_zero_reps(self):
        with pytest.raises(ValueError):
            monte_carlo_truth("M0", 32, 0, FrequencyGrid(8), QGRID)
