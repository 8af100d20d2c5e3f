import numpy as np
import pytest
from scipy.stats import kstest, spearmanr

from copspec.models import (
    PARAM_LADDER,
    CopulaGrid,
    ModelSpec,
    build_copula_grid,
    conditional_inverse,
    copula_spec,
    generate,
    model_catalog,
    spec_from_name,
)


class TestCatalog:
    def test_size_and_names(self):
        catalog = model_catalog()
        assert len(catalog) == 48
        names = [name for name, _ in catalog]
        assert names[0] == "M0" and "M8g" in names and names[-1] == "M15"
        assert len(set(names)) == 48

    def test_ladder_mapping(self):
        assert spec_from_name("M8a").param == pytest.approx(1.0 / 0.15)
        assert spec_from_name("M8g").param == pytest.approx(1.0 / 0.99)
        assert spec_from_name("M9c").param == pytest.approx(0.43)
        assert spec_from_name("M11g").param == pytest.approx(0.99)
        assert [spec_from_name(f"M9{c}").param for c in "abcdefg"] == list(PARAM_LADDER)

    def test_kendall_conversions(self):
        assert copula_spec(spec_from_name("M12b")) == ("C3", pytest.approx(2.0))
        assert copula_spec(spec_from_name("M13b")) == ("C4", pytest.approx(2.0))
        assert copula_spec(spec_from_name("M12a")) == ("C3", pytest.approx(1 / 0.75))

    def test_bad_names(self):
        for name in ("M16", "M6", "M6d", "M0a", "M8h", "Q1"):
            with pytest.raises(ValueError):
                spec_from_name(name)

    def test_spec_validation(self):
        with pytest.raises(ValueError):
            ModelSpec("M6")  # missing coefficient
        with pytest.raises(ValueError):
            ModelSpec("M6", 1.5)
        with pytest.raises(ValueError):
            ModelSpec("M8", 0.5)
        with pytest.raises(ValueError):
            ModelSpec("M9", 1.5)
        with pytest.raises(ValueError):
            ModelSpec("M0", 0.3)


class TestGenerate:
    def test_determinism(self):
        for name in ("M0", "M1", "M4", "M8c", "M10b", "M14"):
            a = generate(name, 50, seed=42)
            b = generate(name, 50, seed=42)
            assert np.array_equal(a, b), name
            c = generate(name, 50, seed=43)
            assert not np.array_equal(a, c), name

    def test_length_and_finiteness(self):
        for name, _ in model_catalog():
            x = generate(name, 16, seed=1)
            assert x.shape == (16,)
            assert np.all(np.isfinite(x))

    def test_iid_normal_moments(self):
        x = generate("M0", 100_000, seed=2)
        assert abs(x.mean()) < 0.02
        assert abs(x.var() - 1.0) < 0.02

    def test_ar1_autocorrelation(self):
        x = generate("M6a", 100_000, seed=3)
        r1 = np.corrcoef(x[:-1], x[1:])[0, 1]
        assert abs(r1 - 0.3) < 0.02

    def test_gumbel_chain_independence_limit(self):
        x = generate(ModelSpec("M8", 1.0), 100_000, seed=4)
        rho = spearmanr(x[:-1], x[1:]).statistic
        assert abs(rho) < 0.02

    def test_interleaved_chains_independent(self):
        x = generate("M10d", 100_000, seed=5)
        even, odd = x[0::2], x[1::2]
        m = min(even.size, odd.size)
        assert abs(spearmanr(even[:m], odd[:m]).statistic) < 0.02
        # within one chain the dependence is strong by construction
        assert spearmanr(even[:-1], even[1:]).statistic > 0.1

    def test_chain_marginals_uniform(self):
        for name in ("M8e", "M13b", "M15"):
            x = generate(name, 100_000, seed=6)
            assert kstest(x, "uniform").statistic < 0.01

    def test_volatility_recursions_stable(self):
        for name in ("M4", "M5"):
            x = generate(name, 1_000_000, seed=7)
            assert np.all(np.isfinite(x))

    def test_invalid_length(self):
        with pytest.raises(ValueError):
            generate("M0", 0)


class TestCopulaGrids:
    @pytest.mark.parametrize(
        "family,param",
        [("C1", 2.0), ("C2", 0.5), ("C3", 2.0), ("C4", 2.0), ("C5", None), ("C6", None)],
    )
    def test_rows_are_cdfs(self, family, param):
        grid = build_copula_grid(family, param, grid_size=400)
        rows = grid.cond_cdf
        assert np.all(np.diff(rows, axis=1) >= -1e-9)
        assert np.allclose(rows[:, -1], 1.0, atol=1e-9)
        assert np.all(rows >= -1e-9)

    def test_c5_conditional_value(self):
        grid = build_copula_grid("C5")
        row = grid.row_index(0.1)
        col = int(round(0.25 * (grid.u.size - 1)))
        assert grid.cond_cdf[row, col] == pytest.approx(0.5, abs=1e-6)

    def test_independence_inverse(self):
        grid = build_copula_grid("C1", 1.0)
        for u in (0.1, 0.37, 0.5, 0.93):
            for v in (0.2, 0.5, 0.8):
                assert abs(conditional_inverse(grid, u, v) - u) <= 1.5 / 1000

    def test_comonotone_limit_inverse(self):
        grid = build_copula_grid("C3", 50.0)
        for v in (0.2, 0.4, 0.6, 0.8):
            assert abs(conditional_inverse(grid, 0.5, v) - v) <= 0.01

    def test_uniform_mixture_inverse(self):
        grid = build_copula_grid("C2", 1.0)
        for u in (0.15, 0.5, 0.85):
            assert abs(conditional_inverse(grid, u, 0.3) - u) <= 1.5 / 1000

    def test_inverse_stays_interior(self):
        grid = build_copula_grid("C4", 2.0)
        lo = conditional_inverse(grid, 0.0, 0.5)
        hi = conditional_inverse(grid, 1.0, 0.5)
        assert 0.0 < lo <= hi < 1.0

    def test_parameter_validation(self):
        with pytest.raises(ValueError):
            build_copula_grid("C3", 0.5)
        with pytest.raises(ValueError):
            build_copula_grid("C4", -1.0)
        with pytest.raises(ValueError):
            build_copula_grid("C2", 1.5)
        with pytest.raises(ValueError):
            build_copula_grid("C7", 1.0)
        with pytest.raises(ValueError):
            build_copula_grid("C1", None)

    def test_grid_is_cached(self):
        a = build_copula_grid("C3", 2.0)
        b = build_copula_grid("C3", 2.0)
        assert a is b
