"""Integrated copula spectral analysis for stationary time series.

Smoothing-free estimation of the copula spectral distribution function,
subsampling-based uniform confidence bands, hypothesis tests for
time-reversibility and tail asymmetry, benchmark statistics, simulation
model generators, and a Monte Carlo experiment harness.
"""

from .core import (
    RNG_ALGORITHM,
    FrequencyGrid,
    InferenceConfig,
    QuantileGrid,
    SpectralSurface,
    as_series,
    read_flat_config,
    rule_of_thumb_block,
)
from .ranks import IndicatorMatrix, empirical_cdf_at_points, indicator_matrix
from .spectrum import (
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
from .subsample import (
    ConfidenceBand,
    SubsampleDistribution,
    coverage_indicator,
    d_statistic,
    e_statistic,
    empirical_quantile,
    fpc_factor,
    pointwise_band,
    subsample_surface,
    uniform_band,
)
from .inference import (
    TestGrid,
    TestReport,
    default_eq_grid,
    default_tr_grid,
    eq_statistic,
    eq_test,
    eq_window_statistic,
    tr_statistic,
    tr_test,
    tr_window_statistic,
    weight,
)
from .competitors import (
    competitor_statistic,
    permutation_resampler,
    replication_table,
    resampled_pvalue,
)
from .models import (
    CopulaGrid,
    ModelSpec,
    build_copula_grid,
    conditional_inverse,
    generate,
    model_catalog,
    spec_from_name,
)
from .experiments import ExperimentSpec, run_experiment

__version__ = "0.1.0"

__all__ = [
    "RNG_ALGORITHM",
    "FrequencyGrid",
    "InferenceConfig",
    "QuantileGrid",
    "SpectralSurface",
    "as_series",
    "read_flat_config",
    "rule_of_thumb_block",
    "IndicatorMatrix",
    "empirical_cdf_at_points",
    "indicator_matrix",
    "cr_periodogram",
    "iid_truth",
    "iid_truth_surface",
    "integrated_spectrum",
    "integrated_spectrum_lagform",
    "lag_weights",
    "monte_carlo_truth",
    "rank_cumulant",
    "rank_dft",
    "ConfidenceBand",
    "SubsampleDistribution",
    "coverage_indicator",
    "d_statistic",
    "e_statistic",
    "empirical_quantile",
    "fpc_factor",
    "pointwise_band",
    "subsample_surface",
    "uniform_band",
    "TestGrid",
    "TestReport",
    "default_eq_grid",
    "default_tr_grid",
    "eq_statistic",
    "eq_test",
    "eq_window_statistic",
    "tr_statistic",
    "tr_test",
    "tr_window_statistic",
    "weight",
    "competitor_statistic",
    "permutation_resampler",
    "replication_table",
    "resampled_pvalue",
    "CopulaGrid",
    "ModelSpec",
    "build_copula_grid",
    "conditional_inverse",
    "generate",
    "model_catalog",
    "spec_from_name",
    "ExperimentSpec",
    "run_experiment",
]
