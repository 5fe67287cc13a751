"""Exponentiated discrete Lindley distribution: evaluation, properties,
estimation and model comparison for count data."""

from .competitors import CompetitorModel, competitor_fit, fit_model
from .core import (
    EdlidParams,
    LindleyParams,
    big_lambda,
    cdf,
    dlid_cdf,
    dlid_pmf,
    hazard,
    lindley_cdf,
    lindley_pdf,
    log_pmf,
    pmf,
    quantile,
    reversed_hazard,
    sample,
    survival,
    tail_cutoff,
)
from .datasets import CountData, DataError, NamedDataset, dataset_I, dataset_II, dump_counts, load_counts
from .estimation import FitResult, SimStudyRow, fit_mle, log_likelihood, score, simulation_study
from .gof import GofReport, chi_square_test, expected_frequencies, gof_report, information_criteria
from .properties import (
    LMomentSummary,
    MomentSummary,
    SeriesConvergenceError,
    l_moments,
    mean_decomposition_residual,
    moment_summary,
    mpl,
    mrl,
    os_cdf,
    os_moment,
    os_pmf,
    pgf,
    raw_moment,
    stress_strength,
)
from .special import chi2_sf, log_gamma

__version__ = "0.1.0"
