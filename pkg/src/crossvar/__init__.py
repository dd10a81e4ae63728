"""crossvar: exact two-sample testing through cross-variance statistics.

The package compares two normal samples by folding the squared gap
between their means into each sample's variance estimate.  The
resulting statistic T* lives on (0, 1], equals 1 exactly when the means
coincide, and has a closed-form null distribution, so the test needs no
simulation to calibrate.  Reference pooled-t and F tests, the known
variance generalization of the distribution, and Monte Carlo power and
type-I machinery round out the toolkit.
"""

from .datasets import DATASETS, dataset_names, get_dataset
from .general import (
    GeneralModel,
    QuadratureError,
    SeriesCaps,
    SeriesOutcome,
    SeriesOverflowError,
    SeriesVariant,
    general_cdf_quadrature,
    general_cdf_series,
    general_pdf_quadrature,
    general_pdf_series,
    joint_pdf_z1z2,
    sample_T,
)
from .simulation import (
    ErrorRateRow,
    ErrorRateTable,
    PowerCurve,
    QuantileMode,
    StudyConfig,
    Type1Result,
    empirical_quantile,
    make_normal_generator,
    replicate_rng,
    run_power_study,
    run_type1_study,
    run_type1_table,
    simulate_replicates,
)
from .stats import (
    CrossVarianceBreakdown,
    DegenerateSampleError,
    MomentSummary,
    NPolicy,
    Sample,
    cross_variance,
    effective_n,
    statistic_J,
    statistic_T,
    statistic_Tstar,
    summarize,
)
from .tstar import (
    SeriesControl,
    SeriesNonConvergenceError,
    TstarModel,
    g_pdf,
    tstar_cdf,
    tstar_cdf_series,
    tstar_pdf,
    tstar_quantile,
    y_pdf,
)
from .two_sample import (
    Decision,
    Method,
    TestResult,
    crossvar_test,
    f_variance_test,
    pooled_t_test,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # stats
    "Sample",
    "MomentSummary",
    "CrossVarianceBreakdown",
    "NPolicy",
    "DegenerateSampleError",
    "summarize",
    "cross_variance",
    "statistic_T",
    "statistic_Tstar",
    "statistic_J",
    "effective_n",
    # tstar distribution
    "TstarModel",
    "SeriesControl",
    "SeriesNonConvergenceError",
    "g_pdf",
    "y_pdf",
    "tstar_pdf",
    "tstar_cdf",
    "tstar_cdf_series",
    "tstar_quantile",
    # general distribution
    "GeneralModel",
    "SeriesCaps",
    "SeriesOutcome",
    "SeriesVariant",
    "QuadratureError",
    "SeriesOverflowError",
    "joint_pdf_z1z2",
    "general_cdf_quadrature",
    "general_pdf_quadrature",
    "general_cdf_series",
    "general_pdf_series",
    "sample_T",
    # tests
    "Method",
    "Decision",
    "TestResult",
    "crossvar_test",
    "pooled_t_test",
    "f_variance_test",
    # simulation
    "QuantileMode",
    "StudyConfig",
    "PowerCurve",
    "Type1Result",
    "ErrorRateRow",
    "ErrorRateTable",
    "replicate_rng",
    "make_normal_generator",
    "empirical_quantile",
    "simulate_replicates",
    "run_power_study",
    "run_type1_study",
    "run_type1_table",
    # bundled data
    "DATASETS",
    "dataset_names",
    "get_dataset",
]
