"""Two-sample location tests: the cross-variance test and its references.

The cross-variance test computes T* from the pooled variance and the
gap between the sample means, and takes the left tail of the exact T*
distribution as the p-value (small T* means the gap dominates the
spread).  The reference tests are the pooled two-sample t test and the
two-sided F test for variance equality that guards the pooling
assumption.  Decisions are strict: reject exactly when p < alpha.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .special import f_cdf, student_t_cdf
from .stats import (
    DegenerateSampleError,
    NPolicy,
    Sample,
    effective_n,
    statistic_Tstar,
    summarize,
)
from .tstar import TstarModel, tstar_cdf

__all__ = [
    "Method",
    "Decision",
    "TestResult",
    "crossvar_test",
    "pooled_t_test",
    "f_variance_test",
]


class Method(Enum):
    CROSSVAR = "CROSSVAR"
    POOLED_T = "POOLED_T"
    F_VARIANCE = "F_VARIANCE"


class Decision(Enum):
    REJECT = "REJECT"
    ACCEPT = "ACCEPT"


@dataclass(frozen=True)
class TestResult:
    method: Method
    statistic: float
    df: float
    p_value: float
    alpha: float
    decision: Decision
    n_policy_used: NPolicy | None = None

    def __post_init__(self):
        if not 0.0 < self.alpha < 1.0:
            raise ValueError(f"alpha must be in (0, 1), got {self.alpha}")


def _decide(p: float, alpha: float) -> Decision:
    return Decision.REJECT if p < alpha else Decision.ACCEPT


def _as_sample(values) -> Sample:
    return values if isinstance(values, Sample) else Sample(values)


def crossvar_test(
    x: Sample,
    y: Sample,
    alpha: float = 0.05,
    n_policy: NPolicy | None = None,
) -> TestResult:
    """Cross-variance test of equal means.

    For unequal sample sizes an explicit ``n_policy`` is required; the
    effective n it produces sets both the T* weighting and the df
    (2(n_eff - 1)) of the reference distribution.  ``x`` and ``y`` may
    be ``Sample`` objects or plain sequences.
    """
    x, y = _as_sample(x), _as_sample(y)
    n_eff = effective_n(x.n, y.n, n_policy)
    tstar = statistic_Tstar(x, y, n_policy)
    model = TstarModel(n_eff)
    p = tstar_cdf(tstar, model)
    return TestResult(
        method=Method.CROSSVAR,
        statistic=tstar,
        df=model.df,
        p_value=p,
        alpha=alpha,
        decision=_decide(p, alpha),
        n_policy_used=n_policy,
    )


def pooled_t_test(x: Sample, y: Sample, alpha: float = 0.05) -> TestResult:
    """Two-sided pooled two-sample t test (df-weighted pooled variance)."""
    x, y = _as_sample(x), _as_sample(y)
    mx = summarize(x)
    my = summarize(y)
    df = x.n + y.n - 2
    sp2 = ((x.n - 1) * mx.variance + (y.n - 1) * my.variance) / df
    if sp2 <= 0.0:
        raise DegenerateSampleError(
            "pooled variance is zero; the t statistic is undefined"
        )
    se = math.sqrt(sp2 * (1.0 / x.n + 1.0 / y.n))
    stat = (mx.mean - my.mean) / se
    p = 2.0 * (1.0 - student_t_cdf(abs(stat), df))
    return TestResult(
        method=Method.POOLED_T,
        statistic=stat,
        df=float(df),
        p_value=p,
        alpha=alpha,
        decision=_decide(p, alpha),
    )


def f_variance_test(x: Sample, y: Sample, alpha: float = 0.05) -> TestResult:
    """Two-sided F test of equal variances (pooling pre-check)."""
    x, y = _as_sample(x), _as_sample(y)
    vx = summarize(x).variance
    vy = summarize(y).variance
    if vy == 0.0:
        raise DegenerateSampleError("second sample has zero variance; F is undefined")
    stat = vx / vy
    cdf = f_cdf(stat, x.n - 1, y.n - 1)
    p = 2.0 * min(cdf, 1.0 - cdf)
    return TestResult(
        method=Method.F_VARIANCE,
        statistic=stat,
        df=float(x.n - 1),  # numerator df; denominator df is y.n - 1
        p_value=p,
        alpha=alpha,
        decision=_decide(p, alpha),
    )
