"""Sample moments and the cross-variance statistics.

The cross-variance of a sample is its dispersion measured around the
OTHER sample's mean; it decomposes as own variance plus a mean-gap term.
The statistic T averages the two own-variance / cross-variance ratios
and lives in (0, 1], reaching 1 exactly when the two means coincide.
T* is the pooled-variance special case used by the hypothesis test, and
J = sqrt((n-1)(1/T* - 1)) is its monotone bridge to the t family.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterable

__all__ = [
    "DegenerateSampleError",
    "Sample",
    "MomentSummary",
    "CrossVarianceBreakdown",
    "NPolicy",
    "summarize",
    "cross_variance",
    "statistic_T",
    "statistic_Tstar",
    "statistic_J",
    "effective_n",
]


class DegenerateSampleError(ValueError):
    """Raised when a statistic degenerates to 0/0 (zero spread and zero mean gap)."""


@dataclass(frozen=True)
class Sample:
    """An ordered tuple of at least two finite observations."""

    values: tuple[float, ...]

    def __init__(self, values: Iterable[float]):
        vals = tuple(float(v) for v in values)
        if len(vals) < 2:
            raise ValueError(f"a sample needs at least 2 observations, got {len(vals)}")
        if not all(math.isfinite(v) for v in vals):
            raise ValueError("sample contains non-finite values")
        object.__setattr__(self, "values", vals)

    @property
    def n(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class MomentSummary:
    n: int
    mean: float
    variance: float  # unbiased, divisor n-1


@dataclass(frozen=True)
class CrossVarianceBreakdown:
    """All intermediate quantities behind one evaluation of T."""

    vx: float
    vy: float
    vx_star: float  # cross-variance of x around y's mean; >= vx
    vy_star: float
    z1: float
    z2: float
    t: float


class NPolicy(Enum):
    """How to pick the effective per-group size when n1 != n2."""

    MIN = "min"
    MAX = "max"
    AVERAGE = "avg"


def summarize(sample: Sample) -> MomentSummary:
    """Mean and unbiased variance, two-pass so table-grade values don't drift."""
    n = sample.n
    mean = math.fsum(sample.values) / n
    ss = math.fsum((v - mean) ** 2 for v in sample.values)
    return MomentSummary(n=n, mean=mean, variance=ss / (n - 1))


def cross_variance(sample: Sample, other_mean: float) -> float:
    """sum((x_i - other_mean)^2) / (n - 1).

    Equals own variance + n*(other_mean - own mean)^2/(n-1); that
    identity is enforced by the property tests rather than used here.
    """
    n = sample.n
    return math.fsum((v - other_mean) ** 2 for v in sample.values) / (n - 1)


def _z_component(v: float, v_star: float) -> float:
    # z = V / (2 V*): own variance over twice the cross-variance.
    if v_star == 0.0:
        raise DegenerateSampleError(
            "zero variance with equal means makes the variance ratio 0/0"
        )
    return v / (2.0 * v_star)


def statistic_T(x: Sample, y: Sample) -> CrossVarianceBreakdown:
    """The general statistic T = Z1 + Z2 with full breakdown.

    Z1 = Vx / (2 Vx*), Z2 = Vy / (2 Vy*).  A zero variance on one side
    is fine as long as the means differ (that side's Z is 0); a zero
    variance with equal means raises DegenerateSampleError.
    """
    mx, my = summarize(x), summarize(y)
    vx_star = cross_variance(x, my.mean)
    vy_star = cross_variance(y, mx.mean)
    z1 = _z_component(mx.variance, vx_star)
    z2 = _z_component(my.variance, vy_star)
    return CrossVarianceBreakdown(
        vx=mx.variance,
        vy=my.variance,
        vx_star=vx_star,
        vy_star=vy_star,
        z1=z1,
        z2=z2,
        t=z1 + z2,
    )


def effective_n(n1: int, n2: int, policy: NPolicy | None) -> float:
    """Effective per-group size; unequal sizes require an explicit policy.

    AVERAGE deliberately keeps the fractional value (e.g. 5.0 for sizes
    6 and 4) and downstream code uses the fractional df 2(n-1).
    """
    if n1 == n2:
        return float(n1)
    if policy is None:
        raise ValueError(
            f"unequal sample sizes ({n1}, {n2}) require an explicit size policy "
            "(min, max, or avg)"
        )
    if policy is NPolicy.MIN:
        return float(min(n1, n2))
    if policy is NPolicy.MAX:
        return float(max(n1, n2))
    return (n1 + n2) / 2.0


def statistic_Tstar(x: Sample, y: Sample, policy: NPolicy | None = None) -> float:
    """Pooled special case T* = Sp2 / (Sp2 + n*delta^2/(n-1)).

    Sp2 is the unweighted average (Vx+Vy)/2 regardless of sample sizes;
    that convention is what reproduces the unequal-size reference values
    under all three size policies.  Returns 1 iff the means are equal.
    """
    mx, my = summarize(x), summarize(y)
    n_eff = effective_n(mx.n, my.n, policy)
    sp2 = 0.5 * (mx.variance + my.variance)
    delta = my.mean - mx.mean
    gap = n_eff * delta * delta / (n_eff - 1.0)
    if sp2 == 0.0:
        if gap == 0.0:
            raise DegenerateSampleError(
                "both variances are zero and the means are equal: T* is 0/0"
            )
        return 0.0
    return sp2 / (sp2 + gap)


def statistic_J(tstar: float, n: float) -> float:
    """J = sqrt((n-1)(1/tstar - 1)); zero iff tstar = 1.

    For equal group sizes J equals sqrt(2) times the absolute pooled t
    statistic (an algebraic identity, covered by the test suite), which
    is what ties the T* test to the classical t test.
    """
    if not 0.0 < tstar <= 1.0:
        raise ValueError(f"statistic_J requires tstar in (0, 1], got {tstar}")
    if n <= 1.0:
        raise ValueError(f"statistic_J requires n > 1, got {n}")
    return math.sqrt((n - 1.0) * (1.0 / tstar - 1.0))
