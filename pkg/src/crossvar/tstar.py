"""Exact null distribution of the pooled statistic T*.

Under equal variances and equal group sizes, T* = U/(U + 4V) with
U ~ chi2 on 2(n-1) df and V ~ chi2 on 1 df independent, which makes
G = V/U a beta distribution of the second kind and gives the closed
forms below.  The cdf has two implementations: the production closed
form I_{4t/(1+3t)}(n-1, 1/2), and an alternating series kept only for
cross-validation.  The series is a binomial expansion of the
(1+3t)^{-(n-1/2)} kernel and therefore diverges for t >= 1/3; inside
the convergent region its terms can still peak twenty-plus orders of
magnitude above the final sum (t = 0.3, n = 25 peaks near 1e22 while
the cdf is ~3e-6), so the summation runs at adaptive precision sized by
a cheap float scan of term magnitudes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import mpmath as mp
from scipy.optimize import brentq

from .special import log_abs_gen_binom, log_beta, reg_inc_beta

__all__ = [
    "TstarModel",
    "SeriesControl",
    "SeriesNonConvergenceError",
    "g_pdf",
    "y_pdf",
    "tstar_pdf",
    "tstar_cdf",
    "tstar_cdf_series",
    "tstar_quantile",
]

_LOG_TERM_LIMIT = 700.0  # beyond this a float64 term overflows; treat as divergent


@dataclass(frozen=True)
class TstarModel:
    """Per-group size n; fractional n supports the AVERAGE size policy."""

    n: float

    def __post_init__(self):
        if not self.n > 1.0:
            raise ValueError(f"TstarModel requires n > 1, got {self.n}")

    @property
    def df(self) -> float:
        return 2.0 * (self.n - 1.0)


@dataclass(frozen=True)
class SeriesControl:
    """Truncation knobs for the series cdf."""

    abs_tol: float = 1e-10
    max_terms: int = 10_000

    def __post_init__(self):
        if not self.abs_tol > 0.0:
            raise ValueError(f"abs_tol must be positive, got {self.abs_tol}")
        if self.max_terms < 1:
            raise ValueError(f"max_terms must be >= 1, got {self.max_terms}")


class SeriesNonConvergenceError(ArithmeticError):
    """The alternating series failed to converge (expected for t >= 1/3)."""

    def __init__(self, message: str, partial_sum: float, terms_used: int):
        super().__init__(message)
        self.partial_sum = partial_sum
        self.terms_used = terms_used


def g_pdf(g: float, model: TstarModel) -> float:
    """Density of G = V/U: g^{-1/2} / (B(1/2, n-1) (1+g)^{n-1/2})."""
    if g <= 0.0:
        raise ValueError(f"g_pdf requires g > 0, got {g}")
    n = model.n
    return math.exp(
        -0.5 * math.log(g) - log_beta(0.5, n - 1.0) - (n - 0.5) * math.log1p(g)
    )


def y_pdf(y: float, model: TstarModel) -> float:
    """Density of Y = 1 + 4G on [1, inf); diverges integrably at y = 1."""
    if y < 1.0:
        raise ValueError(f"y_pdf requires y >= 1, got {y}")
    if y == 1.0:
        return math.inf
    n = model.n
    return math.exp(
        (n - 1.0) * math.log(4.0)
        - 0.5 * math.log(y - 1.0)
        - log_beta(0.5, n - 1.0)
        - (n - 0.5) * math.log(y + 3.0)
    )


def tstar_pdf(t: float, model: TstarModel) -> float:
    """Density of T* = 1/Y on (0, 1); integrable (1-t)^{-1/2} singularity at 1."""
    if not 0.0 < t < 1.0:
        raise ValueError(f"tstar_pdf requires t in (0, 1), got {t}")
    n = model.n
    return math.exp(
        (n - 1.0) * math.log(4.0)
        + (n - 2.0) * math.log(t)
        - 0.5 * math.log1p(-t)
        - log_beta(0.5, n - 1.0)
        - (n - 0.5) * math.log1p(3.0 * t)
    )


def tstar_cdf(t: float, model: TstarModel) -> float:
    """Closed-form cdf: I_{4t/(1+3t)}(n-1, 1/2)."""
    if not 0.0 <= t <= 1.0:
        raise ValueError(f"tstar_cdf requires t in [0, 1], got {t}")
    if t == 0.0:
        return 0.0
    if t == 1.0:
        return 1.0
    return reg_inc_beta(4.0 * t / (1.0 + 3.0 * t), model.n - 1.0, 0.5)


def _scan_terms(t: float, n: float, ctl: SeriesControl):
    """Float log-space pass over term magnitudes.

    Returns (stop_k, peak_log) when an alternating-tail stop exists, or
    (None, cap_k) where cap_k bounds how many terms are still harmless
    to sum for the error report.
    """
    ln_t = math.log(t)
    l1mt = math.log1p(-t)
    ln3 = math.log(3.0)
    lpref = (n - 1.0) * math.log(4.0) - log_beta(0.5, n - 1.0)
    log_tol = math.log(ctl.abs_tol)
    peak = -math.inf
    prev = math.inf
    cap_k = ctl.max_terms
    for k in range(ctl.max_terms):
        a_k = n - 1.0 + k
        lb_k = log_beta(a_k, 0.5)
        lc_k = log_abs_gen_binom(n + k - 1.5, k)[0]
        # Leading-order size of I_t(a_k, 1/2); only used to place the stop.
        li_k = min(0.0, a_k * ln_t - 0.5 * l1mt - math.log(a_k) - lb_k)
        lt_k = k * ln3 + lc_k + lb_k + li_k
        scaled = lt_k + lpref
        peak = max(peak, scaled)
        if scaled > _LOG_TERM_LIMIT:
            return None, min(cap_k, k)
        if scaled > math.log(1e20):
            cap_k = min(cap_k, k)
        if k >= 1 and lt_k <= prev and scaled < log_tol - 2.0:
            return k, peak
        prev = lt_k
    return None, cap_k


def _mp_partial_sum(t: float, n: float, k_max: int, dps: int) -> float:
    with mp.workdps(dps):
        pref = mp.mpf(4.0) ** (n - 1.0) / mp.beta(mp.mpf(0.5), mp.mpf(n - 1.0))
        total = mp.mpf(0)
        for k in range(k_max):
            a_k = mp.mpf(n - 1.0 + k)
            term = (
                mp.mpf(-3.0) ** k
                * mp.binomial(mp.mpf(n + k - 1.5), k)
                * mp.beta(a_k, mp.mpf(0.5))
                * mp.betainc(a_k, mp.mpf(0.5), 0, mp.mpf(t), regularized=True)
            )
            total += term
        return float(total * pref)


def tstar_cdf_series(
    t: float, model: TstarModel, ctl: SeriesControl | None = None
) -> float:
    """Series evaluation of the cdf, for cross-validation against tstar_cdf.

    Terms: prefactor 4^{n-1}/B(1/2, n-1) times
    (-3)^k C(n+k-3/2, k) B(n-1+k, 1/2) I_t(n-1+k, 1/2), summed over k.
    Raises SeriesNonConvergenceError outside the convergent region
    (t >= 1/3) or when max_terms is exhausted.
    """
    ctl = ctl or SeriesControl()
    if not 0.0 <= t <= 1.0:
        raise ValueError(f"tstar_cdf_series requires t in [0, 1], got {t}")
    if t == 0.0:
        return 0.0
    n = model.n

    stop_k, info = _scan_terms(t, n, ctl)
    if stop_k is None:
        cap_k = max(1, min(info, 300))
        partial = _mp_partial_sum(t, n, cap_k, dps=50)
        raise SeriesNonConvergenceError(
            f"series cdf did not converge for t={t}, n={n} "
            f"(convergent region is t < 1/3); partial sum over first "
            f"{cap_k} terms = {partial:.6g}",
            partial_sum=partial,
            terms_used=cap_k,
        )

    # Alternating terms cancel down from the scanned peak to O(abs_tol);
    # size the working precision to cover that whole dynamic range.
    peak10 = info / math.log(10.0)
    dps = max(25, int(peak10 - math.log10(ctl.abs_tol)) + 15)
    with mp.workdps(dps):
        pref = mp.mpf(4.0) ** (n - 1.0) / mp.beta(mp.mpf(0.5), mp.mpf(n - 1.0))
        tt = mp.mpf(t)
        half = mp.mpf(0.5)
        total = mp.mpf(0)
        prev_mag = None
        terms_used = 0
        converged = False
        for k in range(ctl.max_terms):
            a_k = mp.mpf(n - 1.0 + k)
            term = (
                mp.mpf(-3.0) ** k
                * mp.binomial(mp.mpf(n + k - 1.5), k)
                * mp.beta(a_k, half)
                * mp.betainc(a_k, half, 0, tt, regularized=True)
            )
            total += term
            terms_used = k + 1
            mag = abs(term * pref)
            if k >= 1 and prev_mag is not None and mag <= prev_mag and mag < ctl.abs_tol:
                converged = True
                break
            prev_mag = mag
        value = float(total * pref)
    if not converged:
        raise SeriesNonConvergenceError(
            f"series cdf did not settle within max_terms={ctl.max_terms} "
            f"for t={t}, n={n}; partial sum = {value:.6g}",
            partial_sum=value,
            terms_used=terms_used,
        )
    return value


def tstar_quantile(p: float, model: TstarModel) -> float:
    """Inverse cdf by bracketing root-finding; |cdf(result) - p| <= ~1e-10."""
    if not 0.0 < p < 1.0:
        raise ValueError(f"tstar_quantile requires p in (0, 1), got {p}")
    lo, hi = 1e-300, 1.0 - 1e-16
    return brentq(
        lambda t: tstar_cdf(t, model) - p, lo, hi, xtol=1e-15, rtol=8.9e-16, maxiter=300
    )
