"""Distribution of T = Z1 + Z2 for known, possibly unequal variances.

The joint density of (Z1, Z2) lives on the open square (0, 1/2)^2 and
is driven by the constants a = 1/sigma_x^2, b = sigma_x^2 + sigma_y^2,
c = 1/sigma_y^2 (only the products ab = 1 + sy2/sx2 and bc = 1 + sx2/sy2
matter).  Three evaluators are provided:

* ``general_cdf_quadrature`` -- the production path.  In the ratio
  coordinates w_i = z_i/(1 - 2 z_i) the joint density collapses to
  const * (w1 w2)^{(n-3)/2} (1/2 + ab w1 + bc w2)^{-(n-1/2)}, so the
  inner variable integrates in closed form through the regularized
  incomplete beta.  Mapping the outer variable to its exact marginal
  Beta((n-1)/2, 1/2) coordinate x = 2 ab w1/(1 + 2 ab w1) leaves
  F_T(t) = 1/B((n-1)/2, 1/2) * int_0^{x1max} x^{(n-1)/2-1} (1-x)^{-1/2}
  I_X(x)((n-1)/2, n/2) dx, a smooth 1-D integral once the endpoint
  square-root singularities are substituted away.  Every variance
  parameter cancels from the prefactor, which pins the constant.

* ``general_cdf_series`` / ``general_pdf_series`` -- the five-fold
  binomial expansion, EXPERIMENTAL.  Two transcriptions of the
  expansion circulate and disagree about the k-binomial and the power
  of t; neither matches the quadrature cdf for any parameter set we
  tested (their terms grow without bound).  Redoing the inner
  expansions from the joint density fixes the exponents, and that
  REDERIVED variant does match quadrature wherever it converges.  All
  three stay selectable for comparison.

* ``sample_T`` -- Monte Carlo draws via T = U/(2U + 2 ab V) +
  S/(2S + 2 bc V) with U, S ~ chi2_{n-1} and V ~ chi2_1 shared.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy import integrate

from .special import log_abs_gen_binom, log_beta

__all__ = [
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
]

_QUAD_TARGET = 1e-6  # documented absolute error target for the cdf
_LOG_TERM_LIMIT = 600.0
_SOFT_TERM_CAP = 2_000_000


class QuadratureError(ArithmeticError):
    """Quadrature failed to meet the error target; carries the estimate."""

    def __init__(self, message: str, value: float, error_estimate: float):
        super().__init__(message)
        self.value = value
        self.error_estimate = error_estimate


class SeriesOverflowError(ArithmeticError):
    """A series term left the float64 range; the sum is hopeless there."""


@dataclass(frozen=True)
class GeneralModel:
    n: int
    sigma_x2: float
    sigma_y2: float

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 2:
            raise ValueError(f"GeneralModel requires integer n >= 2, got {self.n}")
        if self.sigma_x2 <= 0.0 or self.sigma_y2 <= 0.0:
            raise ValueError(
                f"variances must be positive, got ({self.sigma_x2}, {self.sigma_y2})"
            )

    @property
    def a(self) -> float:
        return 1.0 / self.sigma_x2

    @property
    def b(self) -> float:
        return self.sigma_x2 + self.sigma_y2

    @property
    def c(self) -> float:
        return 1.0 / self.sigma_y2

    @property
    def ab(self) -> float:
        return self.b / self.sigma_x2  # = 1 + sy2/sx2 >= 1

    @property
    def bc(self) -> float:
        return self.b / self.sigma_y2  # = 1 + sx2/sy2 >= 1


@dataclass(frozen=True)
class SeriesCaps:
    """Per-index caps for the five summation indices, plus the stop tolerance."""

    k: int = 40
    l: int = 40
    m: int = 40
    p: int = 40
    q: int = 40
    abs_tol: float = 1e-8

    def __post_init__(self):
        for name in ("k", "l", "m", "p", "q"):
            if getattr(self, name) < 1:
                raise ValueError(f"cap {name} must be >= 1")
        if not self.abs_tol > 0.0:
            raise ValueError(f"abs_tol must be positive, got {self.abs_tol}")


@dataclass(frozen=True)
class SeriesOutcome:
    value: float
    converged: bool
    terms_used: int


class SeriesVariant(Enum):
    """Exponent convention for the five-fold series.

    REDERIVED: k-binomial C(n/2-1, k) with (-2)^k, m-binomial
      C(n/2-1, m), q-base 2(1-ab), t-power n-1+k+l+m+p+q, denominator
      (n-1)/2+k+l.  Matches the quadrature cdf wherever it converges.
    LEGACY_HIGH: k-binomial C((n+1)/2, k) with (-2)^k, m-binomial
      C(n/2, m), q-base -2(1-ab), t-power 1+k+l-m-p-q, denominator
      (n+1)/2+k+l.
    LEGACY_LOW: k-binomial C((n-1)/2+k, k) with 2^k, otherwise as
      LEGACY_HIGH but t-power k+l-m-p-q and denominator (n-1)/2+k+l.
    """

    REDERIVED = "rederived"
    LEGACY_HIGH = "legacy-high"
    LEGACY_LOW = "legacy-low"


def _log_4ab2c(model: GeneralModel) -> float:
    # ln(4ab^2c) summed in log-space so b^2 cannot overflow.
    return (
        math.log(4.0)
        + math.log(model.a)
        + 2.0 * math.log(model.b)
        + math.log(model.c)
    )


def joint_pdf_z1z2(z1: float, z2: float, model: GeneralModel) -> float:
    """Joint density of (Z1, Z2) on the open square, evaluated in log-space."""
    if not (0.0 < z1 < 0.5 and 0.0 < z2 < 0.5):
        raise ValueError(f"joint_pdf_z1z2 requires z in (0, 1/2)^2, got ({z1}, {z2})")
    n = model.n
    d = 0.5 + model.ab * z1 / (1.0 - 2.0 * z1) + model.bc * z2 / (1.0 - 2.0 * z2)
    lk = (
        0.5 * (n - 1.0) * _log_4ab2c(model)
        + math.lgamma(n - 0.5)
        - (n - 0.5) * math.log(2.0)
        - math.lgamma(0.5)
        - 2.0 * math.lgamma((n - 1.0) / 2.0)
    )
    return math.exp(
        lk
        + ((n - 1.0) / 2.0 - 1.0) * (math.log(z1) + math.log(z2))
        - (n + 1.0) / 2.0 * (math.log(1.0 - 2.0 * z1) + math.log(1.0 - 2.0 * z2))
        - (n - 0.5) * math.log(d)
    )


def _joint_or_zero(z1: float, z2: float, model: GeneralModel) -> float:
    if not (0.0 < z1 < 0.5 and 0.0 < z2 < 0.5):
        return 0.0
    return joint_pdf_z1z2(z1, z2, model)


def general_cdf_quadrature(
    t: float, model: GeneralModel, with_error: bool = False
):
    """P(T <= t) by the reduced 1-D quadrature described in the module docs.

    With ``with_error=True`` returns (value, error_estimate) instead of
    the bare value.
    """
    if not 0.0 <= t <= 1.0:
        raise ValueError(f"general_cdf_quadrature requires t in [0, 1], got {t}")
    if t <= 0.0:
        return (0.0, 0.0) if with_error else 0.0
    if t >= 1.0:
        return (1.0, 0.0) if with_error else 1.0
    n = model.n
    ab, bc = model.ab, model.bc
    pa, qa = (n - 1.0) / 2.0, n / 2.0

    if t >= 0.5:
        x1max = 1.0
    else:
        x1max = 2.0 * ab * t / (1.0 - 2.0 * (1.0 - ab) * t)

    from .special import reg_inc_beta  # local import keeps module load light

    def inner(x: float) -> float:
        # Fraction of the z2 mass inside the region, given z1(x).
        z1 = x / (2.0 * ab + 2.0 * (1.0 - ab) * x)
        rem = t - z1
        if rem >= 0.5:
            return 1.0
        if rem <= 0.0:
            return 0.0
        w2 = rem / (1.0 - 2.0 * rem)
        g = 2.0 * (1.0 - x) * bc * w2
        return reg_inc_beta(g / (1.0 + g), pa, qa)

    mid = 0.5 * x1max
    # x = r^2 kills the x^{(n-1)/2-1} singularity at 0 (n = 2 case).
    f_low = lambda r: 2.0 * r ** (n - 2) * (1.0 - r * r) ** -0.5 * inner(r * r)
    v1, e1 = integrate.quad(
        f_low, 0.0, math.sqrt(mid), limit=200, epsabs=1e-11, epsrel=1e-10
    )
    # x = 1 - s^2 kills the (1-x)^{-1/2} singularity at 1.
    f_high = lambda s: 2.0 * (1.0 - s * s) ** ((n - 1.0) / 2.0 - 1.0) * inner(
        1.0 - s * s
    )
    v2, e2 = integrate.quad(
        f_high,
        math.sqrt(max(1.0 - x1max, 0.0)),
        math.sqrt(1.0 - mid),
        limit=200,
        epsabs=1e-11,
        epsrel=1e-10,
    )
    scale = math.exp(-log_beta(pa, 0.5))
    value = (v1 + v2) * scale
    estimate = (e1 + e2) * scale
    if estimate > _QUAD_TARGET:
        raise QuadratureError(
            f"cdf quadrature error estimate {estimate:.3e} exceeds target "
            f"{_QUAD_TARGET:.0e} at t={t}, n={n}",
            value=value,
            error_estimate=estimate,
        )
    value = min(max(value, 0.0), 1.0)
    return (value, estimate) if with_error else value


def general_pdf_quadrature(t: float, model: GeneralModel) -> float:
    """Density of T by the convolution integral of the joint density.

    f_T(t) = int f(z, t-z) dz over max(0, t-1/2) < z < min(t, 1/2); the
    sin^2 substitution bounds the integrand at both endpoints.  Used as
    a cross-check for the series pdf.
    """
    if not 0.0 < t < 1.0:
        raise ValueError(f"general_pdf_quadrature requires t in (0, 1), got {t}")
    lo = max(0.0, t - 0.5)
    hi = min(t, 0.5)
    span = hi - lo
    if span <= 0.0:
        return 0.0

    def f(theta: float) -> float:
        z = lo + span * math.sin(theta) ** 2
        return span * math.sin(2.0 * theta) * _joint_or_zero(z, t - z, model)

    value, _ = integrate.quad(
        f, 0.0, 0.5 * math.pi, limit=200, epsabs=1e-10, epsrel=1e-9
    )
    return value


def sample_T(model: GeneralModel, reps: int, seed: int) -> np.ndarray:
    """Monte Carlo draws of T; deterministic for a given seed."""
    if reps < 1:
        raise ValueError(f"reps must be >= 1, got {reps}")
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))
    n = model.n
    u = rng.chisquare(n - 1, reps)
    s = rng.chisquare(n - 1, reps)
    v = rng.chisquare(1, reps)
    return u / (2.0 * u + 2.0 * model.ab * v) + s / (2.0 * s + 2.0 * model.bc * v)


def _lpow(base: float, e: int) -> tuple[float, int]:
    """(ln |base^e|, sign) handling zero and negative bases."""
    if e == 0:
        return 0.0, 1
    if base == 0.0:
        return -math.inf, 0
    sign = -1 if (base < 0.0 and e % 2 == 1) else 1
    return e * math.log(abs(base)), sign


def _lchoose_int(l: int, p: int) -> float:
    return math.lgamma(l + 1) - math.lgamma(p + 1) - math.lgamma(l - p + 1)


def _series_engine(
    t: float,
    model: GeneralModel,
    caps: SeriesCaps,
    variant: SeriesVariant,
    derivative: bool,
) -> SeriesOutcome:
    n = model.n
    ab, bc = model.ab, model.bc
    ln_t = math.log(t)
    lc0 = (
        0.5 * (n - 1.0) * _log_4ab2c(model)
        + math.lgamma(n - 0.5)
        - math.lgamma(0.5)
        - 2.0 * math.lgamma((n - 1.0) / 2.0)
    )

    K, L, M, P, Q = caps.k, caps.l, caps.m, caps.p, caps.q

    if variant is SeriesVariant.REDERIVED:
        k_fac = [_combine(_lpow(-2.0, k), log_abs_gen_binom(n / 2.0 - 1.0, k)) for k in range(K + 1)]
        m_fac = [_combine(_lpow(-2.0, m), log_abs_gen_binom(n / 2.0 - 1.0, m)) for m in range(M + 1)]
        q_base = 2.0 * (1.0 - ab)
    elif variant is SeriesVariant.LEGACY_HIGH:
        k_fac = [_combine(_lpow(-2.0, k), log_abs_gen_binom((n + 1.0) / 2.0, k)) for k in range(K + 1)]
        m_fac = [_combine(_lpow(-2.0, m), log_abs_gen_binom(n / 2.0, m)) for m in range(M + 1)]
        q_base = -2.0 * (1.0 - ab)
    else:
        k_fac = [_combine(_lpow(2.0, k), log_abs_gen_binom((n - 1.0) / 2.0 + k, k)) for k in range(K + 1)]
        m_fac = [_combine(_lpow(-2.0, m), log_abs_gen_binom(n / 2.0, m)) for m in range(M + 1)]
        q_base = -2.0 * (1.0 - ab)

    l_fac = [
        _combine(_lpow(-2.0 * (bc - 1.0), l), log_abs_gen_binom(n - 1.5 + l, l))
        for l in range(L + 1)
    ]
    q_fac = [
        [
            _combine(_lpow(q_base, q), log_abs_gen_binom(n + l + q - 1.5, q))
            for q in range(Q + 1)
        ]
        for l in range(L + 1)
    ]
    # When bc - 1 underflows, every term with l >= 1 (hence every p >= 1)
    # already has a zero factor, so the p-base value is never used.
    p_base = 2.0 * (1.0 - ab - bc) / (bc - 1.0) if bc != 1.0 else 0.0

    # Beta factor tables: B((n-1)/2 + w, (n+1)/2 + v), w = m+p+q, v = k+l.
    lg_w = [math.lgamma((n - 1.0) / 2.0 + w) for w in range(M + P + Q + 1)]
    lg_v = [math.lgamma((n + 1.0) / 2.0 + v) for v in range(K + L + 1)]
    lg_s = [math.lgamma(n + u) for u in range(M + P + Q + K + L + 1)]

    if variant is SeriesVariant.LEGACY_HIGH:
        denom_base = (n + 1.0) / 2.0
    else:
        denom_base = (n - 1.0) / 2.0

    def t_power(k: int, l: int, m: int, p: int, q: int) -> float:
        if variant is SeriesVariant.REDERIVED:
            return n - 1.0 + k + l + m + p + q
        if variant is SeriesVariant.LEGACY_HIGH:
            return 1.0 + k + l - m - p - q
        return float(k + l - m - p - q)

    terms: list[float] = []
    nterms = 0
    prev_shell_max = 0.0
    growth_streak = 0
    running = 0.0
    converged = False

    for s in range(K + L + M + P + Q + 1):
        shell_max = 0.0
        shell_vals: list[float] = []
        for k in range(min(s, K) + 1):
            lk, sk = k_fac[k]
            if sk == 0:
                continue
            for l in range(min(s - k, L) + 1):
                ll, sl = l_fac[l]
                if sl == 0:
                    continue
                for m in range(min(s - k - l, M) + 1):
                    lm, sm = m_fac[m]
                    if sm == 0:
                        continue
                    for p in range(min(s - k - l - m, min(P, l)) + 1):
                        q = s - k - l - m - p
                        if q > Q:
                            continue
                        lq, sq = q_fac[l][q]
                        if sq == 0:
                            continue
                        lp, sp = _lpow(p_base, p)
                        lp += _lchoose_int(l, p)
                        w, v = m + p + q, k + l
                        e = t_power(k, l, m, p, q)
                        lterm = (
                            lc0
                            + lk
                            + ll
                            + lm
                            + lp
                            + lq
                            + lg_w[w]
                            + lg_v[v]
                            - lg_s[w + v]
                            - math.log(denom_base + k + l)
                            + e * ln_t
                        )
                        sign = sk * sl * sm * sp * sq
                        if derivative:
                            if e == 0.0:
                                continue
                            lterm += math.log(abs(e)) - ln_t
                            if e < 0.0:
                                sign = -sign
                        if lterm > _LOG_TERM_LIMIT:
                            raise SeriesOverflowError(
                                f"series term magnitude exp({lterm:.1f}) at "
                                f"(k,l,m,p,q)=({k},{l},{m},{p},{q}) exceeds the "
                                f"float range for t={t}, variant={variant.value}"
                            )
                        val = sign * math.exp(lterm)
                        shell_vals.append(val)
                        mag = abs(val)
                        if mag > shell_max:
                            shell_max = mag
                        nterms += 1
        terms.extend(shell_vals)
        running = math.fsum(terms)
        if s >= 1 and shell_max < caps.abs_tol:
            converged = True
            break
        if shell_max > prev_shell_max and s >= 1:
            growth_streak += 1
        else:
            growth_streak = 0
        prev_shell_max = shell_max
        # Five consecutive growing shells far above the running sum means
        # the expansion is outside its convergence region; stop burning time.
        if growth_streak >= 5 and shell_max > 10.0 * (abs(running) + 1.0):
            break
        if nterms > _SOFT_TERM_CAP:
            break

    return SeriesOutcome(value=running, converged=converged, terms_used=nterms)


def _combine(a: tuple[float, int], b: tuple[float, int]) -> tuple[float, int]:
    return a[0] + b[0], a[1] * b[1]


def general_cdf_series(
    t: float,
    model: GeneralModel,
    caps: SeriesCaps | None = None,
    variant: SeriesVariant = SeriesVariant.REDERIVED,
) -> SeriesOutcome:
    """EXPERIMENTAL five-fold series for the cdf.

    Callers needing correctness should use general_cdf_quadrature; this
    exists to document how far each exponent convention gets.  The
    outcome's ``converged`` is True only when the largest term of the
    last summed shell fell below caps.abs_tol.
    """
    if not 0.0 <= t <= 1.0:
        raise ValueError(f"general_cdf_series requires t in [0, 1], got {t}")
    caps = caps or SeriesCaps()
    if t == 0.0:
        return SeriesOutcome(value=0.0, converged=True, terms_used=0)
    return _series_engine(t, model, caps, variant, derivative=False)


def general_pdf_series(
    t: float,
    model: GeneralModel,
    caps: SeriesCaps | None = None,
    variant: SeriesVariant = SeriesVariant.REDERIVED,
) -> SeriesOutcome:
    """EXPERIMENTAL term-wise derivative of the cdf series."""
    if not 0.0 < t < 1.0:
        raise ValueError(f"general_pdf_series requires t in (0, 1), got {t}")
    caps = caps or SeriesCaps()
    return _series_engine(t, model, caps, variant, derivative=True)
