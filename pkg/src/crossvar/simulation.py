"""Monte Carlo power and type-I error studies for the cross-variance test.

Reproducibility contract: replicate i of stream s under master seed S
draws from Philox keyed by SeedSequence(entropy=S, spawn_key=(s, i)).
Streams and replicates are therefore order-independent and safe to
evaluate in any process layout; results are bitwise identical whether
run serially or across a process pool.  Stream 0 is the null
calibration stream of a power study; grid point g uses stream g + 1.
Type-I tables assign stream r to row r.

Each replicate draws x then y from its own generator and computes the
T* statistic, the cross-variance p-value, and the pooled-t p-value on
the same pair, so the two tests can be compared decision-by-decision.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .special import student_t_cdf
from .tstar import TstarModel, tstar_cdf, tstar_quantile

__all__ = [
    "QuantileMode",
    "StudyConfig",
    "ReplicateBlock",
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
]

_WORKERS_ENV = "CROSSVAR_MAX_WORKERS"
_PARALLEL_MIN_REPS = 4000
_CHUNK = 2000


class QuantileMode(Enum):
    EMPIRICAL = "empirical"
    ANALYTIC = "analytic"


@dataclass(frozen=True)
class StudyConfig:
    n: int
    reps: int
    alpha: float
    mu_x: float
    mu_y_grid: tuple[float, ...]
    sigma: float
    seed: int
    quantile_mode: QuantileMode = QuantileMode.EMPIRICAL

    def __post_init__(self):
        if self.n < 2:
            raise ValueError(f"n must be >= 2, got {self.n}")
        if self.reps < 1:
            raise ValueError(f"reps must be >= 1, got {self.reps}")
        if not 0.0 < self.alpha < 1.0:
            raise ValueError(f"alpha must be in (0, 1), got {self.alpha}")
        if self.sigma <= 0.0:
            raise ValueError(f"sigma must be positive, got {self.sigma}")
        object.__setattr__(self, "mu_y_grid", tuple(float(m) for m in self.mu_y_grid))


@dataclass(frozen=True)
class ReplicateBlock:
    """Per-replicate statistics for one (stream, mu_y) cell."""

    tstar: np.ndarray
    p_crossvar: np.ndarray
    p_t: np.ndarray


@dataclass(frozen=True)
class PowerCurve:
    config: StudyConfig
    threshold: float
    mu_y: tuple[float, ...]
    delta: tuple[float, ...]
    power_proposed: tuple[float, ...]
    power_t: tuple[float, ...]


@dataclass(frozen=True)
class Type1Result:
    config: StudyConfig
    stream: int
    p_proposed: np.ndarray
    p_t: np.ndarray

    def rate(self, alpha: float, which: str = "proposed") -> float:
        p = self.p_proposed if which == "proposed" else self.p_t
        return float(np.mean(p < alpha))


@dataclass(frozen=True)
class ErrorRateRow:
    n: int
    sigma: float
    rate_proposed: dict[float, float]
    rate_t: dict[float, float]


@dataclass(frozen=True)
class ErrorRateTable:
    mu: float
    reps: int
    seed: int
    alphas: tuple[float, ...]
    rows: tuple[ErrorRateRow, ...] = field(default_factory=tuple)


def replicate_rng(seed: int, stream: int, index: int) -> np.random.Generator:
    """Generator for replicate ``index`` of stream ``stream`` under ``seed``."""
    ss = np.random.SeedSequence(entropy=seed, spawn_key=(stream, index))
    return np.random.Generator(np.random.Philox(ss))


def make_normal_generator(mu: float, sigma: float, seed: int, stream: int = 0, index: int = 0):
    """Callable size -> N(mu, sigma^2) draws from one counter-based stream."""
    rng = replicate_rng(seed, stream, index)
    return lambda size: rng.normal(mu, sigma, size)


def empirical_quantile(values, q: float) -> float:
    """Sample quantile with linear interpolation between order statistics.

    This is numpy's default (type-7) convention: the q-quantile of
    sorted x is x[h] interpolated at h = q * (len(x) - 1).
    """
    if not 0.0 <= q <= 1.0:
        raise ValueError(f"quantile level must be in [0, 1], got {q}")
    arr = np.asarray(values, dtype=float)
    if arr.size == 0:
        raise ValueError("cannot take a quantile of an empty sample")
    return float(np.quantile(arr, q))


def _one_replicate(rng, n: int, mu_x: float, mu_y: float, sigma: float, model: TstarModel):
    x = rng.normal(mu_x, sigma, n)
    y = rng.normal(mu_y, sigma, n)
    vx = x.var(ddof=1)
    vy = y.var(ddof=1)
    gap = x.mean() - y.mean()
    sp2 = 0.5 * (vx + vy)
    pen = n * gap * gap / (n - 1.0)
    denom = sp2 + pen
    if denom == 0.0:  # both samples constant and equal; probability zero
        return 1.0, 1.0, 1.0
    tstar = sp2 / denom
    p_cv = tstar_cdf(tstar, model)
    df = 2 * (n - 1)
    se = math.sqrt(sp2 * 2.0 / n)
    if se == 0.0:
        p_t = 1.0 if gap == 0.0 else 0.0
    else:
        p_t = 2.0 * (1.0 - student_t_cdf(abs(gap) / se, df))
    return tstar, p_cv, p_t


def _chunk_worker(args):
    seed, stream, lo, hi, n, mu_x, mu_y, sigma = args
    model = TstarModel(float(n))
    size = hi - lo
    tstar = np.empty(size)
    p_cv = np.empty(size)
    p_t = np.empty(size)
    for j in range(size):
        rng = replicate_rng(seed, stream, lo + j)
        tstar[j], p_cv[j], p_t[j] = _one_replicate(rng, n, mu_x, mu_y, sigma, model)
    return lo, tstar, p_cv, p_t


def _max_workers() -> int:
    raw = os.environ.get(_WORKERS_ENV)
    if raw is not None:
        try:
            cap = int(raw)
        except ValueError:
            raise ValueError(f"{_WORKERS_ENV} must be an integer, got {raw!r}") from None
        return max(1, cap)
    return min(os.cpu_count() or 1, 8)


def simulate_replicates(
    config: StudyConfig, stream: int, mu_y: float
) -> ReplicateBlock:
    """All replicates of one stream; parallelized for large rep counts."""
    reps = config.reps
    chunks = [
        (config.seed, stream, lo, min(lo + _CHUNK, reps), config.n, config.mu_x, mu_y, config.sigma)
        for lo in range(0, reps, _CHUNK)
    ]
    tstar = np.empty(reps)
    p_cv = np.empty(reps)
    p_t = np.empty(reps)
    workers = _max_workers()
    if workers > 1 and reps >= _PARALLEL_MIN_REPS and len(chunks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for lo, ts, pc, pt in pool.map(_chunk_worker, chunks):
                tstar[lo : lo + ts.size] = ts
                p_cv[lo : lo + ts.size] = pc
                p_t[lo : lo + ts.size] = pt
    else:
        for chunk in chunks:
            lo, ts, pc, pt = _chunk_worker(chunk)
            tstar[lo : lo + ts.size] = ts
            p_cv[lo : lo + ts.size] = pc
            p_t[lo : lo + ts.size] = pt
    return ReplicateBlock(tstar=tstar, p_crossvar=p_cv, p_t=p_t)


def run_power_study(config: StudyConfig) -> PowerCurve:
    """Power of the cross-variance test against the pooled t test.

    Stream 0 calibrates the rejection threshold under the null
    (empirically at level alpha, or from the exact quantile when
    quantile_mode is ANALYTIC); grid point g then runs on stream g + 1
    and rejects when t* falls strictly below the threshold.  The t test
    is scored as p < alpha on the same draws.
    """
    if not config.mu_y_grid:
        raise ValueError("mu_y_grid must contain at least one alternative mean")
    model = TstarModel(float(config.n))
    if config.quantile_mode is QuantileMode.ANALYTIC:
        threshold = tstar_quantile(config.alpha, model)
    else:
        null_block = simulate_replicates(config, stream=0, mu_y=config.mu_x)
        threshold = empirical_quantile(null_block.tstar, config.alpha)
    power_proposed = []
    power_t = []
    for g, mu_y in enumerate(config.mu_y_grid):
        block = simulate_replicates(config, stream=g + 1, mu_y=mu_y)
        power_proposed.append(float(np.mean(block.tstar < threshold)))
        power_t.append(float(np.mean(block.p_t < config.alpha)))
    return PowerCurve(
        config=config,
        threshold=threshold,
        mu_y=config.mu_y_grid,
        delta=tuple(m - config.mu_x for m in config.mu_y_grid),
        power_proposed=tuple(power_proposed),
        power_t=tuple(power_t),
    )


def run_type1_study(config: StudyConfig, stream: int = 0) -> Type1Result:
    """Null rejection rates; requires the configured means to be equal."""
    for mu_y in config.mu_y_grid:
        if mu_y != config.mu_x:
            raise ValueError(
                f"type-I study requires mu_y == mu_x, got {mu_y} != {config.mu_x}"
            )
    block = simulate_replicates(config, stream=stream, mu_y=config.mu_x)
    return Type1Result(
        config=config, stream=stream, p_proposed=block.p_crossvar, p_t=block.p_t
    )


def run_type1_table(
    ns,
    sigmas,
    mu: float,
    reps: int,
    seed: int,
    alphas: tuple[float, ...] = (0.05, 0.01),
) -> ErrorRateTable:
    """Type-I table over an n x sigma grid; row r runs on stream r."""
    rows = []
    stream = 0
    for n in ns:
        for sigma in sigmas:
            config = StudyConfig(
                n=n,
                reps=reps,
                alpha=min(alphas),
                mu_x=mu,
                mu_y_grid=(mu,),
                sigma=sigma,
                seed=seed,
            )
            result = run_type1_study(config, stream=stream)
            rows.append(
                ErrorRateRow(
                    n=n,
                    sigma=sigma,
                    rate_proposed={a: result.rate(a, "proposed") for a in alphas},
                    rate_t={a: result.rate(a, "t") for a in alphas},
                )
            )
            stream += 1
    return ErrorRateTable(
        mu=mu, reps=reps, seed=seed, alphas=tuple(alphas), rows=tuple(rows)
    )
