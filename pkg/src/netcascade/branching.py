"""Galton-Watson total progeny, the Chernoff rate function, and tail-bound checks.

For a subcritical offspring law xi the total progeny T obeys
Pr[|T| > k] <= exp(-k h) with h = sup_{theta >= 0} (theta - log E[exp(theta xi)]).
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import stats
from scipy.special import logsumexp

from .cascade import ProportionEstimate, proportion_interval

OVERFLOW_CAP = 10_000_000
DEFAULT_GENERATION_CAP = 10_000


@dataclass(frozen=True)
class OffspringDistribution:
    """Offspring law on {0, ..., len(pmf) - 1}."""
    pmf: np.ndarray
    label: str = "pmf"

    def __post_init__(self):
        pmf = np.asarray(self.pmf, dtype=float)
        if pmf.ndim != 1 or len(pmf) == 0:
            raise ValueError("pmf must be a non-empty 1-d sequence")
        if not np.all(np.isfinite(pmf)) or np.any(pmf < 0):
            raise ValueError("pmf entries must be finite and non-negative")
        if abs(math.fsum(pmf) - 1.0) > 1e-12:
            raise ValueError(f"pmf must sum to 1 within 1e-12, got {math.fsum(pmf)!r}")
        object.__setattr__(self, "pmf", pmf)

    @classmethod
    def from_pmf(cls, pmf) -> "OffspringDistribution":
        """Accepts a sequence or a ``{value: probability}`` mapping."""
        if isinstance(pmf, dict):
            if any(int(k) != k or k < 0 for k in pmf):
                raise ValueError("pmf support must be non-negative integers")
            arr = np.zeros(int(max(pmf)) + 1)
            for k, v in pmf.items():
                arr[int(k)] += v
            pmf = arr
        return cls(np.asarray(pmf, dtype=float))

    @classmethod
    def bernoulli(cls, q: float) -> "OffspringDistribution":
        return cls.bernoulli_sum(1, q)

    @classmethod
    def bernoulli_sum(cls, m: int, q) -> "OffspringDistribution":
        """Sum of m independent Bernoulli trials.

        A scalar q gives the binomial law; a length-m sequence of success
        probabilities is handled by convolution.
        """
        if m < 0:
            raise ValueError(f"m must be non-negative, got {m}")
        qs = np.atleast_1d(np.asarray(q, dtype=float))
        if np.any(qs < 0) or np.any(qs > 1):
            raise ValueError("trial probabilities must lie in [0, 1]")
        if qs.size == 1:
            pmf = stats.binom.pmf(np.arange(m + 1), m, float(qs[0]))
            pmf = pmf / math.fsum(pmf)
            return cls(pmf, f"bernoulli-sum(m={m}, q={float(qs[0])})")
        if qs.size != m:
            raise ValueError(f"expected {m} trial probabilities, got {qs.size}")
        pmf = np.ones(1)
        for x in qs:
            pmf = np.convolve(pmf, [1 - x, x])
        return cls(pmf, f"bernoulli-sum(m={m}, heterogeneous)")

    @property
    def support(self) -> np.ndarray:
        return np.arange(len(self.pmf))

    @property
    def mean(self) -> float:
        return float(self.support @ self.pmf)

    def log_mgf(self, theta: float) -> float:
        """log E[exp(theta xi)], computed without overflow."""
        mask = self.pmf > 0
        return float(logsumexp(theta * self.support[mask], b=self.pmf[mask]))

    def mgf(self, theta: float) -> float:
        return math.exp(self.log_mgf(theta))


@dataclass(frozen=True)
class Overflow:
    """A run that exceeded the individual or generation cap."""
    individuals: int
    generations: int


def simulate_total_progeny(offspring: OffspringDistribution, rng, generation_cap: int = DEFAULT_GENERATION_CAP,
                           overflow_cap: int = OVERFLOW_CAP) -> int | Overflow:
    """Total individuals (root included) of one run, or :class:`Overflow`."""
    if generation_cap < 1:
        raise ValueError("generation_cap must be at least 1")
    rng = np.random.default_rng(rng)
    total, alive = 1, 1
    for gen in range(generation_cap):
        if alive == 0:
            return total
        alive = int(rng.multinomial(alive, offspring.pmf) @ offspring.support)
        total += alive
        if total > overflow_cap:
            return Overflow(total, gen + 1)
    return total if alive == 0 else Overflow(total, generation_cap)


def total_progeny_runs(offspring: OffspringDistribution, runs: int, seed=0,
                       generation_cap: int = DEFAULT_GENERATION_CAP,
                       overflow_cap: int = OVERFLOW_CAP) -> np.ndarray:
    """Many independent runs at once, one generation per step; -1 marks overflow."""
    if runs < 1:
        raise ValueError("runs must be positive")
    rng = np.random.default_rng(seed)
    total = np.ones(runs, dtype=np.int64)
    alive = np.ones(runs, dtype=np.int64)
    over = np.zeros(runs, dtype=bool)
    support = offspring.support
    for _ in range(generation_cap):
        active = np.flatnonzero((alive > 0) & ~over)
        if active.size == 0:
            break
        born = rng.multinomial(alive[active], offspring.pmf) @ support
        alive[active] = born
        total[active] += born
        over[active] |= total[active] > overflow_cap
    over |= alive > 0
    total[over] = -1
    return total


@dataclass(frozen=True)
class RateFunction:
    h: float
    argmax_theta: float
    boundary: bool
    theta_max: float

    def bound(self, k: float) -> float:
        return math.exp(-k * self.h)


def _objective(offspring, thetas: np.ndarray) -> np.ndarray:
    mask = offspring.pmf > 0
    x = offspring.support[mask]
    return thetas - logsumexp(np.outer(thetas, x), b=offspring.pmf[mask], axis=1)


def rate_function(offspring: OffspringDistribution, theta_max: float = 50.0, grid: int = 2001,
                  resolution: float = 1e-8) -> RateFunction:
    """Maximize theta - log E[exp(theta xi)] over [0, theta_max].

    The objective is concave, so a coarse grid followed by repeated zooming
    around the best point converges to the maximizer. ``boundary`` is set
    when the maximizer sits at theta_max (the supremum may lie at infinity).
    Non-subcritical laws give h = 0 with a warning.
    """
    if not theta_max > 0:
        raise ValueError("theta_max must be positive")
    if offspring.mean >= 1:
        warnings.warn(f"offspring mean {offspring.mean:g} >= 1: the tail bound is vacuous, returning h = 0",
                      RuntimeWarning, stacklevel=2)
        return RateFunction(0.0, 0.0, False, theta_max)
    lo, hi = 0.0, float(theta_max)
    step = (hi - lo) / (grid - 1)
    best_t, best_f = 0.0, -math.inf
    while True:
        ts = np.linspace(lo, hi, grid)
        fs = _objective(offspring, ts)
        if not np.all(np.isfinite(fs)):
            raise ValueError("moment generating function is not finite on the search grid")
        i = int(np.argmax(fs))
        if fs[i] > best_f:
            best_t, best_f = float(ts[i]), float(fs[i])
        if step <= resolution:
            break
        lo, hi = max(0.0, best_t - step), min(float(theta_max), best_t + step)
        step = (hi - lo) / (grid - 1)
    return RateFunction(best_f, best_t, best_t >= theta_max - resolution, float(theta_max))


def objective_slope(offspring: OffspringDistribution, theta: float) -> float:
    """d/dtheta of theta - log E[exp(theta xi)], i.e. 1 minus the tilted mean."""
    mask = offspring.pmf > 0
    x = offspring.support[mask]
    w = np.log(offspring.pmf[mask]) + theta * x
    w = np.exp(w - logsumexp(w))
    return float(1.0 - w @ x)


@dataclass(frozen=True)
class TailRow:
    k: int
    tail: ProportionEstimate
    bound: float

    @property
    def satisfied(self) -> bool:
        """The bound is consistent with the data: the interval reaches at or below it."""
        return self.tail.lower <= self.bound

    def to_dict(self) -> dict:
        return {"k": self.k, "empirical": self.tail.estimate, "lower": self.tail.lower,
                "upper": self.tail.upper, "bound": self.bound, "satisfied": self.satisfied}


def verify_tail_bound(offspring: OffspringDistribution, k_list, runs: int = 100_000, seed=0,
                      confidence: float = 0.99, theta_max: float = 50.0,
                      rate: RateFunction | None = None) -> list[TailRow]:
    """Empirical Pr[|T| > k] against exp(-k h) for each k; overflowed runs count as large."""
    rate = rate_function(offspring, theta_max) if rate is None else rate
    sizes = total_progeny_runs(offspring, runs, seed)
    big = np.where(sizes < 0, np.iinfo(np.int64).max, sizes)
    rows = []
    for k in k_list:
        hits = int(np.count_nonzero(big > k))
        rows.append(TailRow(int(k), proportion_interval(hits, runs, confidence), rate.bound(k)))
    return rows


@dataclass(frozen=True)
class MomentCheck:
    theta: float
    mgf: float
    limit: float

    @property
    def holds(self) -> bool:
        return self.mgf <= self.limit + 1e-12


def moment_bound_check(m: int, q: float, n: int, eps: float) -> MomentCheck:
    """E[exp(theta' xi)] at theta' = eps log n - 1 for xi ~ Binomial(m, q), against e / (e - 1).

    Applies when q <= 1/n and m <= n^(1 - eps); the mgf is summed from the pmf.
    """
    theta = eps * math.log(n) - 1
    offspring = OffspringDistribution.bernoulli_sum(m, q)
    value = math.fsum(offspring.pmf * np.exp(theta * offspring.support))
    return MomentCheck(theta, value, math.e / (math.e - 1))
