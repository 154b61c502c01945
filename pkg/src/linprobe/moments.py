"""Central moments of sums of independent {0,1} variables: exact closed
forms, brute-force enumeration oracles, and tail-probability reports.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Optional

import numpy as np

from .hashing import derived_rng

ENUM_LIMIT = 20


@dataclass(frozen=True)
class BernoulliProfile:
    """Success probabilities of n independent indicator variables."""

    probabilities: tuple[float, ...]

    def __post_init__(self):
        if any(not 0.0 <= p <= 1.0 for p in self.probabilities):
            raise ValueError("probabilities must lie in [0, 1]")

    @property
    def n(self) -> int:
        return len(self.probabilities)

    @cached_property
    def mu(self) -> float:
        return math.fsum(self.probabilities)

    @cached_property
    def variance(self) -> float:
        return math.fsum(p - p * p for p in self.probabilities)

    @classmethod
    def uniform(cls, n: int, p: float) -> "BernoulliProfile":
        return cls((p,) * n)


def exact_fourth_moment(profile: BernoulliProfile) -> float:
    """E[(X - mu)^4] in closed form, O(n).

    Diagonal terms sum p(1-p)((1-p)^3 + p^3); the 6 * sum_{a<b} s_a^2 s_b^2
    cross term is 3 * ((sum s_i^2)^2 - sum s_i^4).
    """
    ps = profile.probabilities
    diag = math.fsum(p * (1 - p) * ((1 - p) ** 3 + p**3) for p in ps)
    s2 = [p - p * p for p in ps]
    cross = 3.0 * (math.fsum(s2) ** 2 - math.fsum(v * v for v in s2))
    return diag + cross


def sum_distribution(profile: BernoulliProfile) -> np.ndarray:
    """Exact distribution of X = sum X_i as an array of length n+1, built by
    enumerating all 2^n outcomes.  Limited to n <= ENUM_LIMIT."""
    if profile.n > ENUM_LIMIT:
        raise ValueError(f"n = {profile.n} exceeds enumeration limit {ENUM_LIMIT}")
    probs = np.array([1.0])
    sums = np.array([0])
    for p in profile.probabilities:
        probs = np.concatenate([probs * (1 - p), probs * p])
        sums = np.concatenate([sums, sums + 1])
    dist = np.zeros(profile.n + 1)
    np.add.at(dist, sums, probs)
    return dist


def brute_force_moment(profile: BernoulliProfile, k: int) -> float:
    """E[(X - mu)^k] by full 2^n outcome enumeration (n <= ENUM_LIMIT);
    the independent oracle for the closed forms and bounds."""
    if profile.n > ENUM_LIMIT:
        raise ValueError(f"n = {profile.n} exceeds enumeration limit {ENUM_LIMIT}")
    mu = profile.mu
    probs = np.array([1.0])
    devs = np.array([-mu])
    for p in profile.probabilities:
        probs = np.concatenate([probs * (1 - p), probs * p])
        devs = np.concatenate([devs, devs + 1])
    return math.fsum(probs * devs**k)


def fourth_moment_bound(mu: float) -> float:
    """The bound 4 * mu^2 on E[(X - mu)^4]; valid for mu >= 1."""
    if mu < 1:
        raise ValueError("bound requires mu >= 1")
    return 4.0 * mu * mu


def fourth_moment_bound_sharp(mu: float) -> float:
    """The sharper intermediate bound mu + 3 * mu^2."""
    if mu < 1:
        raise ValueError("bound requires mu >= 1")
    return mu + 3.0 * mu * mu


def kth_moment_bound_terms(variance: float, k: int) -> float:
    """sum_{c=1}^{floor(k/2)} c^k / c! * variance^c: the fully constructive
    bound on E[(X - mu)^k] under k-wise independence."""
    if k < 2:
        raise ValueError("k must be >= 2")
    return math.fsum(
        c**k / math.factorial(c) * variance**c for c in range(1, k // 2 + 1)
    )


def kth_moment_bound_check(profile: BernoulliProfile, k: int):
    """Compare the enumerated k-th central moment against the constructive
    bound.  Returns (exact, bound, ok)."""
    exact = brute_force_moment(profile, k)
    bound = kth_moment_bound_terms(profile.variance, k)
    return exact, bound, exact <= bound + 1e-12 * max(1.0, bound)


@dataclass(frozen=True)
class TailReport:
    d: float
    k: int
    empirical_prob: float
    std_error: float
    bound_chebyshev: float  # 1 / d^2
    bound_fourth: float  # 4 / d^4
    bound_k: float
    exact: bool

    @property
    def vacuous(self) -> bool:
        return self.bound_fourth >= 1.0


def tail_check(
    profile: BernoulliProfile,
    d: float,
    k: int = 4,
    trials: int = 10**5,
    seed: Optional[int] = None,
) -> TailReport:
    """Estimate Pr[|X - mu| >= d * sqrt(mu)] and report it against the
    second-, fourth- and k-th-moment bounds.

    Exact by enumeration when n <= ENUM_LIMIT, otherwise Monte Carlo with
    `trials` samples from the given seed.
    """
    mu = profile.mu
    if mu < 1:
        raise ValueError("tail bounds require mu >= 1")
    # shave a relative epsilon so boundary outcomes (|X - mu| exactly
    # d*sqrt(mu)) are counted despite rounding in the product
    cut = d * math.sqrt(mu) * (1 - 1e-12)
    exact = profile.n <= ENUM_LIMIT
    if exact:
        dist = sum_distribution(profile)
        vals = np.arange(profile.n + 1)
        prob = float(dist[np.abs(vals - mu) >= cut].sum())
        se = 0.0
    else:
        if seed is None:
            raise ValueError("sampling a large profile requires a seed")
        rng = derived_rng(seed, 0)
        ps = np.array(profile.probabilities)
        hits = 0
        chunk = 1 << 14
        done = 0
        while done < trials:
            m = min(chunk, trials - done)
            x = (rng.random((m, profile.n)) < ps).sum(axis=1)
            hits += int((np.abs(x - mu) >= cut).sum())
            done += m
        prob = hits / trials
        se = math.sqrt(max(prob * (1 - prob), 1e-12) / trials)
    bound_k = kth_moment_bound_terms(profile.variance, k) / (cut**k)
    return TailReport(
        d=d,
        k=k,
        empirical_prob=prob,
        std_error=se,
        bound_chebyshev=1.0 / d**2,
        bound_fourth=4.0 / d**4,
        bound_k=bound_k,
        exact=exact,
    )
