"""Randomized coboundary tester: weighted face sampling, k+2 queries, parity test.

A trial samples a (k+1)-face with probability equal to its weight (the
integer cofacet counts give the exact distribution), reads the cochain on
the face's k+2 facets, and rejects on odd parity.  Coboundaries are never
rejected; for any cochain the exact rejection probability is the weighted
norm of its coboundary, which certified expansion bounds relate to the
distance from the coboundary space.
"""

from __future__ import annotations

import random
from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from itertools import accumulate

from . import f2
from .errors import BudgetExceeded
from .expansion import DEFAULT_BUDGET, coset_norm, norm

RNG_ALGORITHM = "mersenne-twister"


@dataclass(frozen=True)
class TesterConfig:
    __test__ = False  # not a pytest class

    k: int
    trials: int
    seed: int
    shards: int = 1

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("need at least one trial")


def cumulative_table(X, k1):
    """Integer cumulative cofacet counts over the (k+1)-faces."""
    return list(accumulate(X.cofacet_count[k1]))


def sample_face(X, k1, rng, cum=None):
    """Sample a (k+1)-face index with probability proportional to c(eta)."""
    if cum is None:
        cum = cumulative_table(X, k1)
    r = rng.randrange(cum[-1])
    return bisect_right(cum, r)


def test_once(X, k, alpha_bits, eta_idx):
    """Query the k+2 facets of one (k+1)-face; True means reject (odd parity)."""
    subs = X.subface_ids[k + 1][eta_idx]
    parity = 0
    for s in subs:
        parity ^= (alpha_bits >> s) & 1
    return parity == 1


def derive_seed(seed, shard):
    return (seed * 0x9E3779B97F4A7C15 + shard * 0xBF58476D1CE4E5B9) & (2**64 - 1)


@dataclass
class TesterReport:
    __test__ = False  # not a pytest class

    k: int
    trials: int
    seed: int
    algorithm: str
    rejections: int
    empirical_rate: Fraction
    expected_rate: Fraction
    distance: Fraction
    distance_mode: str
    epsilon: Fraction
    epsilon_source: str
    sound: bool
    queries_per_trial: int
    shards: int

    def as_json(self):
        def fmt(x):
            if x is None:
                return None
            return f"{x.numerator}/{x.denominator}"

        return {
            "k": self.k,
            "trials": self.trials,
            "seed": self.seed,
            "algorithm": self.algorithm,
            "rejections": self.rejections,
            "empirical_rate": fmt(self.empirical_rate),
            "expected_rate": fmt(self.expected_rate),
            "distance": fmt(self.distance),
            "distance_mode": self.distance_mode,
            "epsilon": fmt(self.epsilon),
            "epsilon_source": self.epsilon_source,
            "sound": self.sound,
            "queries_per_trial": self.queries_per_trial,
            "shards": self.shards,
        }


def run_tester(
    X,
    alpha_bits,
    cfg: TesterConfig,
    *,
    distance_budget=DEFAULT_BUDGET,
    epsilon_certificate=None,
):
    """Run the tester and report empirical vs exact rates and soundness.

    The exact expected rejection rate is the weighted norm of the cochain's
    coboundary.  When the coset norm fits the budget, the report includes
    the exact distance and the soundness check against epsilon (the best
    certified lower bound supplied by the caller); otherwise the soundness
    line is omitted.
    """
    k = cfg.k
    cum = cumulative_table(X, k + 1)
    per_shard = [cfg.trials // cfg.shards] * cfg.shards
    per_shard[0] += cfg.trials - sum(per_shard)
    rejections = 0
    for shard, n_trials in enumerate(per_shard):
        rng = random.Random(derive_seed(cfg.seed, shard))
        for _ in range(n_trials):
            eta = sample_face(X, k + 1, rng, cum)
            if test_once(X, k, alpha_bits, eta):
                rejections += 1
    expected = norm(X, k + 1, f2.coboundary_bits(X, k, alpha_bits))
    distance = None
    mode = "budget-exceeded"
    try:
        distance, _ = coset_norm(X, k, alpha_bits, budget=distance_budget)
        mode = "exact"
    except BudgetExceeded:
        pass
    epsilon = epsilon_certificate.value if epsilon_certificate else None
    source = epsilon_certificate.name if epsilon_certificate else ""
    sound = None
    if distance is not None and epsilon is not None:
        sound = expected >= epsilon * distance
    return TesterReport(
        k=k,
        trials=cfg.trials,
        seed=cfg.seed,
        algorithm=RNG_ALGORITHM,
        rejections=rejections,
        empirical_rate=Fraction(rejections, cfg.trials),
        expected_rate=expected,
        distance=distance,
        distance_mode=mode,
        epsilon=epsilon,
        epsilon_source=source,
        sound=sound,
        queries_per_trial=k + 2,
        shards=cfg.shards,
    )
