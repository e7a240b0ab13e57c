"""Coalitional attribution of portfolio performance to individual solvers.

The value of a coalition is its performance ratio against the fixed baseline
(the empty coalition is worth 0). Three report modes:

* ``exact``: the classic coalition-weighted average of marginal contributions,
  computed over all subsets in exact rational arithmetic. Values sum to the
  full portfolio's performance.
* ``sum``: the plain, unweighted sum of marginal contributions over all
  subsets. Same ordering of solvers, different scale; offered because some
  published analyses total the marginals without the coalitional weights.
* ``sampled``: Monte-Carlo average of marginals over uniformly random
  permutations, for portfolios too large to enumerate.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from math import factorial
from typing import Iterable

from .portfolio import SubsetScorer
from .runstore import DataError, Dataset

MAX_EXACT = 22


class ShapleyMode(Enum):
    EXACT = "exact"
    SUM = "sum"
    SAMPLED = "sampled"


@dataclass(frozen=True)
class AttributionReport:
    """Per-solver contribution values for one portfolio/baseline pair."""

    values: dict[str, Fraction] | dict[str, float]
    mode: ShapleyMode
    portfolio: tuple[str, ...]
    baseline: tuple[str, ...]
    sample_count: int | None = None


def _coalition_weights(n: int) -> list[Fraction]:
    """weights[s] for a coalition of size s joined by one more player."""
    total = factorial(n)
    return [Fraction(factorial(s) * factorial(n - s - 1), total) for s in range(n)]


def shapley_exact(
    ds: Dataset,
    portfolio: Iterable[str],
    baseline: Iterable[str],
    mode: ShapleyMode = ShapleyMode.EXACT,
) -> AttributionReport:
    """Exact attribution over all 2^n coalitions (guarded at n <= 22).

    The single pass over coalition bitmasks uses the identity that a coalition
    S containing player a contributes +w(|S|-1)*v(S) to a, and one not
    containing a contributes -w(|S|)*v(S); with w = 1 this yields the
    unweighted sum mode. Runtime grows as 2^n, so sizes near the guard are
    expensive.
    """
    if mode is ShapleyMode.SAMPLED:
        raise DataError("shapley_exact: use shapley_sampled for sampled mode")
    scorer = SubsetScorer(ds, portfolio, baseline)
    players = scorer.space
    n = len(players)
    if n > MAX_EXACT:
        raise DataError(
            f"shapley_exact: portfolio of {n} solvers exceeds the "
            f"{MAX_EXACT}-solver exact-mode guard"
        )

    weights = _coalition_weights(n) if mode is ShapleyMode.EXACT else [Fraction(1)] * n
    phi = [Fraction(0)] * n
    for mask in range(1, 1 << n):
        value = scorer.ratio_from_numerator(scorer.evaluate_mask(mask)).value
        size = bin(mask).count("1")
        w_in = weights[size - 1]
        w_out = weights[size] if size < n else Fraction(0)
        for a in range(n):
            if mask >> a & 1:
                phi[a] += w_in * value
            else:
                phi[a] -= w_out * value
    return AttributionReport(
        {players[a]: phi[a] for a in range(n)}, mode, players, scorer.baseline
    )


def shapley_sampled(
    ds: Dataset,
    portfolio: Iterable[str],
    baseline: Iterable[str],
    samples: int,
    rng_seed: int = 0,
) -> AttributionReport:
    """Permutation-sampling estimate of the weighted attribution.

    Each sampled permutation credits every solver with its marginal value at
    its position; reported values are the sample means. Deterministic for a
    fixed seed. Values are floats (the estimator is approximate anyway).
    """
    if samples < 1:
        raise DataError("shapley_sampled: samples must be at least 1")
    scorer = SubsetScorer(ds, portfolio, baseline)
    players = scorer.space
    n = len(players)
    if n == 0:
        return AttributionReport({}, ShapleyMode.SAMPLED, players, scorer.baseline, samples)

    rows = [[float(x) for x in row] for row in scorer.scores]
    m = len(scorer.instances)
    rng = random.Random(rng_seed)
    acc = [0.0] * n
    order = list(range(n))
    for _ in range(samples):
        rng.shuffle(order)
        current = [0.0] * m
        numerator = 0.0
        previous = 0.0
        for a in order:
            row = rows[a]
            for i in range(m):
                if row[i] > current[i]:
                    numerator += row[i] - current[i]
                    current[i] = row[i]
            value = numerator / (m - numerator)
            acc[a] += value - previous
            previous = value
    values = {players[a]: acc[a] / samples for a in range(n)}
    return AttributionReport(values, ShapleyMode.SAMPLED, players, scorer.baseline, samples)
