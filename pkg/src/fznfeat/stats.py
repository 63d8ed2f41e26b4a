"""Descriptive statistics used throughout the feature catalog.

Every multiset of model measurements is condensed to the same five numbers:
minimum, maximum, arithmetic mean, coefficient of variation and Shannon
entropy.  The sentinel -1 stands in wherever a statistic is undefined.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Sequence

SENTINEL = -1.0


@dataclass(frozen=True)
class StatSummary:
    min: float
    max: float
    avg: float
    cv: float
    ent: float

    def values(self) -> tuple[float, float, float, float, float]:
        return (self.min, self.max, self.avg, self.cv, self.ent)


EMPTY_SUMMARY = StatSummary(SENTINEL, SENTINEL, SENTINEL, SENTINEL, SENTINEL)


def stat_summary(values: Iterable[float]) -> StatSummary:
    """Summarise a multiset of reals.

    The empty multiset yields all five sentinels.  The coefficient of
    variation is population standard deviation over mean, -1 when the mean
    is zero.  Entropy is taken over the empirical distribution of the
    distinct values, in nats; a constant multiset therefore has entropy 0.

    Sums are accumulated with ``math.fsum`` over a sorted copy so the result
    does not depend on the iteration order of the input.
    """
    xs = sorted(float(v) for v in values)
    if not xs:
        return EMPTY_SUMMARY
    n = len(xs)
    mean = math.fsum(xs) / n
    var = math.fsum((x - mean) ** 2 for x in xs) / n
    std = math.sqrt(var)
    cv = std / mean if mean != 0.0 else SENTINEL
    return StatSummary(xs[0], xs[-1], mean, cv, shannon_entropy(xs))


def shannon_entropy(values: Sequence[float]) -> float:
    """Entropy (natural log) of the empirical distribution of distinct values."""
    if not values:
        return SENTINEL
    n = len(values)
    counts = Counter(values)
    terms = sorted(c / n for c in counts.values())
    return -math.fsum(p * math.log(p) for p in terms)


def ratio(num: float, den: float) -> float:
    """Safe division: -1 whenever the denominator is zero."""
    return num / den if den else SENTINEL
