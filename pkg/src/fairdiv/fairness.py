"""Exact fairness verifiers and the 1-out-of-2 maximin share.

For a notion and an allocation, the verifier reports the worst multiplicative
ratio per ordered agent pair and the overall minimum:

  removal:  min over goods g in A_j positively valued by i of
            v_i(A_i) / v_i(A_j - g)
  transfer: same with numerator v_i(A_i + g)
  pairwise share: v_i(A_i) / mu2_i(A_i u A_j)

Ratio conventions making these total: a zero denominator (or an empty set of
candidate goods, or a zero share) makes the pair vacuous and its ratio +inf;
a zero numerator against a positive denominator gives ratio 0. The overall
alpha is the minimum over pairs, +inf when every pair is vacuous.

Verification over an instance is exact rational arithmetic. The same code
accepts a reduced instance whose values are high-precision reals; the report
then carries that arithmetic tag.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .envy_graph import Allocation


class CapExceededError(ValueError):
    """A subset enumeration was asked to exceed its configured cap."""


MU2_CAP = 24

INF = math.inf


def _subset_sums(weights):
    sums = [weights[0] * 0]  # zero of the right numeric type
    for w in weights:
        sums += [s + w for s in sums]
    return sums


def mu2(values, cap: int = MU2_CAP):
    """Largest value guaranteed by proposing a bi-partition and taking the worse half.

    Exact meet-in-the-middle over the positive entries: zeros cannot change
    any half's value, and dropping them stretches the cap. Rational inputs
    are scaled to integers first; real inputs (reduced instances) are summed
    directly at their working precision.
    """
    positive = [v for v in values if v > 0]
    if any(v < 0 for v in values):
        raise ValueError("values must be nonnegative")
    if len(positive) > cap:
        raise CapExceededError(f"{len(positive)} positive items exceed the cap of {cap}")
    if not positive:
        return Fraction(0)
    exact = all(isinstance(v, (Fraction, int)) for v in positive)
    if exact:
        scale = math.lcm(*(Fraction(v).denominator for v in positive))
        items = [int(v * scale) for v in positive]
    else:
        scale, items = 1, list(positive)
    total = sum(items)
    half = len(items) // 2
    left = sorted(set(_subset_sums(items[:half]))) if items[:half] else [items[0] * 0]
    right = sorted(set(_subset_sums(items[half:])))
    # max achievable subset sum x with 2x <= total; the answer is that x,
    # since min(x, total-x) = x there and sums pair off symmetrically.
    best = items[0] * 0
    for a in right:
        if 2 * a > total:
            break
        rest = total - 2 * a  # want the largest b in `left` with 2b <= rest
        limit = rest // 2 if exact else rest / 2
        idx = bisect_right(left, limit) - 1
        if idx >= 0:
            best = max(best, a + left[idx])
    return Fraction(best, scale) if exact else best


@dataclass(frozen=True)
class FairnessReport:
    notion: str
    alpha: object                      # Fraction, or +inf when vacuous, or a real
    pair_ratios: dict                  # (i, j) -> ratio
    witness_pair: Optional[tuple[int, int]]
    witness_good: Optional[int]        # removal/transfer notions only
    arithmetic: str = "exact"

    def meets(self, threshold) -> bool:
        return self.alpha == INF or self.alpha >= threshold

    def summary(self) -> str:
        alpha = "inf (vacuously fair)" if self.alpha == INF else str(self.alpha)
        where = ""
        if self.witness_pair is not None:
            where = f" at pair {self.witness_pair}"
            if self.witness_good is not None:
                where += f", good {self.witness_good}"
        return f"{self.notion} ratio = {alpha}{where}"


def _check_allocation(valuator, alloc: Allocation):
    if alloc.n != valuator.n:
        raise ValueError(f"allocation has {alloc.n} bundles for {valuator.n} agents")
    if any(g < 0 or g >= valuator.m for bundle in alloc.bundles for g in bundle):
        raise ValueError("allocation references a good outside the instance")


def _ratio(num, den):
    if den == 0:
        return INF
    if isinstance(num, (Fraction, int)) and isinstance(den, (Fraction, int)):
        return Fraction(num) / Fraction(den)
    return num / den


def _report(notion, valuator, alloc, pair_fn) -> FairnessReport:
    _check_allocation(valuator, alloc)
    ratios, witness_pair, witness_good = {}, None, None
    alpha = INF
    for i in range(valuator.n):
        for j in range(valuator.n):
            if i == j:
                continue
            ratio, good = pair_fn(i, j)
            ratios[(i, j)] = ratio
            if ratio < alpha:
                alpha, witness_pair, witness_good = ratio, (i, j), good
    return FairnessReport(notion, alpha, ratios, witness_pair, witness_good,
                          arithmetic=valuator.arithmetic)


def efx_ratio(valuator, alloc: Allocation) -> FairnessReport:
    """Worst removal ratio per ordered pair; alpha >= 1 means exact fairness."""
    def pair(i, j):
        own = valuator.bundle_value(i, alloc.bundles[i])
        other = valuator.bundle_value(i, alloc.bundles[j])
        best, best_good = INF, None
        for g in alloc.bundles[j]:
            v = valuator.value(i, g)
            if v > 0:
                r = _ratio(own, other - v)
                if r < best:
                    best, best_good = r, g
        return best, best_good
    return _report("EFx", valuator, alloc, pair)


def tefx_ratio(valuator, alloc: Allocation) -> FairnessReport:
    """Worst transfer ratio per ordered pair (the candidate good switches sides)."""
    def pair(i, j):
        own = valuator.bundle_value(i, alloc.bundles[i])
        other = valuator.bundle_value(i, alloc.bundles[j])
        best, best_good = INF, None
        for g in alloc.bundles[j]:
            v = valuator.value(i, g)
            if v > 0:
                r = _ratio(own + v, other - v)
                if r < best:
                    best, best_good = r, g
        return best, best_good
    return _report("tEFx", valuator, alloc, pair)


def pmms_ratio(valuator, alloc: Allocation, cap: int = MU2_CAP) -> FairnessReport:
    """Each agent's bundle value against its pairwise maximin share."""
    def pair(i, j):
        union = alloc.bundles[i] + alloc.bundles[j]
        share = mu2([valuator.value(i, g) for g in union], cap)
        if share == 0:
            return INF, None
        return _ratio(valuator.bundle_value(i, alloc.bundles[i]), share), None
    return _report("PMMS", valuator, alloc, pair)


RATIO_FUNCTIONS = {"efx": efx_ratio, "tefx": tefx_ratio, "pmms": pmms_ratio}
