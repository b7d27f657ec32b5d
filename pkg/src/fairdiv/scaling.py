"""Per-agent valuation scaling that maximizes the range parameter.

Feasibility of target gamma reduces to a system of constraints
s_i <= s_j * v_j(g)/(gamma*v_i(g)) over agents sharing a good g, plus
s_i <= 1. In log space these are difference constraints, so feasibility is
exactly "no cycle of weight product < 1"; we run the Bellman-Ford relaxation
multiplicatively with rational potentials to stay exact. Binary search over
gamma then pins the optimum to any requested width. A feasible solution
scaled into the instance provably yields a range parameter >= the probed
gamma.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .instance import Instance


@dataclass(frozen=True)
class ScalingResult:
    factors: tuple[Fraction, ...]     # positive, max-normalized to 1
    achieved_gamma: Fraction          # largest gamma proven feasible
    interval_width: Fraction          # binary-search bracket width at stop
    beta: Fraction                    # smallest returned factor (> 0)


@dataclass(frozen=True)
class InfeasibilityCycle:
    """Certificate: agent cycle whose constraint weights multiply below 1."""

    agents: tuple[int, ...]
    product: Fraction


def _tightest_ratios(inst: Instance) -> dict[tuple[int, int], Fraction]:
    """For each ordered pair (j, i): min over shared goods of v_j(g)/v_i(g)."""
    ratios: dict[tuple[int, int], Fraction] = {}
    for j in range(inst.n):
        for i in range(inst.n):
            if i == j:
                continue
            shared = inst.positive_goods(i) & inst.positive_goods(j)
            if shared:
                ratios[(j, i)] = min(inst.value(j, g) / inst.value(i, g) for g in shared)
    return ratios


def _extract_cycle(pred: dict[int, int], start: int, n: int) -> tuple[int, ...]:
    """Trace the predecessor graph into a cycle, in constraint-edge direction."""
    for origin in [start] + sorted(pred):
        seen: dict[int, int] = {}
        v = origin
        while v in pred and v not in seen:
            seen[v] = len(seen)
            v = pred[v]
        if v in seen:
            walk = sorted(seen, key=seen.get)[seen[v]:]
            # pred[a] = b is the edge b -> a, so the walk lists the cycle
            # against edge direction; reverse all but the anchor.
            return (walk[0],) + tuple(reversed(walk[1:]))
    raise RuntimeError("no cycle in the predecessor graph; this is a bug")


def lp_feasible(inst: Instance, gamma, with_certificate: bool = False):
    """Factors satisfying every scaling constraint at this gamma, or None.

    Potentials start at the upper bound 1 and only relax downward; after at
    most n full passes either no constraint is violated (feasible; the
    potentials themselves are a solution, renormalized so max = 1) or a
    relaxation in the n-th pass certifies a cycle with product < 1.
    With with_certificate=True returns (factors, None) or (None, cycle).
    """
    gamma = Fraction(gamma)
    if not 0 < gamma <= 1:
        raise ValueError(f"gamma must be in (0, 1]; got {gamma}")
    n = inst.n
    edges = [(j, i, ratio / gamma) for (j, i), ratio in _tightest_ratios(inst).items()]
    potentials = [Fraction(1)] * n
    pred: dict[int, int] = {}
    infeasible_at: Optional[int] = None
    for round_no in range(n + 1):
        changed = False
        for j, i, weight in edges:
            bound = potentials[j] * weight
            if potentials[i] > bound:
                potentials[i] = bound
                pred[i] = j
                changed = True
                if round_no == n:
                    infeasible_at = i
                    break
        if not changed:
            break
        # constraints are homogeneous, so renormalizing between passes is
        # harmless and keeps the rationals small
        top = max(potentials)
        potentials = [p / top for p in potentials]
        if infeasible_at is not None:
            break
    if infeasible_at is not None:
        if not with_certificate:
            return None
        agents = _extract_cycle(pred, infeasible_at, n)
        product = Fraction(1)
        lookup = {(j, i): w for j, i, w in edges}
        for t, a in enumerate(agents):
            product *= lookup[(a, agents[(t + 1) % len(agents)])]
        return None, InfeasibilityCycle(agents, product)
    top = max(potentials)
    factors = tuple(p / top for p in potentials)
    return (factors, None) if with_certificate else factors


def apply_scaling(inst: Instance, factors) -> Instance:
    """Scale agent i's row by factors[i] > 0; positive sets are unchanged."""
    factors = [Fraction(f) for f in factors]
    if len(factors) != inst.n:
        raise ValueError("need one factor per agent")
    if any(f <= 0 for f in factors):
        raise ValueError("scaling factors must be positive")
    return Instance([[f * v for v in row] for f, row in zip(factors, inst.values)])


def max_range_scaling(inst: Instance, epsilon) -> ScalingResult:
    """Binary search for the largest feasible gamma, to within ``epsilon``.

    The unscaled range parameter is always feasible (with all-ones factors),
    so the search runs on [range_parameter, 1].
    """
    epsilon = Fraction(epsilon)
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    lo = inst.range_parameter()
    best = lp_feasible(inst, lo)
    assert best is not None  # the unscaled instance satisfies its own gamma
    if lo == 1:
        return ScalingResult(best, lo, Fraction(0), min(best))
    at_one = lp_feasible(inst, Fraction(1))
    if at_one is not None:
        return ScalingResult(at_one, Fraction(1), Fraction(0), min(at_one))
    hi = Fraction(1)
    while hi - lo >= epsilon:
        mid = (lo + hi) / 2
        factors = lp_feasible(inst, mid)
        if factors is not None:
            lo, best = mid, factors
        else:
            hi = mid
    return ScalingResult(best, lo, hi - lo, min(best))
