"""Transfer-envy-freeness via envy-cycle elimination in base-value order.

Assigning every good (highest base value first) to a currently unenvied
agent yields an allocation in which, for any pair of agents and any
positively valued good in the envied bundle, moving that one good across
closes the envy gap up to a factor of min{1, 2*gamma}. For gamma >= 1/2 the
allocation is exactly envy-free up to such a transfer.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .envy_graph import Allocation, TiePolicy, build_graph, find_source, resolve_cycles
from .instance import Instance


@dataclass(frozen=True)
class StepRecord:
    """One assignment step, for property checks."""

    good: int
    source: int
    unassigned_before: tuple[int, ...]
    bundles_resolved: tuple[tuple[int, ...], ...]  # after cycle resolution
    bundles_after: tuple[tuple[int, ...], ...]


def run_tefx(inst: Instance, ties: TiePolicy = TiePolicy(), record_trace: bool = False):
    """Assign goods in non-increasing base-value order to unenvied agents."""
    base_sq = [inst.good_stats(g).base_sq for g in range(inst.m)]
    unassigned = set(range(inst.m))
    alloc = Allocation.empty(inst.n)
    everyone = range(inst.n)
    trace: list[StepRecord] = []
    while unassigned:
        alloc = resolve_cycles(inst, alloc, everyone)
        resolved = alloc.bundles
        top_base = max(base_sq[g] for g in unassigned)
        top = ties.pick_good(g for g in unassigned if base_sq[g] == top_base)
        source = find_source(build_graph(inst, alloc, everyone), ties)
        before = tuple(sorted(unassigned))
        alloc = alloc.assign(source, top)
        unassigned.remove(top)
        if record_trace:
            trace.append(StepRecord(top, source, before, resolved, alloc.bundles))
    return (alloc, trace) if record_trace else alloc


def tefx_factor(gamma) -> Fraction:
    """Guarantee of run_tefx: min{1, 2*gamma} (exact rational)."""
    g = Fraction(gamma)
    if not 0 < g <= 1:
        raise ValueError(f"gamma must be in (0, 1]; got {g}")
    return min(Fraction(1), 2 * g)


def tefx_variant_factor(gamma) -> float:
    """Guarantee of the look-ahead solver run with the transfer-variant eta.

    5*gamma/(gamma + sqrt(5-4*gamma^2)); exceeds 2*gamma for all
    gamma < 1/2 and matches it at gamma = 1/2.
    """
    g = float(Fraction(gamma))
    if not 0 < g <= 1:
        raise ValueError(f"gamma must be in (0, 1]; got {g}")
    return 5 * g / (g + math.sqrt(5 - 4 * g * g))


def ratio_meets_tefx_factor(ratio, gamma) -> bool:
    """Exact test: ratio >= min{1, 2*gamma}."""
    if ratio == math.inf:
        return True
    return Fraction(ratio) >= tefx_factor(gamma)


def ratio_meets_tefx_variant_factor(ratio, gamma) -> bool:
    """Exact test: ratio >= 5*gamma/(gamma + sqrt(5-4*gamma^2))."""
    if ratio == math.inf:
        return True
    r, g = Fraction(ratio), Fraction(gamma)
    if not 0 < g <= 1:
        raise ValueError(f"gamma must be in (0, 1]; got {g}")
    if r < 0:
        raise ValueError("ratios are nonnegative")
    # r*(g + sqrt(5-4g^2)) >= 5g  <=>  r*sqrt(5-4g^2) >= g*(5-r)
    rhs = g * (5 - r)
    if rhs <= 0:
        return True
    if r == 0:
        return False
    return r * r * (5 - 4 * g * g) >= rhs * rhs
