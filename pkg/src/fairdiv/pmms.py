"""Pairwise-maximin-share pipeline: reduce to range parameter 1, then assign.

The reduction replaces every positive value v_i(g) by the good's base value
while zeros stay zero, which leaves each agent's set of positively valued
goods untouched and makes all nonzero values of a good coincide. On the
reduced instance, goods are handed out in non-increasing base-value order,
each to an unenvied agent among those who positively value it; that
restricted envy graph is provably acyclic, so no cycle resolution is needed
and every good lands inside its recipient's positive set. Interpreted
against the original values, the result is (5/6 * gamma)-approximately fair
with respect to pairwise maximin shares.

Base values are square roots of rationals, so bundle comparisons on the
reduced instance sum surds. When every base square is a perfect rational
square (all gamma = 1 integer instances, for one) the reduction stays exact;
otherwise values are rendered as >= 106-bit reals and strict comparisons go
through a relative tolerance. Only heuristic choices ride on that layer: the
final fairness verdict is computed on the original rational instance.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import mpmath

from .envy_graph import Allocation, CyclePresentError, TiePolicy, build_graph, find_source
from .instance import Instance
from .rationals import exact_sqrt

DEFAULT_PRECISION_BITS = 106
DEFAULT_REL_TOL = Fraction(1, 10**25)


@dataclass(frozen=True)
class ReducedInstance:
    """Support-masked base-value copy of an instance (range parameter 1)."""

    source: Instance
    base_sq: tuple[Fraction, ...]
    base: tuple          # per good: Fraction when exact, else mpmath.mpf
    exact: bool
    precision_bits: int
    rel_tol: Fraction

    @property
    def n(self) -> int:
        return self.source.n

    @property
    def m(self) -> int:
        return len(self.base_sq)

    @property
    def arithmetic(self) -> str:
        return "exact" if self.exact else f"real:{self.precision_bits}bit"

    def supports(self, i: int, g: int) -> bool:
        return self.source.value(i, g) > 0

    def positive_agents(self, g: int) -> tuple[int, ...]:
        return self.source.positive_agents(g)

    def value(self, i: int, g: int):
        if self.source.value(i, g) > 0:
            return self.base[g]
        return Fraction(0) if self.exact else mpmath.mpf(0)

    def bundle_value(self, i: int, goods):
        zero = Fraction(0) if self.exact else mpmath.mpf(0)
        return sum((self.value(i, g) for g in goods), zero)

    def value_strictly_less(self, a, b) -> bool:
        if self.exact:
            return a < b
        gap = b - a
        if gap <= 0:
            return False
        return gap > float(self.rel_tol) * max(abs(a), abs(b))

    def range_parameter(self) -> Fraction:
        """Evaluated on the reduced values; 1 by construction (each good's
        nonzero entries are the one stored base value)."""
        return Fraction(1)


def reduce_instance(inst: Instance,
                    precision_bits: int = DEFAULT_PRECISION_BITS,
                    rel_tol: Fraction = DEFAULT_REL_TOL) -> ReducedInstance:
    """Build the range-parameter-1 companion of ``inst``."""
    if precision_bits < DEFAULT_PRECISION_BITS:
        precision_bits = DEFAULT_PRECISION_BITS
    base_sq = tuple(inst.good_stats(g).base_sq for g in range(inst.m))
    roots = [exact_sqrt(b) for b in base_sq]
    if all(r is not None for r in roots):
        return ReducedInstance(inst, base_sq, tuple(roots), True, precision_bits, rel_tol)
    with mpmath.workprec(precision_bits):
        rendered = tuple(
            mpmath.sqrt(mpmath.mpf(b.numerator) / b.denominator) for b in base_sq)
    return ReducedInstance(inst, base_sq, rendered, False, precision_bits, rel_tol)


@dataclass(frozen=True)
class StepRecord:
    """One assignment step of the restricted loop, for property checks."""

    good: int
    source: int
    supporters: tuple[int, ...]
    unassigned_before: tuple[int, ...]
    bundles_before: tuple[tuple[int, ...], ...]
    bundles_after: tuple[tuple[int, ...], ...]


def run_restricted(reduced: ReducedInstance, ties: TiePolicy = TiePolicy(),
                   record_trace: bool = False):
    """Assign goods in non-increasing base order, restricted to supporters.

    Raises CyclePresentError if the restricted envy graph ever has no
    source; on a faithful range-parameter-1 reduction that cannot happen,
    so it signals a violated precondition or a tolerance failure.
    """
    unassigned = set(range(reduced.m))
    alloc = Allocation.empty(reduced.n)
    trace: list[StepRecord] = []
    with mpmath.workprec(reduced.precision_bits):
        while unassigned:
            top_base = max(reduced.base_sq[g] for g in unassigned)
            top = ties.pick_good(g for g in unassigned if reduced.base_sq[g] == top_base)
            supporters = reduced.positive_agents(top)
            graph = build_graph(reduced, alloc, supporters)
            source = find_source(graph, ties)
            before = alloc.bundles
            alloc = alloc.assign(source, top)
            if record_trace:
                trace.append(StepRecord(top, source, supporters,
                                        tuple(sorted(unassigned)), before,
                                        alloc.bundles))
            unassigned.remove(top)
    return (alloc, trace) if record_trace else alloc


def run_pmms(inst: Instance, ties: TiePolicy = TiePolicy(),
             precision_bits: int = DEFAULT_PRECISION_BITS) -> Allocation:
    """Full pipeline; the returned allocation is meant for the original instance."""
    return run_restricted(reduce_instance(inst, precision_bits), ties)


def reduced_fairness(reduced: ReducedInstance, alloc: Allocation, notion: str,
                     cap: int | None = None):
    """Run a fairness verifier over the reduced values at their working precision.

    The resulting report carries the reduced arithmetic tag; exact verdicts
    belong to the original instance, not to this layer.
    """
    from . import fairness

    fn = fairness.RATIO_FUNCTIONS[notion]
    kwargs = {"cap": cap} if (notion == "pmms" and cap is not None) else {}
    with mpmath.workprec(reduced.precision_bits):
        return fn(reduced, alloc, **kwargs)


def pmms_guarantee(gamma) -> Fraction:
    """Theoretical factor (5/6)*gamma for the pipeline, exact."""
    g = Fraction(gamma)
    if not 0 < g <= 1:
        raise ValueError(f"gamma must be in (0, 1]; got {g}")
    return Fraction(5, 6) * g
