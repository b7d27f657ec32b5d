"""Look-ahead first-good assignment guided by base values.

The solver walks the goods in decreasing base-value order. While an agent
with an empty bundle positively values the current top good, that agent
instead picks its favorite good from the look-ahead set: all unassigned
goods whose base value is at least eta times the top base value. Once every
interested agent holds something, remaining goods go to unenvied agents via
envy-cycle elimination. The output is guaranteed (2*gamma/(sqrt(5+4*gamma)-1))-
envy-free up to the removal of any positively valued good.

eta is an irrational threshold, so it is never evaluated numerically inside
control flow. The default eta is the positive root of

    eta^2 + eta = 1 + gamma,        i.e.  eta = (sqrt(5+4*gamma)-1)/2,

and the transfer-oriented variant is the positive root of

    (1-gamma)*eta^2 + eta = 1 + gamma,  i.e.  eta = (sqrt(5-4*gamma^2)-1)/(2*(1-gamma)).

Both identities let every comparison against eta or eta^2 collapse to a sign
test on rationals (square the surd away), which keeps runs bit-exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .envy_graph import Allocation, TiePolicy, build_graph, find_source, resolve_cycles
from .instance import Instance
from .rationals import parse_rational


@dataclass(frozen=True)
class EtaMode:
    """Which eta the look-ahead threshold uses."""

    kind: str                        # "default" | "tefx" | "explicit"
    eta_sq: Optional[Fraction] = None  # explicit mode only: the exact value of eta^2

    @staticmethod
    def default() -> "EtaMode":
        return EtaMode("default")

    @staticmethod
    def tefx_variant() -> "EtaMode":
        return EtaMode("tefx")

    @staticmethod
    def explicit(eta_sq) -> "EtaMode":
        eta_sq = Fraction(eta_sq)
        if not 0 < eta_sq <= 1:
            raise ValueError("explicit eta^2 must lie in (0, 1]")
        return EtaMode("explicit", eta_sq)

    @staticmethod
    def parse(text: str) -> "EtaMode":
        """CLI form: 'default' | 'tefx' | a rational eta^2 such as '9/16'."""
        if text == "default":
            return EtaMode.default()
        if text == "tefx":
            return EtaMode.tefx_variant()
        return EtaMode.explicit(parse_rational(text))


class EtaComparator:
    """Exact sign tests against eta and eta^2 for a fixed gamma and mode."""

    def __init__(self, gamma: Fraction, mode: EtaMode = EtaMode.default()):
        gamma = Fraction(gamma)
        if not 0 < gamma <= 1:
            raise ValueError(f"gamma must be in (0, 1]; got {gamma}")
        if mode.kind == "tefx" and gamma >= 1:
            raise ValueError("the transfer-variant eta is undefined at gamma = 1")
        self.gamma = gamma
        self.mode = mode

    @staticmethod
    def _cmp(a, b) -> int:
        return (a > b) - (a < b)

    def _cmp_sqrt(self, disc: Fraction, c: Fraction) -> int:
        # sign of sqrt(disc) - c, over rationals (disc >= 0)
        if c < 0:
            return 1
        return self._cmp(disc, c * c)

    def cmp_eta(self, c: Fraction) -> int:
        """Sign of eta - c for rational c."""
        g, c = self.gamma, Fraction(c)
        if self.mode.kind == "default":
            # eta >= c  <=>  sqrt(5+4g) >= 2c+1
            return self._cmp_sqrt(5 + 4 * g, 2 * c + 1)
        if self.mode.kind == "tefx":
            # eta >= c  <=>  sqrt(5-4g^2) >= 2c(1-g)+1
            return self._cmp_sqrt(5 - 4 * g * g, 2 * c * (1 - g) + 1)
        if c < 0:
            return 1
        return self._cmp(self.mode.eta_sq, c * c)

    def cmp_eta_sq(self, q: Fraction) -> int:
        """Sign of eta^2 - q for rational q."""
        g, q = self.gamma, Fraction(q)
        if self.mode.kind == "default":
            # eta^2 = 1+g-eta, so eta^2 >= q  <=>  eta <= 1+g-q
            return -self.cmp_eta(1 + g - q)
        if self.mode.kind == "tefx":
            # (1-g) eta^2 = 1+g-eta, so eta^2 >= q  <=>  eta <= 1+g-q(1-g)
            return -self.cmp_eta(1 + g - q * (1 - g))
        return self._cmp(self.mode.eta_sq, q)

    def eta_float(self) -> float:
        g = float(self.gamma)
        if self.mode.kind == "default":
            return (math.sqrt(5 + 4 * g) - 1) / 2
        if self.mode.kind == "tefx":
            return (math.sqrt(5 - 4 * g * g) - 1) / (2 * (1 - g))
        return math.sqrt(float(self.mode.eta_sq))


@dataclass(frozen=True)
class LaBaseConfig:
    eta: EtaMode = EtaMode.default()
    ties: TiePolicy = TiePolicy()
    record_trace: bool = False


@dataclass(frozen=True)
class IterationRecord:
    """One loop iteration of the solver, for debugging and property checks."""

    branch: str                       # "first-good" | "source"
    top_good: int                     # unassigned good of maximal base value
    assigned_good: int
    agent: int
    unassigned_before: tuple[int, ...]
    empty_agents_before: tuple[int, ...]
    lookahead: tuple[int, ...] | None  # first-good branch only
    bundles_after: tuple[tuple[int, ...], ...]


def lookahead_contains(inst: Instance, g: int, top_good: int, comparator: EtaComparator) -> bool:
    """Does good g belong to the look-ahead set for the current top good?

    The defining test base(g) >= eta * base(top) is decided exactly through
    q = base_sq(g)/base_sq(top) >= eta^2.
    """
    top_sq = inst.good_stats(top_good).base_sq
    q = inst.good_stats(g).base_sq / top_sq
    if q > 1:
        raise ValueError("top_good does not have maximal base value")
    return comparator.cmp_eta_sq(q) <= 0


def run_labase(inst: Instance, config: LaBaseConfig = LaBaseConfig()):
    """Run the look-ahead solver; returns the allocation (and trace if recorded).

    With the transfer-variant eta the look-ahead set is only guaranteed
    nonempty for gamma <= 1/2 (eta <= 1), so larger gammas are rejected.
    """
    comparator = EtaComparator(inst.range_parameter(), config.eta)
    if comparator.cmp_eta(Fraction(1)) > 0:
        raise ValueError("eta > 1: the look-ahead set can be empty for this instance")
    ties = config.ties
    base_sq = [inst.good_stats(g).base_sq for g in range(inst.m)]
    unassigned = set(range(inst.m))
    empty_handed = set(range(inst.n))
    alloc = Allocation.empty(inst.n)
    trace: list[IterationRecord] = []

    while unassigned:
        top_base = max(base_sq[g] for g in unassigned)
        top = ties.pick_good(g for g in unassigned if base_sq[g] == top_base)
        interested = [i for i in empty_handed if inst.value(i, top) > 0]
        if interested:
            agent = ties.pick_agent(interested)
            lookahead = sorted(g for g in unassigned
                               if comparator.cmp_eta_sq(base_sq[g] / top_base) <= 0)
            best = max(inst.value(agent, g) for g in lookahead)
            favorite = ties.pick_good(g for g in lookahead if inst.value(agent, g) == best)
            record = IterationRecord("first-good", top, favorite, agent,
                                     tuple(sorted(unassigned)), tuple(sorted(empty_handed)),
                                     tuple(lookahead), ())
            alloc = alloc.assign(agent, favorite)
            unassigned.remove(favorite)
            empty_handed.remove(agent)
        else:
            holders = sorted(set(range(inst.n)) - empty_handed)
            alloc = resolve_cycles(inst, alloc, holders)
            source = find_source(build_graph(inst, alloc, holders), ties)
            record = IterationRecord("source", top, top, source,
                                     tuple(sorted(unassigned)), tuple(sorted(empty_handed)),
                                     None, ())
            alloc = alloc.assign(source, top)
            unassigned.remove(top)
        if config.record_trace:
            trace.append(IterationRecord(record.branch, record.top_good,
                                         record.assigned_good, record.agent,
                                         record.unassigned_before,
                                         record.empty_agents_before,
                                         record.lookahead, alloc.bundles))

    return (alloc, trace) if config.record_trace else alloc


def efx_factor(gamma) -> float:
    """The guarantee 2*gamma/(sqrt(5+4*gamma)-1), as a float for reporting."""
    g = Fraction(gamma)
    if not 0 < g <= 1:
        raise ValueError(f"gamma must be in (0, 1]; got {g}")
    return 2 * float(g) / (math.sqrt(5 + 4 * float(g)) - 1)


def ratio_meets_efx_factor(ratio, gamma, mode: EtaMode = EtaMode.default()) -> bool:
    """Exact test: measured ratio >= gamma/eta, without evaluating the surd.

    ratio may be a Fraction or +inf. gamma/eta equals the reported
    efx_factor for the default eta.
    """
    if ratio == math.inf:
        return True
    ratio = Fraction(ratio)
    if ratio < 0:
        raise ValueError("ratios are nonnegative")
    comparator = EtaComparator(Fraction(gamma), mode)
    if ratio == 0:
        return False
    # ratio >= gamma/eta  <=>  eta >= gamma/ratio
    return comparator.cmp_eta(comparator.gamma / ratio) >= 0
