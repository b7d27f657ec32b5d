"""Built-in worked examples that achieve the guarantees exactly.

Two reference constructions:

* ``labase`` — a three-agent, five-good instance parameterized by gamma on
  which the look-ahead solver's removal-envy ratio meets its theoretical
  factor with equality, witnessed by agent 1 envying agent 2 up to good 2
  (0-indexed).

* ``pmms`` — two identical agents valuing five goods at 6, 6, 4, 4, 4; the
  pairwise-share pipeline returns bundle values {14, 10} against a share of
  12, i.e. a ratio of exactly 5/6.

The labase construction involves sqrt(gamma) and the threshold eta. Both are
rationalized: sqrt(gamma) exactly when gamma is a perfect rational square
(1/4, 1/16, ...), otherwise to ~128 bits; eta is replaced by a rational
upper approximation eta_hat >= eta. Building every entry from the same
(s_hat, eta_hat) preserves the exact value ties and the look-ahead boundary
membership that drive the worst-case run, while perturbing the achieved
ratio by less than 2**-100. In particular the instance's range parameter is
exactly s_hat**2 whatever eta_hat is.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .envy_graph import APPENDIX_A_POLICY, Allocation, TiePolicy
from .fairness import FairnessReport, efx_ratio, pmms_ratio
from .instance import Instance
from .labase import LaBaseConfig, efx_factor, ratio_meets_efx_factor, run_labase
from .pmms import pmms_guarantee, run_pmms
from .rationals import exact_sqrt, sqrt_rational

SQRT_BITS = 128


def labase_tight_instance(gamma) -> Instance:
    """Three agents, five goods; range parameter exactly rationalized gamma."""
    g = Fraction(gamma)
    if not 0 < g <= 1:
        raise ValueError(f"unsupported gamma {g}; need a rational in (0, 1]")
    s = exact_sqrt(g) or sqrt_rational(g, SQRT_BITS, "nearest")  # ~sqrt(gamma)
    g_hat = s * s
    # eta_hat >= eta(g_hat): round the surd up so the look-ahead boundary
    # test base(g2) >= eta*base(g3) keeps holding after rationalization.
    eta = (sqrt_rational(5 + 4 * g_hat, SQRT_BITS, "up") - 1) / 2
    one = Fraction(1)
    rows = [
        [10 / (s * eta), (1 + 1 / eta) / s, 1 / s, 1 / (s * eta), s / eta],
        [0, s * (1 + 1 / eta), s, s / eta, 1 / (s * eta)],
        [0, 0, one, s / eta, 0],
    ]
    return Instance(rows)


def pmms_tight_instance() -> Instance:
    values = [6, 6, 4, 4, 4]
    return Instance([values, values])


@dataclass(frozen=True)
class TightExampleReport:
    which: str
    instance: Instance
    allocation: Allocation
    gamma: Fraction
    theoretical: float
    report: FairnessReport
    meets_theoretical: bool
    policy: TiePolicy

    @property
    def measured(self):
        return self.report.alpha


def run_tight_example(which: str, gamma=None) -> TightExampleReport:
    """Build the named example, solve it, and verify the achieved ratio."""
    if which == "labase":
        if gamma is None:
            raise ValueError("the labase example needs a gamma in (0, 1]")
        inst = labase_tight_instance(gamma)
        policy = APPENDIX_A_POLICY
        alloc = run_labase(inst, LaBaseConfig(ties=policy))
        report = efx_ratio(inst, alloc)
        g = inst.range_parameter()
        return TightExampleReport(
            which, inst, alloc, g, efx_factor(g), report,
            ratio_meets_efx_factor(report.alpha, g), policy)
    if which == "pmms":
        inst = pmms_tight_instance()
        policy = TiePolicy()
        alloc = run_pmms(inst, policy)
        report = pmms_ratio(inst, alloc)
        g = inst.range_parameter()
        guarantee = pmms_guarantee(g)
        return TightExampleReport(
            which, inst, alloc, g, float(guarantee), report,
            report.meets(guarantee), policy)
    raise ValueError(f"unknown tight example {which!r}")
