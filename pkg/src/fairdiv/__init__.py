"""Range-parameterized approximation algorithms for discrete fair division.

The package computes and verifies allocations of indivisible goods under
three strong fairness notions; every guarantee degrades gracefully with the
instance's range parameter gamma (the worst per-good ratio of smallest
nonzero to largest value):

* removal envy-freeness at factor 2*gamma/(sqrt(5+4*gamma)-1),
* transfer envy-freeness at factor min{1, 2*gamma} (exact for gamma >= 1/2),
* pairwise maximin shares at factor (5/6)*gamma.

All control flow runs on exact rationals; verifiers are exact; brute-force
oracles cross-check everything at desk scale.
"""

from .envy_graph import (Allocation, APPENDIX_A_POLICY, CyclePresentError, EnvyGraph,
                         TiePolicy, build_graph, find_source, resolve_cycles)
from .fairness import (CapExceededError, FairnessReport, INF, efx_ratio, mu2,
                       pmms_ratio, tefx_ratio)
from .instance import (EmptyInstance, GoodStats, Instance, InstanceError,
                       MalformedDocument, NegativeValue, Restricted, TwoValued,
                       UniformInteger, compare_base, generate_random, good_stats,
                       load_instance, parse_instance, range_parameter)
from .labase import (EtaComparator, EtaMode, LaBaseConfig, efx_factor,
                     lookahead_contains, ratio_meets_efx_factor, run_labase)
from .oracle import best_alpha, mu2_naive
from .pmms import (ReducedInstance, pmms_guarantee, reduce_instance,
                   reduced_fairness, run_pmms, run_restricted)
from .scaling import (InfeasibilityCycle, ScalingResult, apply_scaling,
                      lp_feasible, max_range_scaling)
from .tefx import (ratio_meets_tefx_factor, ratio_meets_tefx_variant_factor,
                   run_tefx, tefx_factor, tefx_variant_factor)
from .tight_examples import (labase_tight_instance, pmms_tight_instance,
                             run_tight_example)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
