"""Scaling-factor feasibility, binary search, and the exactness guarantees."""

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fairdiv import (Instance, UniformInteger, apply_scaling, efx_ratio,
                     generate_random, lp_feasible, max_range_scaling,
                     run_labase)
from fairdiv.scaling import _tightest_ratios

SWAP = Instance([[1, 2], [2, 1]])  # optimum gamma* = sqrt((1/2)/2) = 1/2


def _replay_constraints(inst, gamma, factors):
    for (j, i), ratio in _tightest_ratios(inst).items():
        assert factors[j] * ratio / gamma >= factors[i]


class TestLpFeasible:
    def test_unscaled_gamma_always_feasible(self):
        for seed in range(8):
            inst = generate_random(3, 5, UniformInteger(0, 9), seed)
            factors = lp_feasible(inst, inst.range_parameter())
            # the identity scaling already satisfies every constraint here
            assert factors == (1,) * inst.n
            _replay_constraints(inst, inst.range_parameter(), factors)

    def test_swap_instance_beyond_half_infeasible(self):
        assert lp_feasible(SWAP, Fraction(3, 4)) is None
        assert lp_feasible(SWAP, Fraction(1, 2)) is not None

    def test_certificate_cycle_has_product_below_one(self):
        factors, cycle = lp_feasible(SWAP, Fraction(3, 4), with_certificate=True)
        assert factors is None
        assert cycle.product < 1
        assert len(set(cycle.agents)) == len(cycle.agents) >= 2

    def test_gamma_out_of_range(self):
        with pytest.raises(ValueError):
            lp_feasible(SWAP, Fraction(0))
        with pytest.raises(ValueError):
            lp_feasible(SWAP, Fraction(3, 2))

    def test_factors_normalized_and_positive(self):
        inst = generate_random(4, 6, UniformInteger(0, 9), 13)
        factors = lp_feasible(inst, inst.range_parameter())
        assert max(factors) == 1
        assert all(0 < f <= 1 for f in factors)

    @given(st.integers(0, 10**6))
    @settings(max_examples=40, deadline=None)
    def test_feasibility_is_monotone(self, seed):
        rng = random.Random(seed)
        inst = generate_random(rng.randint(2, 4), rng.randint(2, 6),
                               UniformInteger(0, 9), seed)
        result = max_range_scaling(inst, Fraction(1, 2**12))
        below = result.achieved_gamma / 2 + inst.range_parameter() / 2
        assert lp_feasible(inst, below) is not None
        above = result.achieved_gamma + 10 * Fraction(1, 2**12)
        if above <= 1:
            beyond = lp_feasible(inst, above)
            # either truly infeasible or the optimum sits within the bracket
            assert beyond is None or above <= result.achieved_gamma + \
                result.interval_width


class TestApplyScaling:
    def test_identity(self):
        inst = generate_random(3, 4, UniformInteger(1, 9), 2)
        assert apply_scaling(inst, [1, 1, 1]) == inst

    def test_nonpositive_factor_rejected(self):
        with pytest.raises(ValueError):
            apply_scaling(SWAP, [1, 0])

    def test_swap_optimum_at_all_ones(self):
        assert apply_scaling(SWAP, [1, 1]).range_parameter() == Fraction(1, 2)

    def test_scaling_preserves_the_scaled_agents_ratios(self):
        inst = generate_random(2, 5, UniformInteger(1, 9), 31)
        alloc = run_labase(inst)
        before = efx_ratio(inst, alloc)
        after = efx_ratio(apply_scaling(inst, [Fraction(1, 2), 1]), alloc)
        assert before.pair_ratios[(0, 1)] == after.pair_ratios[(0, 1)]


class TestMaxRangeScaling:
    def test_already_at_one(self):
        inst = Instance([[4, 2], [4, 2]])
        result = max_range_scaling(inst, Fraction(1, 10**6))
        assert result.achieved_gamma == 1
        assert result.factors == (1, 1)
        assert result.interval_width == 0

    def test_swap_instance_converges_to_half(self):
        eps = Fraction(1, 10**6)
        result = max_range_scaling(SWAP, eps)
        assert Fraction(1, 2) - eps <= result.achieved_gamma <= Fraction(1, 2)
        assert result.interval_width < eps

    def test_two_agent_closed_form(self):
        # gamma* = sqrt(min ratio / max ratio) over shared-good value ratios
        inst = Instance([[1, 4, 2], [2, 2, 2]])
        # ratios r_g = v0/v1: 1/2, 2, 1 -> gamma* = sqrt((1/2)/2) = 1/2
        result = max_range_scaling(inst, Fraction(1, 10**8))
        assert Fraction(1, 2) - Fraction(1, 10**8) <= result.achieved_gamma <= Fraction(1, 2)

    def test_epsilon_must_be_positive(self):
        with pytest.raises(ValueError):
            max_range_scaling(SWAP, 0)

    @given(st.integers(0, 10**6))
    @settings(max_examples=30, deadline=None)
    def test_rescaled_instance_reaches_the_achieved_gamma(self, seed):
        rng = random.Random(seed)
        inst = generate_random(rng.randint(2, 4), rng.randint(2, 6),
                               UniformInteger(0, 9), seed)
        result = max_range_scaling(inst, Fraction(1, 2**10))
        assert result.beta == min(result.factors) > 0
        scaled = apply_scaling(inst, result.factors)
        assert scaled.range_parameter() >= result.achieved_gamma
        assert result.achieved_gamma >= inst.range_parameter()
