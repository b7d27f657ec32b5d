"""Shared test helpers: deterministic streams of random instances."""

from __future__ import annotations

import random
from fractions import Fraction

import pytest

from fairdiv import (Instance, Restricted, TwoValued, UniformInteger,
                     generate_random)


def instance_stream(count, seed, n_range=(2, 5), m_range=(3, 10),
                    models=("uniform", "two-valued")):
    """Yield `count` random instances, cycling through the named models."""
    rng = random.Random(seed)
    for k in range(count):
        n = rng.randint(*n_range)
        m = rng.randint(*m_range)
        name = models[k % len(models)]
        if name == "uniform":
            model = UniformInteger(1, 10)
        elif name == "uniform-wide":
            model = UniformInteger(0, 12)
        elif name == "two-valued":
            model = TwoValued(Fraction(1), Fraction(2), 0.25)
        elif name == "restricted":
            model = Restricted(0.3, 1, 9)
        elif name == "half-range":
            # integer values in [5, 10]: every per-good ratio is >= 1/2
            model = UniformInteger(5, 10)
        else:
            raise ValueError(name)
        yield generate_random(n, m, model, seed=rng.randrange(2**32))


def random_partial_allocation(inst: Instance, rng: random.Random):
    """A random partial allocation: each good unassigned or given to anyone."""
    bundles = [[] for _ in range(inst.n)]
    for g in range(inst.m):
        pick = rng.randrange(inst.n + 1)
        if pick < inst.n:
            bundles[pick].append(g)
    from fairdiv import Allocation
    return Allocation.from_bundles(bundles)


@pytest.fixture
def rng():
    return random.Random(12345)
