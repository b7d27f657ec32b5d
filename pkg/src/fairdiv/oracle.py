"""Brute-force ground truth on tiny instances.

best_alpha enumerates every complete allocation (agent per good, mixed-radix)
and reports the best achievable fairness ratio for a notion together with a
witnessing allocation. Bundle and share values come from per-agent
subset-sum tables indexed by good bitmasks, so the inner loop is table
lookups; the ratio semantics mirror the fairness verifiers exactly and the
two are cross-checked in the test suite.

mu2_naive is the independent oracle for the meet-in-the-middle share
computation: a plain enumeration of all bi-partitions.
"""

from __future__ import annotations

import math
from fractions import Fraction
from itertools import product

from .envy_graph import Allocation
from .fairness import INF, CapExceededError
from .instance import Instance

BEST_ALPHA_CAP = 2_000_000
MU2_NAIVE_CAP = 16

NOTIONS = ("efx", "tefx", "pmms")


def mu2_naive(values, cap: int = MU2_NAIVE_CAP) -> Fraction:
    """max over subsets X of min(v(X), v(rest)), by full enumeration."""
    vals = [Fraction(v) for v in values]
    if any(v < 0 for v in vals):
        raise ValueError("values must be nonnegative")
    if len(vals) > cap:
        raise CapExceededError(f"{len(vals)} items exceed the cap of {cap}")
    total = sum(vals)
    best = Fraction(0)
    for mask in range(1 << len(vals)):
        inside = sum((v for k, v in enumerate(vals) if mask >> k & 1), Fraction(0))
        best = max(best, min(inside, total - inside))
    return best


def _sum_tables(inst: Instance) -> list[list[Fraction]]:
    """tables[i][mask] = value of the bitmask bundle for agent i."""
    tables = []
    for i in range(inst.n):
        row = inst.values[i]
        table = [Fraction(0)] * (1 << inst.m)
        for mask in range(1, 1 << inst.m):
            low = mask & -mask
            table[mask] = table[mask ^ low] + row[low.bit_length() - 1]
        tables.append(table)
    return tables


def _mu2_mask(table, mask) -> Fraction:
    total = table[mask]
    best = Fraction(0)
    sub = mask
    while True:
        best = max(best, min(table[sub], total - table[sub]))
        if sub == 0:
            break
        sub = (sub - 1) & mask
    return best


def _alpha_efx(inst, tables, masks, transfer: bool):
    alpha = INF
    for i in range(inst.n):
        table, own = tables[i], tables[i][masks[i]]
        for j in range(inst.n):
            if i == j:
                continue
            other = table[masks[j]]
            mask = masks[j]
            while mask:
                low = mask & -mask
                mask ^= low
                v = table[low]
                if v > 0:
                    den = other - v
                    num = own + v if transfer else own
                    ratio = INF if den == 0 else num / den
                    if ratio < alpha:
                        alpha = ratio
    return alpha


def _alpha_pmms(inst, tables, masks, share_cache):
    alpha = INF
    for i in range(inst.n):
        table, own = tables[i], tables[i][masks[i]]
        for j in range(inst.n):
            if i == j:
                continue
            key = (i, masks[i] | masks[j])
            share = share_cache.get(key)
            if share is None:
                share = share_cache[key] = _mu2_mask(table, key[1])
            if share > 0:
                ratio = own / share
                if ratio < alpha:
                    alpha = ratio
    return alpha


def assignment_alpha(inst: Instance, tables, assignment, notion: str,
                     share_cache: dict | None = None):
    """Fairness ratio of the complete allocation 'good g -> agent assignment[g]'."""
    masks = [0] * inst.n
    for g, agent in enumerate(assignment):
        masks[agent] |= 1 << g
    if notion == "efx":
        return _alpha_efx(inst, tables, masks, transfer=False)
    if notion == "tefx":
        return _alpha_efx(inst, tables, masks, transfer=True)
    if notion == "pmms":
        return _alpha_pmms(inst, tables, masks,
                           share_cache if share_cache is not None else {})
    raise ValueError(f"unknown notion {notion!r}")


def best_alpha(inst: Instance, notion: str, cap: int = BEST_ALPHA_CAP):
    """(best achievable alpha, a witnessing allocation) over all complete allocations.

    The witness is the lexicographically first maximizing assignment, so the
    result is independent of any enumeration partitioning.
    """
    if notion not in NOTIONS:
        raise ValueError(f"unknown notion {notion!r}")
    count = inst.n ** inst.m
    if count > cap:
        raise CapExceededError(f"{inst.n}^{inst.m} allocations exceed the cap of {cap}")
    tables = _sum_tables(inst)
    share_cache: dict = {}
    best, best_assignment = -math.inf, None
    for assignment in product(range(inst.n), repeat=inst.m):
        alpha = assignment_alpha(inst, tables, assignment, notion, share_cache)
        if alpha > best:
            best, best_assignment = alpha, assignment
    bundles = [[] for _ in range(inst.n)]
    for g, agent in enumerate(best_assignment):
        bundles[agent].append(g)
    return best, Allocation.from_bundles(bundles)
