"""Exact-rational helpers: parsing, formatting, and square roots.

All algorithmic control flow in this package runs on `fractions.Fraction`.
Square roots are either taken exactly (perfect squares) or replaced by a
rational approximation with a controlled rounding direction, so callers can
decide which side of the true value they need to land on.
"""

from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational


def parse_rational(token) -> Fraction:
    """Parse an integer or a ``p/q`` token into an exact Fraction."""
    if isinstance(token, Rational):
        return Fraction(token)
    if isinstance(token, float):
        raise ValueError(f"refusing float literal {token!r}; use int or 'p/q'")
    if isinstance(token, str):
        try:
            return Fraction(token.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"not a rational literal: {token!r}") from exc
    raise ValueError(f"not a rational literal: {token!r}")


def format_rational(x) -> str:
    """Render a Fraction as ``p`` or ``p/q``; passes through +inf as 'inf'."""
    if x == math.inf:
        return "inf"
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def exact_sqrt(x: Fraction) -> Fraction | None:
    """Return the exact rational square root of ``x``, or None."""
    if x < 0:
        raise ValueError("square root of a negative rational")
    p, q = x.numerator, x.denominator
    rp, rq = math.isqrt(p), math.isqrt(q)
    if rp * rp == p and rq * rq == q:
        return Fraction(rp, rq)
    return None


def sqrt_rational(x: Fraction, bits: int = 128, rounding: str = "nearest") -> Fraction:
    """Rational approximation of sqrt(x) with absolute error below 2**-bits.

    rounding='up' guarantees the result is >= sqrt(x), 'down' guarantees <=;
    'nearest' makes no one-sided promise. Exact square roots are returned
    exactly under every rounding mode.
    """
    if x < 0:
        raise ValueError("square root of a negative rational")
    if x == 0:
        return Fraction(0)
    root = exact_sqrt(x)
    if root is not None:
        return root
    p, q = x.numerator, x.denominator
    # sqrt(p/q) = sqrt(p*q)/q; scale so the integer sqrt carries `bits`
    # fractional bits relative to a denominator q * 2**bits.
    scaled = p * q << (2 * bits)
    s = math.isqrt(scaled)  # floor(2**bits * sqrt(p*q))
    den = q << bits
    if rounding == "down":
        return Fraction(s, den)
    if rounding == "up":
        return Fraction(s + 1, den)
    if rounding == "nearest":
        # floor vs floor+1: pick the one whose square is closer.
        lo, hi = Fraction(s, den), Fraction(s + 1, den)
        return lo if x - lo * lo <= hi * hi - x else hi
    raise ValueError(f"unknown rounding mode {rounding!r}")
