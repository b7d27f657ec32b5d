"""Fair-division instances: exact-rational valuation matrices and range stats.

An instance is an n x m matrix of nonnegative rationals, v[i][g] = value of
good g for agent i. Two standing assumptions are enforced at construction:
every good is positively valued by at least one agent, and every agent
positively values at least one good. Violations are rejected by default;
ingestion can instead drop offending rows/columns under a policy flag.

Per-good statistics: the range ratio gamma_g = (min nonzero value)/(max
value), and base_sq = (min nonzero value)*(max value). base_sq is the square
of the good's base value (the geometric mean of min-nonzero and max), kept in
squared form so that all base-value comparisons stay rational.
"""

from __future__ import annotations

import json
import random
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .rationals import format_rational, parse_rational


class InstanceError(ValueError):
    """Base class for instance ingestion/validation failures."""


class MalformedDocument(InstanceError):
    pass


class NegativeValue(InstanceError):
    pass


class EmptyInstance(InstanceError):
    pass


@dataclass(frozen=True)
class GoodStats:
    """Range ratio and squared base value of a single good."""

    gamma: Fraction   # (min nonzero value) / (max value), in (0, 1]
    base_sq: Fraction  # (min nonzero value) * (max value), > 0

    def __post_init__(self):
        assert 0 < self.gamma <= 1 and self.base_sq > 0


class Instance:
    """Immutable fair-division instance over exact rationals."""

    __slots__ = ("values", "_stats", "_gamma", "_positive_goods")

    def __init__(self, values: Sequence[Sequence]):
        rows = tuple(tuple(Fraction(v) for v in row) for row in values)
        if not rows or not rows[0]:
            raise EmptyInstance("instance needs at least one agent and one good")
        m = len(rows[0])
        if any(len(row) != m for row in rows):
            raise MalformedDocument("ragged valuation matrix")
        if any(v < 0 for row in rows for v in row):
            raise NegativeValue("negative valuation")
        self.values = rows
        stats = []
        for g in range(m):
            column = [row[g] for row in rows]
            positive = [v for v in column if v > 0]
            if not positive:
                raise EmptyInstance(f"good {g} is valued by no agent")
            stats.append(GoodStats(gamma=min(positive) / max(positive),
                                   base_sq=min(positive) * max(positive)))
        self._stats = tuple(stats)
        self._gamma = min(s.gamma for s in stats)
        pos = []
        for i, row in enumerate(rows):
            pg = frozenset(g for g, v in enumerate(row) if v > 0)
            if not pg:
                raise EmptyInstance(f"agent {i} values no good")
            pos.append(pg)
        self._positive_goods = tuple(pos)

    @property
    def n(self) -> int:
        return len(self.values)

    @property
    def m(self) -> int:
        return len(self.values[0])

    def value(self, i: int, g: int) -> Fraction:
        return self.values[i][g]

    def bundle_value(self, i: int, goods: Iterable[int]) -> Fraction:
        row = self.values[i]
        return sum((row[g] for g in goods), Fraction(0))

    @staticmethod
    def value_strictly_less(a, b) -> bool:
        """Edge test used by the envy graph; exact on rationals."""
        return a < b

    arithmetic = "exact"

    def positive_goods(self, i: int) -> frozenset[int]:
        """P_i: goods agent i values positively."""
        return self._positive_goods[i]

    def positive_agents(self, g: int) -> tuple[int, ...]:
        """Agents that positively value good g."""
        return tuple(i for i in range(self.n) if self.values[i][g] > 0)

    def good_stats(self, g: int) -> GoodStats:
        if not 0 <= g < self.m:
            raise IndexError(f"good index {g} out of range")
        return self._stats[g]

    def range_parameter(self) -> Fraction:
        """gamma = min over goods of gamma_g."""
        return self._gamma

    def __eq__(self, other):
        return isinstance(other, Instance) and self.values == other.values

    def __hash__(self):
        return hash(self.values)

    def __repr__(self):
        return f"Instance(n={self.n}, m={self.m}, gamma={self._gamma})"

    def to_json(self) -> str:
        return json.dumps({
            "agents": self.n,
            "goods": self.m,
            "values": [[format_rational(v) for v in row] for row in self.values],
        })

    def to_csv(self) -> str:
        return "\n".join(",".join(format_rational(v) for v in row) for row in self.values)


def good_stats(inst: Instance, g: int) -> GoodStats:
    return inst.good_stats(g)


def range_parameter(inst: Instance) -> Fraction:
    return inst.range_parameter()


def compare_base(inst: Instance, g: int, h: int) -> int:
    """Order the base values of goods g and h: -1, 0 or +1.

    Base values are nonnegative, so comparing their rational squares gives
    the exact ordering without materializing any square root.
    """
    a, b = inst.good_stats(g).base_sq, inst.good_stats(h).base_sq
    return (a > b) - (a < b)


def _build(rows, drop_degenerate: bool) -> Instance:
    """Validate rows, optionally dropping zero-only goods/agents."""
    if not drop_degenerate:
        return Instance(rows)
    m = len(rows[0]) if rows else 0
    keep_goods = [g for g in range(m) if any(row[g] > 0 for row in rows)]
    if len(keep_goods) < m:
        warnings.warn(f"dropping zero-valued goods {sorted(set(range(m)) - set(keep_goods))}",
                      stacklevel=3)
        rows = [[row[g] for g in keep_goods] for row in rows]
    keep_agents = [i for i, row in enumerate(rows) if any(v > 0 for v in row)]
    if len(keep_agents) < len(rows):
        warnings.warn(f"dropping zero-valued agents {sorted(set(range(len(rows))) - set(keep_agents))}",
                      stacklevel=3)
        rows = [rows[i] for i in keep_agents]
    return Instance(rows)


def parse_instance(text: str, drop_degenerate: bool = False) -> Instance:
    """Parse a JSON or CSV instance document.

    JSON: {"agents": n, "goods": m, "values": [[...], ...]} with integer or
    "p/q" string entries. CSV: one agent per row of comma-separated tokens.
    With drop_degenerate=True, zero-only goods/agents are dropped with a
    warning instead of raising.
    """
    stripped = text.lstrip()
    if not stripped:
        raise EmptyInstance("empty document")
    if stripped.startswith("{"):
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise MalformedDocument(f"invalid JSON: {exc}") from exc
        if not isinstance(doc, dict) or "values" not in doc:
            raise MalformedDocument("JSON instance must be an object with a 'values' key")
        raw = doc["values"]
        if not isinstance(raw, list) or not all(isinstance(r, list) for r in raw):
            raise MalformedDocument("'values' must be a list of rows")
        try:
            rows = [[parse_rational(tok) for tok in row] for row in raw]
        except ValueError as exc:
            raise MalformedDocument(str(exc)) from exc
        if "agents" in doc and doc["agents"] != len(rows):
            raise MalformedDocument("declared agent count does not match rows")
        if "goods" in doc and rows and any(doc["goods"] != len(r) for r in rows):
            raise MalformedDocument("declared good count does not match row lengths")
    else:
        rows = []
        for line in stripped.splitlines():
            line = line.strip()
            if not line:
                continue
            try:
                rows.append([parse_rational(tok) for tok in line.split(",")])
            except ValueError as exc:
                raise MalformedDocument(str(exc)) from exc
    if not rows:
        raise EmptyInstance("no agent rows")
    if any(v < 0 for row in rows for v in row):
        raise NegativeValue("negative valuation")
    return _build(rows, drop_degenerate)


def load_instance(path, drop_degenerate: bool = False) -> Instance:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_instance(fh.read(), drop_degenerate)


# ---------------------------------------------------------------------------
# Random instance generation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class UniformInteger:
    """Independent integer values, uniform on [lo, hi]."""

    lo: int
    hi: int

    def validate(self):
        if not (0 <= self.lo <= self.hi) or self.hi < 1:
            raise ValueError(f"uniform-integer needs 0 <= lo <= hi, hi >= 1; got {self}")

    def draw(self, rng: random.Random, g: int) -> Fraction:
        return Fraction(rng.randint(self.lo, self.hi))


@dataclass(frozen=True)
class TwoValued:
    """Each value is 0 with probability p_zero, else a or b (equally likely)."""

    a: Fraction
    b: Fraction
    p_zero: float = 0.25

    def validate(self):
        if not (0 < self.a < self.b):
            raise ValueError(f"two-valued needs 0 < a < b; got {self}")
        if not 0 <= self.p_zero < 1:
            raise ValueError(f"p_zero must be in [0, 1); got {self.p_zero}")

    def draw(self, rng: random.Random, g: int) -> Fraction:
        if rng.random() < self.p_zero:
            return Fraction(0)
        return Fraction(self.a if rng.random() < 0.5 else self.b)


@dataclass(frozen=True)
class Restricted:
    """Restricted additive: per good one base level, valued at 0 or the base."""

    p_zero: float = 0.3
    lo: int = 1
    hi: int = 10

    def validate(self):
        if not 0 <= self.p_zero < 1:
            raise ValueError(f"p_zero must be in [0, 1); got {self.p_zero}")
        if not (1 <= self.lo <= self.hi):
            raise ValueError(f"restricted needs 1 <= lo <= hi; got {self}")

    def fresh_bases(self, rng: random.Random, m: int) -> list[Fraction]:
        return [Fraction(rng.randint(self.lo, self.hi)) for _ in range(m)]

    def draw(self, rng: random.Random, g: int, bases=None) -> Fraction:
        return Fraction(0) if rng.random() < self.p_zero else bases[g]


ValueModel = UniformInteger | TwoValued | Restricted


def parse_model(spec: str) -> ValueModel:
    """Parse a CLI model spec: 'uniform:lo,hi' | 'two-valued:a,b[,p0]' | 'restricted[:p0[,lo,hi]]'."""
    name, _, argstr = spec.partition(":")
    args = [a for a in argstr.split(",") if a] if argstr else []
    try:
        if name == "uniform":
            return UniformInteger(int(args[0]), int(args[1]))
        if name == "two-valued":
            p0 = float(args[2]) if len(args) > 2 else 0.25
            return TwoValued(parse_rational(args[0]), parse_rational(args[1]), p0)
        if name == "restricted":
            p0 = float(args[0]) if args else 0.3
            lo = int(args[1]) if len(args) > 1 else 1
            hi = int(args[2]) if len(args) > 2 else 10
            return Restricted(p0, lo, hi)
    except (IndexError, ValueError) as exc:
        raise ValueError(f"bad model spec {spec!r}: {exc}") from exc
    raise ValueError(f"unknown value model {name!r}")


_MAX_REDRAWS = 1000


def generate_random(n: int, m: int, model: ValueModel, seed: int) -> Instance:
    """Draw a random valid instance; deterministic for a fixed seed.

    Columns with no positive value and rows with no positive value are
    redrawn wholesale (not patched), preserving the model distribution
    conditional on validity.
    """
    if n < 1 or m < 1:
        raise ValueError("need n >= 1 and m >= 1")
    model.validate()
    rng = random.Random(seed)
    bases = model.fresh_bases(rng, m) if isinstance(model, Restricted) else None

    def draw(g):
        return model.draw(rng, g, bases) if bases is not None else model.draw(rng, g)

    rows = [[draw(g) for g in range(m)] for _ in range(n)]
    for _ in range(_MAX_REDRAWS):
        bad_goods = [g for g in range(m) if all(rows[i][g] == 0 for i in range(n))]
        for g in bad_goods:
            for i in range(n):
                rows[i][g] = draw(g)
        bad_agents = [i for i in range(n) if all(v == 0 for v in rows[i])]
        for i in bad_agents:
            rows[i] = [draw(g) for g in range(m)]
        if not bad_goods and not bad_agents:
            return Instance(rows)
    raise ValueError("could not draw a valid instance; model parameters too degenerate")
