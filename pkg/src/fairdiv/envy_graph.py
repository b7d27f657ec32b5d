"""Envy graphs over agent subsets, cycle resolution, and allocations.

The envy graph G(N, A) has a directed edge i -> j iff agent i strictly
prefers bundle A_j to its own bundle A_i. Any directed cycle can be resolved
by handing each agent on the cycle the bundle of its successor; this never
decreases any agent's value and preserves the multiset of bundles, so
repeated resolution ends in an acyclic graph whose sources are unenvied
agents.

Bundle values come from a "valuator": any object with ``bundle_value(i,
goods)`` and ``value_strictly_less(a, b)``. Instances compare exactly;
reduced instances (see pmms) may compare through a tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence


class CyclePresentError(RuntimeError):
    """A source was requested from (or guaranteed in) a graph with a cycle."""


@dataclass(frozen=True)
class Allocation:
    """Pairwise-disjoint bundles of good indices.

    Each bundle keeps its goods in order of inclusion; the order survives
    bundle reassignment because it travels with the bundle, not the agent.
    """

    bundles: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        seen = set()
        for bundle in self.bundles:
            for g in bundle:
                if g in seen:
                    raise ValueError(f"good {g} appears in two bundles")
                seen.add(g)

    @staticmethod
    def empty(n: int) -> "Allocation":
        return Allocation(tuple(() for _ in range(n)))

    @staticmethod
    def from_bundles(bundles: Iterable[Iterable[int]]) -> "Allocation":
        return Allocation(tuple(tuple(b) for b in bundles))

    @property
    def n(self) -> int:
        return len(self.bundles)

    def assign(self, i: int, g: int) -> "Allocation":
        """New allocation with good g appended to bundle i."""
        new = list(self.bundles)
        new[i] = new[i] + (g,)
        return Allocation(tuple(new))

    def rotate(self, cycle: Sequence[int]) -> "Allocation":
        """Resolve one envy cycle: each agent on it takes its successor's bundle."""
        new = list(self.bundles)
        for t, agent in enumerate(cycle):
            new[agent] = self.bundles[cycle[(t + 1) % len(cycle)]]
        return Allocation(tuple(new))

    def assigned(self) -> frozenset[int]:
        return frozenset(g for bundle in self.bundles for g in bundle)

    def is_complete(self, m: int) -> bool:
        return self.assigned() == frozenset(range(m))

    def bundle_set(self, i: int) -> frozenset[int]:
        return frozenset(self.bundles[i])

    def inclusion_order(self, i: int) -> tuple[int, ...]:
        return self.bundles[i]


@dataclass(frozen=True)
class TiePolicy:
    """How to break ties among equally good choices.

    good:   argmax-good selection (base values, favorite goods)
    agent:  which empty-handed agent gets served first
    source: which unenvied agent receives the next good
    """

    good: str = "lowest"
    agent: str = "lowest"
    source: str = "lowest"

    @staticmethod
    def _pick(candidates: Iterable[int], rule: str) -> int:
        cands = sorted(candidates)
        if not cands:
            raise ValueError("no candidates to pick from")
        if rule == "lowest":
            return cands[0]
        if rule == "highest":
            return cands[-1]
        raise ValueError(f"unknown tie-break rule {rule!r}")

    def pick_good(self, candidates: Iterable[int]) -> int:
        return self._pick(candidates, self.good)

    def pick_agent(self, candidates: Iterable[int]) -> int:
        return self._pick(candidates, self.agent)

    def pick_source(self, candidates: Iterable[int]) -> int:
        return self._pick(candidates, self.source)


# Reproduces the worked three-agent run documented in README (needs the
# highest-index unenvied agent to collect the trailing goods).
APPENDIX_A_POLICY = TiePolicy(good="lowest", agent="lowest", source="highest")


@dataclass(frozen=True)
class EnvyGraph:
    vertices: tuple[int, ...]
    edges: frozenset  # pairs (i, j): i envies j
    valuator: object = field(compare=False, hash=False)

    def in_degree(self, v: int) -> int:
        return sum(1 for (_, j) in self.edges if j == v)

    def sources(self) -> tuple[int, ...]:
        envied = {j for (_, j) in self.edges}
        return tuple(v for v in self.vertices if v not in envied)

    def find_cycle(self) -> list[int] | None:
        """First directed cycle found by DFS in ascending vertex order."""
        adjacency = {v: sorted(j for (i, j) in self.edges if i == v) for v in self.vertices}
        color = {v: 0 for v in self.vertices}  # 0 new, 1 on stack, 2 done
        parent: dict[int, int] = {}
        for start in sorted(self.vertices):
            if color[start]:
                continue
            stack = [(start, iter(adjacency[start]))]
            color[start] = 1
            while stack:
                v, it = stack[-1]
                advanced = False
                for w in it:
                    if color[w] == 0:
                        color[w] = 1
                        parent[w] = v
                        stack.append((w, iter(adjacency[w])))
                        advanced = True
                        break
                    if color[w] == 1:
                        cycle = [v]
                        while cycle[-1] != w:
                            cycle.append(parent[cycle[-1]])
                        cycle.reverse()
                        return cycle
                if not advanced:
                    color[v] = 2
                    stack.pop()
        return None

    def is_acyclic(self) -> bool:
        return self.find_cycle() is None


def build_graph(valuator, alloc: Allocation, agents: Iterable[int]) -> EnvyGraph:
    """Envy graph over the given agent subset under the current allocation."""
    agents = tuple(sorted(agents))
    if not agents:
        raise ValueError("agent subset must be nonempty")
    own = {i: valuator.bundle_value(i, alloc.bundles[i]) for i in agents}
    edges = set()
    for i in agents:
        for j in agents:
            if i != j and valuator.value_strictly_less(
                    own[i], valuator.bundle_value(i, alloc.bundles[j])):
                edges.add((i, j))
    return EnvyGraph(vertices=agents, edges=frozenset(edges), valuator=valuator)


def resolve_cycles(valuator, alloc: Allocation, agents: Iterable[int]) -> Allocation:
    """Rotate bundles along envy cycles until the graph over ``agents`` is acyclic.

    Every agent's value is non-decreasing and the multiset of bundles is
    preserved. The iteration cap only guards against an implementation bug;
    each resolution strictly removes at least one envy edge.
    """
    agents = tuple(sorted(agents))
    graph = build_graph(valuator, alloc, agents)
    cap = len(agents) * max(1, len(graph.edges)) + 1
    for _ in range(cap):
        cycle = graph.find_cycle()
        if cycle is None:
            return alloc
        alloc = alloc.rotate(cycle)
        graph = build_graph(valuator, alloc, agents)
    raise RuntimeError("cycle resolution did not terminate; this is a bug")


def find_source(graph: EnvyGraph, policy: TiePolicy = TiePolicy()) -> int:
    """An in-degree-zero vertex, chosen by policy among all sources."""
    sources = graph.sources()
    if not sources:
        raise CyclePresentError("graph has no source; a cycle is present")
    return policy.pick_source(sources)
