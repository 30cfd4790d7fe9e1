"""Envy graphs and cycle elimination."""

from __future__ import annotations

from dataclasses import dataclass

from .model import Allocation, Instance
from .valuation import envies


@dataclass(frozen=True)
class EnvyGraph:
    n: int
    edges: tuple[frozenset, ...]  # edges[i] = agents that i envies

    def successors(self, i: int) -> list[int]:
        return sorted(self.edges[i])

    def has_edge(self, i: int, j: int) -> bool:
        return j in self.edges[i]

    def edge_count(self) -> int:
        return sum(len(e) for e in self.edges)


def build_envy_graph(instance: Instance, alloc: Allocation) -> EnvyGraph:
    n = instance.n
    return EnvyGraph(n, tuple(
        frozenset(j for j in range(n) if envies(instance, alloc, i, j)) for i in range(n)))


def sources(g: EnvyGraph) -> set[int]:
    targets = set().union(*g.edges) if g.n else set()
    return {v for v in range(g.n) if v not in targets}


def find_dicycle(g: EnvyGraph) -> list[int] | None:
    """Some directed cycle as a vertex list, found by DFS from the lowest index.

    Returns ``None`` for an acyclic graph.
    """
    WHITE, GREY, BLACK = 0, 1, 2
    color = [WHITE] * g.n
    for root in range(g.n):
        if color[root] != WHITE:
            continue
        stack: list[int] = [root]
        its = {root: iter(g.successors(root))}
        color[root] = GREY
        while stack:
            v = stack[-1]
            nxt = next(its[v], None)
            if nxt is None:
                color[v] = BLACK
                stack.pop()
            elif color[nxt] == GREY:
                return stack[stack.index(nxt):]
            elif color[nxt] == WHITE:
                color[nxt] = GREY
                its[nxt] = iter(g.successors(nxt))
                stack.append(nxt)
    return None


def rotate(alloc: Allocation, cycle: list[int]) -> Allocation:
    """Each agent on ``cycle`` takes the bundle of its successor on the cycle."""
    k = len(cycle)
    return alloc.replace({cycle[l]: alloc.bundles[cycle[(l + 1) % k]] for l in range(k)})


def eliminate_cycles(instance: Instance, alloc: Allocation,
                     record: list | None = None) -> Allocation:
    """Rotate bundles along envy cycles until the envy graph is acyclic.

    Every rotation gives each agent on the cycle a bundle it strictly prefers,
    so the sum of own-bundle values rises and the loop terminates.  Rotated
    cycles are appended to ``record`` when given.
    """
    while (cycle := find_dicycle(build_envy_graph(instance, alloc))) is not None:
        alloc = rotate(alloc, cycle)
        if record is not None:
            record.append(cycle)
    return alloc
