"""Minimum preferred sets, kappa values, most envious agents and champions."""

from __future__ import annotations

import functools
from dataclasses import dataclass
from typing import Iterable

from .model import Allocation, Instance
from .valuation import agent_value, by_value_desc, sym_value


@functools.total_ordering
class _Infinity:
    """Kappa of an agent that prefers no subset of the query set to its bundle."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __eq__(self, other):
        return other is self

    def __lt__(self, other):
        return False

    def __hash__(self):
        return hash("+inf")

    def __repr__(self):
        return "INFINITE"


INFINITE = _Infinity()


@dataclass(frozen=True)
class PreferredSet:
    items: frozenset
    kappa: int


def min_preferred_set(instance: Instance, alloc: Allocation, i: int,
                      s: Iterable[int]) -> PreferredSet | None:
    """Smallest subset of ``s`` that agent ``i`` prefers to its own bundle.

    For additive values the best ``k``-subset is the top ``k`` items, so the
    witness is the shortest prefix of ``s`` sorted by symbolic item value that
    beats the bundle.  ``None`` when even all of ``s`` does not.
    """
    t = instance.type_of(i)
    own = agent_value(instance, alloc, i)
    ranked = by_value_desc(instance, t, s)
    for k in range(1, len(ranked) + 1):
        top = ranked[:k]
        if sym_value(instance, t, top) > own:
            return PreferredSet(frozenset(top), k)
    return None


def kappa(instance: Instance, alloc: Allocation, i: int, s: Iterable[int]):
    p = min_preferred_set(instance, alloc, i, s)
    return INFINITE if p is None else p.kappa


def most_envious(instance: Instance, alloc: Allocation,
                 s: Iterable[int]) -> tuple[object, frozenset]:
    s = frozenset(s)
    ks = [kappa(instance, alloc, i, s) for i in range(instance.n)]
    best = min(ks)
    if best is INFINITE:
        return INFINITE, frozenset()
    return best, frozenset(i for i, k in enumerate(ks) if k == best)


def champions_of(instance: Instance, alloc: Allocation, j: int,
                 g: int) -> tuple[object, frozenset]:
    if alloc.owner(g) is not None:
        raise ValueError(f"item {g} is allocated; champions need an unallocated item")
    return most_envious(instance, alloc, alloc.bundles[j] | {g})
