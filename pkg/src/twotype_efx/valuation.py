"""Exact additive valuations with a symbolic tie-break.

Every item ``j`` carries an infinitesimal bonus ``eps * 2**j``.  Rather than
picking a concrete ``eps``, values are kept as pairs ``(base, tiebreak)`` and
compared lexicographically, which is the ``eps -> 0+`` limit.  Because the
tie-break of a set is its bitmask, two different item sets never compare equal
for the same valuation type.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .model import Allocation, AgentType, Instance


@dataclass(frozen=True, order=True)
class SymbolicValue:
    base: Fraction
    tiebreak: int

    def __add__(self, other: "SymbolicValue") -> "SymbolicValue":
        return SymbolicValue(self.base + other.base, self.tiebreak + other.tiebreak)

    def __sub__(self, other: "SymbolicValue") -> "SymbolicValue":
        return SymbolicValue(self.base - other.base, self.tiebreak - other.tiebreak)


ZERO = SymbolicValue(Fraction(0), 0)


def bitmask(items: Iterable[int]) -> int:
    mask = 0
    for j in items:
        mask |= 1 << j
    return mask


def raw_value(instance: Instance, t: AgentType, s: Iterable[int]) -> Fraction:
    vals = instance.values(t)
    return sum((vals[j] for j in s), Fraction(0))


def sym_value(instance: Instance, t: AgentType, s: Iterable[int]) -> SymbolicValue:
    s = tuple(s)
    return SymbolicValue(raw_value(instance, t, s), bitmask(s))


def item_value(instance: Instance, t: AgentType, j: int) -> SymbolicValue:
    return SymbolicValue(instance.values(t)[j], 1 << j)


def agent_value(instance: Instance, alloc: Allocation, i: int,
                s: Iterable[int] | None = None) -> SymbolicValue:
    """Agent ``i``'s symbolic value for ``s`` (its own bundle by default)."""
    return sym_value(instance, instance.type_of(i), alloc.bundles[i] if s is None else s)


def by_value_desc(instance: Instance, t: AgentType, s: Iterable[int]) -> list[int]:
    """Items of ``s`` ordered from most to least valuable under type ``t``."""
    return sorted(s, key=lambda j: item_value(instance, t, j), reverse=True)


def envies(instance: Instance, alloc: Allocation, i: int, j: int) -> bool:
    if i == j:
        return False
    t = instance.type_of(i)
    return sym_value(instance, t, alloc.bundles[j]) > sym_value(instance, t, alloc.bundles[i])
