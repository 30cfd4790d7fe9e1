"""Definition-level fairness checks and a brute-force oracle.

Nothing here uses the solver modules.  Values are recomputed from the
instance so that the checks stay an independent route to the answer.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .model import Allocation, Instance


class Mode(enum.Enum):
    RAW = "raw"
    SYMBOLIC = "symbolic"


class OracleTooLarge(ValueError):
    pass


DEFAULT_CAP = 10**7
DEFAULT_PARTIAL_CAP = 10**5


def _value(instance: Instance, agent: int, items: Iterable[int], mode: Mode):
    vals = instance.values(instance.agent_types[agent])
    items = list(items)
    total = Fraction(0)
    for j in items:
        total += vals[j]
    if mode is Mode.RAW:
        return (total,)
    return (total, sum(2**j for j in items))


def efx_witness(instance: Instance, alloc: Allocation, i: int, j: int,
                mode: Mode = Mode.RAW) -> int | None:
    """An item whose removal from ``j``'s bundle still leaves ``i`` envious,
    or ``None`` if there is none."""
    if i == j:
        return None
    own = _value(instance, i, alloc.bundles[i], mode)
    other = alloc.bundles[j]
    for h in sorted(other):
        if _value(instance, i, other - {h}, mode) > own:
            return h
    return None


def efx_envies(instance: Instance, alloc: Allocation, i: int, j: int,
               mode: Mode = Mode.RAW) -> bool:
    return efx_witness(instance, alloc, i, j, mode) is not None


@dataclass(frozen=True)
class EFXReport:
    ok: bool
    witness: tuple[int, int, int] | None = None  # (envier, envied, removed item)

    def __bool__(self) -> bool:
        return self.ok


def is_efx(instance: Instance, alloc: Allocation, mode: Mode = Mode.RAW) -> EFXReport:
    for i in range(instance.n):
        for j in range(instance.n):
            h = efx_witness(instance, alloc, i, j, mode)
            if h is not None:
                return EFXReport(False, (i, j, h))
    return EFXReport(True)


def is_ef1(instance: Instance, alloc: Allocation, mode: Mode = Mode.RAW) -> bool:
    for i in range(instance.n):
        own = _value(instance, i, alloc.bundles[i], mode)
        for j in range(instance.n):
            other = alloc.bundles[j]
            if i == j or _value(instance, i, other, mode) <= own:
                continue
            # removing i's favourite item is the best single removal
            best = max(other, key=lambda h: _value(instance, i, [h], mode))
            if _value(instance, i, other - {best}, mode) > own:
                return False
    return True


def pareto_dominates(instance: Instance, b: Allocation, a: Allocation,
                     mode: Mode = Mode.SYMBOLIC) -> bool:
    strict = False
    for i in range(instance.n):
        vb = _value(instance, i, b.bundles[i], mode)
        va = _value(instance, i, a.bundles[i], mode)
        if vb < va:
            return False
        strict |= vb > va
    return strict


def check_improvement(instance: Instance, before: Allocation, after: Allocation,
                      g: int | None = None) -> list[str]:
    """Reasons why ``after`` is not a valid improvement of ``before``; empty if ok.

    Requires ``after`` to be EFX and to Pareto dominate ``before`` (both in the
    symbolic order) and to allocate nothing beyond ``before``'s items plus the
    one new item ``g``.  With ``g=None`` any single previously pooled item may
    enter.
    """
    errors = []
    report = is_efx(instance, after, Mode.SYMBOLIC)
    if not report:
        errors.append(f"not EFX: agent {report.witness[0]} EFX-envies agent "
                      f"{report.witness[1]} (remove item {report.witness[2]})")
    if not pareto_dominates(instance, after, before, Mode.SYMBOLIC):
        errors.append("not Pareto dominating")
    extra = after.allocated - before.allocated
    if g is not None:
        extra -= {g}
        if extra:
            errors.append(f"items {sorted(extra)} allocated beyond previous set and item {g}")
    elif len(extra) > 1:
        errors.append(f"more than one new item allocated: {sorted(extra)}")
    return errors


def brute_force_complete_efx(instance: Instance, mode: Mode = Mode.RAW,
                             first_only: bool = False, cap: int = DEFAULT_CAP,
                             include_partial: bool = False,
                             partial_cap: int = DEFAULT_PARTIAL_CAP) -> list[Allocation]:
    """Every EFX allocation, in lexicographic order of the item->agent map.

    With ``include_partial`` an item may also stay in the pool (encoded as
    agent ``n``), which enumerates ``(n+1)**m`` maps under ``partial_cap``.
    """
    n, m = instance.n, instance.m
    choices = n + 1 if include_partial else n
    limit = min(cap, partial_cap) if include_partial else cap
    if choices**m > limit:
        raise OracleTooLarge(f"instance too large for oracle: {choices}^{m} > {limit}")
    found = []
    for assignment in itertools.product(range(choices), repeat=m):
        bundles = [set() for _ in range(n)]
        for item, agent in enumerate(assignment):
            if agent < n:
                bundles[agent].add(item)
        alloc = Allocation.from_lists(m, bundles)
        if is_efx(instance, alloc, mode):
            found.append(alloc)
            if first_only:
                break
    return found
