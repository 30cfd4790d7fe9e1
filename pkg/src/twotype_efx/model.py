"""Domain types: instances with two additive valuation types, allocations, and
their JSON encodings."""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Iterable, Sequence

ItemSet = frozenset  # frozenset[int]; iterate with sorted() for canonical order


class AgentType(enum.Enum):
    ALPHA = "alpha"
    BETA = "beta"

    @property
    def other(self) -> "AgentType":
        return AgentType.BETA if self is AgentType.ALPHA else AgentType.ALPHA


ALPHA = AgentType.ALPHA
BETA = AgentType.BETA


class ParseError(ValueError):
    """Raised when a JSON document does not have the expected structure."""


class InvalidAllocation(ValueError):
    """Raised for an allocation document that parses but cannot be a set partition."""


@dataclass(frozen=True)
class Instance:
    m: int
    agent_types: tuple[AgentType, ...]
    values_alpha: tuple[Fraction, ...]
    values_beta: tuple[Fraction, ...]

    @classmethod
    def build(cls, m: int, agent_types: Iterable, values_alpha: Iterable,
              values_beta: Iterable) -> "Instance":
        """Convenience constructor accepting strings/ints for types and values."""
        types = tuple(t if isinstance(t, AgentType) else AgentType(str(t).lower())
                      for t in agent_types)
        return cls(m, types, tuple(Fraction(v) for v in values_alpha),
                   tuple(Fraction(v) for v in values_beta))

    @property
    def n(self) -> int:
        return len(self.agent_types)

    @property
    def items(self) -> range:
        return range(self.m)

    def values(self, t: AgentType) -> tuple[Fraction, ...]:
        return self.values_alpha if t is ALPHA else self.values_beta

    def type_of(self, agent: int) -> AgentType:
        return self.agent_types[agent]

    def agents_of(self, t: AgentType) -> list[int]:
        return [i for i, ti in enumerate(self.agent_types) if ti is t]


@dataclass(frozen=True)
class Allocation:
    """``n`` pairwise-disjoint bundles over items ``0..m-1``; the rest is the pool."""

    m: int
    bundles: tuple[frozenset, ...]

    @classmethod
    def empty(cls, instance: Instance) -> "Allocation":
        return cls(instance.m, tuple(frozenset() for _ in range(instance.n)))

    @classmethod
    def from_lists(cls, m: int, bundles: Iterable[Iterable[int]]) -> "Allocation":
        return cls(m, tuple(frozenset(b) for b in bundles))

    @property
    def n(self) -> int:
        return len(self.bundles)

    @property
    def allocated(self) -> frozenset:
        return frozenset().union(*self.bundles)

    @property
    def pool(self) -> frozenset:
        return frozenset(range(self.m)) - self.allocated

    @property
    def is_complete(self) -> bool:
        return not self.pool

    def owner(self, item: int) -> int | None:
        for i, b in enumerate(self.bundles):
            if item in b:
                return i
        return None

    def replace(self, changes: dict[int, Iterable[int]]) -> "Allocation":
        """Return a copy with the bundles of the given agents replaced."""
        bundles = list(self.bundles)
        for agent, items in changes.items():
            bundles[agent] = frozenset(items)
        return Allocation(self.m, tuple(bundles))


def validate(instance: Instance) -> list[str]:
    """All invariant violations of ``instance``; an empty list means ok."""
    errors = []
    if not isinstance(instance.m, int) or instance.m < 1:
        errors.append(f"item count must be a positive integer, got {instance.m!r}")
    if instance.n < 1:
        errors.append("at least one agent is required")
    for t in instance.agent_types:
        if not isinstance(t, AgentType):
            errors.append(f"unknown agent type {t!r}")
    for t in AgentType:
        vec = instance.values(t)
        if len(vec) != instance.m:
            errors.append(f"value vector length mismatch for {t.value}: "
                          f"expected {instance.m}, got {len(vec)}")
        for j, v in enumerate(vec):
            if v < 0:
                errors.append(f"negative value {v} for item {j} under {t.value}")
    return errors


def allocation_valid(instance: Instance, alloc: Allocation) -> list[str]:
    errors = []
    if alloc.m != instance.m:
        errors.append(f"allocation is over {alloc.m} items, instance has {instance.m}")
    if alloc.n != instance.n:
        errors.append(f"allocation has {alloc.n} bundles, instance has {instance.n} agents")
    seen: dict[int, int] = {}
    for i, bundle in enumerate(alloc.bundles):
        for g in sorted(bundle):
            if not isinstance(g, int) or not 0 <= g < instance.m:
                errors.append(f"item {g!r} in bundle {i} is out of range")
            elif g in seen:
                errors.append(f"item {g} in two bundles ({seen[g]} and {i})")
            else:
                seen[g] = i
    return errors


# --------------------------------------------------------------------------
# JSON encoding

def render_rational(x: Fraction) -> int | str:
    return x.numerator if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def parse_rational(raw: Any) -> Fraction:
    if isinstance(raw, bool):
        raise ParseError(f"not a rational: {raw!r}")
    if isinstance(raw, int):
        return Fraction(raw)
    if isinstance(raw, str):
        text = raw.strip()
        if "/" in text:
            p, _, q = text.partition("/")
            try:
                num, den = int(p), int(q)
            except ValueError:
                raise ParseError(f"not a rational: {raw!r}") from None
            if den <= 0:
                raise ParseError(f"denominator must be positive in {raw!r}")
            return Fraction(num, den)
        try:
            return Fraction(int(text))
        except ValueError:
            raise ParseError(f"not a rational: {raw!r}") from None
    raise ParseError(f"not a rational: {raw!r}")


def instance_to_dict(instance: Instance) -> dict:
    return {
        "m": instance.m,
        "agents": [t.value for t in instance.agent_types],
        "values": {
            "alpha": [render_rational(v) for v in instance.values_alpha],
            "beta": [render_rational(v) for v in instance.values_beta],
        },
    }


def instance_from_dict(doc: Any) -> Instance:
    try:
        m = doc["m"]
        agents = doc["agents"]
        values = doc["values"]
        raw_alpha, raw_beta = values["alpha"], values["beta"]
    except (KeyError, TypeError) as exc:
        raise ParseError(f"missing or malformed field: {exc}") from None
    if isinstance(m, bool) or not isinstance(m, int):
        raise ParseError(f"'m' must be an integer, got {m!r}")
    if not isinstance(agents, list) or not all(isinstance(a, str) for a in agents):
        raise ParseError("'agents' must be a list of strings")
    try:
        types = tuple(AgentType(a) for a in agents)
    except ValueError as exc:
        raise ParseError(str(exc)) from None
    if not isinstance(raw_alpha, list) or not isinstance(raw_beta, list):
        raise ParseError("value vectors must be lists")
    return Instance(m, types, tuple(parse_rational(v) for v in raw_alpha),
                    tuple(parse_rational(v) for v in raw_beta))


def allocation_to_dict(alloc: Allocation) -> dict:
    return {"bundles": [sorted(b) for b in alloc.bundles], "pool": sorted(alloc.pool)}


def allocation_from_dict(doc: Any, m: int) -> Allocation:
    """Parse an allocation document.  Structural problems raise ParseError;
    a wrong ``pool`` is reported later by :func:`pool_mismatch`."""
    try:
        bundles = doc["bundles"]
        doc["pool"]
    except (KeyError, TypeError) as exc:
        raise ParseError(f"missing or malformed field: {exc}") from None
    if not isinstance(bundles, list):
        raise ParseError("'bundles' must be a list")
    out = []
    for b in bundles:
        if not isinstance(b, list) or not all(
                isinstance(g, int) and not isinstance(g, bool) for g in b):
            raise ParseError("each bundle must be a list of integers")
        if len(set(b)) != len(b):
            # duplicates inside one bundle would vanish in a set; keep them visible
            dup = sorted(g for g in set(b) if b.count(g) > 1)
            raise InvalidAllocation(f"item {dup[0]} appears twice in bundle {len(out)}")
        out.append(frozenset(b))
    return Allocation(m, tuple(out))


def pool_mismatch(doc: dict, alloc: Allocation) -> list[str]:
    pool = doc.get("pool")
    if not isinstance(pool, list) or sorted(pool) != sorted(alloc.pool):
        return [f"pool {pool!r} does not match the complement {sorted(alloc.pool)}"]
    return []


def render_instance(instance: Instance) -> str:
    return json.dumps(instance_to_dict(instance))


def parse_instance(text: str) -> Instance:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from None
    return instance_from_dict(doc)


def render_allocation(alloc: Allocation) -> str:
    return json.dumps(allocation_to_dict(alloc))


def parse_allocation(text: str, m: int) -> Allocation:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from None
    return allocation_from_dict(doc, m)


def agent_type_counts(types: Sequence[AgentType]) -> tuple[int, int]:
    return sum(t is ALPHA for t in types), sum(t is BETA for t in types)
