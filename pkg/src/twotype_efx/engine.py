"""Complete EFX allocations for agents of two additive valuation types.

The solver keeps a partial allocation that is EFX under the symbolic order and
repeatedly replaces it by a Pareto-dominating EFX allocation that may take one
more pooled item ``g``.  Pareto domination makes the potential (sum of
own-bundle values) strictly increase, so the loop terminates; once the pool is
empty the allocation is complete.

One improvement step tries, in order:

1. free insertion: give ``g`` to an agent nobody would then EFX-envy;
2. cycle elimination: rotate bundles along envy cycles (``g`` not consumed);
3. self-champion: an agent that champions its own bundle plus ``g`` swaps to
   its minimum preferred subset of it;
4. unique source: shift bundles along a path from the source to one of its
   champions, who takes the minimum preferred set;
5. two sources: the poorest agents of each type trade preferred subsets and
   are then trimmed against the second-poorest agent of their own type.
"""

from __future__ import annotations

import enum
import logging
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from . import checker
from .champion import champions_of, min_preferred_set
from .envy import build_envy_graph, eliminate_cycles, find_dicycle, sources
from .model import ALPHA, BETA, AgentType, Allocation, Instance
from .valuation import ZERO, SymbolicValue, agent_value, by_value_desc, item_value, sym_value

logger = logging.getLogger(__name__)

DEFAULT_MAX_STEPS = 10**6


class Case(enum.Enum):
    FREE_INSERTION = "FREE_INSERTION"
    CYCLE_ELIMINATION = "CYCLE_ELIMINATION"
    SELF_CHAMPION = "SELF_CHAMPION"
    SINGLE_SOURCE_PATH = "SINGLE_SOURCE_PATH"
    TWO_SOURCE_EXCHANGE = "TWO_SOURCE_EXCHANGE"


class LemmaViolation(AssertionError):
    """A property the construction guarantees did not hold: a solver bug."""


class IterationCapExceeded(RuntimeError):
    def __init__(self, message: str, steps: list):
        super().__init__(message)
        self.steps = steps


class CertificationError(RuntimeError):
    pass


@dataclass(frozen=True)
class StepOutcome:
    allocation: Allocation
    case: Case
    g: int
    detail: dict = field(default_factory=dict)


def _require(cond: bool, message: str, **context: Any) -> None:
    if not cond:
        raise LemmaViolation(f"{message} | {context}")


def potential(instance: Instance, alloc: Allocation) -> SymbolicValue:
    total = ZERO
    for i in range(instance.n):
        total = total + agent_value(instance, alloc, i)
    return total


def _efx_envies(instance: Instance, alloc: Allocation, i: int, j: int) -> bool:
    # dropping the least valuable item of j's bundle leaves the most valuable remainder
    bundle = alloc.bundles[j]
    if i == j or not bundle:
        return False
    t = instance.type_of(i)
    cheapest = min(bundle, key=lambda h: item_value(instance, t, h))
    return sym_value(instance, t, bundle - {cheapest}) > agent_value(instance, alloc, i)


def _efx_envied_by_anyone(instance: Instance, alloc: Allocation, j: int) -> bool:
    return any(_efx_envies(instance, alloc, k, j) for k in range(instance.n))


def _require_pooled(alloc: Allocation, g: int) -> None:
    if g not in alloc.pool:
        raise ValueError(f"item {g} is not in the pool")


def try_free_insertion(instance: Instance, alloc: Allocation, g: int) -> StepOutcome | None:
    _require_pooled(alloc, g)
    for i in range(instance.n):
        candidate = alloc.replace({i: alloc.bundles[i] | {g}})
        if not _efx_envied_by_anyone(instance, candidate, i):
            return StepOutcome(candidate, Case.FREE_INSERTION, g, {"agent": i})
    return None


def resolve_self_champion(instance: Instance, alloc: Allocation, g: int) -> StepOutcome | None:
    _require_pooled(alloc, g)
    for i in range(instance.n):
        k, champs = champions_of(instance, alloc, i, g)
        if i not in champs:
            continue
        pref = min_preferred_set(instance, alloc, i, alloc.bundles[i] | {g})
        return StepOutcome(alloc.replace({i: pref.items}), Case.SELF_CHAMPION, g,
                           {"agent": i, "kappa": k, "preferred_set": sorted(pref.items)})
    return None


def _bfs_path(graph, start: int, goal: int) -> list[int] | None:
    parent = {start: None}
    queue = deque([start])
    while queue:
        v = queue.popleft()
        if v == goal:
            path = []
            while v is not None:
                path.append(v)
                v = parent[v]
            return path[::-1]
        for w in graph.successors(v):
            if w not in parent:
                parent[w] = v
                queue.append(w)
    return None


def path_shift(instance: Instance, alloc: Allocation, g: int, j: int) -> StepOutcome:
    """Move bundles one step back along an envy path from ``j`` to a champion of ``j``.

    Each agent on the path takes the bundle of its successor; the champion at
    the end takes its minimum preferred subset of ``X_j + g``.
    """
    _require_pooled(alloc, g)
    k, champs = champions_of(instance, alloc, j, g)
    _require(bool(champs), "champion set of X_j + g is empty", j=j, g=g)
    i = min(champs)
    graph = build_envy_graph(instance, alloc)
    path = _bfs_path(graph, j, i)
    _require(path is not None, "champion not reachable from the source", source=j,
             champion=i, edges=[sorted(e) for e in graph.edges])
    pref = min_preferred_set(instance, alloc, i, alloc.bundles[j] | {g})
    changes = {path[l]: alloc.bundles[path[l + 1]] for l in range(len(path) - 1)}
    changes[i] = pref.items
    return StepOutcome(alloc.replace(changes), Case.SINGLE_SOURCE_PATH, g,
                       {"source": j, "champion": i, "kappa": k, "path": path,
                        "preferred_set": sorted(pref.items)})


def _ranked(instance: Instance, alloc: Allocation, t: AgentType) -> list[int]:
    """Agents of type ``t``, poorest first by own-bundle value."""
    return sorted(instance.agents_of(t), key=lambda a: agent_value(instance, alloc, a))


def two_source_exchange(instance: Instance, alloc: Allocation, g: int,
                        assert_lemmas: bool = True) -> StepOutcome:
    _require_pooled(alloc, g)
    X = alloc
    alphas, betas = _ranked(instance, X, ALPHA), _ranked(instance, X, BETA)
    if len(alphas) < 2 or len(betas) < 2:
        raise ValueError("the exchange needs at least two agents of each type")
    a0, a1 = alphas[0], alphas[1]
    b0, b1 = betas[0], betas[1]
    va = lambda s: sym_value(instance, ALPHA, s)  # noqa: E731
    vb = lambda s: sym_value(instance, BETA, s)  # noqa: E731

    if assert_lemmas:
        _require(all(X.bundles), "some bundle is empty in the two-source case",
                 bundles=[sorted(b) for b in X.bundles])
        _require(sources(build_envy_graph(instance, X)) == {a0, b0},
                 "sources are not the two poorest agents", a0=a0, b0=b0)
        _require(va(X.bundles[a0]) > va(X.bundles[b0]) and vb(X.bundles[b0]) > vb(X.bundles[a0]),
                 "poorest agents envy each other", a0=a0, b0=b0)
        _require(a0 in champions_of(instance, X, b0, g)[1], "alpha_0 does not champion beta_0")
        _require(b0 in champions_of(instance, X, a0, g)[1], "beta_0 does not champion alpha_0")

    pa = min_preferred_set(instance, X, a0, X.bundles[b0] | {g})
    pb = min_preferred_set(instance, X, b0, X.bundles[a0] | {g})
    _require(pa is not None and pb is not None, "preferred sets undefined", a0=a0, b0=b0)
    PA, PB = pa.items, pb.items
    if assert_lemmas:
        _require(g in PA and g in PB, "g missing from a preferred set",
                 PA=sorted(PA), PB=sorted(PB), g=g)

    Xa = (X.bundles[a0] | PA) - PB
    Xb = (X.bundles[b0] | PB) - PA
    X1 = X.replace({a0: Xa, b0: Xb})
    if assert_lemmas:
        _require(g in X1.pool, "g allocated by the exchange")
        _require(va(Xa) > va(X.bundles[a0]) > va(X.bundles[b0]) > va(Xb),
                 "alpha chain after exchange fails", a0=a0, b0=b0)
        _require(vb(Xb) > vb(X.bundles[b0]) > vb(X.bundles[a0]) > vb(Xa),
                 "beta chain after exchange fails", a0=a0, b0=b0)

    # trim each poorest bundle against the runner-up of its own type
    trimmed: dict[int, list[int]] = {}
    changes = {}
    for low, runner in ((a0, a1), (b0, b1)):
        if _efx_envies(instance, X1, runner, low):
            p = min_preferred_set(instance, X1, runner, X1.bundles[low])
            changes[low] = p.items
            trimmed[low] = sorted(p.items)
    X2 = X1.replace(changes)

    if assert_lemmas:
        for envier, envied in ((a1, a0), (b1, b0), (a1, b0), (b1, a0), (a0, b0), (b0, a0)):
            _require(not _efx_envies(instance, X2, envier, envied),
                     "EFX envy remains after trimming", envier=envier, envied=envied)
        problems = checker.check_improvement(instance, X, X2, g)
        _require(not problems, "exchange is not an improvement", problems=problems)

    return StepOutcome(X2, Case.TWO_SOURCE_EXCHANGE, g, {
        "alpha0": a0, "alpha1": a1, "beta0": b0, "beta1": b1,
        "p_alpha": sorted(PA), "p_beta": sorted(PB),
        "trimmed": {str(k): v for k, v in trimmed.items()},
    })


def improvement_step(instance: Instance, alloc: Allocation, g: int,
                     assert_lemmas: bool = True) -> StepOutcome:
    """One Pareto-improving step from an EFX allocation with ``g`` pooled."""
    out = try_free_insertion(instance, alloc, g)
    if out is not None:
        return out
    graph = build_envy_graph(instance, alloc)
    if find_dicycle(graph) is not None:
        cycles: list = []
        rotated = eliminate_cycles(instance, alloc, cycles)
        return StepOutcome(rotated, Case.CYCLE_ELIMINATION, g, {"cycles": cycles})
    out = resolve_self_champion(instance, alloc, g)
    if out is not None:
        return out
    srcs = sources(graph)
    _require(bool(srcs), "acyclic envy graph without a source")
    if len(srcs) == 1:
        return path_shift(instance, alloc, g, next(iter(srcs)))
    return two_source_exchange(instance, alloc, g, assert_lemmas)


# --------------------------------------------------------------------------
# base cases

def _greedy_bundles(values, n: int) -> list[set]:
    m = len(values)
    key = lambda j: (values[j], 1 << j)  # noqa: E731
    bundles: list[set] = [set() for _ in range(n)]
    worth = [(Fraction(0), 0)] * n
    for j in sorted(range(m), key=key, reverse=True):
        poorest = min(range(n), key=lambda b: (worth[b], b))
        bundles[poorest].add(j)
        worth[poorest] = (worth[poorest][0] + values[j], worth[poorest][1] + (1 << j))
    return bundles


def greedy_identical(values, n: int) -> Allocation:
    """EFX allocation for ``n`` agents who all share the value vector ``values``.

    Items go in decreasing order to the currently poorest bundle.  The result
    is certified with the checker and replaced by an oracle answer if that
    ever fails.
    """
    if n < 1:
        raise ValueError("need at least one agent")
    values = tuple(Fraction(v) for v in values)
    alloc = Allocation.from_lists(len(values), _greedy_bundles(values, n))
    identical = Instance(len(values), (ALPHA,) * n, values, values)
    if not checker.is_efx(identical, alloc, checker.Mode.SYMBOLIC):
        logger.warning("greedy allocation failed certification; using the oracle")
        alloc = checker.brute_force_complete_efx(identical, checker.Mode.SYMBOLIC,
                                                 first_only=True)[0]
    return alloc


def singleton_type_allocation(instance: Instance, lone: AgentType) -> Allocation:
    """Exactly one agent has type ``lone``: split for the other type, let it pick first."""
    (picker,) = instance.agents_of(lone)
    base = greedy_identical(instance.values(lone.other), instance.n)
    choice = max(range(instance.n),
                 key=lambda b: (sym_value(instance, lone, base.bundles[b]), -b))
    rest = [b for b in range(instance.n) if b != choice]
    others = [a for a in range(instance.n) if a != picker]
    bundles = [frozenset()] * instance.n
    bundles[picker] = base.bundles[choice]
    for agent, b in zip(others, rest):
        bundles[agent] = base.bundles[b]
    return Allocation(instance.m, tuple(bundles))


# --------------------------------------------------------------------------
# outer loop

@dataclass
class SolveResult:
    allocation: Allocation
    start: Allocation
    steps: list[StepOutcome]
    base_case: str | None = None

    def records(self, instance: Instance) -> list[dict]:
        """Run trace as JSON-ready records, one per step."""
        if self.base_case is not None:
            return [_record(instance, 0, self.base_case, None, self.start, self.allocation, {})]
        out = []
        prev = self.start
        for k, step in enumerate(self.steps):
            out.append(_record(instance, k, step.case.value, step.g, prev,
                               step.allocation, step.detail))
            prev = step.allocation
        return out


def _record(instance, k, case, g, before, after, detail) -> dict:
    pot = potential(instance, after)
    changed = {str(i): sorted(after.bundles[i]) for i in range(instance.n)
               if after.bundles[i] != before.bundles[i]}
    return {"step": k, "case": case, "g": g, "changed_bundles": changed,
            "pool": sorted(after.pool),
            "potential": {"base": _render(pot.base), "tiebreak": pot.tiebreak},
            "detail": detail}


def _render(x: Fraction):
    return x.numerator if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def solve(instance: Instance, assert_lemmas: bool = True,
          max_steps: int = DEFAULT_MAX_STEPS) -> SolveResult:
    """A complete allocation that the checker certifies EFX under raw values."""
    n_alpha, n_beta = len(instance.agents_of(ALPHA)), len(instance.agents_of(BETA))
    empty = Allocation.empty(instance)

    if min(n_alpha, n_beta) <= 1:
        # a base case counts as one step against the cap
        if max_steps < 1:
            raise IterationCapExceeded("step cap reached before the base case", [])
        if n_alpha == 0 or n_beta == 0:
            t = ALPHA if n_beta == 0 else BETA
            alloc = greedy_identical(instance.values(t), instance.n)
            label = "BASE_IDENTICAL"
        else:
            lone = ALPHA if n_alpha == 1 else BETA
            alloc = singleton_type_allocation(instance, lone)
            label = "BASE_SINGLE_AGENT_TYPE"
        result = SolveResult(alloc, empty, [], label)
    else:
        alloc, steps = empty, []
        while alloc.pool:
            if len(steps) >= max_steps:
                raise IterationCapExceeded(f"step cap {max_steps} reached", steps)
            g = min(alloc.pool)
            outcome = improvement_step(instance, alloc, g, assert_lemmas)
            if assert_lemmas:
                _require(potential(instance, outcome.allocation) > potential(instance, alloc),
                         "potential did not increase", case=outcome.case.value, step=len(steps))
            logger.debug("step %d: %s g=%d", len(steps), outcome.case.value, g)
            steps.append(outcome)
            alloc = outcome.allocation
        result = SolveResult(alloc, empty, steps)

    report = checker.is_efx(instance, result.allocation, checker.Mode.RAW)
    if not result.allocation.is_complete or not report:
        raise CertificationError(f"result failed certification: witness={report.witness}")
    return result
