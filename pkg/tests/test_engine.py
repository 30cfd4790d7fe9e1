from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from twotype_efx import checker
from twotype_efx.engine import (
    Case, IterationCapExceeded, greedy_identical, improvement_step, path_shift, potential,
    resolve_self_champion, singleton_type_allocation, solve, try_free_insertion,
    two_source_exchange)
from twotype_efx.envy import build_envy_graph, find_dicycle, sources
from twotype_efx.model import ALPHA, BETA, Allocation, Instance, instance_from_dict
from twotype_efx.valuation import SymbolicValue, sym_value

from .conftest import instances, load_fixture


def bundles(alloc):
    return [sorted(b) for b in alloc.bundles]


def test_potential_examples():
    inst = Instance.build(3, ["alpha", "beta"], [1, 2, 3], [3, 2, 1])
    assert potential(inst, Allocation.empty(inst)) == SymbolicValue(Fraction(0), 0)
    single = Instance.build(3, ["beta"], [0, 0, 0], [3, 2, "1/2"])
    everything = Allocation.from_lists(3, [[0, 1, 2]])
    assert potential(single, everything) == SymbolicValue(Fraction(11, 2), 7)


def test_free_insertion_prefers_empty_bundle():
    inst = Instance.build(3, ["alpha", "beta", "beta"], [5, 5, 5], [5, 5, 5])
    alloc = Allocation.from_lists(3, [[0], [1], []])
    out = try_free_insertion(inst, alloc, 2)
    # agent 0 taking item 2 would be EFX-envied; agent 2 is empty
    assert out.detail == {"agent": 2} and bundles(out.allocation) == [[0], [1], [2]]


def test_free_insertion_single_agent():
    inst = Instance.build(2, ["alpha"], [1, 1], [1, 1])
    out = try_free_insertion(inst, Allocation.from_lists(2, [[0]]), 1)
    assert bundles(out.allocation) == [[0, 1]]


def test_free_insertion_impossible():
    inst = Instance.build(3, ["alpha", "alpha"], [1, 1, 1], [1, 1, 1])
    alloc = Allocation.from_lists(3, [[0], [1]])
    assert try_free_insertion(inst, alloc, 2) is None
    for i in range(2):
        grown = alloc.replace({i: alloc.bundles[i] | {2}})
        assert checker.efx_envies(inst, grown, 1 - i, i, checker.Mode.SYMBOLIC)


def test_self_champion_example():
    # every raw value ties; the tie-break makes item 2 the best single item
    inst = Instance.build(3, ["alpha", "alpha"], [1, 1, 1], [1, 1, 1])
    alloc = Allocation.from_lists(3, [[0], [1]])
    out = improvement_step(inst, alloc, 2)
    assert out.case is Case.SELF_CHAMPION
    assert out.detail == {"agent": 0, "kappa": 1, "preferred_set": [2]}
    assert bundles(out.allocation) == [[2], [1]]
    assert checker.check_improvement(inst, alloc, out.allocation, 2) == []


def test_self_champion_single_agent():
    inst = Instance.build(2, ["beta"], [0, 0], [3, 1])
    out = resolve_self_champion(inst, Allocation.from_lists(2, [[0]]), 1)
    assert out.detail["agent"] == 0 and out.allocation.bundles[0] <= {0, 1}


def test_no_self_champion_in_exchange_states():
    doc = load_fixture("exchange_trim.json")
    inst = instance_from_dict(doc["instance"])
    alloc = Allocation.from_lists(inst.m, doc["before"])
    assert resolve_self_champion(inst, alloc, doc["g"]) is None


PATH_INSTANCE = Instance.build(6, ["alpha", "alpha", "beta", "beta"],
                               [2, 1, 3, 5, 0, 0], [4, 0, 2, 4, 0, 4])
PATH_BEFORE = Allocation.from_lists(6, [[2], [0, 1], [5], [3]])


def test_path_shift_example():
    graph = build_envy_graph(PATH_INSTANCE, PATH_BEFORE)
    assert graph.edges == (frozenset({3}), frozenset({0, 3}), frozenset(), frozenset({2}))
    assert sources(graph) == {1}
    out = improvement_step(PATH_INSTANCE, PATH_BEFORE, 4)
    assert out.case is Case.SINGLE_SOURCE_PATH
    assert out.detail == {"source": 1, "champion": 3, "kappa": 2, "path": [1, 3],
                          "preferred_set": [0, 4]}
    assert bundles(out.allocation) == [[2], [3], [5], [0, 4]]
    assert checker.check_improvement(PATH_INSTANCE, PATH_BEFORE, out.allocation, 4) == []


def test_path_agents_strictly_improve():
    out = path_shift(PATH_INSTANCE, PATH_BEFORE, 4, 1)
    for agent in out.detail["path"]:
        t = PATH_INSTANCE.type_of(agent)
        assert sym_value(PATH_INSTANCE, t, out.allocation.bundles[agent]) > \
            sym_value(PATH_INSTANCE, t, PATH_BEFORE.bundles[agent])


def test_cycle_elimination_step():
    inst = Instance.build(5, ["alpha", "alpha", "beta", "beta"], [0, 0, 0, 2, 1], [5, 5, 2, 2, 4])
    before = Allocation.from_lists(5, [[0], [1], [2], [3]])
    out = improvement_step(inst, before, 4)
    assert out.case is Case.CYCLE_ELIMINATION
    assert out.detail == {"cycles": [[0, 1, 2], [0, 1, 3]]}
    assert bundles(out.allocation) == [[2], [3], [0], [1]]
    assert out.allocation.pool == before.pool
    assert find_dicycle(build_envy_graph(inst, out.allocation)) is None
    assert checker.check_improvement(inst, before, out.allocation, 4) == []


@pytest.mark.parametrize("name", ["exchange_389.json", "exchange_434.json",
                                  "exchange_1293.json", "exchange_trim.json"])
def test_two_source_exchange_fixtures(name):
    doc = load_fixture(name)
    inst = instance_from_dict(doc["instance"])
    before = Allocation.from_lists(inst.m, doc["before"])
    g = doc["g"]
    assert checker.is_efx(inst, before, checker.Mode.SYMBOLIC)
    out = improvement_step(inst, before, g, assert_lemmas=True)
    assert out.case is Case.TWO_SOURCE_EXCHANGE
    assert bundles(out.allocation) == doc["after"]
    assert out.detail == doc["detail"]
    assert g in out.detail["p_alpha"] and g in out.detail["p_beta"]
    assert g in out.allocation.pool
    assert checker.check_improvement(inst, before, out.allocation, g) == []
    assert potential(inst, out.allocation) > potential(inst, before)


def test_exchange_trim_fires():
    doc = load_fixture("exchange_trim.json")
    assert doc["detail"]["trimmed"]


def test_exchange_needs_two_of_each_type():
    inst = Instance.build(3, ["alpha", "beta", "beta"], [1, 1, 1], [1, 1, 1])
    with pytest.raises(ValueError):
        two_source_exchange(inst, Allocation.from_lists(3, [[0], [1], []]), 2)


def test_empty_start_fills_by_free_insertion():
    inst = Instance.build(6, ["alpha", "beta", "alpha", "beta"], [3, 1, 4, 1, 5, 9],
                          [2, 6, 5, 3, 5, 8])
    result = solve(inst)
    assert [s.case for s in result.steps[:4]] == [Case.FREE_INSERTION] * 4


def test_greedy_identical_examples():
    assert bundles(greedy_identical([5, 4, 3, 2], 2)) == [[0, 3], [1, 2]]
    assert bundles(greedy_identical([5, 4, 3, 2], 1)) == [[0, 1, 2, 3]]
    assert bundles(greedy_identical([1, 7], 4)) == [[1], [0], [], []]


def test_singleton_type_picks_best_bundle():
    inst = Instance.build(5, ["alpha", "beta", "beta"], [0, 0, 0, 1, 9], [5, 4, 3, 2, 1])
    # beta-greedy bundles: {0}, {1, 4}, {2, 3}; alpha values them 0, 9, 1
    alloc = singleton_type_allocation(inst, ALPHA)
    assert bundles(alloc) == [[1, 4], [0], [2, 3]]
    assert checker.is_efx(inst, alloc)


def test_solve_single_agent():
    inst = Instance.build(3, ["beta"], [1, 2, 3], [1, 0, 0])
    result = solve(inst)
    assert bundles(result.allocation) == [[0, 1, 2]]
    assert result.base_case == "BASE_IDENTICAL"


def test_solve_step_cap():
    inst = Instance.build(3, ["alpha", "alpha", "beta", "beta"], [1, 2, 3], [3, 2, 1])
    with pytest.raises(IterationCapExceeded):
        solve(inst, max_steps=2)
    with pytest.raises(IterationCapExceeded):
        solve(Instance.build(1, ["alpha"], [1], [1]), max_steps=0)


@settings(max_examples=60, deadline=None)
@given(instances(max_n=6, max_m=9))
def test_solve_certified_and_each_step_improves(inst):
    result = solve(inst)
    assert result.allocation.is_complete
    assert checker.is_efx(inst, result.allocation, checker.Mode.RAW)
    prev = result.start
    for step in result.steps:
        assert checker.check_improvement(inst, prev, step.allocation, step.g) == []
        assert potential(inst, step.allocation) > potential(inst, prev)
        prev = step.allocation


@settings(max_examples=100, deadline=None)
@given(st.lists(st.integers(0, 10), min_size=1, max_size=12), st.integers(1, 6))
def test_greedy_identical_is_efx(values, n):
    alloc = greedy_identical(values, n)
    inst = Instance.build(len(values), ["alpha"] * n, values, values)
    assert alloc.is_complete
    assert checker.is_efx(inst, alloc, checker.Mode.SYMBOLIC)


@settings(max_examples=60, deadline=None)
@given(instances(max_n=6, max_m=10), st.sampled_from([ALPHA, BETA]))
def test_singleton_type_is_efx(inst, lone):
    types = [lone] + [lone.other] * (inst.n - 1)
    inst = Instance(inst.m, tuple(types), inst.values_alpha, inst.values_beta)
    assert checker.is_efx(inst, singleton_type_allocation(inst, lone))
