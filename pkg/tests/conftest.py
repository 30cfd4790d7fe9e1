from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import strategies as st

from twotype_efx.model import ALPHA, BETA, Allocation, Instance

FIXTURES = Path(__file__).parent / "fixtures"

# lines printed at the end of the run by the acceptance module
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def load_fixture(name: str):
    return json.loads((FIXTURES / name).read_text())


def frac(x) -> Fraction:
    return Fraction(x)


values_st = st.integers(min_value=0, max_value=10).map(Fraction)


@st.composite
def instances(draw, max_n=5, max_m=8, min_m=1):
    m = draw(st.integers(min_value=min_m, max_value=max_m))
    n = draw(st.integers(min_value=1, max_value=max_n))
    types = tuple(draw(st.lists(st.sampled_from([ALPHA, BETA]), min_size=n, max_size=n)))
    va = tuple(draw(st.lists(values_st, min_size=m, max_size=m)))
    vb = tuple(draw(st.lists(values_st, min_size=m, max_size=m)))
    return Instance(m, types, va, vb)


@st.composite
def allocations(draw, instance: Instance, partial=True):
    """Random allocation; owner ``n`` means the item stays in the pool."""
    top = instance.n if partial else instance.n - 1
    owners = draw(st.lists(st.integers(0, top), min_size=instance.m, max_size=instance.m))
    return Allocation.from_lists(
        instance.m, [[j for j, o in enumerate(owners) if o == a] for a in range(instance.n)])


@st.composite
def instance_and_allocation(draw, partial=True, **kw):
    inst = draw(instances(**kw))
    return inst, draw(allocations(inst, partial))


@pytest.fixture
def tiny():
    return Instance.build(2, ["alpha", "beta"], [1, 2], [3, 4])
