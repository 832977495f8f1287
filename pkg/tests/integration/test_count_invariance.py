import random

import pytest
from hypothesis import given, settings, strategies as st

from mtc.count.scenario import BirthDeath, fixture_names, load_fixture
from mtc.count.simulate import check_invariance, random_scenario
from mtc.count.weights import WeightTable, solve_weight_table

# Constant count of every diagram under the canonical table.
DIAGRAM_COUNTS = {
    "a": -1, "b": -2, "c": -3, "d": 0, "e": -1, "f": -2,
    "g": 1, "h": 2, "i": 3, "j": 0, "k": 1, "l": 2,
}

LEDGER_COUNTS = {
    "plus_chain": -3,
    "minus_chain": 3,
    "double_cover_sum": 1,
    "double_cover_return": 0,
    "birth_death": 0,
    "degree_four": 1,
}


@pytest.mark.parametrize("name", sorted(DIAGRAM_COUNTS))
def test_diagrams(name):
    s = load_fixture(f"diagrams/{name}")
    report = check_invariance(s, WeightTable.canonical())
    assert report.passed, report.to_dict()
    assert {i.count for i in report.intervals} == {DIAGRAM_COUNTS[name]}


@pytest.mark.parametrize("name", sorted(DIAGRAM_COUNTS))
def test_diagrams_printed_table(name):
    # The printed degree-2 weights have the opposite sign and every diagram
    # couples degree 2 with degree 1.
    report = check_invariance(load_fixture(f"diagrams/{name}"), WeightTable.definition())
    expected = 2 if name in "abcdef" else -2
    assert report.first_violation.imbalance == expected


@pytest.mark.parametrize("name", sorted(LEDGER_COUNTS))
def test_ledger_fixtures(name):
    s = load_fixture(f"ledger/{name}")
    report = check_invariance(s, WeightTable.canonical())
    assert report.passed, report.to_dict()
    assert {i.count for i in report.intervals} == {LEDGER_COUNTS[name]}
    assert len(report.intervals) == len(s.events) + 1


def test_every_fixture_is_listed():
    assert fixture_names("diagrams") == sorted(DIAGRAM_COUNTS)
    assert fixture_names("ledger") == sorted(LEDGER_COUNTS)


def test_random_scenarios(rng):
    kinds = set()
    for _ in range(1000):
        s = random_scenario(rng)
        report = check_invariance(s, WeightTable.canonical())
        assert report.passed, s.to_json()
        kinds |= {(type(e).__name__, str(e.side)) for e in s.events}
    assert kinds == {
        ("BirthDeath", "left"),
        ("BirthDeath", "right"),
        ("Doubling", "left"),
        ("Doubling", "right"),
    }


def test_random_scenarios_with_shifted_table(rng):
    table = solve_weight_table(normalization={2: 1, 4: -2, 8: 3})
    for _ in range(200):
        assert check_invariance(random_scenario(rng), table).passed


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_random_scenario_invariance(seed):
    s = random_scenario(random.Random(seed))
    assert check_invariance(s, WeightTable.canonical()).passed


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_birth_death_ledgers_balance(seed):
    s = random_scenario(random.Random(seed))
    report = check_invariance(s, WeightTable.definition())
    for i, e in enumerate(s.events):
        if isinstance(e, BirthDeath):
            left, right = report.intervals[i], report.intervals[i + 1]
            assert left.count == right.count


def test_reports_are_deterministic(rng):
    s = random_scenario(rng)
    table = WeightTable.canonical()
    assert check_invariance(s, table).to_dict() == check_invariance(s, table).to_dict()
