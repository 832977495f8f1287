import copy
import json
from fractions import Fraction

import pytest

from mtc.count.cohomology import DeltaMap, TorusType, type_of
from mtc.count.scenario import (
    BirthDeath,
    Doubling,
    Scenario,
    Side,
    Strand,
    fixture_names,
    load_fixture,
    load_scenario,
)
from mtc.errors import ScenarioError, ValidationError
from mtc.orbifold import CoverSpec

HALF = Fraction(1, 2)


def diagram_a() -> dict:
    return {
        "strands": [
            {"id": "v", "delta0": {"00": 1, "10": 1, "01": 1, "11": 1}},
            {"id": "w", "birth": "0", "death": "1/2", "delta0": {"00": -1, "10": 1, "01": 1, "11": 1}},
        ],
        "events": [
            {"kind": "doubling", "t": "1/2", "base": "v", "iota0": "10", "child": "w", "side": "left"},
        ],
        "selection": [
            {"strand": "v", "degree": 2, "multiplicity": 1},
            {"strand": "w", "degree": 1},
        ],
    }


def test_from_json():
    s = Scenario.from_json(diagram_a())
    assert s.strands["v"].birth == 0 and s.strands["v"].death == 1
    assert s.events == (Doubling(HALF, "v", "10", "w", Side.LEFT),)
    assert s.selection == {("v", 2): 1, ("w", 1): 1}
    assert Scenario.from_json(s.to_json()) == s


def test_doubling_runs_along_a_double_cover():
    obj = diagram_a()
    obj["events"][0]["cover"] = {"degree": 2, "generators": [[2, 1], [1, 2]]}
    s = Scenario.from_json(obj)
    assert s.events[0].cover == CoverSpec.create(2, [(2, 1), (1, 2)])
    assert Scenario.from_json(s.to_json()) == s

    for degree, generators, match in [
        (4, [[2, 3, 4, 1], [1, 2, 3, 4]], "dimension 2"),
        (3, [[2, 3, 1], [1, 2, 3]], "dimension 2"),
        (1, [[1], [1]], "not a double cover"),
        (2, [[1, 2], [2, 1]], "expected iota0 10"),
        (2, [[1, 2], [1, 2]], "transitively"),
    ]:
        obj["events"][0]["cover"] = {"degree": degree, "generators": generators}
        with pytest.raises(ScenarioError, match=match):
            Scenario.from_json(obj)

    s = Scenario.from_json(diagram_a())
    quadruple = CoverSpec.create(4, [(2, 3, 4, 1), (1, 2, 3, 4)])
    with pytest.raises(ScenarioError, match="degree-4"):
        Scenario(list(s.strands.values()), [s.events[0]._replace(cover=quadruple)], s.selection)


def test_timeline():
    s = Scenario.from_json(diagram_a())
    assert type_of(s.delta_at("v", Fraction(1, 4))) == TorusType(1, 0)
    assert type_of(s.delta_at("v", Fraction(3, 4))) == TorusType(1, 1)
    assert s.delta_before("v", HALF) == DeltaMap.constant()
    assert s.delta_after("v", HALF) == DeltaMap.constant().flip("10")
    assert s.is_alive("w", Fraction(1, 4))
    assert not s.is_alive("w", Fraction(3, 4))
    with pytest.raises(ValidationError):
        s.delta_at("v", HALF)


def test_selection_must_be_closed():
    obj = diagram_a()
    obj["selection"] = [{"strand": "v", "degree": 2, "multiplicity": 1}]
    with pytest.raises(ScenarioError):
        Scenario.from_json(obj)

    obj["selection"] = [
        {"strand": "v", "degree": 2, "multiplicity": 1},
        {"strand": "w", "degree": 1, "multiplicity": 2},
    ]
    with pytest.raises(ScenarioError):
        Scenario.from_json(obj)

    # A child at degree 16 would need its base at degree 32.
    obj["selection"] = [{"strand": "w", "degree": 16, "multiplicity": 1}]
    with pytest.raises(ScenarioError):
        Scenario.from_json(obj)

    obj["selection"] = [{"strand": "v", "degree": 3, "multiplicity": 1}]
    with pytest.raises(ScenarioError):
        Scenario.from_json(obj)

    # Degree 1 of the base is not coupled to anything.
    obj["selection"] = [{"strand": "v", "degree": 1, "multiplicity": 5}]
    assert Scenario.from_json(obj).multiplicity("v", 1) == 5


def test_event_rules():
    obj = diagram_a()
    obj["strands"][1]["delta0"]["00"] = 1
    with pytest.raises(ScenarioError, match="expected"):
        Scenario.from_json(obj)

    obj = diagram_a()
    obj["strands"][1]["death"] = "1"
    with pytest.raises(ScenarioError):
        Scenario.from_json(obj)

    obj = diagram_a()
    obj["events"][0]["t"] = "1"
    obj["strands"][1]["death"] = "1"
    with pytest.raises(ScenarioError):
        Scenario.from_json(obj)

    obj = diagram_a()
    obj["events"][0]["child"] = "v"
    with pytest.raises(ScenarioError):
        Scenario.from_json(obj)

    obj = diagram_a()
    obj["events"][0]["iota0"] = "00"
    with pytest.raises(ValidationError):
        Scenario.from_json(obj)


def test_birth_death_rules():
    plus = Strand("p", HALF, Fraction(1), DeltaMap.from_type(1, ["01"]))
    minus = Strand("m", HALF, Fraction(1), DeltaMap.from_type(-1, ["01"]))
    event = BirthDeath(HALF, "p", "m", Side.RIGHT)
    s = Scenario([plus, minus], [event], {("p", 4): 2, ("m", 4): 2})
    assert len(s.events) == 1

    with pytest.raises(ScenarioError, match="identically"):
        Scenario([plus, minus], [event], {("p", 4): 2})
    with pytest.raises(ScenarioError, match="nontrivial"):
        Scenario([plus, minus._replace(delta0=DeltaMap.from_type(-1))], [event], {})
    with pytest.raises(ScenarioError, match="trivial signs"):
        Scenario([minus._replace(id="p"), plus._replace(id="m")], [event], {})
    with pytest.raises(ScenarioError):
        Scenario([plus, minus], [event._replace(side=Side.LEFT)], {})


def test_strand_rules():
    delta = DeltaMap.constant()
    with pytest.raises(ScenarioError, match="without an event"):
        Scenario([Strand("a", HALF, Fraction(1), delta)], [], {})
    with pytest.raises(ScenarioError, match="birth < death"):
        Scenario([Strand("a", Fraction(0), Fraction(0), delta)], [], {})
    with pytest.raises(ScenarioError, match="Duplicate"):
        Scenario([Strand("a", Fraction(0), Fraction(1), delta)] * 2, [], {})
    with pytest.raises(ScenarioError, match="unknown strand"):
        Scenario([Strand("a", Fraction(0), Fraction(1), delta)], [], {("b", 1): 1})


def test_malformed_json():
    with pytest.raises(ValidationError):
        Scenario.from_json({})
    obj = diagram_a()
    obj["events"][0]["kind"] = "merge"
    with pytest.raises(ValidationError):
        Scenario.from_json(obj)
    obj = diagram_a()
    obj["events"][0]["t"] = 0.5
    with pytest.raises(ValidationError):
        Scenario.from_json(obj)
    obj = diagram_a()
    obj["events"][0]["side"] = "up"
    with pytest.raises(ValidationError):
        Scenario.from_json(obj)


def test_load_scenario(tmp_path):
    path = tmp_path / "a.json"
    path.write_text(json.dumps(diagram_a()))
    assert load_scenario(str(path)) == Scenario.from_json(diagram_a())

    path.write_text("{")
    with pytest.raises(ValidationError):
        load_scenario(str(path))


def test_shipped_fixtures():
    assert fixture_names("diagrams") == list("abcdefghijkl")
    assert fixture_names("ledger") == [
        "birth_death",
        "degree_four",
        "double_cover_return",
        "double_cover_sum",
        "minus_chain",
        "plus_chain",
    ]
    s = load_fixture("diagrams/a")
    assert s == Scenario.from_json(diagram_a())
    assert s.name == "diagrams/a"
    with pytest.raises(ValidationError):
        load_fixture("diagrams/z")
    with pytest.raises(ValidationError):
        fixture_names("figures")


def test_scenarios_are_not_shared():
    obj = diagram_a()
    s = Scenario.from_json(copy.deepcopy(obj))
    obj["selection"].clear()
    assert s.selection == {("v", 2): 1, ("w", 1): 1}
