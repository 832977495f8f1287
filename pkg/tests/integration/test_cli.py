import json

import pytest

from mtc.cli import EXIT_ERROR, EXIT_FAIL, EXIT_PASS, digest, main


def run(capsys, *argv: str) -> tuple[int, dict | None]:
    status = main(list(argv))
    out = capsys.readouterr().out
    return status, json.loads(out) if out else None


def write(tmp_path, name: str, obj) -> str:
    path = tmp_path / name
    path.write_text(json.dumps(obj))
    return str(path)


def test_harmonic(capsys):
    status, report = run(capsys, "harmonic", "--degree", "2")
    assert status == EXIT_PASS
    assert report["command"] == "harmonic"
    assert report["outcome"] == "pass"
    assert len(report["payload"]["basis"]) == 2

    _, report = run(capsys, "harmonic", "--degree", "0")
    assert report["payload"]["basis"] == ["1"]

    with pytest.raises(SystemExit) as e:
        main(["harmonic", "--degree", "-1"])
    assert e.value.code == 2


def test_verify_wendl(capsys):
    status, report = run(capsys, "verify-wendl", "--degree", "1", "--l", "16", "--samples", "2")
    assert status == EXIT_PASS
    payload = report["payload"]
    assert payload["basis_size"] == 2
    assert payload["pairing"] == "split"
    assert [e["source"] for e in payload["elements"]] == ["basis", "basis", "sample", "sample"]
    for element in payload["elements"]:
        assert element["per_l"][0]["rank"] >= 8

    status, report = run(capsys, "verify-wendl", "--degree", "1", "--l", "16", "--samples", "0", "--pairing", "symmetric")
    assert status == EXIT_FAIL
    assert report["outcome"] == "fail"

    status, report = run(capsys, "verify-wendl", "--degree", "1", "--l", "12")
    assert status == EXIT_ERROR and report is None


def test_series(capsys):
    status, report = run(capsys, "series", "--degree", "2")
    assert status == EXIT_PASS
    payload = report["payload"]
    assert payload["q_independent_merged"] is True
    assert payload["q_independent_raw"] is False
    assert len(payload["elements"]) == 5
    for element in payload["elements"]:
        assert element["passed"]
        for family in element["families"]:
            if not family["identically_zero"]:
                assert family["zero_count"] <= 4 * 2 + 2


def test_index(capsys, tmp_path):
    spec = {"rank_normal": 6, "points": [{"id": "x", "order": 2, "weights": [1]}]}
    status, report = run(capsys, "index", "--json", write(tmp_path, "one.json", spec))
    assert status == EXIT_PASS
    assert report["payload"]["index"] == "-3"
    assert report["payload"]["riemann_roch_index"] == "-3"
    assert report["payload"]["per_point_quotients"] == {"x": 1}

    _, report = run(capsys, "index", "--json", write(tmp_path, "one.json", spec), "--convention", "statement")
    assert report["payload"]["index"] == "-6"

    _, report = run(capsys, "index", "--json", write(tmp_path, "empty.json", {"rank_normal": 4, "points": []}))
    assert report["payload"]["index"] == "0"

    bad = {"rank_normal": 6, "points": [{"id": "x", "order": 2, "multiplicity": 3, "weights": [1]}]}
    status, _ = run(capsys, "index", "--json", write(tmp_path, "bad.json", bad))
    assert status == EXIT_ERROR

    status, _ = run(capsys, "index", "--json", str(tmp_path / "missing.json"))
    assert status == EXIT_ERROR


def test_codim(capsys, tmp_path):
    spec = {"ambient": 8, "components": [[1, 1]], "quotient_dims": [1]}
    status, report = run(capsys, "codim", "--json", write(tmp_path, "codim.json", spec))
    assert status == EXIT_PASS
    assert report["payload"] == {"codim": 4, "bound": "4", "top_stratum": False, "index": -3, "s": 1}

    spec["ambient"] = 4
    status, _ = run(capsys, "codim", "--json", write(tmp_path, "codim.json", spec))
    assert status == EXIT_ERROR


def test_simulate_fixture(capsys):
    status, report = run(capsys, "simulate", "--fixture", "diagrams/a")
    assert status == EXIT_PASS
    assert report["payload"]["pass"] is True
    assert report["payload"]["first_violation"] is None

    status, report = run(capsys, "simulate", "--fixture", "diagrams/a", "--override", "+1:2=0")
    assert status == EXIT_FAIL
    assert report["payload"]["first_violation"]["imbalance"] == 1

    status, report = run(capsys, "simulate", "--fixture", "diagrams/a", "--table", "definition")
    assert status == EXIT_FAIL
    assert report["payload"]["first_violation"]["imbalance"] == 2


def test_simulate_json(capsys, tmp_path):
    scenario = {
        "strands": [
            {"id": "v", "delta0": {"00": 1, "10": 1, "01": 1, "11": 1}},
            {"id": "w", "birth": "0", "death": "1/2", "delta0": {"00": -1, "10": 1, "01": 1, "11": 1}},
        ],
        "events": [{"kind": "doubling", "t": "1/2", "base": "v", "iota0": "10", "child": "w", "side": "left"}],
        "selection": [{"strand": "v", "degree": 2}, {"strand": "w", "degree": 1}],
    }
    status, report = run(capsys, "simulate", "--json", write(tmp_path, "s.json", scenario))
    assert status == EXIT_PASS
    assert [i["count"] for i in report["payload"]["intervals"]] == [-1, -1]

    # Not closed: the child is selected without its base.
    scenario["selection"] = [{"strand": "w", "degree": 1}]
    status, report = run(capsys, "simulate", "--json", write(tmp_path, "s.json", scenario))
    assert status == EXIT_ERROR and report is None


def test_simulate_random(capsys, monkeypatch):
    status, report = run(capsys, "simulate", "--random", "20", "--seed", "3")
    assert status == EXIT_PASS
    assert report["payload"] == {"scenarios": 20, "failures": [], "pass": True}

    monkeypatch.setenv("MTC_SEED", "3")
    _, from_env = run(capsys, "simulate", "--random", "20")
    assert from_env["inputs_digest"] == report["inputs_digest"]

    monkeypatch.setenv("MTC_SEED", "three")
    status, _ = run(capsys, "simulate", "--random", "20")
    assert status == EXIT_ERROR


def test_solve_weights(capsys):
    status, report = run(capsys, "solve-weights")
    assert status == EXIT_PASS
    payload = report["payload"]
    assert payload["degree_two"] == {"+0": 0, "+1": -1, "+2": -2, "+3": -3}
    assert payload["degree_two_is_printed_negated"] is True
    assert payload["weights"]["4"]["+2"] == 1
    assert set(payload["weights"]["8"].values()) == {0}

    _, report = run(capsys, "solve-weights", "--n2", "1")
    assert report["payload"]["degree_two"] == {"+0": 1, "+1": 0, "+2": -1, "+3": -2}

    status, _ = run(capsys, "solve-weights", "--extra-relation", "+1:2=5")
    assert status == EXIT_ERROR


def test_reports_are_byte_identical(capsys):
    main(["simulate", "--random", "5", "--seed", "11"])
    first = capsys.readouterr().out
    main(["simulate", "--random", "5", "--seed", "11"])
    assert capsys.readouterr().out == first


def test_digest_ignores_key_order():
    assert digest({"a": 1, "b": [1, 2]}) == digest({"b": [1, 2], "a": 1})
    assert digest({"a": 1}) != digest({"a": 2})
