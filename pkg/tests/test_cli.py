import io
import json

import pytest

from fewnomials.cli import main

WORKED = {
    "f": [{"a": "1", "alpha": "1", "beta": "0"}, {"a": "-1", "alpha": "0", "beta": "1"}],
    "g": [
        {"b": "-1", "gamma": "0", "delta": "0"},
        {"b": "1", "gamma": "1", "delta": "0"},
        {"b": "1", "gamma": "0", "delta": "1"},
    ],
}


def run(*argv):
    out = io.StringIO()
    status = main(list(argv), stdout=out)
    return status, out.getvalue()


def test_bounds_table_csv():
    status, text = run("bounds", "--t", "3,4,5,6,10", "--format", "csv")
    assert status == 0
    rows = [line.split(",") for line in text.strip().splitlines()[1:]]
    assert [tuple(map(int, r[1:])) for r in rows] == [
        (6, 33, 6, 5),
        (14, 62, 14, 11),
        (30, 108, 28, 22),
        (62, 174, 50, 40),
        (1022, 716, 258, 222),
    ]


def test_bounds_json():
    status, text = run("bounds", "--t", "3")
    assert status == 0
    assert json.loads(text) == [{"t": 3, "lrw": 6, "kpt": 33, "mr": 6, "new": 5}]


def test_count_worked_example(tmp_path):
    path = tmp_path / "system.json"
    path.write_text(json.dumps(WORKED))
    status, text = run("count", str(path))
    assert status == 0
    result = json.loads(text)
    assert (result["count"], result["rigor"], result["bound_holds"]) == (1, "certified", True)


def test_count_inline_and_text():
    status, text = run("count", json.dumps(WORKED), "--format", "text")
    assert status == 0 and "count=1" in text


def test_count_fewnomial():
    F = {"terms": [{"c": "2", "k": "1", "l": "0"}, {"c": "-1", "k": "0", "l": "0"}]}
    status, text = run("count", json.dumps(F))
    assert status == 0 and json.loads(text)["count"] == 1


def test_count_without_positive_solutions():
    system = json.loads(json.dumps(WORKED))
    system["g"][0]["b"] = "1"
    status, text = run("count", json.dumps(system))
    assert status == 0 and json.loads(text)["count"] == 0


def test_reduce():
    status, text = run("reduce", json.dumps(WORKED))
    assert status == 0
    data = json.loads(text)
    assert not data["collinear"] and len(data["F"]["terms"]) == 2


def test_wronskian_audit():
    F = {"terms": [{"c": "1", "k": "0", "l": "0"}, {"c": "-3", "k": "1", "l": "0"}, {"c": "2", "k": "2", "l": "1"}]}
    status, text = run("wronskian-audit", json.dumps(F))
    assert status == 0
    rows = json.loads(text)
    assert [r["j"] for r in rows] == [1, 2] and all(r["holds"] for r in rows)


def test_dessin_logistic(tmp_path):
    svg = tmp_path / "d.svg"
    status, text = run("dessin", '{"a": 1, "b": 1, "m": 1, "P": ["4"], "Q": ["1"]}', "--out", str(svg))
    assert status == 0
    report = json.loads(text)
    assert report["proposition"]["r_count"] == 1
    assert report["invariants"]["ok"]
    assert svg.read_text().startswith("<svg")


def test_dessin_dot_for_general_map(tmp_path):
    dot = tmp_path / "d.dot"
    status, _ = run("dessin", '{"N": ["0", "0", "1"], "D": ["1"]}', "--drawing", "dot", "--out", str(dot))
    assert status == 0
    assert dot.read_text().startswith("graph dessin {")


def test_verify_and_search(tmp_path):
    out = tmp_path / "v.jsonl"
    status, text = run("verify", "--mode", "theorem2", "--count", "5", "--seed", "4", "--out", str(out))
    assert status == 0
    assert json.loads(text)["total"] == 5
    assert len(out.read_text().splitlines()) == 5
    status, text = run("search", "--budget", "10", "--format", "text")
    assert status == 0 and "count=" in text


def test_verify_inconclusive_exit_code(monkeypatch):
    import fewnomials.harness as h
    from fewnomials.errors import InconclusiveBox

    def undecided(cfg, rec, seed):
        raise InconclusiveBox(1, (0, 1), "test")

    monkeypatch.setitem(h._VERIFIERS, "theorem1", undecided)
    status, _ = run("verify", "--count", "2")
    assert status == 3


def test_verify_violation_exit_code(monkeypatch, tmp_path):
    import fewnomials.harness as h

    def broken(cfg, rec, seed):
        rec.verdicts["count"] = False

    monkeypatch.setitem(h._VERIFIERS, "theorem1", broken)
    status, _ = run("verify", "--count", "2", "--reproducer", str(tmp_path / "r.json"))
    assert status == 1


@pytest.mark.parametrize(
    "argv",
    [
        ["bounds", "--t", "x"],
        ["bounds", "--t", "2"],
        ["count", "{not json"],
        ["count", "/no/such/file.json"],
        ["count", '{"f": []}'],
        ["dessin", '{"a": 1}', "--interval", "1,0"],
        ["search", "--budget", "0"],
        ["verify", "--count", "0"],
        ["frobnicate"],
        [],
    ],
)
def test_usage_errors(argv):
    assert run(*argv)[0] == 2


def test_precision_from_environment(monkeypatch):
    monkeypatch.setenv("FEWNOMIALS_PRECISION", "96")
    assert run("count", json.dumps(WORKED))[0] == 0
    # a value below the floor is reported as a usage error, so it was read
    monkeypatch.setenv("FEWNOMIALS_PRECISION", "8")
    assert run("count", json.dumps(WORKED))[0] == 2
