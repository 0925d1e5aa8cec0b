from __future__ import annotations

import csv
import io
import json

import pytest

from cutproject.cli import main
from cutproject.errors import InvalidField, InvalidScheme
from cutproject.gallery import build, default_entries
from cutproject.io import dumps_scheme, loads_scheme, scheme_hash


def run(capsys, monkeypatch, argv, stdin=None):
    if stdin is not None:
        monkeypatch.setattr("sys.stdin", io.StringIO(stdin))
    code = main(argv)
    return code, capsys.readouterr().out


def test_round_trip_byte_identical():
    for e in default_entries():
        text = dumps_scheme(e.scheme)
        again = loads_scheme(text)
        assert dumps_scheme(again) == text
        assert again.forms == e.scheme.forms
        assert scheme_hash(again) == scheme_hash(e.scheme)


@pytest.mark.parametrize("text,exc", [
    ("not json", InvalidScheme),
    ('{"k": 2, "d": 1, "forms": [[["1"]]]}', InvalidScheme),
    ('{"k": 2, "d": 1, "field": {}, "forms": [[["1"]]]}', InvalidField),
    ('{"k": 2, "d": 1, "field": {"minpoly": [1, 0, -5], "root_hint": "2.2"}, "forms": [[["x", "1"]]]}',
     InvalidScheme),
])
def test_malformed_files(text, exc):
    with pytest.raises(exc):
        loads_scheme(text)


def test_gallery_then_lr(capsys, monkeypatch):
    code, text = run(capsys, monkeypatch, ["gallery", "fibonacci"])
    assert code == 0
    code, out = run(capsys, monkeypatch, ["lr"], stdin=text)
    doc = json.loads(out)
    assert code == 0 and doc["command"] == "lr" and doc["result"]["overall"] == "LR_Proven"
    assert doc["scheme_hash"] == scheme_hash(loads_scheme(text))


def test_complexity_csv(capsys, monkeypatch):
    text = dumps_scheme(build("fibonacci").scheme)
    code, out = run(capsys, monkeypatch, ["complexity", "-", "--rmax", "5"], stdin=text)
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0
    assert [int(r["c_r"]) for r in rows] == [2 * r + 1 for r in range(1, 6)]


def test_gen_json_and_output_file(capsys, monkeypatch, tmp_path):
    path = tmp_path / "fib.json"
    path.write_text(dumps_scheme(build("fibonacci").scheme))
    out_file = tmp_path / "pts.json"
    code, _ = run(capsys, monkeypatch, ["--format", "json", "gen", str(path), "--radius", "3", "-o", str(out_file)])
    doc = json.loads(out_file.read_text())
    assert code == 0 and len(doc["result"]) == 7
    code, out = run(capsys, monkeypatch, ["gen", str(path), "--radius", "2", "--embedded", "--format", "csv"])
    assert out.splitlines()[0] == "n_1,offset_1,x_1"


def test_validate_singular_shift_exit_code(capsys, monkeypatch):
    doc = json.loads(dumps_scheme(build("fibonacci").scheme))
    doc["shift"]["s2"] = [["0", "0"]]
    code, out = run(capsys, monkeypatch, ["validate"], stdin=json.dumps(doc))
    assert code == 1
    assert json.loads(out)["result"]["shift"]["status"] == "Singular"


def test_validate_penrose(capsys, monkeypatch):
    code, out = run(capsys, monkeypatch, ["validate"], stdin=dumps_scheme(build("penrose").scheme))
    res = json.loads(out)["result"]
    assert code == 0 and res["totally_irrational"] is False and res["relations"]


def test_error_envelope(capsys, monkeypatch):
    bad = '{"k": 2, "d": 2, "field": {"minpoly": [1, 0, -5], "root_hint": "2.2"}, "forms": []}'
    code, out = run(capsys, monkeypatch, ["lr"], stdin=bad)
    assert code == 1 and json.loads(out)["error"] == "InvalidDimensions"
    code, out = run(capsys, monkeypatch, ["gallery", "lemma_5_5"])
    assert code == 1 and json.loads(out)["error"] == "BadParams"


@pytest.mark.parametrize("argv", [
    ["repetitivity", "--rmax", "4"],
    ["pq", "--r", "1,2,3"],
    ["frequencies", "--r", "2", "--sample-radius", "300"],
    ["derivability"],
    ["permutations"],
])
def test_other_subcommands(capsys, monkeypatch, argv):
    text = dumps_scheme(build("ammann_beenker").scheme)
    code, out = run(capsys, monkeypatch, argv, stdin=text)
    assert code == 0 and out.strip()


def test_repetitivity_json_has_trend(capsys, monkeypatch):
    text = dumps_scheme(build("fibonacci").scheme)
    code, out = run(capsys, monkeypatch, ["repetitivity", "--rmax", "8", "--format", "json"], stdin=text)
    res = json.loads(out)["result"]
    assert len(res["rows"]) == 8 and res["trend"]["violated"] is False


def test_frequencies_sum_to_one(capsys, monkeypatch):
    text = dumps_scheme(build("fibonacci").scheme)
    code, out = run(capsys, monkeypatch, ["frequencies", "--r", "3"], stdin=text)
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 7
    assert abs(sum(float(r["frequency"]) for r in rows) - 1) < 1e-12
