"""End-to-end command-line tests via ``momaps.cli.main``."""

import json
import os

import pytest

from momaps.cli import main
from momaps.reduction import scheme_from_json_dict
from momaps.enumerate import is_reduced_scheme

CORPUS = os.path.join(os.path.dirname(__file__), "..", "corpus")


def corpus(name):
    return os.path.join(CORPUS, name)


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_analyze_cycle(capsys):
    code, out, _ = run(capsys, "analyze", corpus("cycle.json"))
    assert code == 0
    doc = json.loads(out)
    assert doc["vertices"] == 0
    assert doc["two_delta"] == 0
    assert doc["planar"] is True
    assert doc["knot_components"] == 1
    assert doc["melon_free"] is True


def test_analyze_infinity(capsys):
    code, out, _ = run(capsys, "analyze", corpus("infinity_cw.json"))
    assert code == 0
    doc = json.loads(out)
    assert doc["vertices"] == 1
    assert doc["two_delta"] == 1
    assert doc["planar"] is True


def test_analyze_two_knots(capsys):
    code, out, _ = run(capsys, "analyze",
                       corpus("five_vertex_two_knots.json"))
    assert code == 0
    doc = json.loads(out)
    assert doc["vertices"] == 5
    assert doc["two_delta"] == 3
    assert doc["planar"] is True
    assert doc["knot_components"] == 2


def test_analyze_missing_file(capsys):
    code, _, err = run(capsys, "analyze", corpus("no_such_file.json"))
    assert code == 2
    assert "error" in err


def test_bad_usage(capsys):
    assert run(capsys, "catalog")[0] == 2          # --two-delta required
    assert run(capsys, "no-such-command")[0] == 2


def _csv_rows(text):
    lines = text.strip().split("\n")
    head = lines[0].split(",")
    return [dict(zip(head, ln.split(","))) for ln in lines[1:]]


def test_enumerate_csv(capsys):
    code, out, _ = run(capsys, "enumerate", "--max-vertices", "3")
    assert code == 0
    rows = _csv_rows(out)
    totals = {}
    for r in rows:
        v = int(r["two_n"])
        totals[v] = totals.get(v, 0) + int(r["count"])
    assert totals == {0: 1, 1: 2, 2: 10, 3: 74}


def test_enumerate_planar(capsys):
    code, out, _ = run(capsys, "enumerate", "--max-vertices", "3",
                       "--planar")
    assert code == 0
    totals = {}
    for r in _csv_rows(out):
        v = int(r["two_n"])
        totals[v] = totals.get(v, 0) + int(r["count"])
    assert totals == {0: 1, 1: 2, 2: 9, 3: 54}


def test_enumerate_json_out(capsys, tmp_path):
    path = tmp_path / "table.json"
    code, _, _ = run(capsys, "enumerate", "--max-vertices", "2",
                     "--format", "json", "--out", str(path))
    assert code == 0
    doc = json.loads(path.read_text())
    rows = {(r["two_n"], r["two_delta"]): r["count"] for r in doc["rows"]}
    assert rows[(1, 1)] == 2
    assert rows[(0, 0)] == 1


def test_catalog_json(capsys):
    code, out, err = run(capsys, "catalog", "--two-delta", "1",
                         "--max-vertices", "9", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert doc["size"] == 18
    assert doc["stabilized"] is True
    assert doc["certified_order"] == 9
    assert len(doc["schemes"]) == 18
    assert "18 schemes" in err


def test_catalog_csv(capsys):
    code, out, _ = run(capsys, "catalog", "--two-delta", "0")
    assert code == 0
    rows = _csv_rows(out)
    assert len(rows) == 1
    assert rows[0]["two_p"] == "0"


def test_series_melonic(capsys):
    code, out, _ = run(capsys, "series", "--two-delta", "0",
                       "--order", "8")
    assert code == 0
    coef = {int(r["two_n"]): int(r["coefficient"])
            for r in _csv_rows(out)}
    assert [coef[k] for k in (0, 2, 4, 6, 8)] == [1, 1, 4, 22, 140]
    assert coef[1] == coef[3] == 0


def test_series_degree_half_json(capsys):
    code, out, err = run(capsys, "series", "--two-delta", "1",
                         "--order", "9", "--max-vertices", "9",
                         "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert doc["coefficients"][1] == 2
    assert doc["coefficients"][2] == 0
    assert "stabilized" in doc["note"]


def test_series_asymptotics(capsys):
    code, out, _ = run(capsys, "series", "--two-delta", "1",
                       "--order", "60", "--max-vertices", "9",
                       "--format", "json", "--asymptotics")
    assert code == 0
    doc = json.loads(out)
    asym = doc["asymptotics"]
    assert asym["predicted_rate"] == pytest.approx(256 / 27)
    assert asym["fitted_rate"] == pytest.approx(256 / 27, rel=0.05)


def test_dominant(capsys, tmp_path):
    path = tmp_path / "dom.jsonl"
    code, _, err = run(capsys, "dominant", "--two-delta", "2",
                       "--out", str(path))
    assert code == 0
    assert "16 dominant schemes" in err
    lines = path.read_text().strip().split("\n")
    assert len(lines) == 16
    for ln in lines:
        s = scheme_from_json_dict(json.loads(ln))
        assert is_reduced_scheme(s, 2)


def test_verify_single_check(capsys):
    code, out, _ = run(capsys, "verify", "--shallow",
                       "--checks", "melonic-theorem")
    assert code == 0
    assert "[PASS] melonic-theorem" in out
    assert "1/1 checks passed" in out
