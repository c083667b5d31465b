from __future__ import annotations

import csv
import io
import json

import pytest

from expressible.cli import (
    EXIT_BUDGET,
    EXIT_INDETERMINATE,
    EXIT_OK,
    EXIT_VALIDATION,
    grid_cells,
    main,
    parse_range,
)
from expressible.serialization import family_from_dict, family_to_dict
from expressible.sequences import GrowthFunction, thm1_family, thm2_family, thm3_family


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def csv_rows(text):
    body = [line for line in text.splitlines() if not line.startswith("#")]
    return list(csv.DictReader(io.StringIO("\n".join(body))))


def test_parse_range():
    assert parse_range("1..3") == range(1, 4)
    assert parse_range("7") == range(7, 8)
    with pytest.raises(ValueError):
        parse_range("a..b")


@pytest.mark.parametrize(
    "family",
    [
        thm1_family(9, 2),
        thm2_family(2, "2/5", "1/2", g=GrowthFunction("poly", (1, 2))),
        thm3_family(3, "2/5", "2/5", "1/2", f=GrowthFunction("table", (1, 2, 3))),
    ],
)
def test_family_round_trip(family):
    d = family_to_dict(family)
    assert family_from_dict(json.loads(json.dumps(d))) == family


def test_family_from_dict_rejects_unknown_fields():
    d = family_to_dict(thm1_family(9, 2))
    d["sequence"]["colour"] = "red"
    with pytest.raises(ValueError):
        family_from_dict(d)


def test_dimension_csv(capsys):
    code, out, _ = run(capsys, "dimension", "--family", "thm1", "--b", "9", "--K", "2", "--n", "1..50", "--format", "csv")
    assert code == EXIT_OK
    rows = csv_rows(out)
    assert [int(r["n"]) for r in rows] == list(range(1, 51))
    assert all(r["ratio_error"] for r in rows)
    assert "\r" not in out
    assert out.startswith("# K: 2\n")


def test_identity_rows(capsys):
    code, out, _ = run(capsys, "identity", "--a1", "2", "--n", "8", "--format", "csv")
    rows = csv_rows(out)
    assert code == EXIT_OK
    assert [r["residual"] for r in rows] == ["0"] * 9
    assert rows[4]["partial_sum"] == "1805/1806"


def test_output_is_deterministic(capsys, tmp_path):
    args = ["gaps", "--family", "thm2", "--N", "2", "--s", "2/5", "--r", "2/5", "--n", "3..6"]
    _, first, _ = run(capsys, *args)
    _, second, _ = run(capsys, *args)
    assert first == second
    path = tmp_path / "out.json"
    assert main(args + ["--output", str(path)]) == EXIT_OK
    written = json.loads(path.read_text())
    doc = json.loads(first)
    assert written["rows"] == doc["rows"]
    assert doc["config"]["command"] == "gaps"
    assert doc["config"]["resolved_spec"]["theorem"] == "thm2"


def test_config_file_and_override(capsys, tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"family": "thm1", "b": "9", "K": 2, "n": "1..3", "format": "csv"}))
    code, out, _ = run(capsys, "dimension", "--config", str(cfg), "--n", "5")
    assert code == EXIT_OK
    assert [r["n"] for r in csv_rows(out)] == ["5"]


def test_config_spec_object(capsys, tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"spec": family_to_dict(thm1_family(9, 2)), "n": "2"}))
    code, out, _ = run(capsys, "construct", "--config", str(cfg))
    assert code == EXIT_OK
    assert len(json.loads(out)["rows"]) == 4


@pytest.mark.parametrize(
    "content",
    ['{"family": "thm1", "bogus": 1}', "not json", '{"family": "thm1", "b": 9, "K": 3}'],
)
def test_validation_failures(capsys, tmp_path, content):
    cfg = tmp_path / "bad.json"
    cfg.write_text(content)
    code, out, err = run(capsys, "dimension", "--config", str(cfg))
    assert code == EXIT_VALIDATION
    assert out == ""
    assert json.loads(err.splitlines()[-1])["error"]["exit_code"] == EXIT_VALIDATION


def test_budget_exit(capsys):
    code, out, err = run(capsys, "construct", "--family", "thm1", "--b", "9", "--K", "2", "--n", "20", "--budget", "100")
    assert code == EXIT_BUDGET and out == ""
    assert "BudgetExceededError" in err


def test_indeterminate_exit(capsys, monkeypatch):
    from expressible import cli

    monkeypatch.setitem(cli.HANDLERS, "gaps", lambda cfg: cli.Result(["level"], [[1]], indeterminate=True))
    code, out, _ = run(capsys, "gaps", "--family", "thm1", "--b", "9", "--K", "2")
    assert code == EXIT_INDETERMINATE
    assert json.loads(out)["rows"] == [[1]]


def test_wide_decode_reports_status(capsys):
    # x = 1/10 is not a point of the set
    code, out, _ = run(capsys, "decode", "--family", "thm1", "--b", "9", "--K", "2", "--x", "1/10", "--depth", "3")
    assert code == EXIT_OK
    assert json.loads(out)["summary"]["status"] == "outside"


def test_decode_word(capsys):
    code, out, _ = run(capsys, "decode", "--family", "thm1", "--b", "9", "--K", "2", "--word", "2,1,1,2")
    doc = json.loads(out)
    assert code == EXIT_OK
    assert doc["summary"]["status"] == "unique"
    assert [r[1] for r in doc["rows"]] == [2, 1, 1, 2]


def test_growth_and_probe(capsys):
    code, out, _ = run(capsys, "growth", "--a1", "2", "--n", "8", "--precision", "20", "--format", "csv")
    rows = csv_rows(out)
    assert code == EXIT_OK and rows[-1]["value"].startswith("1.26408")
    code, out, _ = run(capsys, "probe", "--x", "1/3", "--q-max", "100")
    doc = json.loads(out)
    assert doc["summary"]["label"] == "exploratory"
    assert doc["rows"][-1] == ["1/3", "", "", "true"]


def test_find_n0(capsys):
    code, out, _ = run(capsys, "find-n0", "--family", "thm2", "--N", "2", "--s", "2/5", "--r", "2/5")
    assert code == EXIT_OK
    assert json.loads(out)["summary"]["n0"] == 5


def test_boxcount(capsys):
    code, out, _ = run(capsys, "boxcount", "--family", "thm1", "--b", "9", "--K", "2", "--n", "4..10")
    summary = json.loads(out)["summary"]
    assert code == EXIT_OK
    assert abs(summary["slope"] - 0.315465) < 0.02


def test_sweep_thm1_limits_increase_to_half(capsys):
    cells = {"cells": [{"K": k, "b": k * k + 1} for k in (4, 2, 3, 6)]}
    code, out, _ = run(capsys, "sweep", "--family", "thm1", "--grid", json.dumps(cells), "--format", "csv", "--precision", "20")
    rows = csv_rows(out)
    assert code == EXIT_OK
    assert [r["K"] for r in rows] == ["2", "3", "4", "6"]
    limits = [float(r["limit"]) for r in rows]
    assert limits == sorted(limits) and limits[-1] < 0.5


def test_sweep_thm2_axes_and_cell_errors(capsys):
    grid = {"axes": {"s": ["1/10", "3/10", "2/5", "9/10"]}}
    code, out, _ = run(
        capsys, "sweep", "--family", "thm2", "--N", "2", "--r", "2/5", "--grid", json.dumps(grid),
        "--n-ref", "8", "--format", "csv",
    )
    rows = csv_rows(out)
    assert code == EXIT_OK
    assert [r["limit_exact"] for r in rows[:3]] == ["1/19", "3/17", "1/4"]
    assert rows[3]["error"].startswith("ConfigError")


def test_empty_sweep(capsys):
    code, out, _ = run(capsys, "sweep", "--family", "thm1", "--format", "csv")
    assert code == EXIT_OK
    assert csv_rows(out) == []
    assert [l for l in out.splitlines() if not l.startswith("#")][0].startswith("limit_exact")


def test_grid_cells_order():
    cells = grid_cells({"axes": {"b": [10, 9], "K": [3, 2]}})
    assert cells == [{"K": 2, "b": 9}, {"K": 2, "b": 10}, {"K": 3, "b": 9}, {"K": 3, "b": 10}]
