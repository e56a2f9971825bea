from __future__ import annotations

import csv
import io
import json
import subprocess
import sys

import pytest

from revszeged.cli import (
    EXIT_ERROR,
    EXIT_FAILED,
    EXIT_OK,
    parse_search_report,
    parse_transform_report,
    parse_verification_report,
    run,
)
from revszeged.enumerator import minimize_index
from revszeged.graph_core import parse_graph6, to_edge_list


def call(*argv):
    out = io.StringIO()
    code = run(list(argv), out)
    return code, out.getvalue()


def call_json(*argv):
    code, text = call(*argv)
    return code, json.loads(text)


# ------------------------------------------------------------------ index


def test_index_graph6():
    code, data = call_json("index", "--graph6", "Bw")
    assert code == EXIT_OK
    assert data["indices"]["Sz_e_star"] == {"exact": "27/4", "decimal": 6.75}
    assert data["n"] == data["m"] == 3


def test_index_edge_list_file_and_stdin(tmp_path, monkeypatch):
    g = parse_graph6("Cr")
    f = tmp_path / "g.txt"
    f.write_text(to_edge_list(g))
    code, a = call_json("index", "--edge-list", str(f))
    assert code == EXIT_OK
    monkeypatch.setattr(sys, "stdin", io.StringIO(to_edge_list(g)))
    code, b = call_json("index", "--edge-list", "-")
    assert code == EXIT_OK and a == b


def test_index_text_and_csv():
    code, text = call("index", "--family", "cycle n=4", "--format", "text")
    assert code == EXIT_OK
    assert any(line.split()[:2] == ["Sz_e_star", "64/4"] for line in text.splitlines())
    code, text = call("index", "--family", "cycle n=4", "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(text)))
    assert {r["index"]: r["exact"] for r in rows}["W"] == "32/4"


# ------------------------------------------------------------------ family


def test_family_text():
    code, text = call("family", "extremal n=16 d=14", "--format", "text")
    assert code == EXIT_OK
    lines = text.strip().splitlines()
    assert lines[1] == "order=16 diameter=14 girth=3"
    assert parse_graph6(lines[0]).n == 16


def test_family_tree_has_no_girth():
    code, data = call_json("family", "path n=5")
    assert code == EXIT_OK and data["girth"] is None and data["diameter"] == 4


# ---------------------------------------------------------------- errors


@pytest.mark.parametrize(
    "argv",
    [
        ["index"],
        ["index", "--graph6", "Bw", "--family", "cycle n=3"],
        ["index", "--graph6", "B"],
        ["family", "hexagon n=6"],
        ["search", "--n", "22", "--d", "5"],
        ["search", "--n", "9", "--d", "4", "--limit-n", "8"],
        ["verify", "--theorem1", "--n", "12"],
        ["verify"],
        ["transform", "--graph6", "Bw"],
        ["transform", "--pair", "c3_broom_vs_g4_11", "--param", "n=12", "--param", "d=6"],
        ["transform", "--pair", "c3_broom_vs_g4_11", "--param", "oops"],
        ["frobnicate"],
    ],
)
def test_errors_exit_two_with_error_object(argv):
    code, text = call(*argv)
    assert code == EXIT_ERROR
    obj = json.loads(text)
    assert set(obj) == {"error", "message"} and obj["message"]


def test_missing_edge_list_file(tmp_path):
    code, text = call("index", "--edge-list", str(tmp_path / "absent.txt"))
    assert code == EXIT_ERROR
    assert json.loads(text)["error"] == "FileNotFoundError"


# -------------------------------------------------------------- transform


def test_transform_rewrite():
    code, data = call_json("transform", "--family", "cycle n=3", "--rewrite", "star_collapse", "--param", "k=1")
    assert code == EXIT_OK
    assert data["agrees"] is True and data["actual_delta"]["exact"] == "0/4"


def test_transform_pair_round_trip():
    code, text = call("transform", "--pair", "c3_broom_vs_g4_11", "--param", "n=16", "--param", "d=6")
    assert code == EXIT_OK
    rep = parse_transform_report(text)
    assert rep.actual_delta.encode() == "13/4"
    assert json.loads(text) == rep.to_dict()


def test_transform_pair_disagreement_exits_one():
    code, text = call("transform", "--pair", "g4_21_vs_c3_broom", "--param", "n=17", "--format", "text")
    assert code == EXIT_FAILED
    assert "actual 68/4 predicted 69/4 -> DISAGREES" in text


def test_transform_samples_are_seeded():
    argv = ("transform", "--pair", "c3_arm_transfer", "--samples", "5", "--seed", "3", "--format", "csv")
    a, b = call(*argv), call(*argv)
    assert a == b and a[0] == EXIT_OK
    assert len(list(csv.DictReader(io.StringIO(a[1])))) == 5


# ----------------------------------------------------------------- search


def test_search_json_round_trip_and_csv_parity():
    code, text = call("search", "--n", "9", "--d", "4")
    assert code == EXIT_OK
    rep = parse_search_report(text)
    assert rep.to_dict(timing=False) == json.loads(text)
    assert rep.to_dict(timing=False) == minimize_index(9, 4).to_dict(timing=False)
    code, csv_text = call("search", "--n", "9", "--d", "4", "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(csv_text)))
    data = json.loads(text)
    assert len(rows) == len(data["minimizers"])
    for row, m in zip(rows, data["minimizers"]):
        assert row["minimum"] == data["minimum"]
        assert float(row["minimum_decimal"]) == data["minimum_decimal"]
        assert row["graph6"] == m["graph6"]
        assert int(row["examined"]) == data["examined"]


def test_search_limit_override():
    code, _ = call("search", "--n", "9", "--d", "4", "--limit-n", "8", "--no-limit")
    assert code == EXIT_OK


def test_search_timing_flag():
    _, data = call_json("search", "--n", "7", "--d", "3", "--timing")
    assert data["elapsed"] >= 0


def test_output_file(tmp_path):
    out = tmp_path / "rep.json"
    code, text = call("search", "--n", "8", "--d", "3", "--output", str(out))
    assert code == EXIT_OK and text == ""
    assert parse_search_report(out.read_text()).n == 8


def test_workers_env_gives_identical_reports(monkeypatch):
    monkeypatch.setenv("REVSZEGED_WORKERS", "2")
    a = call("search", "--n", "10", "--d", "5")
    monkeypatch.setenv("REVSZEGED_WORKERS", "1")
    b = call("search", "--n", "10", "--d", "5")
    assert a == b


def test_checkpoint_flag(tmp_path):
    ck = tmp_path / "ck.jsonl"
    a = call("search", "--n", "9", "--d", "5", "--checkpoint", str(ck))
    assert ck.read_text().strip()
    b = call("search", "--n", "9", "--d", "5", "--checkpoint", str(ck))
    assert a == b


# ----------------------------------------------------------------- verify


def test_verify_small_order_reports_counterexamples():
    code, text = call("verify", "--theorem1", "--n", "12", "--allow-small")
    assert code == EXIT_FAILED
    data = json.loads(text)
    assert data["pass"] is False
    ds = {c["d"] for c in data["counterexamples"] if "graph6" in c}
    assert ds == {6, 7, 8}
    rep = parse_verification_report(text)
    assert [r.d for r in rep.failures] == [6, 7, 8]
    code, csv_text = call("verify", "--theorem1", "--n", "12", "--allow-small", "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(csv_text)))
    assert [r["d"] for r in rows] == [str(d) for d in range(3, 11)]


def test_verify_identities():
    code, data = call_json("verify", "--identities", "--suite", "closed_form", "--suite", "decomposition", "--max-n", "7")
    assert code == EXIT_OK
    assert [s["suite"] for s in data["suites"]] == ["closed_form", "decomposition"]
    assert data["pass"] is True


# ------------------------------------------------------------- identities


def test_identities_batch_and_single():
    code, data = call_json("identities", "--min-n", "5", "--max-n", "6")
    assert code == EXIT_OK
    assert data["checked"] == 5 + 13 and data["pass"]
    code, data = call_json("identities", "--graph6", "Bw")
    assert code == EXIT_OK and data["reports"][0]["consistent"]
    code, text = call("identities", "--max-n", "5", "--format", "text")
    assert text.strip() == "8 unicyclic graphs, all routes agree: yes"


def test_console_script():
    proc = subprocess.run(
        [sys.executable, "-m", "revszeged.cli", "index", "--graph6", "Bw"],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["indices"]["Sz_e_star"]["exact"] == "27/4"
