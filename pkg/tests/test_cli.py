import json
import subprocess
import sys
from pathlib import Path

import pytest

from latgal.cli import main

from oracles import GOLDEN_TABLE, GOLDEN_ORDER

FIX = Path(__file__).resolve().parent.parent / "fixtures"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture(autouse=True)
def no_color(monkeypatch):
    monkeypatch.setenv("LATGAL_COLOR", "0")


class TestLattice:
    def test_validate(self, capsys):
        code, out, _ = run(capsys, "lattice", "validate", FIX / "l6.json")
        assert code == 0 and out == "OK\n"

    def test_dot_has_seven_edges(self, capsys):
        code, out, _ = run(capsys, "lattice", "dot", FIX / "l6.json")
        assert code == 0
        assert out.count(" -> ") == 7

    def test_show_json(self, capsys):
        code, out, _ = run(capsys, "lattice", "show", FIX / "l6.json", "--format", "json")
        data = json.loads(out)
        assert data["bottom"] == "0" and data["top"] == "1"
        assert data["join"][3][4] == "d"  # c ∨ d

    def test_malformed_json(self, capsys, tmp_path):
        p = tmp_path / "bad.json"
        p.write_text("{not json")
        code, _, err = run(capsys, "lattice", "validate", p)
        assert code == 2
        assert json.loads(err)["error"] == "UsageError"

    def test_missing_file(self, capsys, tmp_path):
        code, _, _ = run(capsys, "lattice", "validate", tmp_path / "nope.json")
        assert code == 2

    def test_not_a_lattice(self, capsys, tmp_path):
        p = tmp_path / "v.json"
        p.write_text(json.dumps({"elements": ["0", "x", "y"], "covers": [["0", "x"], ["0", "y"]]}))
        code, _, err = run(capsys, "lattice", "validate", p)
        assert code == 1
        assert json.loads(err)["error"] == "NoBounds"

    def test_bad_subcommand(self, capsys):
        code, _, _ = run(capsys, "lattice", "frobnicate", FIX / "l6.json")
        assert code == 2


class TestAgg:
    def test_eval_worked_value(self, capsys):
        code, out, _ = run(capsys, "agg", "eval", FIX / "example1.json", "c", "d")
        assert code == 0 and out == "b\n"

    def test_table_is_golden(self, capsys):
        code, out, _ = run(capsys, "agg", "table", FIX / "example1.json")
        assert code == 0
        lines = out.splitlines()
        assert lines[0] == "x\\y," + ",".join(GOLDEN_ORDER)
        for line, x in zip(lines[1:], GOLDEN_ORDER):
            assert line == ",".join([x, *GOLDEN_TABLE[x]])

    def test_slot_two_only_fails_boundary(self, capsys):
        code, out, err = run(capsys, "agg", "build", FIX / "example1_slot2_only.json")
        assert code == 1 and out == ""
        e = json.loads(err)
        assert e["error"] == "BoundaryViolation" and e["witness"] == "b"

    def test_eval_arity(self, capsys):
        code, _, err = run(capsys, "agg", "eval", FIX / "example1.json", "c")
        assert code == 1
        assert json.loads(err)["error"] == "ArityMismatch"

    def test_eval_unknown_label(self, capsys):
        code, _, _ = run(capsys, "agg", "eval", FIX / "example1.json", "c", "zz")
        assert code == 2

    def test_build_and_decompose(self, capsys):
        code, out, _ = run(capsys, "agg", "build", FIX / "example1.json")
        built = json.loads(out)
        assert code == 0 and built["boundary"] == "1" and built["arity"] == 2
        code, out, _ = run(capsys, "agg", "decompose", FIX / "example1.json")
        assert json.loads(out) == built["components"]

    def test_subdirect(self, capsys):
        code, out, _ = run(capsys, "agg", "subdirect", FIX / "example1.json", "--irreducibles", "a,b,c")
        assert code == 0
        data = json.loads(out)
        assert data["embedding"] == {"0": "000", "a": "100", "b": "110", "c": "001", "d": "101", "1": "111"}
        assert sum(len(r) for m in data["matrices"] for r in m) == 18

    def test_size_limit_flag(self, capsys):
        code, _, err = run(capsys, "agg", "table", FIX / "example1.json", "--max-elements", "10")
        assert code == 1
        assert json.loads(err)["error"] == "SizeLimit"

    def test_out_file(self, capsys, tmp_path):
        dest = tmp_path / "t.csv"
        code, out, _ = run(capsys, "agg", "table", FIX / "example1.json", "--out", dest)
        assert code == 0 and out == ""
        assert dest.read_text().startswith("x\\y,0,a")

    def test_table_format_has_no_ansi_when_disabled(self, capsys):
        code, out, _ = run(capsys, "agg", "table", FIX / "example1.json", "--format", "table")
        assert code == 0 and "\x1b[" not in out


class TestFca:
    def test_one_by_one_monotone(self, capsys):
        code, out, _ = run(capsys, "fca", "concepts", FIX / "crisp_1x1.csv", "--family", FIX / "monotone_family.json")
        assert code == 0
        assert len(json.loads(out)) == 2

    def test_lattice_nodes_equal_concepts(self, capsys):
        args = (FIX / "ratings.csv", "--family", FIX / "godel3.json")
        _, out, _ = run(capsys, "fca", "concepts", *args)
        n = len(json.loads(out))
        code, dot, _ = run(capsys, "fca", "lattice", *args)
        assert code == 0
        assert sum(1 for line in dot.splitlines() if "[label=" in line) == n

    def test_crisp(self, capsys):
        code, out, _ = run(capsys, "fca", "crisp", FIX / "crisp_sample.csv")
        assert code == 0
        assert {"objects": [], "attributes": ["a1", "a2", "a3", "a4"]} in json.loads(out)

    def test_crisp_non_binary(self, capsys):
        code, _, err = run(capsys, "fca", "crisp", FIX / "ratings.csv")
        assert code == 1
        assert json.loads(err)["error"] == "NotBinary"

    def test_unmapped_token(self, capsys):
        code, _, err = run(capsys, "fca", "concepts", FIX / "ratings.csv", "--family", FIX / "monotone_family.json")
        assert code == 1
        assert json.loads(err)["error"] == "UnmappedToken"

    def test_family_required(self, capsys):
        code, _, _ = run(capsys, "fca", "concepts", FIX / "ratings.csv")
        assert code == 2

    def test_ragged_csv(self, capsys, tmp_path):
        p = tmp_path / "r.csv"
        p.write_text(",a,b\nx,1\n")
        code, _, _ = run(capsys, "fca", "crisp", p)
        assert code == 2


@pytest.mark.parametrize("argv", [
    ("lattice", "show", "l6.json"),
    ("lattice", "dot", "l6.json"),
    ("agg", "table", "example1.json"),
    ("agg", "subdirect", "example1.json"),
    ("fca", "concepts", "ratings.csv", "--family", "godel3.json"),
    ("fca", "lattice", "ratings.csv", "--family", "godel3.json"),
    ("fca", "crisp", "crisp_sample.csv"),
])
def test_byte_identical_reruns(capsys, argv):
    argv = [str(FIX / a) if a.endswith((".json", ".csv")) else a for a in argv]
    first = run(capsys, *argv)
    second = run(capsys, *argv)
    assert first[0] == 0
    assert first == second


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "latgal", "agg", "eval", str(FIX / "example1.json"), "c", "d"],
                          capture_output=True, text=True, env={"LATGAL_COLOR": "0", "PATH": ""})
    assert proc.returncode == 0 and proc.stdout == "b\n"
