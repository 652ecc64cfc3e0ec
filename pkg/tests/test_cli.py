import json

import pytest

from meanking.cli import main
from meanking.designs import build_striations, save_table
from meanking.mub import build_mub, load_mub, mub_to_dict


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_king_verify(capsys):
    code, out, _ = run(capsys, "king", "verify", "--dim", "3")
    assert code == 0
    assert out.startswith("king: PASS")


def test_king_verify_json(capsys):
    code, out, _ = run(capsys, "king", "verify", "--dim", "5", "--format", "json")
    doc = json.loads(out)
    assert code == 0 and doc["pass"] is True and doc["schema"] == 1 and doc["d"] == 5


def test_mols_render_fig1(capsys):
    code, out, _ = run(capsys, "mols", "render", "--dim", "3")
    assert code == 0
    rows = [line.split()[-1] for line in out.splitlines()[1:10]]
    assert rows == ["0000", "0211", "0122", "1110", "1021", "1202", "2220", "2101", "2012"]
    assert "A=3" in out


def test_mols_render_json(capsys):
    code, out, _ = run(capsys, "mols", "render", "--dim", "2", "--format", "json")
    doc = json.loads(out)
    assert doc["strings"] == ["000", "011", "110", "101"]


def test_king_simulate_d6_refused(capsys):
    code, _, err = run(capsys, "king", "simulate", "--dim", "6")
    assert code == 2
    assert "M(6)=3" in err and "no maximal MUB/MOLS construction" in err


def test_composite_simulate(capsys):
    code, out, _ = run(capsys, "composite", "simulate", "--dims", "2,3", "--format", "json")
    doc = json.loads(out)
    assert code == 0
    assert doc["success_count"] == doc["trials"] == 10_000
    assert doc["details"]["success_rate"] == 1.0
    assert doc["details"]["not_mub"] is True
    assert doc["details"]["num_bases"] == 7


def test_usage_errors(capsys):
    assert run(capsys, "king", "verify")[0] == 2
    assert run(capsys, "bogus")[0] == 2
    assert run(capsys, "king", "simulate", "--dim", "3", "--trials", "0")[0] == 2
    assert run(capsys, "composite", "simulate")[0] == 2
    assert run(capsys, "mub", "build", "--dim", "12")[0] == 2


def test_mub_export_and_verify(tmp_path, capsys):
    path = tmp_path / "m.json"
    assert run(capsys, "mub", "export", "--dim", "4", "--out", str(path))[0] == 0
    assert load_mub(path) == build_mub(4)
    code, out, _ = run(capsys, "mub", "verify", "--in", str(path))
    assert code == 0 and "PASS" in out


def test_mub_verify_failing_document(tmp_path, capsys):
    doc = mub_to_dict(build_mub(3))
    doc["bases"][1] = doc["bases"][0]
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(doc))
    code, out, _ = run(capsys, "mub", "verify", "--in", str(path), "--format", "json")
    assert code == 1
    assert json.loads(out)["pass"] is False


def test_mub_build_writes_document(tmp_path, capsys):
    path = tmp_path / "m.json"
    assert run(capsys, "mub", "build", "--dim", "3", "--out", str(path))[0] == 0
    assert load_mub(path).report.passed


def test_mols_build_verify_roundtrip(tmp_path, capsys):
    path = tmp_path / "t.json"
    assert run(capsys, "mols", "build", "--dim", "5", "--out", str(path))[0] == 0
    for cmd in (("mols", "verify"), ("strings", "verify"), ("equiv", "check")):
        code, out, _ = run(capsys, *cmd, "--in", str(path))
        assert code == 0, out


def test_corrupted_table_exit_codes(tmp_path, capsys):
    path = tmp_path / "bad.json"
    save_table(build_striations(3).with_entry(5, 1, 0), path)
    assert run(capsys, "mols", "verify", "--in", str(path))[0] == 1
    assert run(capsys, "strings", "verify", "--in", str(path))[0] == 1
    code, out, _ = run(capsys, "equiv", "check", "--in", str(path), "--format", "json")
    doc = json.loads(out)
    assert code == 0 and doc["details"]["all_pass"] is False
    code, out, _ = run(capsys, "king", "verify", "--in", str(path), "--format", "json")
    doc = json.loads(out)
    assert code == 1 and doc["pass"] is False and doc["witness"]["check"] == "orthogonality"
    code, out, _ = run(capsys, "king", "simulate", "--in", str(path), "--format", "json")
    doc = json.loads(out)
    assert code == 1 and doc["analytic_success"] < 1


def test_king_with_mub_document(tmp_path, capsys):
    path = tmp_path / "m.json"
    run(capsys, "mub", "export", "--dim", "3", "--out", str(path))
    code, _, _ = run(capsys, "king", "verify", "--dim", "3", "--mub", str(path))
    assert code == 0


def test_search_max(tmp_path, capsys):
    path = tmp_path / "design.json"
    code, out, err = run(capsys, "search", "max", "--dim", "4", "--format", "json", "--out", str(path))
    doc = json.loads(out)
    assert code == 0 and doc["details"]["count"] == 5 and doc["details"]["proven"]
    saved = json.loads(path.read_text())
    assert saved["columns"] == 5 and len(saved["table"]) == 16
    code, out, err = run(capsys, "search", "max", "--dim", "6", "--budget", "5000", "--format", "json")
    doc = json.loads(out)
    assert code == 1
    assert doc["details"]["count"] == 3 and doc["details"]["proven"] is False
    assert doc["witness"]["nodes"] == 5001
    assert "d=6" in err


def test_simulate_json_deterministic(capsys):
    argv = ("king", "simulate", "--dim", "3", "--seed", "42", "--format", "json")
    first = run(capsys, *argv)[1]
    second = run(capsys, *argv)[1]
    assert first == second
    assert json.loads(first)["seed"] == 42


def test_exit_code_matches_report(capsys):
    for argv in (("king", "verify", "--dim", "2"), ("mub", "verify", "--dim", "8"),
                 ("composite", "simulate", "--dims", "3,2", "--trials", "100")):
        code, out, _ = run(capsys, *argv, "--format", "json")
        assert code == (0 if json.loads(out)["pass"] else 1)
