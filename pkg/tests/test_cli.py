import json
import subprocess
import sys

import pytest

from newton_strata import cli


def run(argv, capsys):
    code = cli.main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_bgmu_table(capsys):
    code, out, _ = run(["bgmu", "--group", "GL3", "--mu", "1,0,0"], capsys)
    lines = out.splitlines()
    assert code == 0 and len(lines) == 4
    assert [line.split("\t")[-1] for line in lines[1:]] == ["0", "1", "2"]


def test_identity(capsys):
    code, out, _ = run(["identity", "--group", "GL2", "--mu", "1,0"], capsys)
    doc = json.loads(out)
    assert code == 0
    assert doc["full"]["sum"] == "1" and doc["full"]["ok"]
    assert doc["irr"]["sum"] == "1" and doc["irr"]["ok"]


def test_oracle(capsys):
    code, out, _ = run(["oracle", "--group", "GL2", "--mu", "1,0", "--q", "3", "--M", "2"], capsys)
    rows = [line.split("\t") for line in out.splitlines()[1:3]]
    assert code == 0 and [(r[2], r[3]) for r in rows] == [("6", "6"), ("3", "3")]


def test_oracle_json(capsys):
    code, out, _ = run(["oracle", "--group", "GL2", "--mu", "1,0", "--q", "3", "--M", "2", "--format", "json"], capsys)
    doc = json.loads(out)
    assert code == 0 and doc["ok"] and [s["observed"] for s in doc["strata"]] == [6, 3]


@pytest.mark.parametrize(
    "argv",
    [
        ["bgmu", "--group", "GL3", "--mu", "1,0"],
        ["bgmu", "--group", "GL3", "--mu", "0,0,1"],
        ["bgmu", "--group", "E7", "--mu", "1"],
        ["bgmu", "--group", "GL2", "--mu", "a,b"],
        ["oracle", "--group", "GL2", "--mu", "1,0", "--q", "4", "--M", "2"],
        ["oracle", "--group", "GL2", "--mu", "1,0", "--q", "3", "--M", "0"],
        ["oracle", "--group", "SL2", "--mu", "1", "--q", "3", "--M", "1"],
        ["oracle", "--group", "GL3", "--mu", "2,0,0", "--q", "2", "--M", "1"],
    ],
)
def test_invalid_config(argv, capsys):
    code, out, err = run(argv, capsys)
    assert code == 2 and out == ""
    assert json.loads(err)["status"] == 2


def test_argparse_errors_exit_two():
    with pytest.raises(SystemExit) as exc:
        cli.main(["bgmu", "--group", "GL2"])
    assert exc.value.code == 2


def test_failed_check_exits_one(capsys, monkeypatch):
    monkeypatch.setitem(cli.HANDLERS, "bgmu", lambda datum, cfg: ("report\n", False))
    code, out, err = run(["bgmu", "--group", "GL2", "--mu", "1,0"], capsys)
    assert code == 1 and out == "report\n" and json.loads(err)["status"] == 1


@pytest.mark.parametrize(
    "argv",
    [
        ["shapes", "--group", "2A3", "--mu", "1,1,1"],
        ["hasse", "--group", "GL3", "--mu", "2,1,0"],
        ["hasse", "--group", "B2", "--mu", "2,2", "--format", "json"],
        ["cross", "--group", "3D4"],
        ["cross", "--group", "GL3", "--format", "json"],
        ["bgmu", "--group", "U3", "--mu", "1,0,0", "--format", "json"],
    ],
)
def test_other_commands_deterministic(argv, capsys):
    first = run(argv, capsys)
    second = run(argv, capsys)
    assert first[0] == 0 and first == second and first[1]


def test_hasse_dot(capsys):
    code, out, _ = run(["hasse", "--group", "GL2", "--mu", "1,0"], capsys)
    assert code == 0 and out.startswith("digraph") and "1/2" in out


def test_cross_depth(capsys):
    code, out, _ = run(["cross", "--group", "GL3"], capsys)
    assert code == 0 and out.splitlines()[-1] == "nilpotence_depth\t2"


def test_output_file(tmp_path, capsys):
    target = tmp_path / "table.tsv"
    code, out, _ = run(["bgmu", "--group", "GL2", "--mu", "1,0", "--output", str(target)], capsys)
    assert code == 0 and out == ""
    assert target.read_text().startswith("nu\tkappa")


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "newton_strata", "bgmu", "--group", "GL2", "--mu", "1,0"],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0 and len(proc.stdout.splitlines()) == 3
