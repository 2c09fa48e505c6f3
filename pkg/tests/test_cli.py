import io
import json

import pytest

from topogame.cli import load_space, main
from topogame.games import Strategy
from topogame.ordinals import OrdinalSpace


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr()


def test_usage_errors_exit_1(capsys):
    assert run(capsys, "bogus")[0] == 1
    assert run(capsys, "solve", "--space", "moebius:2", "--point", "0", "--game", "qgame")[0] == 1
    assert run(capsys, "solve", "--space", "sierpinski", "--point", "9", "--game", "qgame")[0] == 1
    assert run(capsys, "solve", "--space", "sierpinski", "--point", "0", "--game", "chess")[0] == 1
    assert run(capsys, "principle", "--space", "sierpinski", "--kind", "s1")[0] == 1


def test_load_space():
    assert isinstance(load_space("omega1"), OrdinalSpace)
    assert load_space("chain:3").name == "chain(3)"


def test_load_space_from_json(tmp_path):
    f = tmp_path / "two.json"
    f.write_text(json.dumps({"n": 2, "min_nbhd": [[0, 1], [1]]}))
    assert load_space(str(f)).min_nbhd == load_space("sierpinski").min_nbhd


def test_enumerate(capsys):
    code, out = run(capsys, "enumerate", "--nmax", "4")
    assert code == 0
    assert {k: v["count"] for k, v in json.loads(out.out).items()} == {"1": 1, "2": 4, "3": 29, "4": 355}


def test_solve_and_emit_strategy(capsys, tmp_path):
    path = tmp_path / "s.json"
    code, out = run(capsys, "solve", "--space", "sierpinski", "--point", "0", "--game", "qgame",
                    "--emit-strategy", str(path))
    doc = json.loads(out.out)
    assert code == 0 and doc["winner"] == "I" and doc["verified"]
    strat = Strategy.from_json(json.loads(path.read_text()))
    assert strat.owner == "I"
    code, out = run(capsys, "transform", "--space", "sierpinski", "--point", "0", "--kind", "dual_i",
                    "--strategy", str(path), "--verify", "exhaustive")
    assert code == 0 and json.loads(out.out)["verdict"] == "pass"


def test_profile_exit_codes(capsys):
    code, out = run(capsys, "profile", "--space", "chain:3", "--point", "0")
    assert code == 0 and all(json.loads(out.out)["entries"].values())
    assert run(capsys, "profile", "--space", "discrete:2", "--point", "0")[0] == 1


def test_principle(capsys):
    code, out = run(capsys, "principle", "--space", "discrete:3", "--A", "explicit:0,1;2",
                    "--B", "explicit:0;2;0,1,2")
    doc = json.loads(out.out)
    assert code == 0 and not doc["holds"] and doc["oracle"] is False
    assert doc["refuter"]["repeated"] == [2]
    code, out = run(capsys, "principle", "--space", "sierpinski", "--kind", "seq", "--point", "0")
    assert code == 0 and json.loads(out.out)["holds"]


def test_sweeps(capsys):
    code, out = run(capsys, "verify-duality", "--nmax", "3")
    assert code == 0 and json.loads(out.out)["percent"] == 100.0
    code, out = run(capsys, "verify-transformers", "--nmax", "2")
    assert code == 0
    code, out = run(capsys, "verify-diagram", "--nmax", "3")
    doc = json.loads(out.out)
    assert code == 0 and doc["all_true"] and doc["violations"] == []


def test_report_is_byte_identical(capsys, tmp_path):
    outs = []
    for name in ("a", "b"):
        d = tmp_path / name
        assert run(capsys, "report", "--nmax", "2", "--out", str(d))[0] == 0
        outs.append(((d / "diagram.dot").read_bytes(), (d / "results.json").read_bytes()))
    assert outs[0] == outs[1]


def test_play_omega_one(capsys, tmp_path, monkeypatch):
    monkeypatch.setattr("sys.stdin", io.StringIO("0\n5\nw\n"))
    path = tmp_path / "t.json"
    code, _ = run(capsys, "play", "--space", "omega1", "--horizon", "3", "--out", str(path))
    assert code == 0
    doc = json.loads(path.read_text())
    assert doc["terminal"] == "horizon" and doc["winner"] is None


@pytest.mark.parametrize("argv", [["play", "--space", "omega1", "--side", "I"],
                                  ["play", "--space", "omega", "--side", "II"]])
def test_play_rejects_unsupported_ordinal_games(capsys, argv):
    assert run(capsys, *argv)[0] == 1
