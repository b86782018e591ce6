import json
from pathlib import Path

import pytest

from translucent.cli import main, run
from translucent.game import parse_game
from translucent.structures import parse_structure, validate_appropriate

DATA = Path(__file__).parent / "data"
LADDER5 = str(DATA / "ladder_5.game.json")
TPD = str(DATA / "tpd.structure.json")
NAIVE = str(DATA / "pd_naive.structure.json")


def test_solve_ladder():
    res = run(["solve", "--game", LADDER5])
    assert res.exit_code == 0
    assert res.report.splitlines()[-1] == "survivors after 4 rounds: {5} x {5}"
    assert "min 3/2 > max 1" in res.report


def test_solve_extras_and_json():
    res = run(["solve", "--game", str(DATA / "pd.game.json"), "--strict-baseline", "--remark35", "--rationalizable", "--json"])
    assert res.exit_code == 0
    data = json.loads(res.report)
    assert data["n_rounds"] == 0 and data["remark35"] and data["matches_survivors"]
    assert len(data["rationalizable"]) == 4
    assert data["strict_baseline"]["rounds"][-1] == [["S"], ["S"]]
    again = run(["solve", "--game", str(DATA / "pd.game.json"), "--strict-baseline", "--remark35", "--rationalizable", "--json"])
    assert again.report == res.report


def test_validate_epsilon_prints_bare_value(capsys):
    assert main(["validate", "--structure", TPD, "--epsilon"]) == 0
    assert capsys.readouterr().out.strip() == "1/4"


def test_validate_full_report():
    res = run(["validate", "--structure", TPD])
    assert res.exit_code == 1
    assert "appropriate: yes" in res.report and "epsilon: 1/4" in res.report
    naive = run(["validate", "--structure", NAIVE, "--appropriate", "--strong", "--json"])
    assert naive.exit_code == 0
    assert json.loads(naive.report)["strongly_appropriate"]["ok"]


def test_model_checking_exit_codes():
    assert run(["mc", "--structure", TPD, "--formula", "RAT_1", "--state", "coop"]).exit_code == 0
    assert run(["mc", "--structure", TPD, "--mode", "probability", "--formula", "RAT_1", "--state", "coop"]).exit_code == 1
    assert run(["mc", "--structure", TPD, "--mode", "probability", "--formula", "B*_1 true"]).exit_code == 2
    assert run(["mc", "--structure", TPD, "--formula", "RAT_1 &"]).exit_code == 2
    assert run(["mc", "--structure", TPD, "--formula", "true", "--state", "nowhere"]).exit_code == 2
    res = run(["mc", "--structure", NAIVE, "--formula", "CCBR", "--json"])
    data = json.loads(res.report)
    assert data["states"] == [] and data["state"] == "w0" and res.exit_code == 1


def test_witness_command(tmp_path):
    out = tmp_path / "w.json"
    res = run(["witness", "--game", str(DATA / "ladder_3.game.json"), "--profile", "3,3", "--out", str(out)])
    assert res.exit_code == 0 and "states: 9" in res.report
    m = parse_structure(out.read_text())
    assert validate_appropriate(m) and json.loads(out.read_text())["designated"] == "D"
    assert run(["witness", "--game", str(DATA / "ladder_3.game.json"), "--profile", "1,1"]).exit_code == 1
    assert run(["witness", "--game", str(DATA / "ladder_3.game.json"), "--profile", "9,9"]).exit_code == 2


def test_gen_round_trips(tmp_path):
    assert run(["gen", "game", "ladder", "--param", "k=5", "--param", "p=1/2", "--out", str(tmp_path / "l.json")]).exit_code == 0
    assert (tmp_path / "l.json").read_text() == (DATA / "ladder_5.game.json").read_text()
    assert run(["gen", "random-structure", "--seed", "3", "--states", "5", "--out", str(tmp_path / "r.json")]).exit_code == 0
    assert validate_appropriate(parse_structure((tmp_path / "r.json").read_text()))
    first = run(["gen", "random-game", "--seed", "11"])
    assert first.exit_code == 0 and first.report == ""
    assert run(["gen", "random-game"]).exit_code == 2
    assert run(["gen", "game", "chicken"]).exit_code == 2


def test_usage_errors(capsys):
    assert run(["solve"]).exit_code == 2
    assert run(["verify-paper"]).exit_code == 2
    assert run(["solve", "--game", str(DATA / "missing.json")]).exit_code == 2
    assert main(["bogus"]) == 2
    assert "error" in capsys.readouterr().err
