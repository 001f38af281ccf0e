import json
import math

import pytest

from margulis.cli import main
from margulis.hyp3 import Isometry
from margulis.tester import GroupFile


@pytest.fixture
def schottky_file(tmp_path):
    x = Isometry.diagonal(4.0)
    m = Isometry(1, 1, 1, 2)
    group = GroupFile(name="schottky", generators=(x, m * x * m.inverse()),
                      claims_discrete=True, claims_torsion_free=True)
    path = tmp_path / "schottky.json"
    group.save(str(path))
    return str(path)


@pytest.fixture
def violation_file(tmp_path):
    group = GroupFile(name="small-pair",
                      generators=(Isometry.diagonal(math.exp(0.023)),
                                  Isometry.parabolic(0.046)))
    path = tmp_path / "small.json"
    group.save(str(path))
    return str(path)


def test_verify_constants_command(tmp_path, capsys):
    out_json = tmp_path / "constants.json"
    code = main(["verify-constants", "--json", str(out_json)])
    captured = capsys.readouterr().out
    assert code == 0
    assert "Verified" in captured
    assert "ErratumSuspected" in captured
    data = json.loads(out_json.read_text())
    assert data["ok"] is True
    assert len(data["checks"]) == 10


def test_phi_command(capsys):
    code = main(["phi", "0.292"])
    out = capsys.readouterr().out
    assert code == 0
    assert "1.0960" in out


def test_growth_command(schottky_file, tmp_path, capsys):
    out_json = tmp_path / "growth.json"
    code = main(["growth", "--group", schottky_file, "--depth", "5",
                 "--json", str(out_json)])
    out = capsys.readouterr().out
    assert code == 0
    assert "63" in out  # b_5 = 2^6 - 1 for positive words
    data = json.loads(out_json.read_text())
    assert data["counts"] == [1, 3, 7, 15, 31, 63]

    code = main(["growth", "--group", schottky_file, "--depth", "4",
                 "--inverses"])
    out = capsys.readouterr().out
    assert code == 0
    assert "161" in out  # 2 * 3^4 - 1


def test_margulis_test_command_clean(schottky_file, tmp_path, capsys):
    out_json = tmp_path / "report.json"
    code = main(["margulis-test", "--group", schottky_file, "--mu", "0.292",
                 "--depth", "3", "--points", "10", "--radius", "2.0",
                 "--seed", "11", "--json", str(out_json)])
    out = capsys.readouterr().out
    assert code == 0
    assert "violations             0" in out
    data = json.loads(out_json.read_text())
    assert data["violations"] == []
    assert data["empirical_min"] > 1.0


def test_margulis_test_command_violations(violation_file, capsys):
    code = main(["margulis-test", "--group", violation_file, "--mu", "0.292",
                 "--depth", "2", "--points", "5", "--radius", "0.5",
                 "--seed", "1"])
    out = capsys.readouterr().out
    assert code == 1
    assert "violations" in out


def test_margulis_test_command_bad_group(tmp_path, capsys):
    path = tmp_path / "missing.json"
    code = main(["margulis-test", "--group", str(path), "--mu", "0.292",
                 "--depth", "2"])
    assert code == 2
    assert "error" in capsys.readouterr().err


def test_tree_coset_command(tmp_path, capsys):
    out_file = tmp_path / "coset.tree"
    code = main(["tree", "coset", "--depth", "3", "--out", str(out_file)])
    out = capsys.readouterr().out
    assert code == 0
    assert "edges     53" in out  # 1 + 2(3^3 - 1)
    header = out_file.read_text().splitlines()[0]
    assert header == "tree 54"


def test_tree_pingpong_command(tmp_path, capsys):
    out_json = tmp_path / "pp.json"
    code = main(["tree", "pingpong", "--depth", "5", "--g0", "x", "--g1", "y",
                 "--max-power", "2", "--word-check", "4",
                 "--json", str(out_json)])
    out = capsys.readouterr().out
    assert code == 0
    assert "no alternating word" in out
    data = json.loads(out_json.read_text())
    assert data["ok"] is True


def test_tree_pingpong_command_torsion_failure(capsys):
    # with a torsion factor the periodic subtrees overlap, so the witness
    # precondition fails: the pair provably cannot be ping-ponged
    code = main(["tree", "pingpong", "--depth", "4", "--order-x", "2",
                 "--order-y", "3", "--g0", "x", "--g1", "y",
                 "--max-power", "1", "--word-check", "3"])
    err = capsys.readouterr().err
    assert code == 2
    assert "periodic subtrees intersect" in err


def test_tree_xydecomp_command(tmp_path, capsys):
    out_json = tmp_path / "xy.json"
    code = main(["tree", "xydecomp", "--depth", "5", "--n", "1",
                 "--max-word-len", "3", "--json", str(out_json)])
    out = capsys.readouterr().out
    assert code == 0
    assert "all shuffle and disjointness conclusions hold" in out
    data = json.loads(out_json.read_text())
    assert data["ok"] is True
    assert data["counts"]["Stab"] == 1


def test_pipeline_command(tmp_path, capsys):
    out_json = tmp_path / "chain.json"
    code = main(["pipeline", "--nu", "0.286", "--json", str(out_json)])
    out = capsys.readouterr().out
    assert code == 0
    assert "Contradiction" in out
    data = json.loads(out_json.read_text())
    assert data["verdict"] == "Contradiction"

    code = main(["pipeline", "--nu", "0.35"])
    assert code == 1

    code = main(["pipeline", "--nu", "0.292", "--variant", "292"])
    out = capsys.readouterr().out
    assert code == 0
    assert "Verified" in out


def test_pipeline_command_bad_input(capsys):
    code = main(["pipeline", "--nu", "-1"])
    assert code == 2
