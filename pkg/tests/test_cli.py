import json
import subprocess
import sys
from math import pi, sin, sqrt

import pytest

from cosetvoa.cli import fmt_float, main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_algebra_info(capsys):
    code, out, _ = run(capsys, "algebra-info", "--series", "E", "--rank", "8")
    p = json.loads(out)["payload"]
    assert code == 0 and p["dual_coxeter"] == 30 and p["center_order"] == 1
    code, out, _ = run(capsys, "algebra-info", "--series", "A", "--rank", "1")
    assert json.loads(out)["payload"]["J"] == [1]


@pytest.mark.parametrize("argv", [["algebra-info", "--series", "Z", "--rank", "1"],
                                  ["algebra-info", "--series", "E", "--rank", "9"],
                                  ["smatrix", "--series", "A", "--rank", "1", "--level", "0"],
                                  ["branching", "--series", "A", "--rank", "1", "--k", "1", "--l", "1",
                                   "--dot", "0,1", "--ddot", "0"],
                                  ["frobnicate"]])
def test_usage_errors(capsys, argv):
    assert run(capsys, *argv)[0] == 2


def test_smatrix_json(capsys):
    code, out, _ = run(capsys, "smatrix", "--series", "A", "--rank", "1", "--level", "2")
    env = json.loads(out)
    assert code == 0
    assert set(env) == {"tool", "version", "command", "algebra", "levels", "tolerances", "payload", "warnings"}
    entries = env["payload"]["entries"]
    for a in range(3):
        for b in range(3):
            re, im = entries[a][b]
            assert abs(re - sqrt(2 / 4) * sin(pi * (a + 1) * (b + 1) / 4)) < 1e-11 and im == 0


def test_smatrix_e8_and_check(capsys):
    code, out, _ = run(capsys, "smatrix", "--series", "E", "--rank", "8", "--level", "1", "--check")
    p = json.loads(out)["payload"]
    assert code == 0 and p["entries"] == [[[1.0, 0.0]]] and p["checks"]["passed"]


@pytest.mark.parametrize("fmt", ["csv", "table"])
def test_other_formats(capsys, fmt):
    code, out, _ = run(capsys, "smatrix", "--series", "A", "--rank", "2", "--level", "1", "--format", fmt)
    assert code == 0 and len(out.strip().splitlines()) >= 4


def test_fusion_sparse(capsys):
    code, out, _ = run(capsys, "fusion", "--series", "A", "--rank", "1", "--level", "1", "--sparse")
    assert code == 0 and json.loads(out)["payload"]["triples"] == [[1, 1, 0, 1]]


def test_fusion_integrality_failure(capsys):
    # an absurd tolerance makes every rounding residue a failure
    code, _, err = run(capsys, "fusion", "--series", "A", "--rank", "2", "--level", "2", "--tol", "-1")
    assert code == 3 and "from an integer" in err


def test_coset_ising(capsys):
    code, out, err = run(capsys, "coset", "classify", "--series", "A", "--rank", "1",
                         "--k", "1", "--l", "1", "--assume-rational")
    env = json.loads(out)
    assert code == 0 and "free action" in err
    mods = env["payload"]["modules"]
    assert [m["qdim"] for m in mods] == [1.0, 1.0, fmt_float(sqrt(2))]
    assert env["warnings"]


def test_coset_refusals(capsys):
    code, out, err = run(capsys, "coset", "classify", "--series", "A", "--rank", "1",
                         "--k", "2", "--l", "2", "--assume-rational")
    assert code == 4 and out == "" and "(1,1,2)" in err and "false" in err
    code, _, err = run(capsys, "coset", "qdims", "--series", "A", "--rank", "1", "--k", "1", "--l", "1")
    assert code == 4 and "rationality" in err


def test_coset_e8_fusion(capsys):
    code, out, err = run(capsys, "coset", "fusion", "--series", "E", "--rank", "8", "--k", "1", "--l", "2")
    p = json.loads(out)["payload"]
    assert code == 0 and p["factorization_holds"] and "factorization verified" in err
    assert len(p["index"]) == 15 and json.loads(out)["warnings"] == []


def test_coset_globaldim(capsys):
    code, out, _ = run(capsys, "coset", "globaldim", "--series", "A", "--rank", "1",
                       "--k", "1", "--l", "1", "--assume-rational")
    p = json.loads(out)["payload"]
    assert code == 0 and p["closed_form"] == 4.0 and p["sum_qdim_squared"] == 4.0


def test_branching(capsys):
    code, out, _ = run(capsys, "branching", "--series", "A", "--rank", "1", "--k", "1", "--l", "1",
                       "--dot", "0", "--ddot", "0", "--order", "10")
    p = json.loads(out)["payload"]
    assert code == 0 and len(p["series"]) == 2 and p["conformal_weights"] == ["0/1", "1/2"]
    code, out, _ = run(capsys, "branching", "--series", "A", "--rank", "1", "--k", "1", "--l", "1",
                       "--dot", "0", "--ddot", "1")
    assert json.loads(out)["payload"]["conformal_weights"] == ["1/16"]


def test_branching_guard(capsys):
    code, _, err = run(capsys, "branching", "--series", "E", "--rank", "8", "--k", "1", "--l", "1",
                       "--dot", "0,0,0,0,0,0,0,0", "--ddot", "0,0,0,0,0,0,0,0")
    assert code == 5 and "rank" in err


def test_out_file(capsys, tmp_path):
    target = tmp_path / "s.json"
    code, out, _ = run(capsys, "smatrix", "--series", "A", "--rank", "1", "--level", "1", "--out", str(target))
    assert code == 0 and target.read_text() == out


def test_byte_identical_subprocess():
    argv = [sys.executable, "-m", "cosetvoa", "coset", "smatrix", "--series", "A", "--rank", "2",
            "--k", "1", "--l", "1", "--assume-rational"]
    a = subprocess.run(argv, capture_output=True, check=True).stdout
    b = subprocess.run(argv, capture_output=True, check=True).stdout
    assert a == b and a


def test_float_format():
    assert fmt_float(-0.0) == 0.0 and str(fmt_float(-0.0)) == "0.0"
    assert fmt_float(1 / 3) == 0.333333333333
