from __future__ import annotations

import json

import numpy as np
import pytest

from symcalc.cli import main
from symcalc.multipoly import Poly, example7_poly, poly_from_json, poly_to_json
from symcalc.ncalc import example7_tuple, matrix_to_dict


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def z1z2(tmp_path):
    path = tmp_path / "p.json"
    path.write_text(poly_to_json(Poly.monomial((1, 1))))
    return path


def test_example7_text(capsys):
    code, out, _ = run(capsys, "example7")
    assert code == 0
    assert "norm = 6\n" in out
    assert "polydisk norm bracket [5" in out
    assert "exceeds the polydisk norm: True" in out


def test_gamma_then_lambda_round_trip(capsys, tmp_path, z1z2):
    code, out, _ = run(capsys, "gamma", str(z1z2))
    assert code == 0
    g = poly_from_json(out)
    assert g.coeff((1, 1)) == pytest.approx(0.5)
    gpath = tmp_path / "g.json"
    gpath.write_text(out)
    code, back, _ = run(capsys, "lambda", str(gpath))
    assert code == 0
    assert back.strip() == poly_to_json(Poly.monomial((1, 1)))


def test_symm_command(capsys, tmp_path):
    ppath, tpath = tmp_path / "p.json", tmp_path / "t.json"
    ppath.write_text(poly_to_json(example7_poly()))
    tpath.write_text(json.dumps([matrix_to_dict(m) for m in example7_tuple().mats]))
    code, out, err = run(capsys, "symm", "--poly", str(ppath), "--tuple", str(tpath))
    assert code == 0
    doc = json.loads(out)
    assert doc["norm"] == pytest.approx(6, abs=1e-9)
    np.testing.assert_allclose(np.array(doc["matrix"]["re"]), np.diag([6, 2]), atol=1e-10)
    assert "operator norm" in err


def test_norm_command(capsys, z1z2):
    code, out, _ = run(capsys, "norm", str(z1z2), "--domain", "polydisk:2:1,2")
    assert code == 0
    doc = json.loads(out)
    assert doc["lower"] - 1e-12 <= 2 <= doc["upper"] + 1e-12


def test_bad_input_exits_2(capsys, z1z2, tmp_path):
    assert run(capsys, "norm", str(z1z2), "--domain", "ball:2")[0] == 2
    assert run(capsys, "gamma", str(tmp_path / "missing.json"))[0] == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code, _, err = run(capsys, "gamma", str(bad))
    assert code == 2 and "error" in err


def test_search_requires_seed(capsys):
    code, out, err = run(capsys, "search", "--experiment", "gamma", "--trials", "3")
    assert code == 2 and out == "" and "--seed" in err


def test_search_is_byte_identical(capsys):
    argv = ("search", "--experiment", "gamma", "--seed", "5", "--trials", "6", "--dim", "3")
    first = run(capsys, *argv)
    second = run(capsys, *argv)
    threaded = run(capsys, *argv, "--threads", "3")
    assert first[0] == 0
    assert first[1] == second[1] == threaded[1]
    assert len(first[1].splitlines()) == 6
    assert json.loads(first[2])["violations"] == 0


def test_search_lemma51_needs_radii(capsys):
    args = ("search", "--experiment", "lemma51", "--seed", "1", "--trials", "2", "--constraint", "contraction")
    assert run(capsys, *args)[0] == 2
    code, out, _ = run(capsys, *args, "--radii", "0.5,0.5")
    assert code == 0 and len(out.splitlines()) == 2


def test_certify_and_check(capsys, tmp_path):
    code, out, err = run(capsys, "certify", "--kernel", "lprime", "--n", "2", "--r", "0.5406")
    assert code == 0
    cert = json.loads(out)
    assert cert["verdict"] == "Certified" and cert["margin"] > 0
    assert "elapsed" not in cert
    path = tmp_path / "cert.json"
    path.write_text(out)
    code, out, _ = run(capsys, "certify", "--check", str(path))
    assert code == 0 and json.loads(out)["reproduced"] is True

    tampered = dict(cert, margin=cert["margin"] * 2 + 1e-3)
    path.write_text(json.dumps(tampered))
    assert run(capsys, "certify", "--check", str(path))[0] == 1


def test_certify_failure_exits_1(capsys):
    code, out, _ = run(capsys, "certify", "--kernel", "lprime", "--n", "2", "--r", "0.6", "--refine", "2")
    assert code == 1
    assert json.loads(out)["verdict"] == "NotCertified"


def test_constants_hand(capsys):
    code, out, err = run(capsys, "constants", "--n", "3", "--r-mode", "hand")
    assert code == 0
    doc = json.loads(out)
    assert doc["M"]["value"] <= 16.6
    assert 0.152 <= 1 / doc["R"]["value"] <= 0.16
    assert "M_3" in err


def test_verify_subset(capsys):
    code, out, err = run(capsys, "verify", "--only", "1,4")
    assert code == 0
    assert "[PASS] criterion 1" in err and "[PASS] criterion 4" in err
    assert [d["criterion"] for d in json.loads(out)] == [1, 4]
    assert run(capsys, "verify", "--only", "9")[0] == 2
