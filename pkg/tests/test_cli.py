import json
import subprocess
import sys

import pytest

from mfw.cli import main, run
from mfw.mf import builtin_family


def structured(argv):
    status, text = run(argv + ["--out", "structured"])
    assert status == 0, text
    return json.loads(text)


def test_milnor_command():
    rep = structured(["milnor", "--potential", "x^2 - y^4 + z*w", "--vars", "x,y,z,w"])
    assert rep["mu"] == 3
    assert rep["basis"] == ["1", "y", "y^2"]
    assert rep["quasihomogeneous"] is True


def test_series_commands():
    rep = structured(["series", "expand", "--n", "5,1", "--order", "12"])
    assert rep["coefficients"] == [1, 5, 8, 0, -14, -14, 0, 8, 5, 1, 0, 0, 0]
    assert structured(["series", "invert", "--coeffs", "1,3,3,1"])["n"] == [3]
    assert structured(["series", "invert", "--series", "(1+t)^5*(1-t^2)^2",
                       "--order", "12"])["n"] == [5, 1]
    assert structured(["series", "dim", "--n", "5,1"])["dim"] == 9


def test_residue_command():
    rep = structured(["residue", "--potential", "x^2 + y^3 + w*z^2 + w^3*y",
                      "--f", "y^2*w^2", "--g", "1"])
    assert rep["residue"] == "1/36"
    assert rep["pairing"] == "1/36"


def test_mf_commands_with_file(tmp_path):
    path = tmp_path / "laufer.json"
    path.write_text(builtin_family("laufer", 1).dumps())
    assert structured(["mf", "validate", "--mf", str(path)])["valid"] is True
    assert structured(["mf", "chi", "--mf", str(path)])["chi"] == 9
    assert structured(["mf", "chern", "--mf", str(path)])["chern_character"] == "-18*y*w"


def test_invalid_factorization_exits_one(tmp_path):
    rec = builtin_family("cA1", 1).to_record()
    rec["delta1"][0][0] = "-w"
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(rec))
    status, text = run(["mf", "validate", "--mf", str(path)])
    assert status == 1 and "violations" in text


def test_tau_and_hom_commands():
    rep = structured(["mf", "tau", "--family", "laufer", "--words", "1", "a*b"])
    assert [r["tau"] for r in rep["tau"]] == ["-18*y*w", "0"]
    rep = structured(["mf", "hom", "--family", "cA1", "--k", "1", "--homotopic", "1"])
    assert rep["homotopic"]["verdict"] == "no_up_to_D"
    assert rep["hom_dims"] == {"8": 1, "10": 1}


def test_algebra_commands(tmp_path):
    path = tmp_path / "alg.json"
    base = ["--generators", "a,b", "--relations", "a*b + b*a", "a^2 - b^3"]
    rep = structured(["algebra", "present", "--save", str(path)] + base)
    assert rep["dim"] == 9
    assert rep["rules"] == ["a*b -> -b*a", "a^3 -> 0", "b^3 -> a^2"]
    assert structured(["algebra", "hh0", "--algebra", str(path)])["hh0"] == 6
    rad = structured(["algebra", "radical", "--algebra", str(path)])
    assert rad["radical_dim"] == 8 and rad["blocks"] == [1]
    assert structured(["algebra", "socle", "--algebra", str(path)])["socle_dim"] == 1
    dual = ["--generators", "e", "--relations", "e^2"]
    assert structured(["algebra", "hhdims", "--max-degree", "3"] + dual)["hh_dims"] == [2, 1, 1, 1]
    pairing = tmp_path / "p.json"
    pairing.write_text(json.dumps([["0", "1"], ["1", "0"]]))
    assert structured(["algebra", "frobenius", "--pairing", str(pairing)] + dual)["frobenius"] == "ok"


def test_usage_errors_exit_two(capsys):
    assert run(["bogus"])[0] == 2
    assert run(["milnor", "--potential", "x^2 +"])[0] == 2
    assert run(["milnor", "--potential", "x^2", "--vars", "x,x"])[0] == 2
    assert run(["mf", "chi"])[0] == 2
    assert run(["series", "dim", "--n", "a,b"])[0] == 2
    assert main(["milnor", "--potential", "2x"]) == 2
    assert "position" in capsys.readouterr().err


def test_mathematical_failure_exits_one():
    status, text = run(["milnor", "--potential", "x^2 + y^2"])
    assert status == 1 and "NotIsolated" in text
    status, _ = run(["series", "invert", "--coeffs", "1,1,1"])
    assert status == 1


def test_determinism_and_round_trip():
    argv = ["example", "ca1", "--k", "2", "--all", "--out", "structured"]
    first, second = run(argv), run(argv)
    assert first == second
    rep = json.loads(first[1])
    assert json.loads(json.dumps(rep, sort_keys=True, indent=1)) == rep
    assert json.dumps(rep, sort_keys=True, indent=1) == first[1]
    assert rep["contraction_algebra"]["dim"] == 2
    assert rep["gv"]["matches_dim"] and rep["gv"]["matches_hh0"]


def test_budget_environment_variable(monkeypatch):
    monkeypatch.setenv("MFW_BUDGET", "max_pairs=1")
    status, text = run(["milnor", "--potential", "x^2 + y^3 + w*z^2 + w^3*y"])
    assert status == 1 and "BudgetExceeded" in text
    monkeypatch.setenv("MFW_BUDGET", "nonsense=3")
    assert run(["series", "dim", "--n", "1"])[0] == 2


def test_laufer_example_report():
    rep = structured(["example", "laufer", "--k", "1", "--all"])
    assert rep["mu"] == 11 and rep["chi"] == 9
    acon = rep["contraction_algebra"]
    assert acon["dim"] == 9 and acon["hh0"] == 6
    assert rep["frobenius_gram_rank"] == 9
    assert rep["sigma_socle_1"] == "-1/2"
    taus = {r["alpha"]: r["tau"] for r in rep["tau"]}
    assert taus["1"] == "-18*y*w" and taus["a*b"] == "0"
    assert rep["conventions"]["stabilized"] is True


def test_entry_point_runs():
    out = subprocess.run([sys.executable, "-m", "mfw.cli", "series", "dim", "--n", "5,1"],
                         capture_output=True, text=True)
    assert out.returncode == 0 and "dim: 9" in out.stdout


@pytest.mark.parametrize("argv", [["--help"], ["mf", "--help"]])
def test_help_exits_zero(argv):
    assert run(argv)[0] == 0
