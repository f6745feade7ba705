import csv
import io
import json
import math
import subprocess
import sys

import pytest

from mgspec.cli import main
from mgspec.families import path
from mgspec.graph import save_graph

PI2 = math.pi**2


def run(capsys, *argv):
    code = main(list(map(str, argv)))
    out, err = capsys.readouterr()
    return code, out, err


def test_flower_round_trip(tmp_path, capsys):
    f = tmp_path / "f.json"
    code, out, _ = run(capsys, "family", "flower", "--L", 1, "--E", 7, "--emit", f)
    assert code == 0 and json.loads(out)["closed_form_lambda1"] == pytest.approx(49 * PI2)
    code, out, _ = run(capsys, "eigs", f, "--tol", "1e-4")
    assert code == 0
    assert json.loads(out)["lambda1"] == pytest.approx(49 * PI2, rel=1e-3)


def test_exp_chain_sweep(tmp_path, capsys):
    out_file = tmp_path / "blowup.csv"
    code, _, _ = run(capsys, "sweep", "exp-chain", "--D", 1, "--n", "1..8", "--out", out_file)
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out_file.read_text())))
    assert [int(r["n"]) for r in rows] == list(range(1, 9))
    assert all(float(r["lambda1"]) >= float(r["n2_over_4"]) for r in rows)


def test_root(capsys):
    code, out, _ = run(capsys, "root", "--equation", "dl-trans-2", "--D", 1, "--L", 4)
    assert code == 0 and json.loads(out)["kappa"] == pytest.approx(0.43016, abs=1e-5)


def test_bounds_table(tmp_path, capsys):
    f = tmp_path / "p.json"
    save_graph(path(1), f)
    code, out, err = run(capsys, "bounds", f, "--lambda1", "from-solver")
    assert code == 0
    rep = json.loads(out)
    assert not [e for e in rep["entries"] if e["satisfied"] is False]
    assert "(D,L)" in err and "compared against" in err


def test_reduce_and_sl(tmp_path, capsys):
    g, c = tmp_path / "g.json", tmp_path / "c.json"
    run(capsys, "family", "pumpkin", "--L", 1, "--E", 3, "--emit", g)
    code, _, _ = run(capsys, "reduce", g, "--out", c)
    assert code == 0
    chain = json.loads(c.read_text())
    assert [p["multiplicity"] for p in chain["pumpkins"]] == [3]
    code, out, _ = run(capsys, "sl", "--weight", c, "--tol", "1e-6")
    assert code == 0 and json.loads(out)["lambda1"] == pytest.approx(9 * PI2, rel=1e-4)


def test_discrete(tmp_path, capsys):
    g = tmp_path / "k.json"
    run(capsys, "family", "complete", "--V", 5, "--emit", g)
    code, out, _ = run(capsys, "discrete", g)
    res = json.loads(out)
    assert code == 0 and res["alpha1"] == pytest.approx(1.25)


def test_domain_error_exit_code(tmp_path, capsys):
    code, _, err = run(capsys, "root", "--equation", "dl-trans-2", "--D", 1, "--L", 1.5)
    assert code == 1 and json.loads(err)["error"] == "invalid_regime"
    bad = tmp_path / "bad.json"
    bad.write_text('{"vertices": ["a", "b"], "edges": [{"u": "a", "v": "b", "length": -1}]}')
    code, _, err = run(capsys, "eigs", bad)
    assert code == 1 and json.loads(err)["error"] == "nonpositive_length"
    code, _, err = run(capsys, "eigs", tmp_path / "missing.json")
    assert code == 1 and json.loads(err)["error"] == "bad_input"


@pytest.mark.parametrize("argv", [
    [], ["eigs"], ["family", "nope"], ["family", "flower", "--L", "-1"], ["sweep", "ssd", "--n", "x"],
    ["eigs", "g.json", "--h", "0.1", "--tol", "1e-3"],
])
def test_usage_errors_exit_2(argv, capsys):
    with pytest.raises(SystemExit) as exc:
        main(argv)
    assert exc.value.code == 2


def test_repeat_runs_are_byte_identical(tmp_path):
    g = tmp_path / "d.json"
    cmd = [sys.executable, "-m", "mgspec"]
    subprocess.run(cmd + ["family", "flower-dumbbell", "--D", "1", "--n", "3", "--emit", str(g)], check=True,
                   capture_output=True)
    runs = [subprocess.run(cmd + ["eigs", str(g), "--tol", "1e-4"], check=True, capture_output=True).stdout
            for _ in range(2)]
    assert runs[0] == runs[1]
    sweeps = [subprocess.run(cmd + ["sweep", "flower-dumbbell", "--n", "1..3", "--tol", "1e-4"], check=True,
                             capture_output=True).stdout for _ in range(2)]
    assert sweeps[0] == sweeps[1] and sweeps[0].count(b"\n") == 4
