import json
import math

import pytest

from stickjuggle import cli


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_number_parser():
    assert cli._eval_number("2pi/3") == pytest.approx(2 * math.pi / 3)
    assert cli._eval_number("-0.45*pi") == pytest.approx(-0.45 * math.pi)
    assert cli._floats("1, 1.5,3") == [1.0, 1.5, 3.0]
    with pytest.raises(ValueError):
        cli._eval_number("__import__('os')")


def test_fixed_point(capsys):
    code, out, _ = run(capsys, "fixed-point", "--beta-star", "pi/3", "--delta-star", "0.6", "--delta-alpha-star", "2pi/3")
    assert code == 0
    d = json.loads(out)
    assert d["h_bar_x"] == pytest.approx(0.6797, abs=1e-3)
    assert d["phi"] == 0.0


def test_infeasible_exit_code(capsys):
    code, _, err = run(capsys, "fixed-point", "--delta-star", "0.05")
    assert code == 2 and "delta_min" in err


def test_linearize_and_gains(capsys, tmp_path):
    out_file = tmp_path / "lin.json"
    code, out, _ = run(capsys, "linearize", "--out", str(out_file))
    d = json.loads(out)
    assert code == 0 and d["controllability_rank"] == 8
    assert len(d["A"]) == 8 and len(d["B"][0]) == 3
    assert json.loads(out_file.read_text()) == d
    code, out, _ = run(capsys, "gains")
    g = json.loads(out)
    assert code == 0 and g["closed_loop_spectral_radius"] < 1 and len(g["K"]) == 3


def test_config_file_and_overrides(capsys, tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"params": {"m": 0.2, "ell": 0.6},
                               "spec": {"beta_star": 0.9, "delta_alpha_star": 3.141592653589793, "delta_star": 0.5}}))
    code, out, _ = run(capsys, "fixed-point", "--config", str(cfg), "--delta-star", "0.7")
    d = json.loads(out)
    assert code == 0 and d["delta_star"] == 0.7 and d["beta_star"] == 0.9
    assert d["I"] == pytest.approx(0.2 * 9.81 * 0.7 / math.sin(0.9))
    code, out, _ = run(capsys, "fixed-point", "--p", "2")
    assert json.loads(out)["p"] == pytest.approx(2.0)


def test_simulate_writes_outputs(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv(cli.OUT_DIR_ENV, str(tmp_path / "env"))
    code, out, _ = run(capsys, "simulate", "--steps", "5", "--noise", "--seed", "3", "--render", "4")
    assert code == 0
    d = json.loads(out)
    assert d["metrics"]["n_steps"] == 5
    assert (tmp_path / "env" / "steps.csv").exists()
    code, out, _ = run(capsys, "simulate", "--steps", "3", "--out-dir", str(tmp_path / "flag"))
    assert code == 0 and (tmp_path / "flag" / "summary.json").exists()


def test_simulate_error_codes(capsys, tmp_path):
    code, _, err = run(capsys, "simulate", "--noise", "--steps", "2")
    assert code == 2 and "seed" in err
    blocker = tmp_path / "f"
    blocker.write_text("")
    code, _, err = run(capsys, "simulate", "--steps", "2", "--out-dir", str(blocker / "x"))
    assert code == 4 and str(blocker) in err
    cfg = tmp_path / "bad.json"
    cfg.write_text(json.dumps({"initial_state": [0.9, -0.2, 1.2, 1.3, 0.2, -1.7, 2.2, -6.0]}))
    code, _, err = run(capsys, "simulate", "--config", str(cfg), "--out-dir", str(tmp_path / "o"))
    assert code == 3 and "beta_dot" in err
    code, _, err = run(capsys, "fixed-point", "--config", str(tmp_path / "missing.json"))
    assert code == 4


def test_sweep(capsys, tmp_path):
    out_csv = tmp_path / "s.csv"
    code, out, _ = run(capsys, "sweep", "--beta-stars", "pi/3", "--delta-alphas", "2pi/3,pi",
                       "--delta-stars", "0.01,0.6", "--out", str(out_csv))
    rows = json.loads(out)
    assert code == 0 and len(rows) == 4
    assert [r["feasible"] for r in rows] == [False, True, False, True]
    assert rows[0]["spectral_radius"] is None
    assert out_csv.read_text().count("\n") == 5


def test_precess(capsys):
    code, out, _ = run(capsys, "precess", "--p-free", "1")
    d = json.loads(out)
    assert code == 0
    assert max(d["hoop_residuals"].values()) < 1e-12
    assert d["precession"]["F"] == pytest.approx(d["juggling_limit"]["F"], rel=1e-3)


def test_module_entry_point():
    import subprocess
    import sys

    res = subprocess.run([sys.executable, "-m", "stickjuggle", "fixed-point"], capture_output=True, text=True)
    assert res.returncode == 0 and json.loads(res.stdout)["r"] > 0
