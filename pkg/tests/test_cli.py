import json
import math
import os
import subprocess
import sys

import pytest

CLI = [sys.executable, "-m", "korobovqmc.cli"]


def run_cli(*args, env=None):
    full_env = dict(os.environ)
    if env:
        full_env.update(env)
    return subprocess.run(
        CLI + list(args), capture_output=True, text=True, env=full_env
    )


def test_pointset_writes_file(tmp_path):
    out = tmp_path / "pts.txt"
    res = run_cli("pointset", "--family", "S", "--M", "20", "--d", "1", "-o", str(out))
    assert res.returncode == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "# family=S M=20 d=1 count=60"
    assert len(lines) == 61


def test_pointset_t_small(tmp_path):
    out = tmp_path / "pts.txt"
    res = run_cli("pointset", "--family", "T", "--M", "4", "--d", "3", "-o", str(out))
    assert res.returncode == 0
    assert len(out.read_text().splitlines()) == 10


def test_invalid_family_usage_error():
    res = run_cli("pointset", "--family", "X", "--M", "20", "--d", "1")
    assert res.returncode == 2


def test_domain_error_maps_to_usage_exit():
    res = run_cli("pointset", "--family", "S", "--M", "1", "--d", "1")
    assert res.returncode == 2
    assert "error" in res.stderr


def test_calibrate_json(tmp_path):
    out = tmp_path / "cal.json"
    res = run_cli("calibrate", "--m-max", "100", "-o", str(out))
    assert res.returncode == 0
    data = json.loads(out.read_text())
    assert data["config"]["m_max"] == 100
    assert data["result"]["argmin_m"] == 10
    assert data["result"]["c_p"] == pytest.approx(0.2)


def test_verify_lemma_pass(tmp_path):
    out = tmp_path / "rep.json"
    res = run_cli(
        "verify", "--mode", "lemma", "--family", "S",
        "--p", "3..13", "--d", "2", "--K", "exhaustive", "-o", str(out),
    )
    assert res.returncode == 0
    data = json.loads(out.read_text())
    assert data["report"]["passed"] is True
    assert data["report"]["mode"] == "lemma"


def test_verify_corollary_exact_deterministic(tmp_path):
    out1 = tmp_path / "r1.json"
    out2 = tmp_path / "r2.json"
    args = [
        "verify", "--mode", "corollary_exact", "--family", "T",
        "--M", "8,16", "--d", "2", "--sample", "100", "--seed", "7",
        "--kmax", "1000",
    ]
    assert run_cli(*args, "-o", str(out1)).returncode == 0
    assert run_cli(*args, "-o", str(out2)).returncode == 0
    assert out1.read_bytes() == out2.read_bytes()
    assert json.loads(out1.read_text())["report"]["passed"] is True


def test_verify_bad_constant_fails_with_exit_1(tmp_path):
    out = tmp_path / "rep.json"
    res = run_cli(
        "verify", "--mode", "corollary_cp", "--family", "S",
        "--M", "10", "--d", "1", "--kmax", "8", "--sample", "100",
        "--cp", "0.99", "-o", str(out),
    )
    assert res.returncode == 1
    assert json.loads(out.read_text())["report"]["passed"] is False


def test_wce_json_and_csv(tmp_path):
    out = tmp_path / "wce.json"
    csv = tmp_path / "wce.csv"
    res = run_cli(
        "wce", "--family", "T", "--M", "4", "--d", "1", "--K", "20",
        "-o", str(out), "--csv", str(csv),
    )
    assert res.returncode == 0
    data = json.loads(out.read_text())
    assert data["estimate"]["lower"] == pytest.approx(1 / math.log(9), abs=1e-9)
    assert data["estimate"]["upper"] == data["estimate"]["lower"]
    assert data["estimate"]["argmax_k"] == [9]
    lines = csv.read_text().splitlines()
    assert lines[0] == "family,M,d,N,K,lower,upper,bound_in_M,bound_in_N,c_p"
    assert len(lines) == 2


def test_wce_vacuous_flag(tmp_path):
    out = tmp_path / "wce.json"
    res = run_cli(
        "wce", "--family", "S", "--M", "16", "--d", "2", "--K", "10",
        "--cp", "0.2", "-o", str(out),
    )
    assert res.returncode == 0
    data = json.loads(out.read_text())
    assert data["bounds"]["bound_in_M"] == pytest.approx(20.0)
    assert data["bounds"]["vacuous"] is True


def test_wce_capacity_exit_3():
    res = run_cli("wce", "--family", "S", "--M", "8", "--d", "4", "--K", "64")
    assert res.returncode == 3
    assert "capacity" in res.stderr


def test_complexity_stdout():
    res = run_cli("complexity", "--eps", "0.5", "--d", "2", "--cp", "0.2")
    assert res.returncode == 0
    assert res.stdout.strip() == "4096000"


def test_cp_env_override():
    res = run_cli(
        "complexity", "--eps", "0.5", "--d", "2", env={"KOROBOVQMC_CP": "0.4"}
    )
    assert res.returncode == 0
    assert res.stdout.strip() == str(math.ceil((8 / 0.4) ** 3 * 8 * 8))


def test_converge_csv(tmp_path):
    spec = tmp_path / "w.json"
    spec.write_text(
        json.dumps(
            {
                "type": "weierstrass",
                "d": 2,
                "beta": 1.5,
                "L": 2,
                "form": "product_of_omega",
            }
        )
    )
    out = tmp_path / "conv.csv"
    res = run_cli(
        "converge", "--family", "T", "--d", "2", "--M", "8,16",
        "--integrand", str(spec), "-o", str(out),
    )
    assert res.returncode == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "family,M,d,N,abs_error,bound,norm,ratio"
    assert len(lines) == 3
    for line in lines[1:]:
        assert float(line.split(",")[7]) <= 1 + 1e-9


def test_converge_missing_integrand_exit_2(tmp_path):
    res = run_cli(
        "converge", "--family", "T", "--d", "2", "--M", "8,16",
        "--integrand", str(tmp_path / "nope.json"),
    )
    assert res.returncode == 2
