import csv
import json
import math
import os
import subprocess
import sys

CLI = [sys.executable, "-m", "uvflow.cli"]


def run_cli(args, cwd, env_extra=None):
    env = dict(os.environ)
    env.pop("UVFLOW_OUTPUT_DIR", None)
    if env_extra:
        env.update(env_extra)
    return subprocess.run(CLI + args, cwd=cwd, env=env,
                          capture_output=True, text=True)


def read_csv_rows(path):
    with open(path) as fh:
        lines = [ln for ln in fh.read().splitlines() if not ln.startswith("#")]
    return list(csv.DictReader(lines))


def test_analyze_quartic_values(tmp_path):
    out = tmp_path / "q.json"
    res = run_cli(["analyze", "quartic", "--format", "json",
                   "--output", str(out)], tmp_path)
    assert res.returncode == 0, res.stderr
    row = json.loads(out.read_text())["rows"][0]
    assert row["model"] == "quartic"
    assert abs(row["rg_energy"] - 1.0) < 1e-9
    assert abs(row["oracle_energy"] - 1.06036209047) < 1e-8
    assert abs(row["rel_error"] - 0.0569259227702) < 1e-8
    assert row["sign_branch"] == "positive"


def test_analyze_output_is_deterministic(tmp_path):
    args = ["analyze", "quartic", "--format", "json", "--output", "det.json"]
    assert run_cli(args, tmp_path).returncode == 0
    first = (tmp_path / "det.json").read_bytes()
    assert run_cli(args, tmp_path).returncode == 0
    assert (tmp_path / "det.json").read_bytes() == first


def test_unknown_model_exits_2(tmp_path):
    res = run_cli(["analyze", "cubic"], tmp_path)
    assert res.returncode == 2


def test_missing_config_exits_2(tmp_path):
    res = run_cli(["analyze", "quartic", "--config", "absent.json"], tmp_path)
    assert res.returncode == 2
    assert "config error" in res.stderr


def test_flag_overrides_config(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"lam0": 100.0, "g0": 1.0, "lam1": 1000.0}))
    out = tmp_path / "t.csv"
    res = run_cli(["flow", "quartic", "--config", str(cfg), "--lam0", "10",
                   "--output", str(out)], tmp_path)
    assert res.returncode == 0, res.stderr
    rows = read_csv_rows(out)
    assert float(rows[0]["lambda"]) == 10.0
    assert float(rows[-1]["lambda"]) == 1000.0  # config still supplies lam1


def test_output_dir_redirect(tmp_path):
    res = run_cli(["analyze", "quartic", "--output", "sub/dir/r.csv"],
                  tmp_path, env_extra={"UVFLOW_OUTPUT_DIR": str(tmp_path / "root")})
    assert res.returncode == 0, res.stderr
    assert (tmp_path / "root" / "sub" / "dir" / "r.csv").exists()


def test_flow_abort_writes_partial_and_exits_1(tmp_path):
    out = tmp_path / "c.csv"
    res = run_cli(["flow", "coulomb", "--g0", "5.0", "--output", str(out)],
                  tmp_path)
    assert res.returncode == 1
    assert "IntegrationAbortError" in res.stderr
    assert read_csv_rows(out) == []  # header only, nothing sampled


def test_flow_kh_tracks_log_solution(tmp_path):
    out = tmp_path / "kh.json"
    res = run_cli(["flow", "kh", "--K", "1", "--lam0", "100",
                   "--lam1", "1e6", "--format", "json",
                   "--output", str(out)], tmp_path)
    assert res.returncode == 0, res.stderr
    rows = json.loads(out.read_text())["rows"]
    target = rows[0]["energy"]
    for row in rows:
        assert abs(row["coupling"] * math.log(row["lambda"]) - 1.0) < 1e-10
        assert abs(row["energy"] - target) < 1e-10 * abs(target)


def test_flow_on_fixed_point_conserves_energy(tmp_path):
    out = tmp_path / "fp.json"
    res = run_cli(["flow", "quartic", "--start-on-fixed-point",
                   "--lam0", "100", "--lam1", "10000", "--format", "json",
                   "--output", str(out)], tmp_path)
    assert res.returncode == 0, res.stderr
    energies = [r["energy"] for r in json.loads(out.read_text())["rows"]]
    assert max(energies) - min(energies) < 1e-4


def test_kh_scan_limits(tmp_path):
    out = tmp_path / "scan.json"
    res = run_cli(["kh-scan", "--eps-exp", "10", "--lambdas", "100,1000",
                   "--format", "json", "--output", str(out)], tmp_path)
    assert res.returncode == 0, res.stderr
    payload = json.loads(out.read_text())
    for row in payload["rows"]:
        assert abs(row["small_field_energy"] + 0.49) < 1e-10
        assert 0.8 < row["c2_over_log"] < 1.2
    branches = payload["limits"]["strong_field"]["branches"]
    assert abs(branches[0] - 103.556205277) < 1e-6
    assert abs(branches[1] - 23.7677491966) < 1e-6


def test_kh_scan_rejects_low_cutoffs(tmp_path):
    res = run_cli(["kh-scan", "--lambdas", "1.5,100"], tmp_path)
    assert res.returncode == 2
    assert "config error" in res.stderr


def test_oracle_morse(tmp_path):
    out = tmp_path / "m.json"
    res = run_cli(["oracle", "morse", "--A", "9", "--format", "json",
                   "--output", str(out)], tmp_path)
    assert res.returncode == 0, res.stderr
    row = json.loads(out.read_text())["rows"][0]
    exact = -9.0 + math.sqrt(4.5) - 0.125
    assert abs(row["refinement_estimate"] - exact) < 1e-6
    assert row["parity"] == "none"


def test_paper_suite_passes(tmp_path):
    res = run_cli(["paper-suite"], tmp_path)
    assert res.returncode == 0, res.stdout + res.stderr
    assert "9/9 criteria passed" in res.stdout
