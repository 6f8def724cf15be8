import json
import subprocess
import sys
from pathlib import Path

H3_HEADER = ("t,entropy,I1,I2,rate_direct,rate_fd,eta,eta_lower,eta_upper,"
             "etap,etap_lower,etap_upper,band_lo,band_hi")


def run_cli(*args: str) -> subprocess.CompletedProcess:
    cmd = [sys.executable, "-m", "heatent", *args]
    return subprocess.run(cmd, capture_output=True, text=True)


def test_help():
    proc = run_cli("--help")
    assert proc.returncode == 0
    assert "h3" in proc.stdout and "verify" in proc.stdout


def test_h3_csv(tmp_path: Path):
    out = tmp_path / "sweep.csv"
    proc = run_cli("h3", "--kappa", "1", "--t-start", "0.5", "--t-stop", "4",
                   "--t-count", "5", "--out", str(out))
    assert proc.returncode == 0, proc.stderr
    lines = out.read_text().splitlines()
    assert lines[0] == H3_HEADER
    assert len(lines) == 6
    first = lines[1].split(",")
    assert float(first[0]) == 0.5
    assert float(first[2]) == 1.75  # I1 at kappa=1, t=0.5


def test_h3_json_matches_csv_data(tmp_path: Path):
    args = ["h3", "--kappa", "1", "--t-start", "1", "--t-stop", "2", "--t-count", "3"]
    csv_proc = run_cli(*args)
    json_proc = run_cli(*args, "--format", "json")
    assert csv_proc.returncode == 0 and json_proc.returncode == 0
    rows = [line.split(",") for line in csv_proc.stdout.splitlines()[1:]]
    payload = json.loads(json_proc.stdout)
    assert len(payload) == len(rows) == 3
    for row, record in zip(rows, payload):
        assert float(row[1]) == record["entropy"]
        assert float(row[4]) == record["rate_direct"]


def test_h3_default_grid_is_forty_rows():
    proc = run_cli("h3")
    assert proc.returncode == 0, proc.stderr
    lines = proc.stdout.splitlines()
    assert lines[0] == H3_HEADER
    assert len(lines) == 41
    assert float(lines[1].split(",")[0]) == 0.1
    assert float(lines[-1].split(",")[0]) == 100.0


def test_h3_rejects_bad_kappa():
    proc = run_cli("h3", "--kappa", "-1")
    assert proc.returncode == 2
    assert "kappa" in proc.stderr


def test_h3_rejects_bad_grid():
    proc = run_cli("h3", "--t-start", "0", "--t-stop", "1", "--t-count", "3")
    assert proc.returncode == 2


def test_h3_deterministic_bytes(tmp_path: Path):
    a = tmp_path / "a.csv"
    b = tmp_path / "b.csv"
    args = ["h3", "--kappa", "2", "--t-start", "0.2", "--t-stop", "30",
            "--t-count", "7"]
    assert run_cli(*args, "--out", str(a)).returncode == 0
    assert run_cli(*args, "--out", str(b)).returncode == 0
    assert a.read_bytes() == b.read_bytes()


def test_evolve_circle():
    proc = run_cli("evolve", "--manifold", "circle", "--t-start", "0.01",
                   "--t-stop", "1", "--t-count", "4")
    assert proc.returncode == 0, proc.stderr
    header = proc.stdout.splitlines()[0].split(",")
    assert header[:5] == ["t", "entropy", "fisher", "rate_direct", "rate_fd"]
    assert "rhs_ricci_curvature" in header
    assert "rhs_spectral_gap" in header


def test_evolve_drift_json():
    proc = run_cli("evolve", "--manifold", "torus-drift", "--t-start", "0.25",
                   "--t-stop", "0.5", "--t-count", "2", "--format", "json")
    assert proc.returncode == 0, proc.stderr
    payload = json.loads(proc.stdout)
    assert payload["manifold"] == "torus-drift"
    assert [r["bound_name"] for r in payload["reports"]] == ["drift_curvature"]
    assert all(all(r["satisfied"]) for r in payload["reports"])


def test_bounds_table():
    proc = run_cli("bounds", "--manifold", "sphere", "--t-start", "0.1",
                   "--t-stop", "10", "--t-count", "4")
    assert proc.returncode == 0, proc.stderr
    lines = proc.stdout.splitlines()
    assert lines[0] == ("t,ricci_curvature,gradient_log_sup,spectral_gap,"
                        "euclidean_reference")
    assert len(lines) == 5


def test_verify_all_pass(tmp_path: Path):
    out = tmp_path / "report.json"
    proc = run_cli("verify", "--out", str(out))
    assert proc.returncode == 0, proc.stderr
    report = json.loads(out.read_text())
    assert all(entry["pass"] for entry in report.values())
    assert "moment_table" in report and "band" in report


def test_verify_only_filters():
    proc = run_cli("verify", "--only", "log_sandwich")
    assert proc.returncode == 0, proc.stderr
    report = json.loads(proc.stdout)
    assert list(report) == ["log_sandwich"]


def test_verify_unknown_check():
    proc = run_cli("verify", "--only", "not_a_check")
    assert proc.returncode == 2


def test_verify_injected_fault_names_check():
    proc = run_cli("verify", "--only", "envelopes", "--inject-fault", "envelopes")
    assert proc.returncode == 1
    assert "envelopes" in proc.stderr
    report = json.loads(proc.stdout)
    assert report["envelopes"]["pass"] is False


def test_verify_deterministic_bytes(tmp_path: Path):
    # restricted to the fast closed-form checks; the acceptance suite runs the
    # full-report determinism criterion
    a = tmp_path / "a.json"
    b = tmp_path / "b.json"
    assert run_cli("verify", "--only", "sinh_ratio_bounds", "--out", str(a)).returncode == 0
    assert run_cli("verify", "--only", "sinh_ratio_bounds", "--out", str(b)).returncode == 0
    assert a.read_bytes() == b.read_bytes()


def test_config_file_with_flag_override(tmp_path: Path):
    config = tmp_path / "config.json"
    config.write_text(json.dumps({"kappa": 2.0, "t_start": 1.0, "t_stop": 1.0,
                                  "t_count": 1}))
    base = run_cli("h3", "--config", str(config))
    assert base.returncode == 0, base.stderr
    assert float(base.stdout.splitlines()[1].split(",")[2]) == 3.5  # I1, kappa=2, t=1
    overridden = run_cli("h3", "--config", str(config), "--kappa", "1")
    assert float(overridden.stdout.splitlines()[1].split(",")[2]) == 2.0


def test_config_rejects_unknown_keys(tmp_path: Path):
    config = tmp_path / "config.json"
    config.write_text(json.dumps({"nonsense": 1}))
    proc = run_cli("h3", "--config", str(config))
    assert proc.returncode == 2
