import subprocess
import sys

import pytest

from twistfe.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    kv = dict(line.split("=", 1) for line in out.splitlines() if "=" in line and not line.startswith("#"))
    return code, out, kv


def test_eisenstein_builder(tmp_path, capsys):
    path = tmp_path / "e4.txt"
    code, _, kv = run(capsys, "eisenstein", "--k", "4", "--xi1", "1.0", "--xi2", "1.0", "--count", "1000", "-o", str(path))
    assert code == 0 and kv["pass"] == "true"
    lines = path.read_text().splitlines()
    assert lines[0].startswith("# k=4 N=1 chi=1.0 X=1000")
    assert lines[6] == "6 252 0"


def test_eisenstein_bad_input_is_config_error(capsys):
    code, out, kv = run(capsys, "eisenstein", "--k", "3", "--xi1", "1.0", "--xi2", "1.0")
    assert code == 2 and "ParityError" in kv["error"]
    code, _, _ = run(capsys, "eisenstein", "--k", "4", "--xi1", "5.9", "--xi2", "1.0")
    assert code == 2


@pytest.fixture
def delta_file(tmp_path, capsys):
    path = tmp_path / "delta.txt"
    assert main(["eta", "--spec", "1^24", "--count", "1000", "-o", str(path)]) == 0
    capsys.readouterr()
    return path


def test_verify_fe_delta_file(delta_file, capsys):
    code, out, kv = run(capsys, "verify-fe", "--coeffs", str(delta_file), "--tol", "1e-8")
    assert code == 0 and kv["pass"] == "true"
    assert abs(float(kv["epsilon_re"]) - 1) < 1e-8
    for key in ("epsilon_re", "epsilon_im", "unimodularity_defect", "max_dispersion", "pass", "X_used", "tol"):
        assert key in kv
    assert out.rstrip().splitlines()[-1] == "pass=true"


def test_verify_fe_corrupted_file(delta_file, tmp_path, capsys):
    lines = delta_file.read_text().splitlines()
    lines[2] = "2 -23.99 0"
    bad = tmp_path / "bad.txt"
    bad.write_text("\n".join(lines) + "\n")
    code, _, kv = run(capsys, "verify-fe", "--coeffs", str(bad), "--tol", "1e-8")
    assert code == 1 and kv["pass"] == "false"
    assert "dispersion" in kv["reason"].split(",")


def test_report_deterministic(capsys):
    _, first, _ = run(capsys, "verify-fe", "--dataset", "level11", "--twist", "3.1", "--tol", "1e-6")
    _, second, _ = run(capsys, "verify-fe", "--dataset", "level11", "--twist", "3.1", "--tol", "1e-6")
    assert first == second


@pytest.mark.parametrize("name", ["delta", "level11", "e4", "e1"])
def test_report_on_bundled_datasets(name, tmp_path, capsys):
    out_file = tmp_path / "report.txt"
    code, out, kv = run(capsys, "--report", str(out_file), "report", "--dataset", name)
    assert code == 0 and kv["pass"] == "true"
    assert out_file.read_text() == out
    for prefix in ("hecke.", "ramanujan.", "matrix."):
        assert kv[prefix + "pass"] == "true"
    if name in ("delta", "level11"):
        for prefix in ("fe.", "sq.", "slash."):
            assert kv[prefix + "pass"] == "true"
    else:
        assert kv["factorization.pass"] == "true"
        assert any(k.startswith("fe.3.") for k in kv)


def test_individual_checks(capsys):
    assert run(capsys, "hecke-check", "--dataset", "level11", "--count", "1000")[0] == 0
    assert run(capsys, "ramanujan-check", "--dataset", "delta", "--q", "3,5,7", "--max-n", "1000")[0] == 0
    assert run(capsys, "sq-check", "--dataset", "level11", "--q", "3", "--tol", "1e-5")[0] == 0
    code, _, kv = run(capsys, "slash-check", "--dataset", "level11", "--gamma", "3,-1;-11,4", "--z", "0.1+1.5i")
    assert code == 0 and float(kv["gamma0_max_residual"]) < 1e-7
    assert run(capsys, "slash-check", "--dataset", "delta", "--random", "2", "--q", "5")[0] == 0
    code, _, kv = run(capsys, "matrix-check", "--N", "23")
    assert code == 0 and kv["failures"] == "0"


def test_failing_hecke_check_exit_1(delta_file, tmp_path, capsys):
    lines = delta_file.read_text().splitlines()
    lines[4] = "4 -1471 0"
    bad = tmp_path / "bad.txt"
    bad.write_text("\n".join(lines) + "\n")
    code, _, kv = run(capsys, "hecke-check", "--coeffs", str(bad))
    assert code == 1 and "multiplicative" in kv["reason"]


@pytest.mark.parametrize(
    "argv",
    [
        ["verify-fe"],
        ["verify-fe", "--dataset", "delta", "--tol", "-1"],
        ["verify-fe", "--dataset", "level11", "--twist", "11.1"],
        ["verify-fe", "--coeffs", "/nonexistent/file.txt"],
        ["verify-fe", "--dataset", "delta", "--s-grid", "abc"],
        ["verify-fe", "--dataset", "e4"],
        ["sq-check", "--dataset", "level11", "--q", "11"],
        ["slash-check", "--dataset", "level11", "--gamma", "0,-1;1,0"],
        ["matrix-check", "--N", "11", "--q", "11"],
        ["nonsense"],
    ],
)
def test_config_errors_exit_2(argv, capsys):
    assert main(argv) == 2


def test_malformed_file_exit_2(tmp_path, capsys):
    bad = tmp_path / "bad.txt"
    bad.write_text("# k=12 N=1 chi=1.0 X=1 C=1.0\n1 2 0\n")
    code, _, kv = run(capsys, "hecke-check", "--coeffs", str(bad))
    assert code == 2 and "NotNormalizedError" in kv["error"]


def test_console_script_runs():
    proc = subprocess.run(
        [sys.executable, "-m", "twistfe.cli", "matrix-check", "--N", "4"], capture_output=True, text=True, check=False
    )
    assert proc.returncode == 0 and proc.stdout.rstrip().endswith("pass=true")
