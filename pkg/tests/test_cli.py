import json

import pytest

from ncgeom.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_usage_errors(capsys):
    code, _, _ = run(capsys, "sphere", "--level", "0")
    assert code == 1
    code, _, _ = run(capsys, "torus", "--num", "2", "--den", "4")
    assert code == 1
    code, _, _ = run(capsys, "nonsense")
    assert code == 1


def test_verify_sphere(capsys):
    code, out, err = run(capsys, "verify", "--model", "sphere", "--level", "1")
    assert code == 0
    env = json.loads(out)
    assert env["schema"] == "ncg-report/1"
    assert env["pass"] is True
    assert env["residuals"]["gamma_D_anticommute"] <= 1e-12


def test_verify_susy(capsys):
    code, out, _ = run(capsys, "verify", "--model", "susy", "--level", "1")
    assert code == 0
    env = json.loads(out)
    assert env["min_laplacian_eigenvalue"] == pytest.approx(0.125, abs=1e-9)


def test_verify_brst(capsys):
    code, out, _ = run(capsys, "verify", "--model", "brst", "--level", "1")
    assert code == 0
    env = json.loads(out)
    assert env["residuals"]["build/star^2 = -I"] <= 1e-12
    assert env["residuals"]["build/star Q = Q^adj star"] <= 1e-12


def test_json_determinism(capsys):
    _, out1, _ = run(capsys, "verify", "--model", "sphere", "--level", "1")
    _, out2, _ = run(capsys, "verify", "--model", "sphere", "--level", "1")
    env1 = json.loads(out1)
    env2 = json.loads(out2)
    env1.pop("wall_clock_seconds")
    env2.pop("wall_clock_seconds")
    assert json.dumps(env1, sort_keys=True) == json.dumps(env2, sort_keys=True)


def test_csv_format(capsys):
    code, out, _ = run(capsys, "verify", "--model", "sphere", "--level", "1",
                       "--format", "csv")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "name,passed,observed,expected"
    assert all(",1," in line or line == lines[0] for line in lines)


def test_out_file(tmp_path, capsys):
    target = tmp_path / "report.json"
    code, out, _ = run(capsys, "verify", "--model", "sphere", "--level", "1",
                       "--out", str(target))
    assert code == 0
    assert out == ""
    env = json.loads(target.read_text())
    assert env["pass"] is True


@pytest.mark.slow
def test_sphere_command_full(capsys):
    code, out, err = run(capsys, "sphere", "--level", "1")
    assert code == 0
    env = json.loads(out)
    assert env["betti"] == [5, 0, 0, 5, 0]
    assert env["scalar_curvature"] == pytest.approx(-1.5, abs=1e-9)
    assert "degree" in err or err  # progress goes to stderr only


def test_torus_command_small(capsys):
    # N=3 keeps the full pipeline fast; the continuum structural assertions
    # fail on any finite model, so the exit code contract gives 2
    code, out, _ = run(capsys, "torus", "--num", "1", "--den", "3")
    assert code == 2
    env = json.loads(out)
    assert env["reference_calculus"]["betti"] == [1, 2, 1]
    failed = [a["name"] for a in env["assertions"] if not a["passed"]]
    assert all(name.startswith("spectral quotient") for name in failed)
