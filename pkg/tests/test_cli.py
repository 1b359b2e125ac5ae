import json
import subprocess
import sys

import pytest

from fpa_workbench import cli


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_resolve_bruteforce(capsys):
    code, out, _ = run(capsys, "resolve", "--m", "1", "--steps", "4", "--engine", "bruteforce")
    assert code == 0 and out.strip() == "1,4,15,56,209"


def test_resolve_both_engines(capsys):
    code, out, _ = run(capsys, "resolve", "--m", "2", "--steps", "4", "--engine", "both")
    assert code == 0
    assert out.splitlines() == ["bruteforce: 1,4,15,56,209", "symbolic: 1,4,15,56,209"]


def test_symbolic_rejects_m1(capsys):
    code, _, err = run(capsys, "resolve", "--m", "1", "--engine", "symbolic")
    assert code != 0 and "m >= 2" in err


def test_poincare_fine_json(capsys):
    code, out, _ = run(capsys, "poincare", "--m", "2", "--order", "3", "--fine")
    data = json.loads(out)
    assert code == 0
    assert data["fine"]["numerator_terms"] == 2
    assert data["fine"]["closed_form_matches"] is True
    assert data["specialized"]["expansion"] == [1, 4, 15, 56]
    assert data["specialized"]["raw"]["denominator"] == [1, -3, -3, 1]
    assert data["ehrhart_ring"] == {"numerator": [1, 4, 6, 4, 1], "denominator": [1, -4, 1]}


def test_poincare_m1(capsys):
    code, out, _ = run(capsys, "poincare", "--m", "1", "--order", "4")
    assert code == 0 and json.loads(out)["specialized"]["expansion"] == [1, 4, 15, 56, 209]
    code, _, _ = run(capsys, "poincare", "--m", "1", "--fine")
    assert code != 0


def test_koszul(capsys):
    code, out, _ = run(capsys, "koszul", "--m", "1", "--order", "10")
    assert code == 0 and out.strip() == "KOSZUL: functional equation holds to z^10"
    code, out, _ = run(capsys, "koszul", "--m", "2", "--order", "10")
    assert out.startswith("NOT KOSZUL") and "z^2" in out


def test_algebra_and_pip(capsys):
    code, out, _ = run(capsys, "algebra", "--m", "3")
    assert code == 0 and "isomorphism: OK" in out and "dim 14" in out
    code, out, _ = run(capsys, "pip", "--m", "1", "--format", "csv")
    lines = out.strip().splitlines()
    assert code == 0 and lines[0] == "index,height,coords,generator" and len(lines) == 7


def test_csv_betti_table(capsys, tmp_path):
    path = tmp_path / "betti.csv"
    code, out, _ = run(capsys, "resolve", "--m", "2", "--steps", "3", "--format", "csv", "--output", str(path))
    rows = path.read_text().splitlines()
    assert code == 0 and out.strip() == "1,4,15,56"
    assert rows[0].startswith("engine,i,total,")
    assert [r.split(",")[2] for r in rows[1:]] == ["1", "4", "15", "56"]


@pytest.mark.parametrize("argv", [
    ["resolve", "--m", "2", "--steps", "3", "--engine", "both", "--format", "json"],
    ["poincare", "--m", "3", "--order", "4", "--fine"],
    ["algebra", "--m", "2", "--format", "json"],
])
def test_deterministic_output(capsys, tmp_path, argv):
    a, b = tmp_path / "a", tmp_path / "b"
    assert cli.main(argv + ["--output", str(a)]) == 0
    assert cli.main(argv + ["--output", str(b)]) == 0
    capsys.readouterr()
    assert a.read_bytes() == b.read_bytes()


def test_bad_arguments(capsys):
    with pytest.raises(SystemExit):
        cli.main(["resolve", "--m", "0"])
    with pytest.raises(SystemExit):
        cli.main(["resolve", "--m", "2", "--engine", "magic"])
    assert cli.main(["resolve", "--m", "2", "--workers", "0"]) == 2


def test_verify_m2_exits_zero():
    proc = subprocess.run([sys.executable, "-m", "fpa_workbench", "verify", "--m", "2"],
                          capture_output=True, text=True, timeout=600)
    assert proc.returncode == 0, proc.stdout + proc.stderr
    lines = [l for l in proc.stdout.splitlines() if l.startswith("criterion")]
    assert len(lines) == 9 and all(": PASS" in l for l in lines)
