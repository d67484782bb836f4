import json
import subprocess
import sys

import pytest

from dedk import instances
from dedk.cli import main
from dedk.graph import is_feasible


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_analyze_uniform(capsys, tmp_path):
    csv_path = tmp_path / "f.csv"
    code, out, _ = run(capsys, "analyze-dist", "--dist", "uniform", "--csv", str(csv_path))
    data = json.loads(out)
    assert code == 0 and abs(data["alpha"] - 0.585786) < 1e-6
    assert csv_path.read_text().startswith("t,F(t),F(t)/(t+1)\n")


def test_lower_bound(capsys):
    code, out, _ = run(capsys, "lower-bound", "--terms", "1:4.5")
    assert code == 0 and json.loads(out)["bound"] > 0.539


def test_round_path(capsys):
    code, out, _ = run(capsys, "round", "--gen", "path:k=3", "--dist", "uniform", "--trials", "1", "--seed", "0")
    data = json.loads(out)
    assert code == 0 and data["status"] == "ok" and data["cost"] >= data["lp_objective"]
    assert is_feasible(instances.path(3), set(data["deleted"]))


def test_reports_are_byte_identical_and_reverify(capsys, tmp_path):
    inst = instances.bipartite(5, 6, 0.5, seed=2, k=3, orient="mixed")
    path = tmp_path / "inst.txt"
    instances.write_instance(inst, path)
    blobs = []
    for dist in ("uniform", "polyd", "bipartite", "auto-structured"):
        for i in range(2):
            rep = tmp_path / f"{dist}{i}.json"
            assert run(capsys, "round", "--input", str(path), "--dist", dist, "--trials", "50", "--seed", "3",
                       "--report", str(rep))[0] == 0
            blobs.append(rep.read_bytes())
        assert blobs[-1] == blobs[-2]
        reloaded = instances.parse_instance(path)
        assert is_feasible(reloaded, set(json.loads(blobs[-1])["deleted"]))


def test_derandomize_flag(capsys):
    code, out, _ = run(capsys, "round", "--gen", "dag:n=8,density=0.5,seed=2,k=2", "--dist", "uniform",
                       "--derandomize", "--grid", "16")
    assert code == 0 and json.loads(out)["method"] == "derandomize:uniform:grid=16"
    code, _, err = run(capsys, "round", "--gen", "path:k=2", "--dist", "bipartite", "--derandomize")
    assert code == 2 and json.loads(err)["error"] == "BadParams"


def test_solve_and_exact(capsys):
    code, out, _ = run(capsys, "solve", "--gen", "layered:L=4,width=3,density=1,seed=7")
    solved = json.loads(out)
    code2, out2, _ = run(capsys, "exact", "--gen", "layered:L=4,width=3,density=1,seed=7")
    exact = json.loads(out2)
    assert code == code2 == 0 and solved["lp_objective"] <= exact["cost"] + 1e-9
    assert exact["status"] == "optimal"


@pytest.mark.parametrize(
    "argv, code, error",
    [
        (["solve", "--gen", "path:k=0"], 2, "BadParams"),
        (["solve", "--input", "/nonexistent/file"], 2, "OSError"),
        (["lower-bound", "--terms", "1:6.283185307179586"], 2, "InvalidCertificate"),
        (["exact", "--gen", "dag:n=12,density=0.5,seed=1,k=3", "--budget", "2"], 4, "BudgetExceeded"),
        (["round", "--gen", "dag:n=8,density=0.6,seed=1", "--dist", "bipartite"], 2, "NotBipartite"),
    ],
)
def test_error_exit_codes(capsys, argv, code, error):
    got, _, err = run(capsys, *argv)
    line = json.loads(err.strip().splitlines()[-1])
    assert got == code and line["error"] == error and line["exit_code"] == code


def test_parse_error_exit(capsys, tmp_path):
    bad = tmp_path / "bad.txt"
    bad.write_text("3 2 1\n0 1 1\n0 q 1\n")
    code, _, err = run(capsys, "solve", "--input", str(bad))
    assert code == 2 and "line 3" in json.loads(err)["message"]


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "dedk", "lower-bound", "--terms", "1:4.5"],
                         capture_output=True, text=True, check=True)
    assert json.loads(res.stdout)["bound"] > 0.539
