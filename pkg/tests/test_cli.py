import json
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from fairclust import IngestSpec, brute_force_fair_radius, load_csv, random_instance
from fairclust import cli
from fairclust.instances import write_csv

DATA = Path(__file__).parent / "data"


def run(args, capsys):
    code = cli.main([str(a) for a in args])
    out = capsys.readouterr().out
    return code, out


def test_radii_ell_equals_n(capsys):
    code, out = run(["radii", "--gen", "random", "--n", 10, "--k", 10], capsys)
    lines = out.splitlines()
    assert code == 0 and lines[0] == "point_index,r_k"
    assert [float(l.split(",")[1]) for l in lines[1:]] == [0.0] * 10


def test_radii_match_oracle(tmp_path, capsys):
    ps = random_instance(40, 3, 3, 0.2, seed=1)
    path = tmp_path / "p.csv"
    write_csv(ps, path)
    code, out = run(["radii", "--input", path, "--k", 6], capsys)
    assert code == 0
    got = [float(l.split(",")[1]) for l in out.splitlines()[1:]]
    assert got == [brute_force_fair_radius(ps, 6, x) for x in range(40)]


def test_diabetes_schema_accepted(tmp_path, capsys):
    path = tmp_path / "diabetes.csv"
    rng = np.random.default_rng(0)
    rows = ["encounter,age,time-in-hospital"] + [f"e{i},{rng.integers(1, 10)},{rng.integers(1, 14)}" for i in range(50)]
    path.write_text("\n".join(rows) + "\n")
    code, out = run(["radii", "--input", path, "--columns", "age,time-in-hospital", "--k", 5], capsys)
    assert code == 0 and len(out.splitlines()) == 51


def test_greedy_equals_pipeline_start(capsys):
    base = ["cluster", "--gen", "random", "--n", 80, "--k", 4, "--seed", 2]
    code, g = run(base + ["--algo", "greedy"], capsys)
    assert code == 0
    code, f = run(base, capsys)
    assert code == 0
    g, f = json.loads(g), json.loads(f)
    assert g["balls"] == f["balls"]
    assert f["cost"] <= g["cost"]
    assert f["audit"]["max_fairness_ratio"] <= 7 * f["alpha"]


def test_oracle_bound_with_t4(capsys):
    code, out = run(["cluster", "--gen", "random", "--n", 12, "--k", 2, "--t", 4, "--alpha", 2,
                     "--oracle", "--seed", 3], capsys)
    data = json.loads(out)
    assert code == 0
    assert data["audit"]["cost_bound"] == 84.0
    assert data["cost"] <= 84 * data["audit"]["opt_cost"]


@pytest.mark.parametrize("algo", ["fair_k_center", "vanilla_local_search"])
def test_other_algorithms(algo, capsys):
    code, out = run(["cluster", "--gen", "bank", "--n", 100, "--k", 5, "--algo", algo], capsys)
    data = json.loads(out)
    assert code == 0 and len(data["centers"]) == 5
    if algo == "fair_k_center":
        assert 1.0 <= data["eta"] <= 2.0


def test_compare_matches_golden(capsys):
    code, out = run(["compare", "--gen", "random", "--n", 80, "--d", 2, "--clusters", 4, "--spread", 0.08,
                     "--k-grid", "2,3,4", "--seed", 7, "--dataset", "golden"], capsys)
    assert code == 0
    assert out == (DATA / "golden_compare.csv").read_text()


def test_compare_json_and_single_k(capsys):
    code, out = run(["compare", "--gen", "random", "--n", 50, "--k", 3, "--algo", "greedy",
                     "--algo", "fair_k_center", "--format", "json"], capsys)
    rows = json.loads(out)["rows"]
    assert code == 0 and [r["algorithm"] for r in rows] == ["fair_k_center", "greedy"]


def test_gen_adversarial_columns(capsys):
    code, out = run(["gen", "--gen", "adversarial", "--k", 3, "--n", 12], capsys)
    lines = out.splitlines()
    assert code == 0
    assert lines[0] == "x0,x1,x2,x3,x4"
    assert len(lines) == 13


def test_regenerated_file_reaudits_identically(tmp_path, capsys):
    path = tmp_path / "adv.csv"
    assert cli.main(["gen", "--gen", "adversarial", "--k", "3", "--n", "12", "--out", str(path)]) == 0
    _, direct = run(["cluster", "--gen", "adversarial", "--k", 3, "--n", 12], capsys)
    _, reread = run(["cluster", "--input", path, "--k", 3], capsys)
    assert json.loads(direct) == json.loads(reread)


def test_gen_seed_reproducible(capsys):
    a = run(["gen", "--gen", "random", "--n", 30, "--seed", 5], capsys)[1]
    b = run(["gen", "--gen", "random", "--n", 30, "--seed", 5], capsys)[1]
    c = run(["gen", "--gen", "random", "--n", 30, "--seed", 6], capsys)[1]
    assert a == b != c


def test_subsample_default_caps_at_1000(tmp_path, capsys):
    path = tmp_path / "big.csv"
    write_csv(random_instance(1200, 2, 3, 0.1, seed=0), path)
    _, out = run(["radii", "--input", path, "--k", 5], capsys)
    assert len(out.splitlines()) == 1001
    _, out = run(["radii", "--input", path, "--k", 5, "--subsample", 100], capsys)
    assert len(out.splitlines()) == 101


@pytest.mark.parametrize(
    "args",
    [
        ["radii", "--input", "/nonexistent.csv", "--k", "2"],
        ["radii", "--gen", "random", "--input", "x.csv", "--k", "2"],
        ["radii", "--k", "2"],
        ["cluster", "--gen", "random", "--n", "10", "--k", "11"],
        ["cluster", "--gen", "random", "--n", "10", "--k", "2", "--alpha", "0.5"],
        ["cluster", "--gen", "random", "--n", "10", "--k", "2", "--p", "0.5"],
        ["cluster", "--gen", "random", "--n", "10", "--k", "2", "--t", "7"],
    ],
)
def test_input_errors_exit_2(args, capsys):
    assert cli.main(args) == 2


def test_argparse_errors_exit_2():
    with pytest.raises(SystemExit) as exc:
        cli.main(["cluster", "--gen", "random", "--k", "2", "--cover", "lots"])
    assert exc.value.code == 2


def test_non_convergence_exit_3(capsys):
    code, out = run(["cluster", "--gen", "random", "--n", 100, "--k", 5, "--spread", 0.3, "--max-iters", 0], capsys)
    assert code == 3
    assert json.loads(out)["converged"] is False


def test_failed_audit_exit_4(monkeypatch, capsys):
    monkeypatch.setattr(cli, "fairness_ratio", lambda ps, radii, centers: (1e9, 1e9, None))
    code, _ = run(["cluster", "--gen", "random", "--n", 30, "--k", 3], capsys)
    assert code == 4


def test_module_entry_point(tmp_path):
    out = tmp_path / "g.csv"
    res = subprocess.run(
        [sys.executable, "-m", "fairclust", "gen", "--gen", "random", "--n", "5", "--out", str(out)],
        capture_output=True, text=True,
    )
    assert res.returncode == 0 and res.stdout == ""
    assert load_csv(IngestSpec(out, subsample_size=None)).n == 5
    res = subprocess.run([sys.executable, "-m", "fairclust", "radii", "--k", "2"], capture_output=True, text=True)
    assert res.returncode == 2 and "exactly one" in res.stderr
