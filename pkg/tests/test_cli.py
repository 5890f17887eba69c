import json
import subprocess
import sys

import pytest

from biharmonic_ellipsoids.cli import RunConfig, UsageError, config_from_args, main, run
from biharmonic_ellipsoids.verify import DEFAULT_SEED

HEADER = "t,a,b,lambda,mu,normal_bitension_closed,normal_bitension_numeric,tangential_residual,verdict"

COMMANDS = [
    ["verify-theorem1", "--p", "1", "--q", "1", "--c", "2", "--d", "1", "--points", "4"],
    ["verify-theorem2", "--p", "2", "--c", "1", "--d", "1", "--points", "4"],
    ["verify-composition", "--p", "3", "--c", "2", "--d", "1", "--inner", "clifford_pair:1,1", "--points", "3"],
    ["verify-composition", "--p", "3", "--q", "3", "--c", "2", "--d", "1", "--inner", "clifford_pair:1,1",
     "--inner2", "great_sphere:2", "--points", "3"],
    ["classify", "--p", "2", "--q", "1", "--c", "1", "--d", "3", "--locus", "biharmonic"],
    ["classify", "--p", "2", "--q", "1", "--c", "1", "--d", "3", "--a", "0.6", "--b", "2.4"],
    ["bitension", "--p", "1", "--q", "2", "--c", "0.5", "--d", "1", "--t", "0.4", "--points", "3"],
    ["sweep", "--p", "1", "--q", "1", "--c", "2", "--d", "1", "--samples", "16"],
    ["sweep", "--p", "1", "--q", "1", "--c", "2", "--d", "1", "--samples", "16", "--output", "csv"],
]


def invoke(args, tmp_path, name="out"):
    path = tmp_path / name
    status = main(args + ["--out", str(path)])
    return status, path.read_bytes()


def numbers_carry_refs(node):
    if isinstance(node, dict):
        if "value" in node:
            return "paper_ref" in node and isinstance(node["paper_ref"], str)
        return all(numbers_carry_refs(v) for v in node.values())
    if isinstance(node, list):
        return all(numbers_carry_refs(v) for v in node)
    return isinstance(node, bool) or not isinstance(node, (int, float))


def test_verify_torus_report(tmp_path):
    status, raw = invoke(COMMANDS[0], tmp_path)
    assert status == 0
    rep = json.loads(raw)
    assert rep["schema"] == "bitension-report/1" and rep["passed"]
    assert rep["results"]["lambda"]["value"] == pytest.approx(1 / 6, rel=1e-14)
    assert rep["results"]["numeric_tau2_norm"]["value"] < 1e-4
    assert rep["config"]["seed"]["value"] == DEFAULT_SEED
    assert numbers_carry_refs(rep)


def test_verify_hypersphere_both_signs(tmp_path):
    status, raw = invoke(COMMANDS[1], tmp_path)
    rep = json.loads(raw)
    assert status == 0
    assert rep["results"]["b_plus"]["b"]["value"] > 0 > rep["results"]["b_minus"]["b"]["value"]


def test_sweep_csv(tmp_path):
    status, raw = invoke(["sweep", "--p", "1", "--q", "1", "--c", "2", "--d", "1", "--samples", "64",
                          "--output", "csv"], tmp_path)
    lines = raw.decode("utf-8").split("\n")
    assert status == 0
    assert lines[0] == HEADER
    assert lines[-1] == "" and len(lines) == 66
    assert all(len(line.split(",")) == 9 for line in lines[1:-1])
    assert "e+" in lines[1] or "e-" in lines[1]


@pytest.mark.parametrize("args", COMMANDS, ids=lambda a: a[0] + "-" + a[-1])
def test_determinism(tmp_path, args):
    s1, first = invoke(args, tmp_path, "one")
    s2, second = invoke(args, tmp_path, "two")
    assert s1 == s2 == 0
    assert first == second
    if "csv" not in args:
        assert numbers_carry_refs(json.loads(first))


def test_bitension_at_minimal_radii(tmp_path):
    # Clifford torus in the round sphere: lambda = 0, so tau itself is checked
    r = str(0.5 ** 0.5)
    status, raw = invoke(["bitension", "--p", "1", "--q", "1", "--c", "1", "--d", "1", "--a", r, "--b", r],
                         tmp_path)
    report = json.loads(raw)
    assert status == 0 and report["passed"]
    assert report["checks"][0]["name"] == "minimal radii: |tau|"
    assert report["checks"][0]["measured"]["value"] <= 1e-8


def test_seed_changes_points(tmp_path):
    _, a = invoke(COMMANDS[6], tmp_path, "a")
    _, b = invoke(COMMANDS[6] + ["--seed", "7"], tmp_path, "b")
    assert a != b


def test_stdout(capsys):
    assert main(COMMANDS[4]) == 0
    assert json.loads(capsys.readouterr().out)["results"]["verdict"] == "proper_biharmonic"


@pytest.mark.parametrize("args", [
    ["nonsense"],
    ["classify", "--p", "1", "--q", "1", "--c", "1", "--d", "1"],
    ["classify", "--p", "1", "--q", "1", "--c", "1", "--d", "1", "--t", "0.3", "--locus", "minimal"],
    ["verify-theorem1", "--p", "1", "--c", "1", "--d", "1"],
    ["verify-theorem2", "--p", "1", "--q", "1", "--c", "1", "--d", "1"],
    ["classify", "--p", "1", "--q", "1", "--c", "1", "--d", "1", "--a", "0.5", "--b", "0.5"],
    ["classify", "--p", "1", "--q", "1", "--c", "1", "--d", "1", "--t", "0.3", "--output", "csv"],
    ["sweep", "--p", "1", "--q", "1", "--c", "1", "--d", "1", "--h1", "1.0"],
    ["verify-composition", "--p", "2", "--c", "1", "--d", "1", "--inner", "great_sphere:2"],
])
def test_usage_errors(capsys, args):
    assert main(args) == 1
    assert "error" in capsys.readouterr().err


def test_io_error(tmp_path, capsys):
    args = COMMANDS[4] + ["--out", str(tmp_path / "missing" / "x.json")]
    assert main(args) == 1
    assert "cannot write" in capsys.readouterr().err


def test_verification_failure_exit_code(tmp_path, monkeypatch):
    # a huge tolerance calls a generic torus minimal, which the numerics refute
    monkeypatch.setenv("BITENSION_TOL", "10")
    status, raw = invoke(["classify", "--p", "1", "--q", "1", "--c", "2", "--d", "1", "--t", "0.3"], tmp_path)
    rep = json.loads(raw)
    assert status == 2
    assert rep["results"]["verdict"] == "minimal" and not rep["passed"]
    assert rep["config"]["tolerance"]["value"] == 10.0


def test_tolerance_env(monkeypatch):
    assert config_from_args(COMMANDS[4], {"BITENSION_TOL": "1e-9"}).tol == 1e-9
    with pytest.raises(UsageError):
        config_from_args(COMMANDS[4], {"BITENSION_TOL": "-1"})


def test_run_config_direct():
    status, text = run(RunConfig("classify", 1, 1, 1.0, 1.0, locus="minimal"))
    assert status == 0 and '"verdict": "minimal"' in text
    with pytest.raises(UsageError):
        RunConfig("sweep", 1, 1, output="xml")


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "biharmonic_ellipsoids"] + COMMANDS[4],
                         capture_output=True, text=True, check=False)
    assert out.returncode == 0
    assert json.loads(out.stdout)["schema"] == "bitension-report/1"
