import io
import json

import pytest

from nodalcy.cli import main
from nodalcy.hypersurface import random_nodal_model, serialize


def run(argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(argv, out, err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture(scope="module")
def small_model(tmp_path_factory):
    path = tmp_path_factory.mktemp("models") / "random.json"
    path.write_text(json.dumps(serialize(random_nodal_model(6, seed=3))))
    return path


def test_schoen_writes_model(tmp_path):
    path = tmp_path / "m.json"
    code, out, _ = run(["schoen", "--dim", "3", "--out", str(path)])
    assert code == 0
    assert json.loads(out)["node_count"] == 125
    assert len(json.loads(path.read_text())["nodes"]) == 125


def test_schoen_bad_dimension():
    code, _, err = run(["schoen", "--dim", "4"])
    assert code == 1
    assert json.loads(err)["error"] == "InvalidDimension"


def test_analyze_report(small_model):
    code, out, _ = run(["analyze", "--input", str(small_model), "--power-check",
                        "--modular-primes", "11,31"])
    assert code == 0
    rep = json.loads(out)
    assert rep["model"]["node_count"] == 6
    assert rep["result"]["smoothable"] is True
    assert rep["result"]["node_verification"]["all_odp"]
    assert "timings" in rep


def test_analyze_is_byte_stable(small_model):
    argv = ["analyze", "--input", str(small_model), "--power-check", "--modular-primes", "11", "--no-timings"]
    assert run(argv)[1] == run(argv)[1]


def test_analyze_markdown(small_model):
    code, out, _ = run(["analyze", "--input", str(small_model), "--format", "markdown", "--no-timings"])
    assert code == 0 and out.startswith("# Smoothing analysis")


def test_analyze_partial_mode(small_model):
    code, out, _ = run(["analyze", "--input", str(small_model), "--mode", "partial", "--subsample", "4",
                        "--verify-sample", "3", "--no-timings"])
    assert code == 0
    res = json.loads(out)["result"]
    assert res["partial"] is True
    assert res["node_verification"] == {"all_odp": True, "complete": False, "hessian_ranks": [4], "sample_size": 3}


def test_analyze_rejects_bad_prime(small_model):
    code, _, err = run(["analyze", "--input", str(small_model), "--modular-primes", "13"])
    assert code == 1 and json.loads(err)["error"] == "BadPrime"


def test_analyze_budget_exit_code(tmp_path):
    # dim K = 4, so reaching it takes four products against a budget of one
    path = tmp_path / "r.json"
    path.write_text(json.dumps(serialize(random_nodal_model(4, seed=0))))
    code, _, err = run(["analyze", "--input", str(path), "--power-check", "--budget", "1"])
    assert code == 2
    assert json.loads(err)["error"] == "OutOfBudget"


def test_analyze_missing_file(tmp_path):
    code, _, err = run(["analyze", "--input", str(tmp_path / "nope.json")])
    assert code == 1 and json.loads(err)["error"] == "SchemaError"


def test_verify_nodes(small_model):
    code, out, _ = run(["verify-nodes", "--input", str(small_model)])
    assert code == 0
    assert json.loads(out)["all_odp"] is True


def test_bott():
    assert run(["bott", "--n", "2", "--p", "1", "--q", "1", "--m", "0"])[1] == "1\n"
    assert run(["bott", "--n", "3", "--p", "3", "--q", "3", "--m", "-5"])[1] == "56\n"


def test_quadric_table_formats():
    code, out, _ = run(["quadric-table", "--n", "5", "--k", "3", "--jmin", "-2", "--jmax", "3"])
    assert code == 0
    assert "3,1,2,1" in out.splitlines()
    code, out, _ = run(["quadric-table", "--n", "5", "--k", "3", "--jmin", "0", "--jmax", "5", "--format", "markdown"])
    assert "| (3,1) | 0 | 0 | 1 | 0 | ? | ? |" in out
    code, _, err = run(["quadric-table", "--n", "3", "--k", "2", "--jmin", "0", "--jmax", "1"])
    assert code == 1 and json.loads(err)["error"] == "UnsupportedDimension"


def test_rq():
    code, out, _ = run(["rq", "--n", "5", "--mul", "eta,A+B"])
    assert code == 0 and json.loads(out)["product"] == "0"
    out = json.loads(run(["rq", "--n", "5", "--mul", "A,A"])[1])
    assert out["determined"] is False
    code, _, _ = run(["rq", "--n", "5", "--mul", "A"])
    assert code == 1


def test_unknown_command_and_usage():
    code, _, err = run(["frobnicate"])
    assert code == 1 and json.loads(err)["error"] == "UnknownCommand"
    assert run([])[0] == 1
    assert run(["bott", "--n", "x"])[0] == 1
