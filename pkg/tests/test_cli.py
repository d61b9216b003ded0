import json
import subprocess
import sys

import pytest

from kgrip.cli import build_parser, load_graph, run
from kgrip.errors import GraphFormatError

from conftest import cycle


def call(capsys, *argv):
    rc = run(list(argv))
    out, err = capsys.readouterr()
    return rc, out, err


def call_json(capsys, *argv):
    rc, out, err = call(capsys, *argv)
    assert rc == 0, err
    return json.loads(out)


def test_bounds(capsys):
    rc, out, _ = call(capsys, "bounds", "--gamma", "1", "--alpha", "1")
    doc = json.loads(out)
    assert rc == 0
    assert f"{doc['bian']:.6f}" == f"{doc['liu']:.6f}" == "0.632121"
    assert doc["config"]["gamma"] == 1.0


def test_bounds_domain(capsys):
    assert call(capsys, "bounds", "--gamma", "2", "--alpha", "1")[0] == 1


def test_eta_k1(capsys):
    doc = call_json(capsys, "eta", "Bg", "-k", "1")
    assert doc["eta"] == 1.0
    assert doc["graph"] == "Bg"
    assert doc["steps"][0]["u"] == 0 and doc["steps"][0]["v"] == 2


def test_family_parity(capsys):
    rc, _, err = call(capsys, "family", "--n", "5")
    assert rc == 3
    assert "even" in err


def test_family_json(capsys):
    doc = call_json(capsys, "family", "--n", "6")
    assert doc["nodes"] == 12 and doc["links"] == 14
    assert doc["v"] == [0, 1]


def test_family_verify_csv(capsys):
    rc, out, _ = call(capsys, "family", "--n", "6", "--verify", "--format", "csv")
    assert rc == 0
    lines = out.splitlines()
    assert lines[0].startswith("# config: ")
    assert lines[1] == "n,quantity,closed_form,numeric,rel_err,status"
    assert sum(ln.endswith(",flagged") for ln in lines) == 1


def test_family_verify_failure_exit(capsys):
    assert call(capsys, "family", "--n", "6", "--verify", "--tol", "-1")[0] == 4


def test_gamma_curve(capsys):
    rc, out, _ = call(capsys, "gamma-curve", "--n-from", "4", "--n-to", "8")
    assert rc == 0
    assert out.splitlines()[1] == "n,two_n,gamma_bound,asymptote_6_over_n"
    assert len(out.splitlines()) == 5


def test_resistance(capsys):
    doc = call_json(capsys, "resistance", "Cs", "--omega")
    assert doc["R"] == pytest.approx(9.0)
    assert doc["R_eigen"] == pytest.approx(9.0)
    assert doc["omega"][1][2] == pytest.approx(2.0)
    assert "numba" in doc["config"]


def test_greedy_modes(capsys):
    a = call_json(capsys, "greedy", "Dhc", "-k", "2")
    b = call_json(capsys, "greedy", "Dhc", "-k", "2", "--mode", "naive")
    assert [(s["u"], s["v"]) for s in a["steps"]] == [(s["u"], s["v"]) for s in b["steps"]]
    assert b["mode"] == "naive"


def test_optimal(capsys):
    doc = call_json(capsys, "optimal", "Cs", "-k", "1")
    assert doc["best_set"] == [[1, 2]]
    assert doc["n_evaluated"] == 3


def test_budget_exit(capsys):
    rc, _, err = call(capsys, "optimal", "Cs", "-k", "2", "--budget", "1")
    assert rc == 5
    assert "3" in err


def test_infeasible_exit(capsys):
    assert call(capsys, "greedy", "Cs", "-k", "4")[0] == 3
    assert call(capsys, "resistance", "C?")[0] == 3


def test_parse_error_exit(capsys, tmp_path):
    p = tmp_path / "bad.txt"
    p.write_text("0 1\n1 x\n")
    assert call(capsys, "resistance", str(p))[0] == 2
    assert call(capsys, "resistance", "definitely-not-a-file")[0] == 2
    assert call(capsys, "resistance", "--g6", "B!")[0] == 2


def test_usage_errors(capsys):
    assert call(capsys)[0] == 1
    assert call(capsys, "greedy", "Cs")[0] == 1
    assert call(capsys, "greedy", "Cs", "-k", "1", "--bogus")[0] == 1
    assert call(capsys, "nope")[0] == 1


def test_edge_list_file(capsys, tmp_path):
    p = tmp_path / "c5.txt"
    p.write_text("# five-cycle\n0 1\n1 2\n2 3\n3 4\n4 0\n")
    doc = call_json(capsys, "greedy", str(p), "-k", "1")
    assert doc["initial_R"] == pytest.approx(10.0)
    assert doc["steps"][0]["u"] == 0 and doc["steps"][0]["v"] == 2
    assert load_graph(str(p), "edgelist") == cycle(5)


def test_graph6_file(tmp_path):
    p = tmp_path / "g.g6"
    p.write_text("Dhc\n")
    assert load_graph(str(p)).n == 5
    with pytest.raises(GraphFormatError):
        load_graph("Dhc", "edgelist")


def test_output_file(capsys, tmp_path):
    out = tmp_path / "sweep.csv"
    rc, stdout, _ = call(capsys, "sweep", "--n", "5", "-k", "2", "--jobs", "1", "-o", str(out))
    assert rc == 0 and stdout == ""
    lines = out.read_text().splitlines()
    assert lines[0].startswith("# config: ")
    assert lines[1] == "n,k,graph6,R_initial,R_greedy,R_opt,eta"
    assert lines[-1].startswith("# eta_min=0.93")


def test_sample_sweep_reproducible(capsys):
    argv = ["sample-sweep", "--n", "7", "-k", "2", "--count", "4", "--seed", "9", "--jobs", "1"]
    a = call(capsys, *argv)
    b = call(capsys, *argv)
    assert a[0] == 0 and a[1] == b[1]


def test_jobs_do_not_change_output(capsys):
    base = ["sweep", "--n", "5", "-k", "2", "--format", "json"]
    a = json.loads(call(capsys, *base, "--jobs", "1")[1])
    b = json.loads(call(capsys, *base, "--jobs", "2")[1])
    assert a["records"] == b["records"] and a["summary"] == b["summary"]


def test_gamma_and_curvature(capsys):
    g = call_json(capsys, "gamma", "DBk")
    c = call_json(capsys, "curvature", "DBk")
    assert g["gamma"] == pytest.approx(259 / 277)
    assert c["alpha"] == pytest.approx(0.8705882352941177)
    assert g["n_triples"] == 405
    # the 7-node path has 15 absent links, over the default cap
    rc, _, err = call(capsys, "gamma", "FhCGG")
    assert rc == 5 and "cap" in err


def test_witness(capsys):
    doc = call_json(capsys, "witness", "--max-nodes", "5")
    assert doc["witness"]["n"] == 5 and doc["witness"]["L"] == 5
    assert doc["witness"]["ratio"] == pytest.approx(0.935, abs=1e-3)
    none = call_json(capsys, "witness", "--max-nodes", "4")
    assert none["witness"] is None


def test_help_lists_flags():
    parser = build_parser()
    sub = parser._subparsers._group_actions[0].choices
    assert set(sub) == {"resistance", "greedy", "optimal", "eta", "sweep", "sample-sweep",
                        "gamma", "curvature", "bounds", "witness", "family", "gamma-curve"}
    text = sub["sample-sweep"].format_help()
    for flag in ("--n", "-k", "--count", "--seed", "--catalog", "--format", "--jobs", "--budget",
                 "--output"):
        assert flag in text


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "kgrip", "bounds", "--gamma", "0", "--alpha", "0.5"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["liu"] == 0.0
    proc = subprocess.run([sys.executable, "-m", "kgrip", "--help"], capture_output=True, text=True)
    assert proc.returncode == 0 and "gamma-curve" in proc.stdout
