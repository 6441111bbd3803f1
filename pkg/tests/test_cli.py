import io
import json
import shutil
import subprocess
import sys

import pytest

from distcount import cli
from distcount.errors import InvariantViolation
from distcount.graph_core import to_graph6
from distcount.families import cycle

C5_EDGES = "a b\nb c\nc d\nd e\ne a\n"


@pytest.fixture
def c5_file(tmp_path):
    p = tmp_path / "c5.txt"
    p.write_text("# five-cycle\n" + C5_EDGES)
    return str(p)


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    return code, (json.loads(out) if out.strip() else None), err


def test_compute(capsys, c5_file):
    code, rep, _ = run_json(capsys, "compute", c5_file, "--k", "3")
    assert code == 0
    assert (rep["k"], rep["L"], rep["D"], rep["aut"]) == (3, "120", "12", "10")
    assert rep["command"] == "compute" and rep["timing_ms"] >= 0


def test_number_and_poly(capsys, c5_file):
    code, rep, _ = run_json(capsys, "number", c5_file)
    assert (code, rep["D_number"]) == (0, 3)
    code, rep, _ = run_json(capsys, "poly", c5_file)
    assert code == 0 and rep["degree"] == 5
    assert rep["coefficients"] == ["0/1", "2/5", "0/1", "-1/2", "0/1", "1/10"]


def test_tree_and_aut(capsys, c5_file, tmp_path):
    code, rep, _ = run_json(capsys, "tree", c5_file)
    assert code == 0 and len(rep["tree"]["nodes"]) == 1
    code, rep, _ = run_json(capsys, "aut", c5_file)
    assert code == 0 and rep["method"] == "oracle" and rep["order"] == "10"
    assert "()" in rep["automorphisms"] and "(a b c d e)" in rep["automorphisms"]
    two = tmp_path / "two.txt"
    two.write_text("0 1\n2 3\n")
    code, rep, _ = run_json(capsys, "tree", str(two))
    assert code == 0 and rep["components"][0]["multiplicity"] == 2
    big = tmp_path / "c12.txt"
    big.write_text("".join(f"{i} {(i + 1) % 12}\n" for i in range(12)))
    code, rep, _ = run_json(capsys, "aut", str(big))
    assert code == 0 and rep["method"] == "decomposition" and rep["order"] == "24"


def test_stdin_and_graph6(capsys, monkeypatch):
    monkeypatch.setattr(sys, "stdin", io.StringIO(to_graph6(cycle(5)) + "\n"))
    code, rep, _ = run_json(capsys, "compute", "-", "--k", "3", "--format", "graph6")
    assert (code, rep["D"]) == (0, "12")
    monkeypatch.setattr(sys, "stdin", io.StringIO(C5_EDGES))
    code, rep, _ = run_json(capsys, "compute", "-", "--k", "2")
    assert (code, rep["D"]) == (0, "0")


def test_plain_output(capsys, c5_file):
    code, out, _ = run(capsys, "compute", c5_file, "--k", "3", "--plain")
    assert code == 0 and "D: 12" in out.splitlines()


def test_exit_codes(capsys, c5_file, tmp_path, monkeypatch):
    code, _, err = run(capsys, "compute", c5_file)
    assert code == cli.EXIT_USAGE and json.loads(err)["error"] == "usage"
    assert run(capsys)[0] == cli.EXIT_USAGE
    assert run(capsys, "compute", c5_file, "--k", "x")[0] == cli.EXIT_USAGE
    assert run(capsys, "compute", str(tmp_path / "missing.txt"), "--k", "2")[0] == cli.EXIT_PARSE
    bad = tmp_path / "bad.txt"
    bad.write_text("a b c\n")
    code, _, err = run(capsys, "compute", str(bad), "--k", "2")
    assert code == cli.EXIT_PARSE and json.loads(err)["error"] == "parse"
    two = tmp_path / "two.txt"
    two.write_text("0 1\n2 3\n")
    assert run(capsys, "poly", str(two))[0] == cli.EXIT_USAGE
    assert run(capsys, "verify", "--max-n", "8")[0] == cli.EXIT_USAGE

    def broken(self, k):
        raise InvariantViolation("forced")
    monkeypatch.setattr(cli.DistinguishingCounter, "count", broken)
    code, _, err = run(capsys, "compute", c5_file, "--k", "2")
    assert code == cli.EXIT_INVARIANT and json.loads(err)["error"] == "invariant"


def test_verify(capsys):
    code, rep, _ = run_json(capsys, "verify", "--max-n", "5", "--max-k", "3")
    assert code == 0 and rep["status"] == "PASS" and rep["graphs"] == 1 + 1 + 2 + 6 + 21
    code, rep, _ = run_json(capsys, "verify", "--max-n", "8", "--family", "TREES", "--jobs", "2")
    assert code == 0 and rep["status"] == "PASS"
    code, rep, _ = run_json(capsys, "verify", "--max-n", "9", "--family", "CYCLES", "--max-k", "6")
    assert code == 0 and rep["skipped"] > 0


def test_bench(capsys):
    code, rep, _ = run_json(capsys, "bench", "--sizes", "40,80", "--seed", "1")
    assert code == 0 and len(rep["runs"]) == 6
    assert {r["family"] for r in rep["runs"]} == {"cycles", "wheels", "sp"}
    assert run(capsys, "bench", "--sizes", "a,b")[0] == cli.EXIT_USAGE


def test_debug_logging(capsys, c5_file, monkeypatch):
    monkeypatch.setenv("DIST_LOG", "debug")
    # basicConfig is a no-op once handlers exist, so run in a fresh interpreter
    out = subprocess.run([sys.executable, "-m", "distcount.cli", "compute", c5_file, "--k", "3"],
                         capture_output=True, text=True)
    assert out.returncode == 0 and json.loads(out.stdout)["D"] == "12"
    assert "DEBUG" in out.stderr


@pytest.mark.skipif(shutil.which("dist") is None, reason="console script not installed")
def test_console_script(c5_file):
    out = subprocess.run(["dist", "number", c5_file], capture_output=True, text=True)
    assert out.returncode == 0 and json.loads(out.stdout)["D_number"] == 3
