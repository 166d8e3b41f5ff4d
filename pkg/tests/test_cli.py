import io
import json
import subprocess
import sys

import pytest

from minority_imp.cli import run_cli


def cli(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run_cli(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture
def ex4(data_dir):
    return str(data_dir / "ex4.txt")


@pytest.fixture
def contradiction(data_dir):
    return str(data_dir / "contradiction.txt")


def test_feasible(ex4, contradiction):
    assert cli("feasible", "--instance", ex4) == (0, "SAT\n", "")
    code, out, _ = cli("feasible", "--instance", contradiction)
    assert code == 0 and out.splitlines() == ["UNSAT", "basis: {1}"]


def test_gb_lex(ex4):
    code, out, _ = cli("gb-lex", "--instance", ex4)
    assert code == 0
    assert out.splitlines() == ["x1 = (x3 ^ x4)", "x2 = (x3 ^ x5 ^ 1)", "free: x3 x4 x5"]
    code, out, _ = cli("gb-lex", "--instance", ex4, "--expand")
    assert "x3^2 - x3" in out.splitlines()


def test_gb_grlex(ex4):
    code, out, _ = cli("gb-grlex", "--instance", ex4, "--degree", "2")
    lines = out.splitlines()
    assert code == 0 and lines[0] == "G2:"
    assert len([ln for ln in lines if ln.startswith("  ")]) == 13
    assert lines[-1] == "B(G2): 1, x5, x4, x3, x2, x1, x4*x5, x2*x4"


def test_member_and_reduce(ex4, tmp_path):
    code, out, _ = cli("member", "--instance", ex4, "--degree", "2", "--poly", "x1 - x3 - x4 + 2*x3*x4")
    assert code == 0 and out.startswith("member")
    code, out, _ = cli("member", "--instance", ex4, "--degree", "2", "--poly", "x1*x2")
    assert code == 1 and out.startswith("non-member")
    poly_file = tmp_path / "q.txt"
    poly_file.write_text("x5^2\n")
    code, out, _ = cli("reduce", "--instance", ex4, "--degree", "2", "--poly", str(poly_file))
    assert (code, out) == (0, "x5\n")


def test_member_on_unsat_instance(contradiction):
    code, out, _ = cli("member", "--instance", contradiction, "--degree", "1", "--poly", "x2")
    assert code == 0 and out.startswith("member")


def test_trace_is_byte_identical_to_golden(ex4, golden_dir):
    code, out, _ = cli("trace", "--instance", ex4, "--degree", "2")
    assert code == 0
    assert out == (golden_dir / "worked_example_trace.txt").read_text()


def test_json_output(ex4):
    code, out, _ = cli("member", "--instance", ex4, "--degree", "2", "--poly", "x4*x5", "--format", "json")
    payload = json.loads(out)
    assert code == 1
    assert set(payload) == {"command", "input_digest", "result", "timings_ms"}
    assert payload["command"] == "member"
    assert payload["result"]["member"] is False
    assert len(payload["input_digest"]) == 64
    _, again, _ = cli("member", "--instance", ex4, "--degree", "2", "--poly", "x4*x5", "--format", "json")
    assert json.loads(again)["input_digest"] == payload["input_digest"]
    code, out, _ = cli("trace", "--instance", ex4, "--degree", "2", "--format", "json")
    rows = json.loads(out)["result"]["iterations"]
    assert len(rows) == 20 and rows[18]["branch"] == "G2"


def test_verify(ex4):
    code, out, _ = cli("verify", "--instance", ex4, "--degree", "2")
    assert code == 0 and json.loads(out)["match"]
    code, out, _ = cli("verify", "--count", "5", "--max-vars", "6", "--seed", "11")
    assert code == 0 and out.splitlines()[-1] == "match"


@pytest.mark.parametrize(
    "argv, code",
    [
        (["member", "--degree", "2", "--poly", "x1"], 2),
        (["gb-grlex"], 2),
        (["reduce", "--degree", "2"], 2),
        (["gb-grlex", "--degree", "0"], 2),
        (["frobnicate"], 2),
        (["feasible", "--instance", "/nonexistent/file"], 2),
    ],
)
def test_usage_errors(argv, code, ex4):
    argv = list(argv)
    if argv[0] in {"gb-grlex", "reduce"} and "--instance" not in argv:
        argv += ["--instance", ex4]
    assert cli(*argv)[0] == code


def test_degree_too_high_is_usage_error(ex4):
    code, _, err = cli("member", "--instance", ex4, "--degree", "1", "--poly", "x1*x2")
    assert code == 2 and "degree" in err


def test_parse_errors(tmp_path, ex4):
    bad = tmp_path / "bad.txt"
    bad.write_text("vars 2\nxor x1 x2 = 3\n")
    assert cli("feasible", "--instance", str(bad))[0] == 3
    nonclosed = tmp_path / "nc.txt"
    nonclosed.write_text("vars 2\nrel (x1 x2) { 00 01 10 }\n")
    assert cli("feasible", "--instance", str(nonclosed))[0] == 3
    assert cli("member", "--instance", ex4, "--degree", "2", "--poly", "x1 +")[0] == 3


def test_resource_limit(tmp_path):
    wide = tmp_path / "wide.txt"
    wide.write_text("vars 8\nxor x1 x2 x3 x4 x5 x6 x7 x8 = 0\n")
    assert cli("gb-lex", "--instance", str(wide), "--expand", "--cap", "4")[0] == 4


def test_module_entry_point(ex4):
    proc = subprocess.run([sys.executable, "-m", "minority_imp", "feasible", "--instance", ex4],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout == "SAT\n"
