from __future__ import annotations

import json
import math
import os
import subprocess
import sys
from pathlib import Path

import jsonschema
import pytest

from divsum.cli import EXIT_INADMISSIBLE, EXIT_TOLERANCE, EXIT_USAGE, load_schema, main

GOLDEN = Path(__file__).parent / "golden" / "cli"
UPDATE = os.environ.get("DIVSUM_UPDATE_GOLDEN") == "1"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


# documented examples -------------------------------------------------------


@pytest.mark.parametrize("argv,expected", [
    (["sum", "natural", "-k", "1", "--output", "exact"], "-1/12"),
    (["sum", "alternating", "-k", "1", "--output", "exact"], "1/4"),
    (["sum", "gf", "--num", "0,1", "--den", "1,1", "-k", "1"], "1/4"),
    (["sum", "apostol", "-k", "1", "--eps", "-1"], "-1/4"),
    (["sum", "apostol", "-k", "1", "--eps", "1/2"], "2"),
    (["table", "bernoulli", "-n", "4"], "0 1\n1 -1/2\n2 1/6\n3 0\n4 -1/30"),
    (["table", "euler0", "-n", "1"], "0 1\n1 -1/2"),
    (["table", "apostol", "-n", "2", "--eps", "-1"], "0 0\n1 -1/2\n2 1/2"),
])
def test_examples(capsys, argv, expected):
    code, out, _ = run(capsys, *argv)
    assert code == 0
    assert out.strip() == expected


def test_gf_sum_diagnostics_name_pole(capsys):
    _, _, err = run(capsys, "sum", "gf", "--num", "0,1", "--den", "1,1", "-k", "1")
    assert "z0 = -1" in err


def test_verify_examples(capsys):
    code, out, _ = run(capsys, "verify", "homothetic", "-k", "1")
    assert code == 0 and out.split() == ["lhs", "1/4", "rhs", "1/4", "PASS"]

    code, out, _ = run(capsys, "verify", "fourier", "--num", "0,1", "--den", "1,1", "-n", "3",
                       "--output", "json")
    data = json.loads(out)
    assert code == 0 and data["pass"]
    assert data["details"]["exact"] == "3"
    assert abs(data["details"]["quadrature"][0] - 3) < 1e-4

    code, out, _ = run(capsys, "verify", "mollifier", "--num", "0,1", "--den", "1,1", "-k", "1",
                       "--output", "json")
    data = json.loads(out)
    assert code == 0 and data["pass"]
    assert abs(data["trace"][-1]["value"][0] - 0.25) < 1e-4


def test_decimal_output_carries_exactness_flag(capsys):
    _, out, _ = run(capsys, "sum", "natural", "-k", "1", "--output", "decimal")
    assert out.strip() == "-0.083333333333333333 exact=true"
    _, out, _ = run(capsys, "sum", "apostol", "-k", "1", "--eps", "3/5+4/5i", "--output", "decimal")
    assert out.strip().endswith("exact=true")


# exit codes ----------------------------------------------------------------


@pytest.mark.parametrize("argv,code", [
    ([], EXIT_USAGE),
    (["frobnicate"], EXIT_USAGE),
    (["sum", "alternating"], EXIT_USAGE),
    (["sum", "alternating", "-k", "x"], EXIT_USAGE),
    (["sum", "alternating", "-k", "0"], EXIT_USAGE),
    (["sum", "alternating", "-k", "201"], EXIT_USAGE),
    (["sum", "gf", "--num", "0,x", "--den", "1,1", "-k", "1"], EXIT_USAGE),
    (["sum", "gf", "--num", "0,1", "--den", "", "-k", "1"], EXIT_USAGE),
    (["sum", "gf", "--num", "0,1", "--den", "1,1", "--den-roots", "1^1", "-k", "1"], EXIT_USAGE),
    (["sum", "apostol", "-k", "1", "--eps", "1/0"], EXIT_USAGE),
    (["table", "bernoulli", "-n", "-1"], EXIT_USAGE),
    (["verify", "fourier", "--num", "0,1"], EXIT_USAGE),
    (["sum", "gf", "--num", "0,1", "--den", "0", "-k", "1"], EXIT_USAGE),
    (["sum", "output"], EXIT_USAGE),
    (["sum", "gf", "--num", "0,1", "--den", "1,-1", "-k", "1"], EXIT_INADMISSIBLE),
    (["sum", "gf", "--num", "1,1", "--den", "1,1", "-k", "1"], EXIT_INADMISSIBLE),
    (["sum", "gf", "--num", "0,1", "--den", "0,1", "-k", "1"], EXIT_INADMISSIBLE),
    (["sum", "gf", "--num", "0,1", "--den", "1,-2", "-k", "1"], EXIT_INADMISSIBLE),
    (["sum", "gf", "--num", "0,1", "--den", "1,2,1", "-k", "1"], EXIT_INADMISSIBLE),
    (["sum", "gf", "--num", "0,1", "--den", "1,1,1", "-k", "1"], EXIT_INADMISSIBLE),
    (["sum", "apostol", "-k", "1", "--eps", "1"], EXIT_INADMISSIBLE),
    (["sum", "apostol", "-k", "1", "--eps", "2"], EXIT_INADMISSIBLE),
    (["table", "apostol", "-n", "2", "--eps", "1"], EXIT_INADMISSIBLE),
    (["verify", "fourier", "--num", "0,1", "--den", "1,-1", "-n", "1"], EXIT_INADMISSIBLE),
    (["verify", "mollifier", "--num", "0,1", "--den", "1,1", "-k", "9"], EXIT_TOLERANCE),
    (["verify", "fourier", "--num", "0,1", "--den", "1,1", "-n", "2", "--tol", "1e-30"], EXIT_TOLERANCE),
])
def test_exit_codes(capsys, argv, code):
    assert run(capsys, *argv)[0] == code


def test_max_k_is_overridable(capsys):
    code, out, _ = run(capsys, "sum", "alternating", "-k", "201", "--max-k", "300")
    assert code == 0 and out.strip()


def test_tolerance_failure_attaches_trace(capsys):
    code, out, err = run(capsys, "verify", "mollifier", "--num", "0,1", "--den", "1,1", "-k", "9",
                         "--output", "json")
    assert code == EXIT_TOLERANCE
    assert not json.loads(out)["pass"]
    assert '"trace"' in err


def test_inadmissible_message_names_assumption(capsys):
    _, _, err = run(capsys, "sum", "gf", "--num", "0,1", "--den", "1,-1", "-k", "1")
    assert "z0 must satisfy z0 != 1" in err


# JSON output: schema and golden files -------------------------------------

JSON_CASES = {
    "sum_alternating": ["sum", "alternating", "-k", "3"],
    "sum_natural": ["sum", "natural", "-k", "1"],
    "sum_apostol": ["sum", "apostol", "-k", "2", "--eps", "3/5+4/5i"],
    "sum_gf": ["sum", "gf", "--num", "0,1", "--den", "1,1", "-k", "1"],
    "sum_gf_disc": ["sum", "gf", "--num", "0,1/2", "--den", "1,-1/2", "-k", "2"],
    "table_bernoulli": ["table", "bernoulli", "-n", "6"],
    "table_euler0": ["table", "euler0", "-n", "5"],
    "table_apostol": ["table", "apostol", "-n", "3", "--eps", "-1/2"],
    "gf_alternating": ["gf", "--num", "0,1", "--den", "1,1"],
    "gf_double": ["gf", "--num", "0,3", "--den", "25,-30,9"],
    "verify_homothetic": ["verify", "homothetic", "-k", "3"],
    "verify_fourier": ["verify", "fourier", "--num", "0,1", "--den", "1,1", "-n", "3"],
    "verify_fourier_disc": ["verify", "fourier", "--num", "0,1/2", "--den", "1,-1/2", "-n", "2"],
    "verify_mollifier": ["verify", "mollifier", "--num", "0,1", "--den", "1,1", "-k", "1"],
    "verify_pf": ["verify", "pf", "--num", "0,1", "--den", "1,1"],
}


def _close(a, b, path="$"):
    if isinstance(a, float) or isinstance(b, float):
        assert math.isclose(a, b, rel_tol=1e-9, abs_tol=1e-12), f"{path}: {a} != {b}"
    elif isinstance(a, dict):
        assert a.keys() == b.keys(), path
        for key in a:
            _close(a[key], b[key], f"{path}.{key}")
    elif isinstance(a, list):
        assert len(a) == len(b), path
        for i, (x, y) in enumerate(zip(a, b)):
            _close(x, y, f"{path}[{i}]")
    else:
        assert a == b, f"{path}: {a!r} != {b!r}"


@pytest.mark.parametrize("case", list(JSON_CASES))
def test_json_schema_and_golden(capsys, case):
    argv = JSON_CASES[case]
    code, out, _ = run(capsys, *argv, "--output", "json")
    assert code == 0
    data = json.loads(out)
    jsonschema.validate(data, load_schema(argv[0]))
    path = GOLDEN / f"{case}.json"
    if UPDATE:
        path.parent.mkdir(exist_ok=True)
        path.write_text(out)
    golden = json.loads(path.read_text())
    jsonschema.validate(golden, load_schema(argv[0]))
    _close(data, golden)


def test_failed_verification_json_is_schema_valid(capsys):
    _, out, _ = run(capsys, "verify", "mollifier", "--num", "0,1", "--den", "1,1", "-k", "9",
                    "--output", "json")
    jsonschema.validate(json.loads(out), load_schema("verify"))


@pytest.mark.parametrize("command", ["sum", "table", "verify", "gf"])
def test_schemas_are_valid(command):
    jsonschema.Draft202012Validator.check_schema(load_schema(command))


# determinism -------------------------------------------------------------


@pytest.mark.parametrize("argv", [
    ["sum", "apostol", "-k", "5", "--eps", "3/5+4/5i", "--output", "decimal"],
    ["verify", "pf", "--num", "0,1", "--den", "1,1", "--output", "json"],
    ["gf", "--num", "0,1", "--den", "1,1,1", "--output", "json"],
])
def test_byte_identical_reruns(argv):
    cmd = [sys.executable, "-m", "divsum", *argv]
    first = subprocess.run(cmd, capture_output=True, check=False)
    second = subprocess.run(cmd, capture_output=True, check=False)
    assert first.returncode == 0
    assert first.stdout == second.stdout and first.stderr == second.stderr
    assert first.stdout
