#!/usr/bin/env python3
"""
Test the command line and the query layer it shares with the service
"""
import io
import json
import os
import tempfile
from contextlib import redirect_stderr, redirect_stdout

from isoquot_cli import insertion_arg, main
from isoquot_errors import InvalidQuery
from queries import InvariantQuery, evaluate_query


def _run(argv):
    out, err = io.StringIO(), io.StringIO()
    with redirect_stdout(out), redirect_stderr(err):
        code = main(argv)
    return code, out.getvalue(), err.getvalue()


def test_query_from_dict():
    print("🧪 Query parsing")
    q = InvariantQuery.from_dict({"kind": "a_sympl", "N": 4, "g": 1, "d": 1, "m1": 3, "m2": 0})
    assert q.kind == "a-sympl"
    assert q.int_param("N") == 4
    result = evaluate_query(q)
    assert result.to_dict()["value"] == "12"
    assert result.method == "closed_form"
    for payload in ({"N": 4}, {"kind": "nope"}):
        try:
            evaluate_query(InvariantQuery.from_dict(payload))
            assert False, f"{payload} should be rejected"
        except InvalidQuery:
            pass
    print("✅ queries ok")


def test_a_sympl_command():
    print("🧪 isoquot a-sympl")
    code, out, _ = _run(["a-sympl", "--N", "4", "--g", "1", "--d", "1", "--m1", "3", "--m2", "0"])
    assert code == 0
    payload = json.loads(out)
    assert payload["value"] == "12"
    assert payload["params"] == {"N": 4, "g": 1, "d": 1, "m1": 3, "m2": 0}
    print(f"✅ {out.strip()}")


def test_grw_command():
    code, out, _ = _run(["grw", "--space", "sg", "--n", "2", "--g", "1", "--d", "0", "--m1", "0", "--m2", "0"])
    assert code == 0
    assert json.loads(out)["value"] == "4"


def test_euler_csv():
    code, out, _ = _run(["euler", "--N", "4", "--dmax", "3", "--topological"])
    assert code == 0
    assert out == "d,value\n0,4\n1,16\n2,40\n3,80\n"


def test_plot_data():
    with tempfile.TemporaryDirectory() as tmp:
        path = os.path.join(tmp, "etop.tsv")
        code, out, _ = _run(["plot-data", "--N", "4", "--dmax", "1", "--topological", "--out", path])
        assert code == 0
        assert json.loads(out) == {"out": path, "rows": 2}
        with open(path) as f:
            lines = f.read().splitlines()
    assert lines[0] == "d\tabs_evir\tlog10_abs_evir"
    assert lines[1] == "0\t4\t0.602059991328"
    assert lines[2] == "1\t16\t1.204119982656"


def test_errors():
    print("🧪 Exit codes")
    code, out, err = _run(["a-sympl", "--N", "4", "--g", "0", "--d", "0", "--m1", "2", "--m2", "0"])
    assert code == 1
    assert out == ""
    error = json.loads(err.strip().splitlines()[-1])
    assert error["error"] == "degree_mismatch"
    assert error["details"]["vd"] == 3
    try:
        _run(["a-sympl", "--N", "4"])
        assert False, "argparse should exit"
    except SystemExit as e:
        assert e.code == 2
    print("✅ exit codes ok")


def test_bad_insertion_is_a_usage_error():
    assert insertion_arg("2:3:0;-1/2:1:1") == "2:3:0;-1/2:1:1"
    for bad in ("1:2", "x:1:0", ""):
        try:
            _run(["a-sympl-poly", "--N", "4", "--g", "0", "--d", "0", "--Q", bad])
            assert False, f"{bad!r} should be rejected by the parser"
        except SystemExit as e:
            assert e.code == 2


if __name__ == "__main__":
    print("🧮 CLI tests")
    print("=" * 60)
    test_query_from_dict()
    test_a_sympl_command()
    test_grw_command()
    test_euler_csv()
    test_plot_data()
    test_errors()
    test_bad_insertion_is_a_usage_error()
    print("=" * 60)
    print("✅ All CLI tests passed")
