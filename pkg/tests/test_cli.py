import subprocess
import sys

import pytest

from supertrop import valuations as val
from supertrop.cli import main

from conftest import FIXTURES, load


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def fx(name):
    return FIXTURES / name


def test_verify_m4(capsys):
    code, out, _ = run(capsys, "verify", fx("m4.sr"))
    assert (code, out) == (0, "semiring ✓ bipotent ✓ UIC ✗ (witness 0<a)\n")


def test_verify_corrupt_exits_1(capsys):
    code, out, _ = run(capsys, "verify", fx("corrupt.sr"))
    assert code == 1
    assert "distributive: FAIL at (a 1 1)" in out


def test_verify_ordered_fixture(capsys):
    code, out, _ = run(capsys, "verify", fx("u4.sr"))
    assert code == 0 and out.rstrip().endswith("supertropical ✓ ordered ✓")


def test_enumerate_primes_reuses_module(capsys):
    code, out, _ = run(capsys, "enumerate", "primes", fx("m4.sr"))
    expected = [w.fmt() for w in val.enumerate_primes(load("m4.sr"))]
    assert code == 0
    assert out.splitlines() == expected + [f"{len(expected)} found"]
    assert "{0, a}: PRIME, exponents 1, true no" in expected
    assert "{0, b}: PRIME, exponents 1, true no" in expected


def test_valuate_dump(capsys):
    code, out, _ = run(capsys, "valuate", fx("m4.sr"), "--prime", "0,a")
    lines = out.splitlines()
    assert code == 0
    assert lines[1:5] == ["0\t0", "a\t0", "1\t1", "b\t1"]
    assert "semiring M(M4,{0,a})" in lines


def test_dominance_dot(capsys):
    code, out, _ = run(capsys, "dominance", fx("m4.sr"), "--all", "--dot")
    assert code == 0
    assert out.startswith("digraph dominance {\n") and out.endswith("}\n")
    assert '  n5 [label="V {0, a, 1}"];' in out
    assert "  n5 -> n1;" in out  # v_A dominates v_p


def test_quotient_verbs(capsys, tmp_path):
    part = tmp_path / "p.txt"
    part.write_text("partition of U4: {0} {t1} {tβ e}\n", encoding="utf-8")
    code, out, _ = run(capsys, "quotient", fx("u4.sr"), part)
    assert code == 0 and "chain: [0] < [t1] < [e]" in out
    part.write_text("partition of U4: {0 e} {t1} {tβ}\n", encoding="utf-8")
    code, out, _ = run(capsys, "quotient", fx("u4.sr"), part)
    assert code == 1 and "witness 0 t1 e" in out
    code, out, _ = run(capsys, "quotient", fx("u4alt.sr"), "--fiber", "0,tβ,e")
    assert code == 1 and out.startswith("not OCTE: condition (2)")


@pytest.mark.parametrize("argv", [
    ["verify", "missing.sr"],
    ["valuate", str(FIXTURES / "m4.sr"), "--prime", "0,z"],
    ["valuate", str(FIXTURES / "m4.sr")],
    ["ostr", str(FIXTURES / "maxplus_z.sr"), str(FIXTURES / "b.sr"), "--map", "q:r"],
])
def test_usage_errors_exit_2(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2 and err.startswith("error:")


def test_argparse_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2


def test_precondition_failure_exits_1(capsys):
    code, out, _ = run(capsys, "quotient", fx("u4.sr"), "--fiber", "0,t1,e")
    assert code == 1 and "not an ideal" in out


def test_module_entry_point_is_deterministic():
    cmd = [sys.executable, "-m", "supertrop", "verify", str(FIXTURES / "maxplus_z.sr"),
           "--seed", "3", "--budget", "500"]
    a = subprocess.run(cmd, capture_output=True, check=True)
    b = subprocess.run(cmd, capture_output=True, check=True)
    assert a.stdout == b.stdout and a.stdout
