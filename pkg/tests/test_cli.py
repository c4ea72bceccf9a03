import json
import subprocess
import sys

import pytest

from groupoidlab.cli import main
from groupoidlab.corpus import data_path
from groupoidlab.suite import (CHECKS, VERBS, CheckReport, SuiteConfig, emit_report, jsonable,
                               run_checks)
from groupoidlab.groupoid import ArrowSet, pair


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr()


def test_counterexample_verb(capsys):
    code, out = run(capsys, "counterexample", "--format", "json-lines")
    rec = json.loads(out.out)
    assert code == 0
    assert rec["witness"]["image_size"] == 3 and rec["witness"]["is_subgroup"] is False


def test_json_lines_key_order(capsys):
    code, out = run(capsys, "masa", "--instance", "expr:pair(2)", "--format", "json-lines")
    lines = out.out.splitlines()
    assert code == 0 and len(lines) == 1
    assert list(json.loads(lines[0])) == ["check", "instance", "status", "witness", "elapsed_ms"]
    assert lines[0].startswith('{"check":')


def test_broken_file_exits_nonzero(capsys):
    code, out = run(capsys, "validate", "--instance", data_path("broken_pair2.txt"))
    assert code == 1
    assert "AxiomViolation" in out.out


def test_parse_error_exits_2(capsys, tmp_path):
    bad = tmp_path / "bad.txt"
    bad.write_text("groupoid g\nunit a\nunit b\narrow x d=a r=b inv=x\ncomp x x = x\nend\n")
    code, out = run(capsys, "validate", "--instance", str(bad))
    assert code == 2 and "bad.txt:5:" in out.err
    code, _ = run(capsys, "validate", "--instance", "expr:pear(3)")
    assert code == 2


def test_usage_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2
    assert main(["validate", "--trials", "0"]) == 2


def test_every_verb_is_wired():
    assert set(VERBS) == {"validate", "props", "norm", "theorem32", "psi-iso", "masa",
                          "subalgebra", "germ", "grading", "galois", "counterexample", "suite"}
    assert set(VERBS["suite"]) == set(CHECKS)
    for verb, checks in VERBS.items():
        assert all(c in CHECKS for c in checks)


@pytest.mark.parametrize("verb", sorted(VERBS))
def test_verbs_on_small_instances(verb, capsys):
    args = [verb, "--trials", "3", "--no-timing", "--instance", "expr:pair(2)",
            "--instance", "expr:parity(2)", "--instance", "expr:canonical(2)"]
    code, out = run(capsys, *args)
    assert code == 0, out.out
    if verb != "germ":
        assert out.out


def test_deterministic_output(capsys):
    args = ["props", "--instance", "expr:pair(3)", "--instance", "expr:cyclic(3)",
            "--trials", "5", "--no-timing", "--seed", "7"]
    _, a = run(capsys, *args)
    _, b = run(capsys, *args)
    assert a.out == b.out
    _, c = run(capsys, *args[:-1], "8")
    assert c.out.count("pass") == a.out.count("pass")


def test_emit_report_formats():
    assert emit_report([], "text") == "" and emit_report([], "json-lines") == ""
    g = pair(2)
    r = CheckReport("masa", "pair(2)", "pass", {"set": ArrowSet(g, frozenset({"(2,1)", "(1,1)"}))},
                    1.5)
    line = emit_report([r], "json-lines")
    assert line == ('{"check":"masa","instance":"pair(2)","status":"pass",'
                    '"witness":{"set":["(1,1)","(2,1)"]},"elapsed_ms":1.5}\n')
    text = emit_report([r], "text").splitlines()
    assert text[0].split() == ["check", "instance", "status", "ms", "witness"]
    assert jsonable(frozenset({"b", "a"})) == ["a", "b"]


def test_report_and_config_invariants():
    with pytest.raises(ValueError):
        CheckReport("x", "y", "fail")
    for bad in ({"tolerance": 0}, {"trials": 0}, {"budget_lattice": 0},
                {"output_format": "xml"}):
        with pytest.raises(ValueError):
            SuiteConfig(**bad)


def test_skip_on_non_effective():
    reps = run_checks(["module_correspondence"], SuiteConfig(instances=["expr:cyclic(2)"]))
    assert [r.status for r in reps] == ["skip"]


def test_console_script_module():
    out = subprocess.run([sys.executable, "-m", "groupoidlab", "counterexample", "--no-timing"],
                         capture_output=True, text=True)
    assert out.returncode == 0 and "remark" in out.stdout
