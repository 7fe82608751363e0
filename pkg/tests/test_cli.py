import json
import subprocess
import sys

import pytest

from epreinvex.cli import emit_report, run_command


def structured(argv):
    code, out = run_command(list(argv) + ["--format", "structured"])
    return code, json.loads(out)


def test_reproduce_example1():
    code, rep = structured(["reproduce", "example1"])
    assert code == 1
    w = rep["gei_printed_pair"]["witness"]
    assert (w["k1"], w["k2"], w["t"], w["point"]) == ("3", "0", "1", "-1")
    assert [f["id"] for f in rep["fidelity"]] == ["ex1-iota-outside-set", "ex1-glei-claim"]
    assert rep["gamma_-1_0"] == {"0": "0", "1/2": "-1/2", "1": "-1"}


def test_reproduce_example2():
    code, rep = structured(["reproduce", "example2"])
    assert code == 1
    pairs = rep["printed_pairs"]
    assert pairs["gslec"]["witness"]["rhs_expr"] == "-t + 1"
    assert (pairs["gsep"]["witness"]["k1"], pairs["gsep"]["witness"]["k2"]) == ("1", "4")
    assert pairs["gslep"]["witness"]["lhs_expr"] == "2*t"
    assert rep["divergent_semiderivative"]["result"]["kind"] == "+inf"
    assert [f["id"] for f in rep["fidelity"]] == ["ex2-gslep-claim"]


def test_check_fn_gslec_pair():
    code, rep = structured(["check", "fn", "--fn", "h", "--class", "gslec", "--space", "ex2", "--pair", "2,3"])
    assert code == 1
    w = rep["witness"]
    assert (w["k1"], w["k2"], w["lhs"], w["rhs"], w["t"]) == ("2", "3", "1", "15/16", "1/16")


def test_check_fn_gslec_scan_fails():
    code, rep = structured(["check", "fn", "--fn", "h", "--class", "gslec", "--space", "ex2"])
    assert code == 1 and rep["verdict"] == "fails"


def test_holds_report_has_certificate_only():
    code, rep = structured(["check", "fn", "--fn", "square", "--class", "gep", "--set", "sym", "--grid-step", "1/2"])
    assert code == 0
    assert "witness" not in rep
    assert rep["certificate"][0] == {"k1": "-1", "k2": "-1", "u": "1", "v": "1"}


def test_certify_i1():
    assert run_command(["vfp", "certify", "--certificate", "I1_at_0"])[0] == 0
    code, rep = structured(["vfp", "certify", "--certificate", "I1_at_half"])
    assert code == 1
    assert rep["conditions"]["condition"] == "EQ4"


def test_certify_from_flags():
    code, _ = run_command(["vfp", "certify", "--vfp", "I1", "--point", "0", "--zeta", "1", "--xi", "1"])
    assert code == 1


def test_oracle_and_lemma1():
    code, rep = structured(["vfp", "oracle", "--vfp", "I1", "--grid-step", "1/8"])
    assert code == 0 and rep["oracle"]["efficient"] == ["0"]
    assert run_command(["vfp", "oracle", "--vfp", "I2", "--lemma1"])[0] == 0


def test_duality_commands():
    assert run_command(["vfp", "duality", "--dual", "I1_d0"])[0] == 0
    assert run_command(["vfp", "duality", "--dual", "nonpseudo_d0"])[0] == 1
    assert run_command(["vfp", "duality", "--dual", "I1_d0", "--converse", "1/2"])[0] == 3


def test_semidiff_command():
    code, rep = structured(["semidiff", "--fn", "h", "--space", "ex2", "--base", "1/2", "--target", "3", "--curve", "literal"])
    assert code == 0 and rep["verdict"] == "+inf"
    code, rep = structured(["semidiff", "--fn", "square", "--base", "1", "--target", "3"])
    assert rep["semiderivative"]["value"] == "4"


@pytest.mark.parametrize(
    "argv",
    [["bogus"], ["check", "fn", "--fn", "nope", "--class", "gep"], ["check", "fn", "--class", "gep"], ["--config", "/nonexistent.toml", "config"]],
)
def test_usage_errors(argv):
    assert run_command(argv)[0] == 3


def test_config_file(tmp_path):
    path = tmp_path / "doc.toml"
    path.write_text('[function.cube]\nexpr = "x^3"\n')
    code, rep = structured(["check", "fn", "--config", str(path), "--fn", "cube", "--class", "gslep", "--set", "unit"])
    assert code == 0


def test_config_echo():
    code, rep = structured(["config"])
    assert code == 0 and rep["round_trip"] is True


@pytest.mark.parametrize("argv", [["reproduce", "example1"], ["reproduce", "example2"], ["vfp", "duality", "--dual", "nonpseudo_d0"]])
def test_structured_output_is_deterministic(argv):
    a = run_command(argv + ["--format", "structured"])
    b = run_command(argv + ["--format", "structured"])
    assert a == b


def test_text_report_rendering():
    out = emit_report({"verdict": "holds", "flag": True, "items": ["1/2", "3"]}, "text").decode()
    assert "verdict: holds" in out and "flag: yes" in out


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "epreinvex", "vfp", "certify", "--certificate", "I1_at_0"], capture_output=True)
    assert proc.returncode == 0
    assert b"certified" in proc.stdout
