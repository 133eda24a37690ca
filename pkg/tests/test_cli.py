"""Command-line driver: exit codes, JSON payloads, config precedence."""

import json
import subprocess
import sys

import pytest

from qpadic.cli import main


def run_inproc(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def run_subproc(*argv):
    proc = subprocess.run(
        [sys.executable, "-m", "qpadic.cli", *argv],
        capture_output=True, text=True, timeout=120,
    )
    return proc.returncode, proc.stdout, proc.stderr


def test_pinned_equals_example():
    code, out, err = run_subproc("--p", "2", "equals",
                                 "S*S' + U*S*S'*U^-1", "1", "--json")
    assert code == 0
    assert out == '{"equal": true, "p": 2}\n'
    assert err == ""


def test_pinned_index_example():
    code, out, err = run_subproc("--p", "2", "index", "-k", "3", "--json")
    assert code == 0
    assert out == ('{"index": "3", "k": 3, "p": 2, '
                   '"quasi_basis_size": 3, "verified_on": 99}\n')
    assert err == ""


def test_pinned_chi_error_example():
    code, out, err = run_subproc("--p", "2", "chi", "-k", "2", "U")
    assert code == 2
    assert out == ""
    assert err == "qp: error: NotCoprime: gcd(k, p) must be 1: k=2, p=2\n"


def test_equals_false_exits_one(capsys):
    code, out, _ = run_inproc(capsys, "--p", "2", "equals", "U", "S")
    assert code == 1
    assert out.strip() == "false"


def test_normalize_text_and_json(capsys):
    code, out, _ = run_inproc(capsys, "--p", "2", "normalize", "U^3*S*S'*U^-1")
    assert code == 0
    assert out.strip() == "U*S*S'*U"
    code, out, _ = run_inproc(capsys, "--p", "2", "--json",
                              "normalize", "U^3*S*S'*U^-1")
    payload = json.loads(out)
    assert payload["terms"] == [{"i": "1", "m": 1, "n": 1, "j": "1",
                                 "num": "1", "den": "1"}]


def test_eval_action(capsys):
    code, out, _ = run_inproc(capsys, "--p", "2", "eval", "S", "--on", "5")
    assert code == 0
    assert out.strip() == "e_10"
    code, out, _ = run_inproc(capsys, "--p", "2", "eval", "S'", "--on", "5")
    assert out.strip() == "0"


def test_mul_and_chi(capsys):
    code, out, _ = run_inproc(capsys, "--p", "2", "mul", "U^2", "S")
    assert code == 0
    assert out.strip() == "U^2*S"
    code, out, _ = run_inproc(capsys, "--p", "2", "chi", "-k", "3", "U")
    assert out.strip() == "U^3"


def test_psi_and_decompose_level_flag(capsys):
    # -h is the matrix level here, not help
    code, out, _ = run_inproc(capsys, "--p", "2", "psi", "-h", "1", "U")
    assert code == 0
    assert "(0, 1): U" in out and "(1, 0): 1" in out
    code, out, _ = run_inproc(capsys, "--p", "2", "--json",
                              "decompose", "--level", "2", "S")
    payload = json.loads(out)
    assert payload["case"] == "m>n"
    assert payload["h"] == 2


def test_decompose_rejects_sums(capsys):
    code, _, err = run_inproc(capsys, "--p", "2", "decompose", "-h", "2", "U+S")
    assert code == 2
    assert "single monomial" in err


def test_expect_domain_error(capsys):
    code, _, err = run_inproc(capsys, "--p", "2", "expect", "--kind", "E",
                              "-k", "3", "S")
    assert code == 2
    assert "NotInDomain" in err


def test_quasibasis_and_preimage(capsys):
    code, out, _ = run_inproc(capsys, "--p", "2", "quasibasis", "-k", "3")
    assert code == 0
    assert out.strip() == "1, U, U^2"
    code, out, _ = run_inproc(capsys, "--p", "2", "preimage", "-k", "3",
                              "U*S*S'*U^2")
    assert code == 0
    assert out.strip() == "U*S*S'"


def test_verify_relations_ok(capsys):
    code, out, _ = run_inproc(capsys, "--p", "3", "verify-relations",
                              "--range", "200")
    assert code == 0
    assert "FAIL" not in out


def test_entropy_json_keys(capsys):
    code, out, _ = run_inproc(capsys, "--p", "2", "--json", "entropy", "-k", "2",
                              "--grid", "16384", "--n-max", "8")
    assert code == 0
    payload = json.loads(out)
    assert set(payload) == {"k", "estimate", "target", "within_tolerance"}
    assert payload["target"] == "log|k|"
    assert payload["within_tolerance"] is True


def test_entropy_text_is_csv(capsys):
    code, out, _ = run_inproc(capsys, "--p", "2", "entropy", "-k", "2",
                              "--grid", "16384", "--n-max", "8")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "n,count,log_count"
    assert lines[-1].startswith("# estimate=")


def test_odometer_exit_codes(capsys):
    code, out, _ = run_inproc(capsys, "--p", "2", "--json", "odometer",
                              "-k", "3", "-L", "4")
    assert code == 0
    payload = json.loads(out)
    assert payload["transitive"] is True and payload["orbit_size"] == 16
    assert payload["entropy_estimate"] == 0.0
    code, out, _ = run_inproc(capsys, "--p", "2", "--json", "odometer",
                              "-k", "2", "-L", "4")
    assert code == 1


def test_norm_command(capsys):
    code, out, _ = run_inproc(capsys, "--p", "2", "--json", "norm", "U", "-N", "64")
    payload = json.loads(out)
    assert code == 0
    assert payload["window"] == 64
    assert abs(payload["estimate"] - 1.0) < 1e-9


def test_missing_p_is_usage_error(capsys):
    code, _, err = run_inproc(capsys, "normalize", "U")
    assert code == 2
    assert "--p is required" in err


def test_parse_error_reports_position(capsys):
    code, _, err = run_inproc(capsys, "--p", "2", "normalize", "U^")
    assert code == 2
    assert "ExprSyntaxError" in err and "at position" in err


def test_nonprime_p_is_domain_error(capsys):
    code, _, err = run_inproc(capsys, "--p", "4", "normalize", "U")
    assert code == 2
    assert "PreconditionError" in err


def test_config_file_merge(tmp_path, capsys):
    cfg = tmp_path / "qp.cfg"
    cfg.write_text("# defaults\np = 3\njson = true\n")
    code, out, _ = run_inproc(capsys, "--config", str(cfg), "normalize", "U")
    assert code == 0
    assert json.loads(out)["p"] == 3
    # flags beat the file
    code, out, _ = run_inproc(capsys, "--config", str(cfg), "--p", "2",
                              "normalize", "U")
    assert json.loads(out)["p"] == 2


def test_config_file_bad_line(tmp_path, capsys):
    cfg = tmp_path / "qp.cfg"
    cfg.write_text("p: 3\n")
    code, _, err = run_inproc(capsys, "--config", str(cfg), "normalize", "U")
    assert code == 2
    assert "qp.cfg" in err
