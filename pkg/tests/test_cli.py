import io
from contextlib import redirect_stderr, redirect_stdout

import pytest

from zeckmix.cli import main


def run_cli(argv):
    out, err = io.StringIO(), io.StringIO()
    with redirect_stdout(out), redirect_stderr(err):
        code = main(argv)
    return code, out.getvalue(), err.getvalue()


def test_zeck_encode_1404():
    code, out, _ = run_cli(["zeck", "encode", "--family", "metallic", "--m", "3", "1404"])
    assert code == 0
    assert "digits: 230301" in out
    assert "decode_check: 1404" in out
    assert "valid: true" in out


def test_zeck_decode_and_validate():
    code, out, _ = run_cli(["zeck", "decode", "--family", "fibonacci", "10010"])
    assert code == 0 and "value: 10" in out
    code, out, _ = run_cli(["zeck", "validate", "--family", "fibonacci", "11"])
    assert code == 0 and "valid: false" in out


def test_seq_term_and_complete():
    code, out, _ = run_cli(["seq", "term", "--family", "metallic", "--m", "3", "6"])
    assert code == 0 and "term: 469" in out
    code, out, _ = run_cli(["seq", "complete", "--family", "fibonacci", "--horizon", "20"])
    assert code == 0 and "complete: true" in out
    code, out, _ = run_cli(["seq", "complete", "--coeffs", "3", "--init", "1",
                            "--horizon", "10"])
    assert code == 0 and "complete: false" in out


def test_subst_show_and_inflate():
    code, out, _ = run_cli(["subst", "show", "--family", "fibonacci"])
    assert code == 0 and "a -> {ab, ba}" in out
    code, out, _ = run_cli(["subst", "inflate", "--family", "fibonacci",
                            "--letter", "a", "--level", "2"])
    assert code == 0
    assert out.splitlines()[-3:] == ["aab", "aba", "baa"]


def test_subst_matrix_and_pisot():
    code, out, _ = run_cli(["subst", "matrix", "--family", "tribonacci"])
    assert code == 0
    assert out.splitlines()[-3:] == ["1 1 1", "1 0 0", "0 1 0"]
    code, out, _ = run_cli(["subst", "pisot", "--family", "fibonacci"])
    assert code == 0
    assert "pf_eigenvalue: 1.618033988750" in out
    assert "pisot: true" in out


def test_custom_rules_file(tmp_path):
    rules = tmp_path / "rules.txt"
    rules.write_text("a -> {ab, ba}\nb -> {a}\n", encoding="utf-8")
    code, out, _ = run_cli(["subst", "apply", "--rules", str(rules), "ab"])
    assert code == 0
    assert out.splitlines()[-2:] == ["aba", "baa"]
    code, out, _ = run_cli(["lang", "legal", "--rules", str(rules), "bb"])
    assert code == 0 and "legal: true" in out


def test_semimix_check_custom_rules(tmp_path):
    rules = tmp_path / "rules.txt"
    rules.write_text("a -> {ab, ba}\nb -> {a}\n", encoding="utf-8")
    code, out, _ = run_cli(["semimix", "check", "--rules", str(rules),
                            "--word", "ab", "--horizon", "5",
                            "--seeds", "ab,ba"])
    assert code == 0
    assert "threshold_on_horizon: 0" in out
    code, _, err = run_cli(["semimix", "check", "--rules", str(rules),
                            "--word", "ab", "--horizon", "5"])
    assert code == 2 and "reason: invalid-input" in err  # seeds required


def test_lang_enum():
    code, out, _ = run_cli(["lang", "enum", "--family", "fibonacci", "--n", "2"])
    assert code == 0
    assert out.splitlines()[-4:] == ["aa", "ab", "ba", "bb"]


def test_semimix_check():
    code, out, _ = run_cli(["semimix", "check", "--family", "fibonacci",
                            "--word", "a", "--horizon", "10"])
    assert code == 0
    assert out.startswith("# zeckmix witness-table v1")
    assert "threshold_on_horizon: 0" in out


def test_semimix_certify_and_verify(tmp_path):
    cert_path = tmp_path / "cert.txt"
    code, out, _ = run_cli(["semimix", "certify", "--family", "fibonacci",
                            "--word", "a", "--verify-range", "30",
                            "--out", str(cert_path)])
    assert code == 0
    assert "verified: true" in out
    code, out, _ = run_cli(["semimix", "verify", "--cert", str(cert_path),
                            "--span", "10"])
    assert code == 0 and "verified: true" in out


def test_semimix_verify_counterexample(tmp_path):
    cert_path = tmp_path / "cert.txt"
    run_cli(["semimix", "certify", "--family", "fibonacci", "--word", "a",
             "--out", str(cert_path)])
    text = cert_path.read_text(encoding="utf-8")
    corrupted = text.replace("step: seed=ab digit=0 word=aba",
                             "step: seed=ab digit=0 word=abb")
    assert corrupted != text
    cert_path.write_text(corrupted, encoding="utf-8")
    code, out, _ = run_cli(["semimix", "verify", "--cert", str(cert_path)])
    assert code == 1
    assert "verified: false" in out
    assert "counterexample:" in out


def test_exit_code_2_on_guard():
    code, _, err = run_cli(["subst", "inflate", "--family", "fibonacci",
                            "--letter", "a", "--level", "9", "--guard", "10"])
    assert code == 2
    assert "reason: guard-exceeded" in err


def test_exit_code_2_on_illegal_word():
    code, _, err = run_cli(["semimix", "check", "--family", "fibonacci",
                            "--word", "bbb", "--horizon", "3"])
    assert code == 2
    assert "reason: illegal-word" in err


def test_exit_code_2_on_bad_parameters():
    code, _, err = run_cli(["zeck", "encode", "--family", "metallic", "7"])
    assert code == 2
    assert "reason: invalid-input" in err


def test_determinism_byte_identical():
    argvs = [
        ["zeck", "encode", "--family", "metallic", "--m", "3", "1404"],
        ["subst", "pisot", "--family", "tribonacci"],
        ["lang", "enum", "--family", "tribonacci", "--n", "3"],
        ["semimix", "check", "--family", "fibonacci", "--word", "ab",
         "--horizon", "8"],
        ["semimix", "certify", "--family", "metallic", "--m", "2",
         "--word", "aa", "--verify-range", "10"],
    ]
    for argv in argvs:
        first = run_cli(argv)
        second = run_cli(argv)
        assert first == second, argv


def test_report_header_versioned():
    _, out, _ = run_cli(["zeck", "encode", "--family", "fibonacci", "9"])
    assert out.splitlines()[0] == "# zeckmix report v1"
