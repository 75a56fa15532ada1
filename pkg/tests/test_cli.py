import io
import json

import pytest

from procalc.cli import EXIT_CAP, EXIT_OK, EXIT_PARSE, EXIT_USAGE, EXIT_VERDICT, main


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


def test_parse_prints_canonical_form():
    assert run("parse", "--lang", "ccs", "--term", "(a.0)+(b.0)") == (EXIT_OK, "a.0 + b.0\n")
    assert run("parse", "--lang", "csp", "--term", "a->STOP") == (EXIT_OK, "a -> STOP\n")


def test_parse_error_has_position(capsys):
    code, _ = run("parse", "--lang", "ccs", "--term", "a.0 +")
    assert code == EXIT_PARSE
    assert "<term>:1:6" in capsys.readouterr().err


def test_parse_reads_files(tmp_path):
    f = tmp_path / "toggle.ccs"
    f.write_text("On = a.Off\nOff = b.On\nmain = On\n")
    code, text = run("parse", "--lang", "ccs", str(f))
    assert code == EXIT_OK
    assert text.startswith("fix")


def test_usage_errors():
    assert run()[0] == EXIT_USAGE
    assert run("parse", "--term", "0")[0] == EXIT_USAGE
    assert run("equiv", "--relation", "weak", "a.ccs", "b.ccs")[0] == EXIT_USAGE
    assert run("verify", "--corpus-size", "0")[0] == EXIT_USAGE


def test_missing_file_is_a_usage_error():
    assert run("parse", "--lang", "ccs", "/nonexistent/p.ccs")[0] == EXIT_USAGE


def test_lts_formats():
    code, text = run("lts", "--lang", "ccs", "--term", "a.0")
    assert code == EXIT_OK and text == 'des (0, 1, 2)\n(0,"a",1)\n'
    code, text = run("lts", "--lang", "csp", "--term", "DIV", "--format", "dot")
    assert code == EXIT_OK and "style=dashed" in text
    code, text = run("lts", "--lang", "ccs", "--term", "a.0 + b.0", "--format", "summary")
    assert text == "states 2\ntransitions 2\ncomplete true\n"


def test_lts_cap(capsys):
    code, text = run("lts", "--lang", "ccs", "--term", "fix X {X = a.(X | b.0)}", "--max-states", "8",
                     "--format", "summary")
    assert code == EXIT_CAP
    assert "complete false" in text
    assert "state cap" in capsys.readouterr().err


def test_lts_rejects_open_terms():
    assert run("lts", "--lang", "ccs", "--term", "a.X")[0] == EXIT_USAGE


def test_encode():
    assert run("encode", "--term", "STOP") == (EXIT_OK, "0\n")
    assert run("encode", "--term", "a -> STOP") == (EXIT_OK, "a.0\n")
    code, text = run("encode", "--term", "(a -> STOP) [|{a}|] (a -> STOP)")
    assert code == EXIT_OK
    assert "a'" in text and "a''" in text
    assert run("encode", "--term", "d -> STOP", "--alphabet", "a,b")[0] == EXIT_USAGE


def test_encode_open_term():
    assert run("encode", "--term", "X", "--alphabet", "a") == (EXIT_OK, "X\n")


def test_equiv(tmp_path):
    p = tmp_path / "p.ccs"
    q = tmp_path / "q.csp"
    p.write_text("b.0 + b.c.0\n")
    q.write_text("(b -> STOP) [] (b -> (c -> STOP))\n")
    code, text = run("equiv", "--relation", "weak-bisim", str(p), str(q))
    assert code == EXIT_OK and text == "weak-bisim: holds\n"
    code, text = run("equiv", "--relation", "strong-bisim", "--expect", "holds", str(p), str(q))
    assert code == EXIT_OK
    r = tmp_path / "r.ccs"
    r.write_text("b.0\n")
    code, text = run("equiv", "--relation", "trace", "--expect", "holds", str(p), str(r))
    assert code == EXIT_VERDICT
    assert "evidence:" in text


def test_equiv_reads_aut(tmp_path):
    a = tmp_path / "a.aut"
    a.write_text('des (0, 1, 2)\n(0,"a",1)\n')
    p = tmp_path / "p.ccs"
    p.write_text("a.0")
    assert run("equiv", "--relation", "iso-reachable", str(a), str(p)) == (EXIT_OK, "iso-reachable: holds\n")
    bad = tmp_path / "bad.aut"
    bad.write_text("des (0, 1, 2)\n(0,a)\n")
    assert run("equiv", str(bad), str(p))[0] == EXIT_PARSE


def test_equiv_needs_a_language(tmp_path):
    p = tmp_path / "p.txt"
    p.write_text("a.0")
    assert run("equiv", str(p), str(p))[0] == EXIT_USAGE
    assert run("equiv", "--lang", "ccs", str(p), str(p))[0] == EXIT_OK


def test_verify_encode_trace():
    code, text = run("verify", "--corpus-seed", "42", "--corpus-size", "10")
    assert code == EXIT_OK
    lines = text.splitlines()
    assert lines[0] == "== respects: encode up to trace"
    assert sum(1 for line in lines if line.startswith("[")) == 10
    assert lines[-1].startswith("PASS: checked on 10 items")


def test_verify_expectations():
    assert run("verify", "--corpus-size", "10", "--expect", "pass")[0] == EXIT_OK
    code, text = run("verify", "--translation", "encode-broken-int", "--corpus-size", "30", "--expect", "fail")
    assert code == EXIT_OK
    assert "FAIL" in text
    assert run("verify", "--relation", "convergent-weak-bisim", "--expect", "pass")[0] == EXIT_VERDICT


def test_verify_other_checks():
    for check in ("correct", "compositional", "valid", "hierarchy"):
        code, text = run("verify", "--check", check, "--corpus-size", "8", "--relation", "trace")
        assert code == EXIT_OK, (check, text)
    assert run("verify", "--check", "hierarchy", "--relation", "trace", "--coarser", "weak-bisim")[0] == EXIT_USAGE


def test_verify_identity():
    code, _ = run("verify", "--translation", "identity", "--lang", "ccs", "--relation", "strong-bisim",
                  "--corpus-size", "10", "--expect", "pass")
    assert code == EXIT_OK


def test_verify_summary_is_json():
    code, text = run("verify", "--corpus-size", "5", "--format", "summary")
    doc = json.loads(text)
    assert doc["passed"] and doc["counts"]["pass"] == 5


def test_verify_is_deterministic_across_jobs():
    a = run("verify", "--corpus-seed", "42")[1]
    b = run("verify", "--corpus-seed", "42", "--jobs", "3")[1]
    assert a == b


def test_config_file_and_flag_precedence(tmp_path):
    cfg = tmp_path / "settings.cfg"
    cfg.write_text("# defaults for this run\ncorpus-size = 4\nrelation = strong-bisim\n")
    code, text = run("verify", "--config", str(cfg))
    assert "up to strong-bisim" in text
    assert "checked on 4 items" in text
    code, text = run("verify", "--config", str(cfg), "--relation", "trace", "--corpus-size", "6")
    assert code == EXIT_OK
    assert "up to trace" in text and "checked on 6 items" in text


@pytest.mark.parametrize("body", ["corpus_size\n", "colour = red\n", "corpus-size = -3\n"])
def test_bad_config(tmp_path, body):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text(body)
    assert run("verify", "--config", str(cfg))[0] == EXIT_USAGE


def test_congruence_command():
    code, text = run("congruence", "--lang", "ccs", "--relation", "weak-bisim", "--count", "60", "--expect", "fail")
    assert code == EXIT_OK
    assert text.rstrip().splitlines()[-1].startswith("FAIL")
    assert run("congruence", "--lang", "csp", "--relation", "trace", "--count", "60", "--expect", "pass")[0] == EXIT_OK


def test_fixture_separation():
    code, text = run("fixture-separation")
    assert code == EXIT_OK
    assert text.startswith("== separation fixture")
    assert "traces: <> <b> <b,c>" in text


def test_gen_corpus():
    code, text = run("gen-corpus", "--corpus-seed", "1", "--corpus-size", "5")
    assert code == EXIT_OK and len(text.splitlines()) == 5
    assert text == run("gen-corpus", "--corpus-seed", "1", "--corpus-size", "5")[1]
    doc = json.loads(run("gen-corpus", "--lang", "ccs", "--corpus-size", "3", "--format", "summary")[1])
    assert doc["language"] == "ccs" and len(doc["terms"]) == 3
