import io
import json
from pathlib import Path

import pytest

from cli.main import EXIT_FAIL, EXIT_OK, EXIT_USAGE, main

DATA = Path(__file__).parent / "tests_data"


@pytest.fixture(autouse=True)
def plain_markers(monkeypatch):
    monkeypatch.setenv("LR_COLOR", "0")


def run(*argv):
    out = io.StringIO()
    code = main([str(a) for a in argv], out)
    return code, out.getvalue()


def test_check_contraction():
    code, out = run("check", DATA / "dup.lr")
    assert code == EXIT_OK
    assert "OK x :w A |- (x, x) : A * A" in out
    assert "[*-I] x :w A |- (x, x) @{1; 1} : A * A" in out


def test_check_rejects_linear_contraction():
    code, out = run("check", DATA / "dup_linear.lr")
    assert code == EXIT_FAIL
    assert "FAIL x :1 A |- (x, x) : A * A" in out
    assert "UsageMismatch" in out


def test_annotated_mode_needs_splits():
    code, out = run("check", DATA / "dup.lr", "--annotated")
    assert code == EXIT_FAIL
    assert "MissingAnnotation" in out


def test_semiring_override():
    code, _ = run("check", DATA / "dup_linear.lr", "--semiring", "trivial")
    assert code == EXIT_USAGE
    code, _ = run("check", DATA / "stlc.lr")
    assert code == EXIT_OK


def test_check_object_logic_stanzas():
    code, out = run("check", DATA / "dill.lr")
    assert code == EXIT_OK
    assert "OK | x:A, y:B |- A * B" in out
    assert "  lin-ax (x)" in out
    code, out = run("check", DATA / "pd.lr")
    assert code == EXIT_OK
    assert "hyp* (x)" in out


def test_json_dump_validates(tmp_path):
    code, out = run("check", DATA / "dup.lr", "--json")
    assert code == EXIT_OK
    dump = json.loads(out)
    assert dump["semiring"] == "lin01w"
    assert dump["entries"][0]["derivation"]["rule"] == "*-I"
    path = tmp_path / "dump.json"
    path.write_text(out, encoding="utf-8")
    code, report = run("validate", path)
    assert code == EXIT_OK
    assert "OK 1 entry" in report


@pytest.mark.parametrize("name", ["dup", "unit"])
def test_json_dump_matches_the_golden_file(name):
    golden = (DATA / f"{name}.json").read_text(encoding="utf-8")
    code, out = run("check", DATA / f"{name}.lr", "--json")
    assert code == EXIT_OK
    assert out == golden
    code, report = run("validate", DATA / f"{name}.json")
    assert code == EXIT_OK
    assert "OK 1 entry" in report


def test_tampered_dump_fails(tmp_path):
    _, out = run("check", DATA / "dup.lr", "--json")
    path = tmp_path / "dump.json"
    path.write_text(out.replace('"rule": "var"', '"rule": "VAR"', 1), encoding="utf-8")
    code, report = run("validate", path)
    assert code == EXIT_FAIL
    assert "FAIL" in report


def test_bottom_up_transform():
    code, out = run("transform", DATA / "dup.lr", "bottomup")
    assert code == EXIT_OK
    assert out.startswith("semiring lin01w\nbase A\n")
    assert "judgment x :w A |- (x, x) @{w; w} : A * A" in out
    assert "violation" not in out


def test_rename_and_subst_transforms():
    code, out = run("transform", DATA / "pair.lr", "rename", DATA / "rename.json")
    assert code == EXIT_OK
    assert "judgment y :1 B, x :1 A |- (x, y) @{0 1; 1 0} : A * B" in out
    code, out = run("transform", DATA / "dup.lr", "subst", DATA / "subst.json")
    assert code == EXIT_OK
    assert "judgment z :w A |- (z, z) @{1; 1} : A * A" in out
    code, _ = run("transform", DATA / "pair.lr", "rename")
    assert code == EXIT_USAGE


def test_cut_transform():
    code, out = run("transform", DATA / "cut.lr", "cut")
    assert code == EXIT_OK
    assert "judgment y :1 A |- inl y : A + B" in out
    code, _ = run("transform", DATA / "dup.lr", "cut")
    assert code == EXIT_USAGE


def test_translate_dill_to_the_calculus():
    code, out = run("translate", DATA / "dill.lr", "dill2lr")
    assert code == EXIT_OK
    assert "judgment x :1 A, y :1 B |- (x, y) @{1 0; 0 1} : A * B" in out
    assert "judgment a :w A |- (! w a @{w}, ! w a @{w}) @{w; w} : ![w] A * ![w] A" in out


def test_translations_round_trip_through_files(tmp_path):
    lr = tmp_path / "lr.lr"
    code, _ = run("translate", DATA / "pd.lr", "pd2lr", "-o", lr)
    assert code == EXIT_OK
    code, out = run("translate", lr, "lr2pd")
    assert code == EXIT_OK
    assert "pd |v u:[]A |- A true" in out
    assert "pd a:A |v x:B |- []A true" in out


def test_translate_modal_judgment(tmp_path):
    target = tmp_path / "out.lr"
    code, out = run("translate", DATA / "modal.lr", "lr2pd", "-o", target)
    assert code == EXIT_OK
    assert "-- wrote" in out
    assert target.read_text(encoding="utf-8") == (
        "base A\npd |v u:[]A |- A true\n  box-E {[]A} (x)\n    hyp (u)\n    hyp* (x)\n")


def test_foreign_bang_cannot_be_read_as_pd():
    code, _ = run("translate", DATA / "bang1.lr", "lr2pd")
    assert code == EXIT_FAIL
    code, _ = run("translate", DATA / "dup.lr", "lr2pd")
    assert code == EXIT_USAGE


def test_laws():
    code, out = run("laws", "--semiring", "lin01w")
    assert code == EXIT_OK
    assert "OK lin01w: no law violations" in out
    code, _ = run("laws", "--semiring", "nat", "--budget", "50")
    assert code == EXIT_OK


def test_usage_errors():
    assert run("laws", "--semiring", "tropical")[0] == EXIT_USAGE
    assert run("laws", "--semiring", "nat", "--budget", "0")[0] == EXIT_USAGE
    assert run("check", DATA / "missing.lr")[0] == EXIT_USAGE
    assert run("check", DATA / "bad_usage.lr")[0] == EXIT_USAGE
    assert run()[0] == EXIT_USAGE
    assert run("--help")[0] == EXIT_OK
