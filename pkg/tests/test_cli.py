import json
import pathlib

from hdmas.cli import main

FIXTURES = pathlib.Path(__file__).resolve().parent.parent / "src" / "hdmas" / "fixtures"
FIG2 = str(FIXTURES / "fig2.hdmas")
FORTRESS = str(FIXTURES / "fortress.hdmas")


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_check_model_passes(capsys):
    code, out, _ = run_cli(capsys, "check-model", FIG2)
    assert code == 0
    assert "well-formed" in out
    assert "FAIL" not in out


def test_check_model_json(capsys):
    code, out, _ = run_cli(capsys, "check-model", FIG2, "--json")
    assert code == 0
    payload = json.loads(out)
    assert payload["schema"] == 1
    assert payload["wellformed"] is True
    assert payload["model"]["states"] == ["s1", "s2", "s3", "s4", "s5", "s6"]


def test_check_model_reports_failure(tmp_path, capsys):
    bad = tmp_path / "bad.hdmas"
    bad.write_text("""
        actions a1;
        props ;
        state s1 { avail: a1; label: ; }
        state s2 { avail: a1; label: ; }
        guard s1 -> s1 : #a1 > 0;
        guard s1 -> s2 : #a1 > 1;
        guard s2 -> s2 : else;
    """)
    code, out, _ = run_cli(capsys, "check-model", str(bad))
    assert code == 2
    assert "NOT well-formed" in out
    assert "witness" in out


def test_verify_extension(capsys):
    code, out, _ = run_cli(capsys, "verify", FIG2,
                           "-f", "E y1 A y2 <<y1,y2>> X (p|q)")
    assert code == 0
    assert "s2 s4 s5 s6" in out


def test_verify_state_membership(capsys):
    code, out, _ = run_cli(capsys, "verify", FIG2, "-f", "<<7,5>> X p",
                           "--state", "s1")
    assert code == 0
    assert "s1: satisfied" in out


def test_verify_state_not_member_exit_code(capsys):
    code, out, _ = run_cli(capsys, "verify", FIG2, "-f", "E y1 <<y1,11>> X p",
                           "--state", "s1")
    assert code == 3
    assert "not satisfied" in out


def test_verify_parse_error(capsys):
    code, _, err = run_cli(capsys, "verify", FIG2, "-f", "<<1,>> X p")
    assert code == 1
    assert "parse error" in err


def test_verify_semantic_error_unbound(capsys):
    code, _, err = run_cli(capsys, "verify", FIG2, "-f", "<<z1,2>> X p")
    assert code == 2
    assert "z1" in err


def test_verify_assignment(capsys):
    code, out, _ = run_cli(capsys, "verify", FIG2, "-f", "<<z1,z2>> X p",
                           "--assign", "z1=7", "--assign", "z2=5",
                           "--state", "s1")
    assert code == 0


def test_verify_bad_assignment(capsys):
    code, _, err = run_cli(capsys, "verify", FIG2, "-f", "p",
                           "--assign", "w=3")
    assert code == 2


def test_verify_json_schema(capsys):
    code, out, _ = run_cli(capsys, "verify", FIG2, "-f", "<<7,5>> X p", "--json")
    assert code == 0
    payload = json.loads(out)
    assert payload["schema"] == 1
    assert payload["formula"] == "<<7,5>> X p"
    assert payload["per_state"]["s1"] is True
    assert set(payload["extension"]) <= set("s1 s2 s3 s4 s5 s6".split())
    assert "qe_stats" in payload


def test_verify_oracle_path(capsys):
    code, out, _ = run_cli(capsys, "verify", FIG2, "-f", "<<7,5>> X p",
                           "--oracle", "--json")
    assert code == 0
    first = json.loads(out)
    code, out, _ = run_cli(capsys, "verify", FIG2, "-f", "<<7,5>> X p", "--json")
    second = json.loads(out)
    assert first["extension"] == second["extension"]


def test_verify_oracle_rejects_quantifiers(capsys):
    code, _, err = run_cli(capsys, "verify", FIG2,
                           "-f", "E y1 <<y1,2>> X p", "--oracle")
    assert code == 2


def test_verify_oracle_cap(capsys, monkeypatch):
    monkeypatch.setenv("HDMAS_ENUM_CAP", "5")
    code, _, err = run_cli(capsys, "verify", FIG2, "-f", "<<5,5>> X p",
                           "--oracle")
    assert code == 4
    assert "cap" in err


def test_dump_nf(capsys):
    code, out, _ = run_cli(capsys, "verify", FIG2,
                           "-f", "A y1 <<y1,5>> X p", "--dump-nf")
    assert code == 0
    assert out.strip() == "<<0,5>> X p"


def test_dump_prf(capsys):
    code, out, _ = run_cli(capsys, "verify", FIG2, "-f", "<<7,5>> X p",
                           "--dump-prf", "s=s1")
    assert code == 0
    assert "k_a" in out and "l_a" in out and "E " in out and "A " in out


def test_dump_prf_needs_next_shape(capsys):
    code, _, err = run_cli(capsys, "verify", FIG2, "-f", "<<7,5>> G p",
                           "--dump-prf", "s=s1")
    assert code == 2


def test_missing_model_file(capsys):
    code, _, err = run_cli(capsys, "verify", "/nonexistent.hdmas", "-f", "p")
    assert code == 1


def test_formula_file(tmp_path, capsys):
    source = tmp_path / "formula.txt"
    source.write_text("<<7,5>> X p\n")
    code, out, _ = run_cli(capsys, "verify", FIG2,
                           "--formula-file", str(source), "--state", "s1")
    assert code == 0


def test_fortress_formula(capsys):
    code, out, _ = run_cli(capsys, "verify", FORTRESS,
                           "-f", "E y1 A y2 <<y1,y2>> G !captured",
                           "--state", "s1")
    assert code == 0
    assert "s1: satisfied" in out
