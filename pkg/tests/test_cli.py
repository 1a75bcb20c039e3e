import io
from contextlib import redirect_stdout

import pytest

from oalg.algebra import chain, print_algebra, subalgebra
from oalg.cli import main
from oalg.signature import SIG1

SIG_TEXT = "op f 2\nop g 3\nconst c\nconst d\norder c <= d\n"


@pytest.fixture
def workspace(tmp_path):
    (tmp_path / "s.sig").write_text(SIG_TEXT)
    ch3 = chain(3, SIG1)
    (tmp_path / "ch3.oalg").write_text(print_algebra(ch3, "s.sig"))
    sub = subalgebra(ch3, ["e0", "e2"], name="C2")
    (tmp_path / "c2.oalg").write_text(print_algebra(sub, "s.sig"))
    (tmp_path / "sp.amalgam").write_text("special over ch3.oalg seed e0 e2\n")
    (tmp_path / "rel.pairs").write_text("pair e2 e0\n")
    (tmp_path / "incl.hom").write_text(
        "hom from c2.oalg to ch3.oalg\nmap e0 -> e0\nmap e2 -> e2\n")
    return tmp_path


def run(*argv):
    buf = io.StringIO()
    with redirect_stdout(buf):
        code = main(list(argv))
    return code, buf.getvalue()


def test_validate_ok(workspace):
    code, out = run("validate", str(workspace / "ch3.oalg"))
    assert code == 0 and "violations=0" in out


def test_validate_signature(workspace):
    code, _ = run("validate", str(workspace / "s.sig"))
    assert code == 0


def test_validate_parse_error(workspace):
    bad = workspace / "bad.sig"
    bad.write_text("order c < d\n")
    code, _ = run("validate", str(bad))
    assert code == 2


def test_validate_violation_exit(workspace):
    bad = workspace / "bad.oalg"
    text = (workspace / "ch3.oalg").read_text()
    bad.write_text(text.replace("const c = e0", "const c = e2")
                       .replace("const d = e2", "const d = e0"))
    code, out = run("validate", str(bad))
    assert code == 1 and "constant" in out


def test_dominion(workspace):
    code, out = run("dominion", "--special", str(workspace / "ch3.oalg"),
                    "--seed-elems", "e0", "e2")
    assert code == 0
    assert "element=e1" in out and "NoWitnessFound" in out
    assert out.count("InC") == 2


def test_closure_and_witness(workspace):
    code, out = run("closure", str(workspace / "ch3.oalg"),
                    str(workspace / "rel.pairs"), "--witness")
    assert code == 0
    assert "left=e2, right=e0" in out
    assert "REL HYP" in out


def test_quotient(workspace):
    code, out = run("quotient", str(workspace / "ch3.oalg"),
                    str(workspace / "rel.pairs"), "--nonregular",
                    "--sig-ref", "s.sig")
    assert code == 0 and "elements [e0]" in out


def test_pushout_eq(workspace):
    code, out = run("pushout-eq", str(workspace / "sp.amalgam"),
                    "e0<1>", "e0<2>")
    assert code == 0 and "proven" in out
    code, out = run("pushout-eq", str(workspace / "sp.amalgam"),
                    "e1<1>", "e1<2>", "--max-nodes", "2000")
    assert code == 3 and "unknown" in out


def test_epi(workspace):
    code, out = run("epi", "--hom", str(workspace / "incl.hom"),
                    "--max-codomain", "3")
    assert code == 0 and "NotEpi" in out and "element=e1" in out


def test_normalize(workspace):
    scheme = workspace / "d.scheme"
    scheme.write_text("\n".join([
        "REL EV1INV z1 1 e0<1> -> f e0<1> e0<1>",
        "REL EV1 z1 1 f e0<1> e0<1> -> e0<1>",
        "REL GLUE z1 1 e0<1> -> e0<2>",
    ]) + "\n")
    code, out = run("normalize", str(scheme), "--amalgam",
                    str(workspace / "sp.amalgam"))
    assert code == 0 and "status=case1" in out


def test_normalize_invalid_scheme(workspace):
    scheme = workspace / "bad.scheme"
    scheme.write_text("INEQ e2<1> <= e0<1>\n")
    code, out = run("normalize", str(scheme), "--amalgam",
                    str(workspace / "sp.amalgam"))
    assert code == 1


def test_structured_output_deterministic(workspace):
    args = ("--format", "structured", "dominion", "--special",
            str(workspace / "ch3.oalg"), "--seed-elems", "e0", "e2")
    code1, out1 = run(*args)
    code2, out2 = run(*args)
    assert code1 == code2 == 0 and out1 == out2
    assert out1.startswith("record=dominion")
