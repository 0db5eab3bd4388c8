from pathlib import Path

import pytest

from ursell_lab.cli import main
from ursell_lab.io import ParseError, fmt_float, fmt_rational, parse_text, write_multigraph
from ursell_lab.partitions import make_special

DATA = Path(__file__).resolve().parent.parent / "data"


def test_parse_round_trip():
    g = make_special("H", 2)
    back = parse_text(write_multigraph(g)).multigraph()
    assert back.edges == g.edges and back.marked == g.marked and back.sources == g.sources


def test_parse_errors_carry_line_numbers():
    with pytest.raises(ParseError, match=":3:"):
        parse_text("v 0 1\n# fine\ne 0 0 x\n")
    with pytest.raises(ParseError, match=":1:"):
        parse_text("frobnicate 1\n")
    with pytest.raises(ParseError, match="duplicate"):
        parse_text("e 0 0 1\ne 0 1 2\n")
    with pytest.raises(ParseError):
        parse_text("t 0 3/2\n")


def test_formats():
    assert fmt_rational(3) == "3" and fmt_rational(-2) == "-2"
    from fractions import Fraction
    assert fmt_rational(Fraction(-8, 9)) == "-8/9"
    assert fmt_float(1 / 3) == "0.33333333333333331"


def test_rgraph(capsys):
    assert main(["rgraph", str(DATA / "H2.mg")]) == 0
    assert capsys.readouterr().out.splitlines()[0] == "R=-2 partitions=4"


def test_ursell_verb(capsys):
    assert main(["ursell", str(DATA / "triangle.mg"), "--edge", "0"]) == 0
    assert capsys.readouterr().out.split() == ["u=-8/9", "du/dJ=-28/27"]


def test_zeros_verb(capsys):
    assert main(["zeros", str(DATA / "twospins.mg")]) == 0
    rows = capsys.readouterr().out.splitlines()
    assert rows[0] == "re,im,alpha"
    assert abs(float(rows[1].split(",")[2]) - 1.0471975511965976) < 1e-12
    assert main(["zeros", str(DATA / "twospins.mg"), "--J", "0.3466"]) == 0
    rows = capsys.readouterr().out.splitlines()
    assert abs(float(rows[1].split(",")[2]) - 1.0471975511965976) < 1e-4


def test_scan_and_oracle_verbs(capsys, tmp_path):
    out = tmp_path / "scan.csv"
    assert main(["scan", str(DATA / "twospins.mg"), "--steps", "4", "--out", str(out)]) == 0
    rows = out.read_text().splitlines()
    assert rows[0] == "edge,J,alpha1" and len(rows) == 5
    alphas = [float(r.split(",")[2]) for r in rows[1:]]
    assert alphas == sorted(alphas, reverse=True)
    assert main(["oracle", str(DATA / "K1I_current.mg")]) == 0
    assert capsys.readouterr().out.startswith("pass coefficient=1")


def test_bad_file_exit_code(tmp_path, capsys):
    bad = tmp_path / "bad.mg"
    bad.write_text("v 0 1\ne 0 0 q\n")
    assert main(["rgraph", str(bad)]) == 2
    assert "bad.mg:2:" in capsys.readouterr().err


def test_verify_report_is_deterministic(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    args = ["verify", "--seed", "7", "--count", "5", "--suite", "oracle-equivalence", "--suite", "ursell-signs",
            "--suite", "lee-yang-circle"]
    assert main(args + ["--out", str(a)]) == 0
    assert main(args + ["--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert "wall" not in a.read_text() and "time" not in a.read_text()
