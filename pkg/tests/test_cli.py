import json

import pytest

from qukit.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out.strip(), err.strip()


@pytest.mark.parametrize(
    "literal, expected",
    [
        ("(23)(35)(0)+_37", "32782/1"),
        ("000+000", "0/1"),
        ("6371-0", "-6371/1"),
        ("63-71", "-6371/100"),
        ("1+_2", "1/1"),
    ],
)
def test_value(capsys, literal, expected):
    assert run(capsys, "value", literal) == (0, expected, "")


def test_value_json(capsys):
    code, out, _ = run(capsys, "value", "1+1_3", "--json")
    data = json.loads(out)
    assert code == 0 and (data["numerator"], data["denominator"], data["base"]) == (4, 3, 3)


def test_convert(capsys):
    assert run(capsys, "convert", "(23)(35)(0)+_37", "--to-base", "10")[:2] == \
        (0, "(3)(2)(7)(8)(2)+_10")
    assert run(capsys, "convert", "1+", "--to-base", "3")[:2] == (0, "1+_3")
    code, out, err = run(capsys, "convert", "(23)(35)(0)+(1)_37", "--to-base", "10")
    assert code == 3 and out == ""
    assert "denominator prime 37 ∤ 10" in err and "PF(37)={37}" in err
    assert "Disjoint" in err


def test_arith(capsys):
    assert run(capsys, "arith", "div", "1740+", "13+")[:2] == (0, "(10)(03)+(11)_13")
    assert run(capsys, "arith", "add", "459+", "0+")[:2] == (0, "459+")
    assert run(capsys, "arith", "div", "1+", "3+", "--accuracy", "4")[:2] == (0, "0+3333")
    assert run(capsys, "arith", "mul", "12-5", "2+")[:2] == (0, "25-")
    assert run(capsys, "arith", "div", "1740+", "21+")[:2] == (0, "145+6_7")
    code, out, _ = run(capsys, "arith", "div", "1740+", "21+", "--quotient-base", "21", "--json")
    data = json.loads(out)
    assert data["bases"] == [21] and data["values"] == ["580/7"]


def test_arith_errors(capsys):
    assert run(capsys, "arith", "div", "1+", "0+")[0] == 3
    assert run(capsys, "arith", "add", "1+", "2+", "--accuracy", "2")[0] == 2
    assert run(capsys, "arith", "add", "1+_2", "1+_3")[0] == 3


def test_parse_errors_exit_two(capsys):
    code, _, err = run(capsys, "value", "12")
    assert code == 2 and err.startswith("error:")
    assert run(capsys, "value", "1a+")[0] == 2
    assert run(capsys, "prob", "equal", "/nonexistent/a", "/nonexistent/b")[0] == 2


def test_prob_files(capsys, tmp_path):
    a = tmp_path / "psi.txt"
    b = tmp_path / "phi.txt"
    a.write_text("type Ra\n1 0 22+\n1 0 022+\n")
    b.write_text("type Ra\n1 0 22+0@(0,1)\n1 0 121+@(0,1)\n")
    assert run(capsys, "prob", "equal", str(a), str(b))[:2] == (0, "0.5")
    code, out, _ = run(capsys, "prob", "leq", str(a), str(b), "--json")
    assert code == 0 and json.loads(out)["probability"] == pytest.approx(1.0)
    bad = tmp_path / "bad.txt"
    bad.write_text("1 0\n")
    assert run(capsys, "prob", "equal", str(bad), str(a))[0] == 2


def test_transform(capsys, tmp_path):
    s = tmp_path / "s.txt"
    s.write_text("type I\n1 0 1+_2\n")
    code, out, _ = run(capsys, "transform", "T1", str(s))
    assert code == 0 and out.splitlines()[-1].endswith("1+_2@(1,0)")
    g = tmp_path / "h.txt"
    r = 2**-0.5
    g.write_text(f"tag H\nblock 2\n{r},0 {r},0\n{-r},0 {r},0\n")
    code, out, _ = run(capsys, "transform", str(g), str(s))
    lines = out.splitlines()
    assert code == 0 and "gauge g" in lines and len(lines) == 4
    code, out, _ = run(capsys, "transform", str(g), str(s), "--passive")
    assert "gauge H" in out.splitlines()
    assert run(capsys, "transform", str(tmp_path / "missing"), str(s))[0] == 2


def test_check(capsys):
    code, out, _ = run(capsys, "check", "add-identity", "--seed", "7")
    assert code == 0 and out.splitlines()[-1].endswith("checks passed")
    assert out.count("FAIL") == 0
    code, out, _ = run(capsys, "check", "order-total", "--json")
    assert code == 0 and json.loads(out)["passed"]
