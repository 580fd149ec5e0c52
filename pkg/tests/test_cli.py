import json
import os
import subprocess
import sys

import pytest
from conftest import REPO
from hypothesis import given, settings
from hypothesis import strategies as st

from kkwcalc import kkw
from kkwcalc.cli import app
from kkwcalc.cli.expr import FUNCS, Binary, Gen, Name, Num, ParseError, Unary, evaluate, format_expr, format_value, parse_expr

GOLDENS = REPO / "goldens"

leaves = st.one_of(
    st.integers(0, 40).map(Num),
    st.sampled_from(["h1", "xin", "i", "theta_1", "xi_2", "s"]).map(Name),
    st.tuples(st.sampled_from(["c", "cb"]), st.sampled_from(["e1", "e4", "xi'", "xi", "dxn", "theta", "thetap"])).map(
        lambda t: Gen(*t)
    ),
    st.just(Gen("dxnc", "xi'")),
)


def _extend(children):
    return st.one_of(
        st.tuples(st.sampled_from(("neg",) + FUNCS), children).map(lambda t: Unary(*t)),
        st.tuples(st.sampled_from("+-*/"), children, children).map(lambda t: Binary(*t)),
        st.tuples(children, st.integers(0, 5)).map(lambda t: Binary("^", t[0], Num(t[1]))),
    )


expressions = st.recursive(leaves, _extend, max_leaves=12)


@settings(max_examples=200)
@given(expressions)
def test_print_parse_fixpoint(tree):
    text = format_expr(tree)
    assert parse_expr(text) == tree
    assert format_expr(parse_expr(text)) == text


def test_whitespace_and_precedence():
    assert parse_expr("tr( c(dxn)*c(dxn) )") == parse_expr("tr(c(dxn) * c(dxn))")
    assert parse_expr("1 + 2*xin^2") == Binary("+", Num(1), Binary("*", Num(2), Binary("^", Name("xin"), Num(2))))


@pytest.mark.parametrize("text, offset", [("tr(", 3), ("c(e1", 4), ("1 +", 3), ("c(zeta)", 2), ("xin^h1", 4), ("(1))", 3)])
def test_parse_errors_carry_offsets(text, offset):
    with pytest.raises(ParseError) as info:
        parse_expr(text)
    assert info.value.offset == offset
    assert info.value.expected


def _eval(text, n=4):
    return format_value(evaluate(parse_expr(text), n))


def test_eval_examples():
    assert _eval("tr( c(dxn) * c(dxn) )") == "-16"
    assert _eval("tr( c(dxn) * c(dxn) )", 6) == "-64"
    assert _eval("tr( c(thetap) * c(dxn) )", 6) == "-64*thetap_n"
    assert _eval("intxin(1/(1+xin^2)^2)") == "1/2*pi"
    assert _eval("sphere(xi_1^2*xi_2^2)") == "1/15*Omega_3"


def test_eval_projection_matches_closed_form():
    got = evaluate(parse_expr("piplus( (i * c(xi)) / (1 + xin^2)^2 )"), 4)
    expected = evaluate(parse_expr("-((i*xin + 2)*c(xi') + i*c(dxn)) / (4*(xin - i)^2) * i"), 4)
    assert got == expected


def test_normal_derivative_uses_chart_realization():
    assert _eval("tr(dxn(c(xi')) * c(dxn))") == "0"
    assert evaluate(parse_expr("dxn(c(xi'))"), 4) == evaluate(parse_expr("dxnc(xi')"), 4)


def test_division_by_non_pole_is_rejected():
    with pytest.raises(app.EvalError):
        evaluate(parse_expr("1/(1+xin)"), 4)


def _cli(*args, env=None):
    return subprocess.run(
        [sys.executable, "-m", "kkwcalc.cli", *args], capture_output=True, text=True, env=env, cwd=REPO
    )


def test_exit_status_contract(tmp_path):
    ok = _cli("verify", "--suite", "kkw4", "--report", "json")
    assert ok.returncode == 0
    doc = json.loads(ok.stdout)
    assert [c["id"] for c in doc["cases"]] == ["a.I", "a.II", "a.III", "b", "c", "total"]
    assert doc["summary"] == {"passed": 6, "failed": 0}
    assert _cli("eval", "tr(").returncode == 2
    assert _cli("verify", "--suite", "nope").returncode == 2
    assert _cli("verify", "--suite", "kkw4", "--dim", "6").returncode == 2
    assert _cli("goldens").returncode == 2
    broken = tmp_path / "kkw4.txt"
    broken.write_text((GOLDENS / "kkw4.txt").read_text().replace("total = -8*", "total = 8*"))
    assert _cli("verify", "--suite", "kkw4", "--golden", str(broken)).returncode == 1
    out = tmp_path / "report.txt"
    assert _cli("verify", "--suite", "kkw4sq", "--output", str(out)).returncode == 0
    assert out.read_text().endswith("summary: passed 7 failed 0\n")


def test_eval_command_output():
    done = _cli("eval", "tr( c(thetap) * c(dxn) )", "--dim", "6")
    assert (done.returncode, done.stdout) == (0, "-64*thetap_n\n")


@pytest.mark.parametrize("suite", kkw.SUITES)
def test_reports_match_golden_snapshots(suite):
    text, _ = app.run_verify(suite, report="json")
    assert text == (GOLDENS / "reports" / f"{suite}.json").read_text()


@pytest.mark.parametrize("suite", ["kkw4", "kkw6"])
def test_reports_identical_across_parallel_settings(suite):
    serial, _ = app.run_verify(suite, report="json", parallel=1)
    fanned, _ = app.run_verify(suite, report="json", parallel=4)
    assert serial == fanned
    assert app.run_verify(suite, report="text", parallel=2)[0] == app.run_verify(suite, report="text")[0]


def test_golden_expectations_round_trip():
    for suite in ("kkw4", "kkw4sq", "kkw6", "kkw6cu", "interior", "spectral"):
        assert app.read_expectations(GOLDENS / f"{suite}.txt") == kkw.expectations(suite)


def test_goldens_write_honours_environment_override(tmp_path):
    env = dict(os.environ, **{app.GOLDEN_ENV: str(tmp_path)})
    done = _cli("goldens", "--write", env=env)
    assert done.returncode == 0
    assert (tmp_path / "kkw4.txt").read_text() == (GOLDENS / "kkw4.txt").read_text()
    assert (tmp_path / "reports" / "spectral.json").read_bytes() == (GOLDENS / "reports" / "spectral.json").read_bytes()


def test_dimension_filter():
    text, status = app.run_verify("lemmas", dim=4)
    assert status == 0 and "n6" not in text
    text, status = app.run_verify("lemmas", dim=6)
    assert "n4" not in text
