"""The exact engine against the floating-point re-derivation in scripts/numeric_oracle.py."""

import cmath
from fractions import Fraction

import numeric_oracle as oracle
import pytest

from kkwcalc import kkw
from kkwcalc import symbols as S

H1, THETA_N, THETAP_N = Fraction(37, 100), Fraction(-3, 5), Fraction(13, 20)


def _engine_values(suite):
    n = oracle.SUITES[suite][0]
    values = {S.H1: H1, S.thetap(n, n): THETAP_N, S.PI: 1, S.omega(n - 1): 1}
    return {r.case.label: r.density.coeff.evaluate(values).to_complex()
            for r in kkw.run_pairing(kkw.pairing_for(suite))}


def _compare(suite, label):
    n = oracle.SUITES[suite][0]
    params = oracle.Params(n, float(H1), float(THETA_N), float(THETAP_N))
    numeric = oracle.case_value(suite, label, params)
    exact = _engine_values(suite)[label]
    assert cmath.isclose(numeric, exact, rel_tol=1e-7, abs_tol=1e-7), (numeric, exact)


@pytest.mark.parametrize("suite", ["kkw4", "kkw4sq"])
@pytest.mark.parametrize("label", ["a.II", "a.III", "b", "c"])
def test_four_dimensional_cases(suite, label):
    _compare(suite, label)


@pytest.mark.slow
@pytest.mark.parametrize("suite", ["kkw6", "kkw6cu"])
@pytest.mark.parametrize("label", ["a.II", "a.III", "b", "c"])
def test_six_dimensional_cases(suite, label):
    _compare(suite, label)


def test_oracle_reproduces_published_four_dimensional_values():
    # an engine-independent check of the oracle itself against the literal expectations
    expected = kkw.expectations("kkw4")
    params = oracle.Params(4, float(H1), float(THETA_N), float(THETAP_N))
    values = {S.H1: H1, S.thetap(4, 4): THETAP_N, S.PI: 1, S.omega(3): 1}
    for label in ("a.II", "a.III", "b", "c"):
        literal = expected[label].evaluate(values).to_complex()
        assert cmath.isclose(oracle.case_value("kkw4", label, params), literal, rel_tol=1e-7, abs_tol=1e-7)
