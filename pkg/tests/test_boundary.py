import pytest

from kkwcalc import symbols as S
from kkwcalc.boundary import b0_parts, chart_axioms, d_hat, d_hat_adjoint, sigma_symbols
from kkwcalc.clifford import CliffordElem, c_dxn, c_xi, c_xi_prime, covector
from kkwcalc.ring import MultiPoly, Scalar, parse_poly

P = parse_poly
I = Scalar(0, 1)


@pytest.mark.parametrize("n, gamma", [(4, "3/2*h1"), (6, "5/2*h1")])
def test_chart_contractions(n, gamma):
    chart = chart_axioms(n)
    assert chart.gamma_contracted == P(gamma)
    half = P("1/2*h1")
    for i in range(1, n):
        assert chart.omega_conn[(n, i, i)] == half
        assert chart.omega_conn[(i, n, i)] == -half
        assert chart.christoffel[(n, i, i)] == half
        assert chart.christoffel[(i, n, i)] == -half
        assert chart.christoffel[(i, i, n)] == -half
        assert chart.tangential_metric_derivative(i).is_zero()
    assert len(chart.omega_conn) == 2 * (n - 1)
    assert chart.tangential_metric_derivative(n) == P("h1")


@pytest.mark.parametrize("n, coeff", [(4, "-3/4*h1"), (6, "-5/4*h1")])
def test_b0_parts(n, coeff):
    b01, b02 = b0_parts(chart_axioms(n))
    assert b02 == c_dxn(n).scale(P(coeff))
    assert (b01 * c_dxn(n)).trace().is_zero()
    assert b01.symbols() == {S.H1}


def test_sigma_symbols():
    n = 4
    chart = chart_axioms(n)
    sym = sigma_symbols(d_hat(n), chart)
    p1, p1_jet = sym.orders[1]
    assert p1 == (c_xi_prime(n) + c_dxn(n).scale(P("xin"))).scale(I)
    assert p1 == c_xi(n).scale(I)
    assert p1_jet == c_xi_prime(n).scale(P("1/2*i*h1"))
    adjoint = sigma_symbols(d_hat_adjoint(n), chart)
    assert sym.value(0) - adjoint.value(0) == covector(n, S.thetap, "c").scale(2)
    flat = sigma_symbols(d_hat(n, include_theta=False, include_thetap=False), chart).value(0)
    b01, b02 = b0_parts(chart)
    assert flat == b01 + b02


def test_dimension_mismatch_is_rejected():
    with pytest.raises(ValueError):
        sigma_symbols(d_hat(4), chart_axioms(6))


def test_leading_symbol_times_inverse_is_identity_on_sphere():
    from kkwcalc.lemmas import zero_on_sphere
    from kkwcalc.ring import RatXi

    n = 6
    inverse = c_xi(n).scale(RatXi.pole(1, 1, I))
    assert zero_on_sphere(c_xi(n).scale(I) * inverse - CliffordElem.scalar(n, MultiPoly.const(1)))
