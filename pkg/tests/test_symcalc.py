import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kkwcalc import symbols as S
from kkwcalc.boundary import chart_axioms, d_hat, d_hat_adjoint, sigma_symbols
from kkwcalc.clifford import CliffordElem, c, c_dxn, c_xi, c_xi_prime, cb, covector, identity
from kkwcalc.lemmas import zero_on_sphere
from kkwcalc.ring import RatXi, Scalar, parse_poly
from kkwcalc.symcalc import (
    JetSym,
    MissingJet,
    NonDecayingEntry,
    compose_three,
    cube_and_invert,
    deriv,
    invert_first_order,
    jet_compose,
    piplus_elem,
)

P = parse_poly
I = Scalar(0, 1)


def _flat(n):
    return {S.H1: 0, **{S.theta(i, n): 0 for i in range(1, n + 1)}, **{S.thetap(i, n): 0 for i in range(1, n + 1)}}


@pytest.mark.parametrize("n", [4, 6])
@pytest.mark.parametrize("make", [d_hat, d_hat_adjoint])
def test_parametrix_through_order_minus_one(n, make):
    chart = chart_axioms(n)
    sym = JetSym(sigma_symbols(make(n), chart).orders, exact=True)
    q = invert_first_order(make(n), chart)
    composed = jet_compose(sym, q, min_order=-1)
    assert zero_on_sphere(composed.value(0) - identity(n))
    assert zero_on_sphere(composed.value(-1))


def test_leading_inverse_closed_form():
    q = invert_first_order(d_hat(4), chart_axioms(4))
    assert q.value(-1) == c_xi(4).scale(RatXi.pole(1, 1, I))
    p1 = c_xi(4).scale(I)
    assert zero_on_sphere(p1 * q.value(-1) - identity(4))


@pytest.mark.parametrize("specs", [(d_hat, d_hat, d_hat), (d_hat_adjoint, d_hat, d_hat_adjoint)])
def test_cube_leading_symbols(specs):
    n = 6
    chart = chart_axioms(n)
    cube = cube_and_invert([make(n) for make in specs], chart)
    xi_sq_full = P("xi_1^2 + xi_2^2 + xi_3^2 + xi_4^2 + xi_5^2 + xin^2")
    assert cube.sigma3 == c_xi(n).scale(xi_sq_full.scale(I))
    assert cube.inverse.value(-3) == c_xi(n).scale(RatXi.pole(2, 2, I))
    assert zero_on_sphere(cube.sigma3 * cube.inverse.value(-3) - identity(n))
    assert cube.sigma2.subs(_flat(n)).is_zero()


def test_cube_sigma2_ordering_difference():
    # placing p0 in each of three slots: the c(thetap) parts give
    # 2|xi|^2 c(thetap) - c(xi)c(thetap)c(xi) for D^3 and the negated first
    # term for D* D D*, so the orderings differ by exactly 4|xi|^2 c(thetap)
    n = 6
    chart = chart_axioms(n)
    cubed = compose_three([d_hat(n)] * 3, chart).value(2)
    mixed = compose_three([d_hat_adjoint(n), d_hat(n), d_hat_adjoint(n)], chart).value(2)
    xi_sq_full = P("xi_1^2 + xi_2^2 + xi_3^2 + xi_4^2 + xi_5^2 + xin^2")
    assert cubed - mixed == covector(n, S.thetap, "c").scale(xi_sq_full.scale(4))


def test_missing_second_derivative_raises():
    chart = chart_axioms(4)
    sym = JetSym(sigma_symbols(d_hat(4), chart).orders, exact=True)
    with pytest.raises(MissingJet):
        jet_compose(sym, sym, min_order=0)


def test_piplus_examples():
    n = 4
    got = piplus_elem(c_xi(n).scale(RatXi.pole(2, 2)))
    expected = (c_xi_prime(n).scale(P("i*xin + 2")) + c_dxn(n).scale(I)).scale(RatXi.pole(2, 0, Scalar(-1) / 4))
    assert got == expected
    sigma_minus_1 = c_xi(n).scale(RatXi.pole(1, 1, I))
    expected = (c_xi_prime(n) + c_dxn(n).scale(I)).scale(RatXi.pole(1, 0, Scalar(1) / 2))
    assert piplus_elem(sigma_minus_1) == expected
    assert piplus_elem(expected) == expected
    with pytest.raises(NonDecayingEntry):
        piplus_elem(c_xi(n))


def test_xin_derivatives_of_leading_inverse():
    n = 4
    sigma = c_xi(n).scale(RatXi.pole(1, 1, I))
    first = c_dxn(n).scale(RatXi.pole(1, 1)) - (c_xi_prime(n).scale(P("2*xin")) + c_dxn(n).scale(P("2*xin^2"))).scale(
        RatXi.pole(2, 2)
    )
    assert deriv(sigma, S.XIN) == first.scale(I)
    second = (c_dxn(n).scale(P("-6*xin")) - c_xi_prime(n).scale(2)).scale(RatXi.pole(2, 2)) + c_xi(n).scale(
        RatXi.pole(3, 3, P("8*xin^2"))
    )
    assert deriv(deriv(sigma, S.XIN), S.XIN) == second.scale(I)
    assert deriv(cb(n, 1).scale(P("h1")), S.XIN).is_zero()


elements = st.lists(
    st.tuples(st.integers(1, 4), st.integers(0, 2), st.integers(0, 2), st.integers(-3, 3)), min_size=1, max_size=4
)


def _elem(spec):
    out = CliffordElem(4)
    for i, a, b, k in spec:
        out = out + c(4, i).scale(RatXi(P(f"{k}*xin + h1"), a, b))
    return out


@settings(max_examples=100)
@given(elements, elements)
def test_product_rule_in_xin(x, y):
    x, y = _elem(x), _elem(y)
    assert deriv(x * y, S.XIN) == deriv(x, S.XIN) * y + x * deriv(y, S.XIN)


def test_product_rule_in_xn_for_leading_jets():
    chart = chart_axioms(4)
    sym = JetSym(sigma_symbols(d_hat(4), chart).orders, exact=True)
    square = jet_compose(sym, sym, min_order=1)
    p1, p1_jet = sym.orders[1]
    assert square.jet(2) == p1_jet * p1 + p1 * p1_jet
    assert deriv(JetSym({2: square.orders[2]}), "xn").value(2) == square.jet(2)
    assert deriv(sym, "x1").value(1).is_zero()
