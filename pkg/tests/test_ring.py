import cmath
import math
from fractions import Fraction

import numpy as np
import pytest
from conftest import polys, ratxis, scalars
from hypothesis import assume, given, settings
from scipy.integrate import quad

from kkwcalc import symbols as S
from kkwcalc.ring import (
    I,
    MultiPoly,
    NonDecaying,
    RatXi,
    Scalar,
    format_poly,
    line_integral_xin,
    linear_power,
    parse_poly,
    piplus,
    principal_parts,
    sphere_integrate,
    sphere_moment,
    sphere_points,
)

P = parse_poly
XIN = MultiPoly.symbol("xin")


# --------------------------------------------------------------------------
# field and ring laws


@settings(max_examples=1000)
@given(scalars, scalars, scalars)
def test_scalar_field_laws(x, y, z):
    assert (x + y) + z == x + (y + z)
    assert x * (y * z) == (x * y) * z
    assert x * (y + z) == x * y + x * z
    assert x + y == y + x and x * y == y * x
    if x:
        assert x * x.inverse() == Scalar(1)


@settings(max_examples=1000)
@given(polys(), polys(), polys())
def test_multipoly_ring_laws(p, q, r):
    assert (p + q) + r == p + (q + r)
    assert (p * q) * r == p * (q * r)
    assert p * (q + r) == p * q + p * r
    assert p * q == q * p
    assert (p - p).is_zero()
    assert p * MultiPoly.const(1) == p


@settings(max_examples=200)
@given(polys())
def test_canonical_text_round_trips(p):
    assert parse_poly(format_poly(p)) == p
    assert format_poly(parse_poly(format_poly(p))) == format_poly(p)


def test_difference_of_squares():
    assert P("h1 + theta_1") * P("h1 - theta_1") == P("h1^2 - theta_1^2")
    assert (P("h1 + theta_1") * MultiPoly()).is_zero()


def test_sum_of_squares_at_rational_sphere_point():
    p = P("xi_1^2 + xi_2^2 + xi_3^2")
    assert p.evaluate({"xi_1": Fraction(3, 5), "xi_2": Fraction(4, 5), "xi_3": 0}) == Scalar(1)


def test_parse_rejects_malformed_symbols():
    with pytest.raises(ValueError):
        parse_poly("1+xin^2x")


# --------------------------------------------------------------------------
# rational functions in xin


def test_ratxi_examples():
    assert RatXi.pole(1, 0) * RatXi.pole(0, 1) == RatXi.pole(1, 1)
    assert RatXi(linear_power(I, 1), 2, 0) == RatXi.pole(1, 0)
    total = RatXi.pole(1, 0) + RatXi.pole(0, 1, -1)
    assert total == RatXi.pole(1, 1, Scalar(0, 2))
    assert cmath.isclose(total.evaluate({"xin": 2}).to_complex(), 1 / (2 - 1j) - 1 / (2 + 1j))


def test_ratxi_inverse_of_pure_pole_power():
    r = RatXi(linear_power(I, 2).scale(Scalar(3)), 0, 1)
    assert r * r.inverse() == RatXi(MultiPoly.const(1))
    with pytest.raises(ZeroDivisionError):
        RatXi(XIN).inverse()


@settings(max_examples=100)
@given(ratxis())
def test_principal_parts_recombine(r):
    up, lo, poly = principal_parts(r)
    assert up + lo + poly == r
    assert up.b == 0 and (up.is_zero() or up.num_degree() < up.a)
    assert lo.a == 0 and (lo.is_zero() or lo.num_degree() < lo.b)
    assert poly.a == 0 and poly.b == 0


@settings(max_examples=100)
@given(ratxis(), ratxis())
def test_piplus_idempotent_and_linear(r, s):
    assert piplus(piplus(r)) == piplus(r)
    assert piplus(r + s) == piplus(r) + piplus(s)
    _, lo, poly = principal_parts(r)
    assert piplus(lo + poly).is_zero()


def test_principal_parts_examples():
    up, lo, poly = principal_parts(RatXi.pole(1, 1, I))
    assert up == RatXi.pole(1, 0, Fraction(1, 2))
    assert lo == RatXi.pole(0, 1, Fraction(-1, 2))
    assert poly.is_zero()
    assert piplus(RatXi.pole(0, 1)).is_zero()
    r = RatXi(XIN * XIN, 2, 0)
    up, lo, poly = principal_parts(r)
    assert poly == RatXi(MultiPoly.const(1)) and lo.is_zero()
    assert up.a == 2 and up.num_degree() < 2


@settings(max_examples=100)
@given(ratxis(max_pole=4), ratxis(max_pole=4))
def test_xin_derivative_product_rule(r, s):
    assert (r * s).d_xin() == r.d_xin() * s + r * s.d_xin()


# --------------------------------------------------------------------------
# xin line integral


def test_line_integral_examples():
    assert line_integral_xin(RatXi.pole(2, 2)) == P("1/2*pi")
    assert line_integral_xin(RatXi.pole(2, 3)) == P("-3/8*i*pi")
    assert line_integral_xin(RatXi.pole(0, 2)).is_zero()
    with pytest.raises(NonDecaying):
        line_integral_xin(RatXi(XIN, 1, 1))


def _to_numpy(r: RatXi):
    coeffs = r.num_coeffs()
    top = max(coeffs, default=0)
    num = np.array([coeffs[k].constant_term().to_complex() if k in coeffs else 0 for k in range(top, -1, -1)])
    return lambda x: np.polyval(num, x) / ((x - 1j) ** r.a * (x + 1j) ** r.b)


def quadrature(f) -> tuple[complex, float]:
    """Integral over the real line and the L1 norm of the integrand."""
    def integrate(g, tol):
        value = quad(g, -1e4, 1e4, points=[-1.0, 0.0, 1.0], limit=500, epsabs=tol, epsrel=1e-11)[0]
        # at 1/xin^2 decay the tails beyond 1e4 exceed the tolerance, so integrate them too
        value += quad(g, 1e4, np.inf, epsabs=tol, epsrel=1e-11)[0]
        return value + quad(g, -np.inf, -1e4, epsabs=tol, epsrel=1e-11)[0]

    # odd parts cancel, so an absolute floor scaled by the L1 norm is needed
    l1 = integrate(lambda x: abs(f(x)), 0)
    tol = 1e-12 * l1
    return complex(integrate(lambda x: f(x).real, tol), integrate(lambda x: f(x).imag, tol)), l1


@settings(max_examples=50)
@given(ratxis(max_pole=4, min_decay=2, coeff_polys=scalars.map(MultiPoly.const)))
def test_line_integral_matches_quadrature(r):
    assume(r.a + r.b >= 2 and not r.is_zero())
    exact = line_integral_xin(r)
    assert exact.symbols() <= {S.PI}
    value = (exact.subs({S.PI: 1}).constant_term().to_complex()) * math.pi
    numeric, l1 = quadrature(_to_numpy(r))
    assert cmath.isclose(value, numeric, rel_tol=1e-8, abs_tol=1e-10 * l1)


# --------------------------------------------------------------------------
# sphere moments


def _double_factorial_moment(alpha, m):
    # Gamma-function form of the same moment, as an independent closed form
    if any(e % 2 for e in alpha):
        return 0.0
    half = [(e + 1) / 2 for e in alpha] + [0.5] * (m - len(alpha))
    log_num = sum(math.lgamma(h) for h in half) - math.lgamma(sum(half))
    log_den = m * math.lgamma(0.5) - math.lgamma(m / 2)
    return math.exp(log_num - log_den)


@pytest.mark.parametrize("m", [3, 5])
def test_sphere_moment_matches_gamma_formula(m):
    for alpha in [(2,), (4,), (2, 2), (2, 2, 2), (6,), (4, 2), (1,), (3, 1)]:
        if len(alpha) <= m:
            assert math.isclose(float(sphere_moment(alpha, m)), _double_factorial_moment(alpha, m), rel_tol=1e-12)


def test_sphere_examples():
    assert sphere_integrate(P("xi_1"), 3).is_zero()
    assert sphere_integrate(P("xi_1^2"), 3) == P("1/3*Omega_3")
    assert sphere_integrate(P("xi_1^2*xi_2^2"), 3) == P("1/15*Omega_3")
    assert sphere_integrate(P("h1*xi_1^2 + theta_2"), 3) == P("1/3*Omega_3*h1 + Omega_3*theta_2")


@pytest.mark.parametrize("m", [1, 2, 3, 4, 5, 7])
def test_sum_of_squares_integrates_to_omega(m):
    p = sum((MultiPoly.symbol(S.xi(j), 2) for j in range(1, m + 1)), MultiPoly())
    assert sphere_integrate(p, m) == MultiPoly.symbol(S.omega(m))


def test_sphere_points_lie_on_sphere():
    for m in (3, 5):
        pts = sphere_points(m)
        assert len(pts) > 2 * m
        assert all(sum(v * v for v in pt.values()) == 1 for pt in pts)


def test_sphere_moments_against_monte_carlo():
    rng = np.random.default_rng(20240611)
    samples = 10**6
    for m in (3, 5):
        x = rng.standard_normal((samples, m))
        x /= np.linalg.norm(x, axis=1, keepdims=True)
        for _ in range(10):
            degree = rng.integers(0, 5)
            alpha = np.bincount(rng.integers(0, m, size=degree), minlength=m)
            values = np.prod(x ** alpha, axis=1)
            mean, stderr = values.mean(), values.std(ddof=1) / math.sqrt(samples)
            exact = float(sphere_moment(alpha.tolist(), m))
            assert abs(mean - exact) <= 3 * stderr + 1e-15, (m, alpha, mean, exact)
