from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kkwcalc import symbols as S
from kkwcalc.clifford import (
    CliffordElem,
    CovectorExpr,
    DimensionTooLarge,
    act_covector,
    c,
    c_dxn,
    c_xi,
    c_xi_prime,
    cb,
    covector,
    dxn_cxi_realization,
    generators,
    identity,
    matmul,
    matrix_trace,
    trace_product,
)
from kkwcalc.ring import MultiPoly, RatXi, parse_poly, sphere_integrate

P = parse_poly


@pytest.mark.parametrize("n", [4, 6])
def test_generator_relations_exhaustive(n):
    cs, cbs, one = generators(n)
    for i, j in product(range(n), repeat=2):
        delta = one.scale(2) if i == j else CliffordElem(n)
        assert cs[i] * cs[j] + cs[j] * cs[i] == -delta
        assert cbs[i] * cbs[j] + cbs[j] * cbs[i] == delta
        assert cs[i] * cbs[j] + cbs[j] * cs[i] == CliffordElem(n)


@pytest.mark.parametrize("n", [4, 6])
def test_word_products_agree_with_exterior_matrices(n):
    # the word basis is a bookkeeping device; the eps/iota matrices are the model
    cs, cbs, _ = generators(n)
    gens = cs + cbs
    for x, y in product(gens, repeat=2):
        assert (x * y).to_matrix() == matmul(x.to_matrix(), y.to_matrix())
    for x in gens:
        assert matrix_trace(x.to_matrix()) == 0


def test_generator_dimension_guard():
    with pytest.raises(DimensionTooLarge):
        generators(9)


def test_small_relations():
    one = identity(4)
    assert c(4, 1) * c(4, 1) == -one
    assert cb(4, 1) * cb(4, 1) == one
    assert (c(4, 1) * cb(4, 2)).trace().is_zero()


words = st.lists(st.tuples(st.sampled_from(["c", "cb"]), st.integers(1, 4)), max_size=6)


def _word(n, letters, coeff=1):
    out = CliffordElem.scalar(n, coeff)
    for kind, i in letters:
        out = out * (c(n, i) if kind == "c" else cb(n, i))
    return out


@settings(max_examples=100)
@given(words, words, words, words)
def test_trace_is_cyclic(w1, w2, w3, w4):
    x = _word(4, w1) + _word(4, w2, P("h1"))
    y = _word(4, w3, P("2*theta_1")) - _word(4, w4)
    assert (x * y).trace() == (y * x).trace()
    assert trace_product(x, y) == (x * y).trace()


@settings(max_examples=200)
@given(words)
def test_odd_generator_counts_have_zero_trace(w):
    n_c = sum(kind == "c" for kind, _ in w)
    n_cb = len(w) - n_c
    if n_c % 2 or n_cb % 2:
        assert _word(4, w).trace().is_zero()


@pytest.mark.parametrize("n", [4, 6])
def test_two_bar_two_plain_traces_vanish(n):
    for i, j, k, l in product(range(1, n + 1), repeat=4):
        if i != j:
            assert (cb(n, i) * cb(n, j) * c(n, k) * c(n, l)).trace().is_zero()


@pytest.mark.parametrize("n, dim", [(4, 16), (6, 64)])
def test_named_traces(n, dim):
    assert identity(n).trace() == RatXi(dim)
    assert (c_dxn(n) * c_dxn(n)).trace() == RatXi(-dim)
    thetap_n = MultiPoly.symbol(S.thetap(n, n))
    assert (covector(n, S.thetap, "c") * c_dxn(n)).trace() == RatXi(thetap_n.scale(-dim))


def test_covector_action():
    xi_sq = P("xi_1^2 + xi_2^2 + xi_3^2 + xin^2")
    assert c_xi(4) * c_xi(4) == identity(4).scale(-xi_sq)
    zero = act_covector(CovectorExpr((MultiPoly(),) * 4))
    assert zero.is_zero()
    e1 = act_covector(CovectorExpr((MultiPoly.const(1), MultiPoly(), MultiPoly(), MultiPoly()), "cb"))
    assert e1 == cb(4, 1)
    u = CovectorExpr(tuple(P(s) for s in ("h1", "0", "xi_1", "1")))
    v = CovectorExpr(tuple(P(s) for s in ("1", "theta_2", "0", "-1")))
    both = CovectorExpr(tuple(a + b for a, b in zip(u.coeffs, v.coeffs)))
    assert act_covector(both) == act_covector(u) + act_covector(v)


@pytest.mark.parametrize("n, coeff", [(4, -8), (6, -32)])
def test_normal_derivative_realization(n, coeff):
    tr = (dxn_cxi_realization(n) * c_xi_prime(n)).trace()
    assert sphere_integrate(tr.num, n - 1) == P(f"{coeff}*h1*Omega_{n - 1}")
    assert (dxn_cxi_realization(n) * c_dxn(n)).trace().is_zero()
