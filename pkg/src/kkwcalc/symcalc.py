"""Graded symbol calculus at the boundary point x0.

Composition keeps only what the boundary cases need: first derivatives in
(xi_n, x_n).  Tangential x-derivatives vanish at x0, and second x-derivatives
are never available, so a composition that would need them raises.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from kkwcalc import symbols as S
from kkwcalc.clifford import CliffordElem, c_xi
from kkwcalc.ring import MultiPoly, RatXi, Scalar, _principal_part

MINUS_I = Scalar(0, -1)


class MissingJet(LookupError):
    pass


class NonDecayingEntry(ArithmeticError):
    pass


@dataclass(frozen=True)
class JetSym:
    """order -> (value, normal x-derivative or None) at x0."""

    orders: Mapping[int, tuple[CliffordElem, CliffordElem | None]]
    exact: bool = False  # True when all orders below the lowest stored one vanish

    @property
    def top(self) -> int:
        return max(self.orders)

    @property
    def bottom(self) -> int:
        return min(self.orders)

    @property
    def n(self) -> int:
        return next(iter(self.orders.values()))[0].n

    def value(self, order: int) -> CliffordElem:
        if order in self.orders:
            return self.orders[order][0]
        if self.exact and order < self.bottom:
            return CliffordElem(self.n)
        raise MissingJet(f"order {order} not available")

    def jet(self, order: int) -> CliffordElem:
        if order in self.orders:
            j = self.orders[order][1]
            if j is None:
                raise MissingJet(f"no x_n derivative stored at order {order}")
            return j
        if self.exact and order < self.bottom:
            return CliffordElem(self.n)
        raise MissingJet(f"order {order} not available")

    def has_order(self, order: int) -> bool:
        return order in self.orders or (self.exact and order < self.bottom)


def _tag(x: CliffordElem, tag: str | None) -> CliffordElem:
    return x.scale(MultiPoly.symbol(S.marker(tag))) if tag else x


def jet_compose(a: JetSym, b: JetSym, min_order: int, tag: str | None = None) -> JetSym:
    """Symbol of the composition down to ``min_order``.

    sigma(AB) = sum_alpha (1/alpha!) d_xi^alpha sigma_A D_x^alpha sigma_B with
    D_x = -i d_x; only alpha along x_n survives at x0.  Derivative terms are
    multiplied by the marker of ``tag`` when given.
    """
    top = a.top + b.top
    if top - 2 >= min_order:
        raise MissingJet("second x-derivatives would be needed")
    out: dict[int, tuple[CliffordElem, CliffordElem | None]] = {}
    for order in range(top, min_order - 1, -1):
        val = CliffordElem(a.n)
        for i in range(a.top, order - b.top - 1, -1):
            val = val + a.value(i) * b.value(order - i)
        for i in range(a.top, order - b.top, -1):
            j = order + 1 - i
            if not b.has_order(j):
                raise MissingJet(f"order {j} of the right factor")
            da = a.value(i).d_xin()
            if da.is_zero():
                continue
            val = val + _tag((da * b.jet(j)).scale(MINUS_I), tag)
        jet = None
        if order == top:
            ta, tb = a.orders[a.top], b.orders[b.top]
            if ta[1] is not None and tb[1] is not None:
                jet = ta[1] * tb[0] + ta[0] * tb[1]
        out[order] = (val.reduced(), jet.reduced() if jet is not None else None)
    return JetSym(out)


def _bar_xi_sq(n: int) -> MultiPoly:
    # |xi|^2 on the unit tangential sphere is 1 + xin^2
    return MultiPoly.const(1) + MultiPoly.symbol(S.XIN, 2)


def inverse_leading(n: int, power: int) -> CliffordElem:
    """i c(xi) / |xi|^(2*power), the inverse of (i c(xi))^(2*power - 1)."""
    return c_xi(n).scale(RatXi(MultiPoly.const(Scalar(0, 1)), power, power))


def _next_inverse(p_top: CliffordElem, p_top_jet: CliffordElem, p_sub: CliffordElem,
                  q: CliffordElem, tagged: bool) -> tuple[CliffordElem, CliffordElem]:
    q_jet = -(q * p_top_jet * q)
    geometric = q * p_top.d_xin() * q_jet.scale(MINUS_I)
    q_sub = -(q * p_sub * q) - _tag(geometric, "jet" if tagged else None)
    return q_jet.reduced(), q_sub.reduced()


def invert_first_order(spec, chart, tagged: bool = False) -> JetSym:
    """q_{-1}, with its x_n jet, and q_{-2} for a first-order operator."""
    from kkwcalc.boundary import sigma_symbols

    sym = sigma_symbols(spec, chart, tagged)
    p1, p1_jet = sym.orders[1]
    q1 = inverse_leading(chart.n, 1)
    q1_jet, q2 = _next_inverse(p1, p1_jet, sym.value(0), q1, tagged)
    return JetSym({-1: (q1, q1_jet), -2: (q2, None)})


@dataclass(frozen=True)
class CubeSymbols:
    sigma3: CliffordElem
    sigma3_jet: CliffordElem
    sigma2: CliffordElem
    inverse: JetSym  # orders -3 (with jet) and -4


def compose_three(specs, chart, tagged: bool = False) -> JetSym:
    from kkwcalc.boundary import sigma_symbols

    syms = [JetSym(sigma_symbols(s, chart, tagged).orders, exact=True) for s in specs]
    tag = "jet" if tagged else None
    ab = jet_compose(syms[0], syms[1], min_order=1, tag=tag)
    return jet_compose(ab, syms[2], min_order=2, tag=tag)


def cube_and_invert(specs, chart, tagged: bool = False) -> CubeSymbols:
    """sigma_3, sigma_2 of the composed third-order operator and q_{-3}, q_{-4}."""
    if len(specs) != 3:
        raise ValueError("need three operator specs")
    abc = compose_three(specs, chart, tagged)
    p3, p3_jet = abc.orders[3]
    p2 = abc.value(2)
    q3 = inverse_leading(chart.n, 2)
    q3_jet, q4 = _next_inverse(p3, p3_jet, p2, q3, tagged)
    return CubeSymbols(p3, p3_jet, p2, JetSym({-3: (q3, q3_jet), -4: (q4, None)}))


def piplus_entry(r: RatXi) -> RatXi:
    if r.num.terms and r.num_degree() >= r.a + r.b:
        raise NonDecayingEntry(f"entry has a polynomial part: {r}")
    return _principal_part(r, True)


def piplus_elem(x: CliffordElem) -> CliffordElem:
    """Upper half-plane principal part of every word coefficient."""
    return x.reduced().map_entries(piplus_entry)


def deriv(x, var: str):
    """Derivative in ``xin`` (normal covector), ``xn`` (normal coordinate),
    ``x<j>`` (tangential coordinate) or ``xi_<j>`` (tangential covector)."""
    if isinstance(x, JetSym):
        if var == S.XIN:
            return JetSym({o: (v.d_xin(), j.d_xin() if j is not None else None)
                           for o, (v, j) in x.orders.items()}, x.exact)
        if var == "xn":
            return JetSym({o: (x.jet(o), None) for o in x.orders}, x.exact)
        if var.startswith("x") and var[1:].isdigit():
            return JetSym({o: (CliffordElem(x.n), None) for o in x.orders}, x.exact)
        if var.startswith("xi_"):
            return JetSym({o: (deriv(v, var), None) for o, (v, _) in x.orders.items()}, x.exact)
        raise ValueError(f"unknown variable {var!r}")
    if var == S.XIN:
        return x.d_xin()
    if var == "xn":
        raise MissingJet("a bare element carries no x_n jet")
    if var.startswith("x") and var[1:].isdigit():
        return CliffordElem(x.n)
    if var.startswith("xi_"):
        if x.a or x.b:
            # denominators carry |xi'|^2 = 1 already, so the tangential
            # derivative is not recoverable from this representation
            raise ValueError("tangential xi-derivative of a rational entry")
        return x.map_numerators(lambda p: p.diff(var))
    raise ValueError(f"unknown variable {var!r}")
