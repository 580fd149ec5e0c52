"""Closed-form symbol displays, compared against the machine-derived symbols.

Element identities are decided on the unit tangential sphere by exact
evaluation at the rational points of ``ring.sphere_points``.
"""

from __future__ import annotations

from fractions import Fraction

from kkwcalc import symbols as S
from kkwcalc.boundary import (
    BoundaryChart,
    OperatorSpec,
    b0_parts,
    chart_axioms,
    d_hat,
    d_hat_adjoint,
    order_zero_parts,
)
from kkwcalc.clifford import (
    CliffordElem,
    c,
    c_dxn,
    c_xi,
    cb,
    covector,
    dxn_cxi_realization,
    format_elem,
)
from kkwcalc.ring import MultiPoly, RatXi, Scalar, sphere_points
from kkwcalc.symcalc import compose_three, invert_first_order


def _h1() -> MultiPoly:
    return MultiPoly.symbol(S.H1)


def _xi_sq() -> MultiPoly:
    return MultiPoly.const(1) + MultiPoly.symbol(S.XIN, 2)


def first_sphere_failure(x: CliffordElem):
    """First rational sphere point where ``x`` is nonzero, with the value there."""
    if x.is_zero():
        return None
    for point in sphere_points(x.n - 1):
        v = x.subs(point)
        if not v.is_zero():
            return point, v
    return None


def zero_on_sphere(x: CliffordElem) -> bool:
    return first_sphere_failure(x) is None


def _full_xi_sq(n: int) -> MultiPoly:
    out = MultiPoly.symbol(S.XIN, 2)
    for j in range(1, n):
        out = out + MultiPoly.symbol(S.xi(j), 2)
    return out


def q2_display(spec: OperatorSpec, chart: BoundaryChart) -> CliffordElem:
    """c sigma_0 c / |xi|^4 + c(xi)/|xi|^6 c(dx_n) [d_xn c(xi') |xi|^2 - c(xi) h1],
    with sigma_0 the order-zero symbol of the operator being inverted."""
    n = chart.n
    cx = c_xi(n)
    sigma0 = CliffordElem(n)
    for part in order_zero_parts(spec, chart).values():
        sigma0 = sigma0 + part
    first = (cx * sigma0 * cx).scale(RatXi(1, 2, 2))
    bracket = dxn_cxi_realization(n).scale(_xi_sq()) - cx.scale(_h1())
    second = (cx * c_dxn(n) * bracket).scale(RatXi(1, 3, 3))
    return first + second


def sigma3_display(n: int) -> CliffordElem:
    return c_xi(n).scale(_full_xi_sq(n).scale(Scalar(0, 1)))


def sigma2_display(specs, chart: BoundaryChart) -> CliffordElem:
    """The order-two symbol of a product of three first-order operators, as displayed
    for D* D D* and D^3, evaluated at x0 of the collar chart."""
    n = chart.n
    if specs[0].thetap_sign != specs[2].thetap_sign or specs[1].thetap_sign != 1:
        raise ValueError("display available for D* D D* and D D D only")
    adjoint = specs[0].thetap_sign < 0
    quarter = Scalar(Fraction(1, 4))
    h1 = _h1()
    cx = c_xi(n)
    ctp = covector(n, S.thetap, "c")
    cbt = covector(n, S.theta, "cb")
    xi_sq = _full_xi_sq(n)
    # sum_l c(dx_l) d_l(g^ij) xi_i xi_j: only l = n survives at x0
    out = c_dxn(n).scale(h1)
    # c(xi) (4 sigma^k + 4 a^k - 2 Gamma^k) xi_k
    inner = CliffordElem(n)
    for k in range(1, n):
        sigma_k = c(n, k) * c(n, n, h1.scale(quarter))
        a_k = -(cb(n, k) * cb(n, n, h1.scale(quarter)))
        inner = inner + (sigma_k + a_k).scale(MultiPoly.symbol(S.xi(k)).scale(4))
    gamma_n = chart.gamma_contracted
    inner = inner - CliffordElem.scalar(n, gamma_n.scale(2) * MultiPoly.symbol(S.XIN))
    out = out + cx * inner
    sandwich = cx * ctp * cx
    if adjoint:
        out = out - (sandwich + ctp.scale(xi_sq)).scale(2)
    else:
        out = out - (sandwich - ctp.scale(xi_sq)).scale(2)
    b01, b02 = b0_parts(chart)
    out = out + (b01 + b02).scale(xi_sq)
    sign = -1 if adjoint else 1
    out = out + (cbt + ctp.scale(sign)).scale(xi_sq)
    return out


def b02_expected(n: int) -> CliffordElem:
    return c_dxn(n).scale(_h1().scale(Scalar(Fraction(-(n - 1), 4))))


def expectations() -> dict[str, str]:
    """Lemma records compare elements, so expectations are the displayed forms."""
    return {}


def _elem_record(case_id: str, display: CliffordElem, machine: CliffordElem):
    from kkwcalc.kkw import CaseRecord

    diff = (machine - display).reduced()
    failure = first_sphere_failure(diff)
    terms = []
    if failure is not None:
        point, value = failure
        where = ",".join(str(point[S.xi(j)]) for j in range(1, diff.n))
        terms.append((f"machine - display at xi'=({where})", format_elem(value)))
    match = failure is None
    return CaseRecord(case_id, format_elem(display.reduced()), format_elem(machine.reduced()), match, terms)


def records(expected=None):
    out = []
    for n in (4, 6):
        chart = chart_axioms(n)
        b01, b02 = b0_parts(chart)
        out.append(_elem_record(f"b02.n{n}", b02_expected(n), b02))
    chart = chart_axioms(4)
    for spec in (d_hat(4), d_hat_adjoint(4)):
        q = invert_first_order(spec, chart)
        out.append(_elem_record(f"q2.{spec.name}.n4", q2_display(spec, chart), q.value(-2)))
    chart = chart_axioms(6)
    cubes = {
        "DsDDs": (d_hat_adjoint(6), d_hat(6), d_hat_adjoint(6)),
        "DDD": (d_hat(6), d_hat(6), d_hat(6)),
    }
    for name, specs in cubes.items():
        composed = compose_three(specs, chart)
        out.append(_elem_record(f"sigma3.{name}.n6", sigma3_display(6), composed.value(3)))
        out.append(_elem_record(f"sigma2.{name}.n6", sigma2_display(specs, chart), composed.value(2)))
    return out
