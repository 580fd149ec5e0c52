"""Collar chart at a boundary point and the symbols of the modified Novikov operators.

Near the boundary the metric is h(x_n)^{-1} g_boundary + dx_n^2 in normal
coordinates centred at x0.  At x0 every tangential derivative of the metric
vanishes and the only first-order datum is h1 = h'(0).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from kkwcalc import symbols as S
from kkwcalc.clifford import CliffordElem, c, c_xi, cb, covector, dxn_cxi_realization
from kkwcalc.ring import MultiPoly, Scalar
from kkwcalc.symcalc import JetSym

HALF = Scalar(Fraction(1, 2))


def _h1(k=1) -> MultiPoly:
    return MultiPoly.symbol(S.H1).scale(Scalar(Fraction(k)))


@dataclass(frozen=True)
class BoundaryChart:
    n: int
    dxn_norm_sq: MultiPoly
    omega_conn: dict = field(repr=False)  # (s, t, i) -> omega_{s,t}(e_i)(x0)
    christoffel: dict = field(repr=False)  # (k, i, j) -> Gamma^k_{ij}(x0)
    gamma_contracted: MultiPoly = field(default_factory=MultiPoly)
    delta_k: dict = field(default_factory=dict, repr=False)

    def tangential_metric_derivative(self, j: int) -> MultiPoly:
        """d/dx_j of |xi|^2 at x0 on the unit tangential sphere."""
        return self.dxn_norm_sq if j == self.n else MultiPoly()


@dataclass(frozen=True)
class OperatorSpec:
    """D-hat (thetap_sign=+1) or its adjoint (thetap_sign=-1)."""

    n: int
    include_theta: bool = True
    include_thetap: bool = True
    thetap_sign: int = 1

    @property
    def name(self) -> str:
        return "D" if self.thetap_sign > 0 else "D*"

    def flipped(self) -> "OperatorSpec":
        return OperatorSpec(self.n, self.include_theta, self.include_thetap, -self.thetap_sign)


def d_hat(n: int, **kw) -> OperatorSpec:
    return OperatorSpec(n, thetap_sign=1, **kw)


def d_hat_adjoint(n: int, **kw) -> OperatorSpec:
    return OperatorSpec(n, thetap_sign=-1, **kw)


def chart_axioms(n: int) -> BoundaryChart:
    half_h1 = _h1().scale(HALF)
    omega, chris = {}, {}
    for i in range(1, n):
        omega[(n, i, i)] = half_h1
        omega[(i, n, i)] = -half_h1
        chris[(n, i, i)] = half_h1
        chris[(i, n, i)] = -half_h1
        chris[(i, i, n)] = -half_h1
    gamma = MultiPoly()
    for i in range(1, n + 1):
        gamma = gamma + chris.get((n, i, i), MultiPoly())
    delta = {
        k: c(n, k) * c(n, n, _h1().scale(Scalar(Fraction(1, 4)))) for k in range(1, n)
    }
    return BoundaryChart(n, _h1(), omega, chris, gamma, delta)


def b0_parts(chart: BoundaryChart) -> tuple[CliffordElem, CliffordElem]:
    """Connection parts of the order-zero symbol at x0.

    b01 = 1/4 sum omega_{s,t}(e_i) c(e_i) cbar(e_s) cbar(e_t)
    b02 = -1/4 sum omega_{s,t}(e_i) c(e_i) c(e_s) c(e_t)
    """
    n = chart.n
    quarter = Scalar(Fraction(1, 4))
    b01 = CliffordElem(n)
    b02 = CliffordElem(n)
    for (s, t, i), w in sorted(chart.omega_conn.items()):
        b01 = b01 + c(n, i) * cb(n, s) * cb(n, t, w.scale(quarter))
        b02 = b02 - c(n, i) * c(n, s) * c(n, t, w.scale(quarter))
    return b01, b02


SOURCES = ("b01", "b02", "cbar_theta", "c_thetap")


def order_zero_parts(spec: OperatorSpec, chart: BoundaryChart) -> dict[str, CliffordElem]:
    n = chart.n
    b01, b02 = b0_parts(chart)
    parts = {"b01": b01, "b02": b02}
    if spec.include_theta:
        parts["cbar_theta"] = covector(n, S.theta, "cb")
    if spec.include_thetap:
        parts["c_thetap"] = covector(n, S.thetap, "c").scale(spec.thetap_sign)
    return parts


def sigma_symbols(spec: OperatorSpec, chart: BoundaryChart, tagged: bool = False) -> JetSym:
    """sigma_1 = i c(xi) with its normal jet, and sigma_0 (value only).

    With ``tagged`` each order-zero part is multiplied by its source marker
    symbol so downstream results can be split by origin.
    """
    if spec.n != chart.n:
        raise ValueError("operator and chart dimensions differ")
    n = chart.n
    i = Scalar(0, 1)
    p1 = c_xi(n).scale(i)
    p1_jet = dxn_cxi_realization(n).scale(i)
    p0 = CliffordElem(n)
    for tag, part in order_zero_parts(spec, chart).items():
        p0 = p0 + (part.scale(MultiPoly.symbol(S.marker(tag))) if tagged else part)
    return JetSym({1: (p1, p1_jet), 0: (p0, None)})

