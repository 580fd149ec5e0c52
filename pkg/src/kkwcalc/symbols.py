"""Names of the formal symbols shared by every module.

A symbol is a string such as ``xi_2``, ``thetap_n`` or ``R_1_2_1_2``.  The
component along the inward normal is written with the index ``n`` so that
printed results read the same in every dimension.
"""

from __future__ import annotations

from typing import NamedTuple

XIN = "xin"
H1 = "h1"
PI = "pi"
SCALAR_CURV = "s"
DIV_THETAP = "div_thp"
LAMBDA = "Lambda"
VOL = "Vol"
LAP_S = "lap_s"
LAP_THETA2 = "lap_theta2"


class SymbolId(NamedTuple):
    kind: str
    idx: tuple[str, ...] = ()

    def __str__(self):
        return "_".join((self.kind,) + self.idx)


def parse_symbol(name: str) -> SymbolId:
    kind, *idx = name.split("_")
    if kind in ("div", "lap"):
        return SymbolId(name)
    return SymbolId(kind, tuple(idx))


def component(i: int, n: int | None) -> str:
    return "n" if n is not None and i == n else str(i)


def xi(j: int) -> str:
    return f"xi_{j}"


def theta(i: int, n: int) -> str:
    return f"theta_{component(i, n)}"


def thetap(i: int, n: int) -> str:
    return f"thetap_{component(i, n)}"


def nabla_theta(i: int, j: int, n: int) -> str:
    """Component j of the covariant derivative of theta along e_i."""
    return f"T_{component(i, n)}_{component(j, n)}"


def nabla_thetap(i: int, j: int, n: int) -> str:
    return f"Tp_{component(i, n)}_{component(j, n)}"


def omega(m: int) -> str:
    return f"Omega_{m}"


def marker(tag: str) -> str:
    """Bookkeeping symbol that tags a source term; set to 1 for totals."""
    return f"src_{tag}"


def curvature(i: int, j: int, k: int, l: int) -> tuple[int, str | None]:
    """Canonical curvature symbol and sign, or (0, None) for a forced zero.

    Uses antisymmetry in each pair and symmetry under pair exchange.
    """
    sign = 1
    if i == j or k == l:
        return 0, None
    if i > j:
        i, j, sign = j, i, -sign
    if k > l:
        k, l, sign = l, k, -sign
    if (i, j) > (k, l):
        i, j, k, l = k, l, i, j
    return sign, f"R_{i}_{j}_{k}_{l}"
