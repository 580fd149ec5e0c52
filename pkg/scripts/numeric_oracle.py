"""Floating-point re-derivation of the boundary cases, independent of the exact engine.

Everything here is numpy: 2^n x 2^n matrices built from exterior and interior
multiplication, symbol inverses by dense matrix inversion, jets and xi_n
derivatives by fourth-order finite differences, the upper projection as a
contour integral around xi_n = i, and the xi_n line integral by
Gauss-Legendre quadrature after the substitution xi_n = tan(t).  Every
symbol is evaluated on a whole array of xi_n values at once.

The tangential covector is fixed at xi' = e_1.  With tangential theta and
theta' components set to zero the integrand is invariant under rotations of
xi', so a sphere integral is Omega times the value at e_1.

Run as a script to print per-case coefficients of h1 and thetap_n.
"""

from __future__ import annotations

import argparse
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

STEP = 1e-3
QUAD_NODES = 600
CONTOUR_RADIUS = 0.5
CONTOUR_POINTS = 64


@lru_cache(maxsize=None)
def clifford_matrices(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Stacked c(e_i) and cbar(e_i), i = 1..n, as (n, 2^n, 2^n) arrays."""
    dim = 1 << n
    ext = np.zeros((n, dim, dim))
    for i in range(n):
        for subset in range(dim):
            if subset >> i & 1:
                continue
            sign = -1.0 if bin(subset & ((1 << i) - 1)).count("1") % 2 else 1.0
            ext[i, subset | (1 << i), subset] = sign
    interior = ext.transpose(0, 2, 1)
    return ext - interior, ext + interior


@dataclass(frozen=True)
class Params:
    n: int
    h1: float
    theta_n: float
    thetap_n: float


def _d(f, var: str, h: float = STEP):
    """Fourth-order central difference in 'xn' or 'xin' of f(xn, xin)."""

    def shifted(xn, z, t):
        return f(xn + t, z) if var == "xn" else f(xn, z + t)

    def g(xn, z):
        return (-shifted(xn, z, 2 * h) + 8 * shifted(xn, z, h)
                - 8 * shifted(xn, z, -h) + shifted(xn, z, -2 * h)) / (12 * h)

    return g


def first_order_symbol(p: Params, thetap_sign: int) -> dict:
    n = p.n
    c, cb = clifford_matrices(n)
    # connection part: omega_{n,i}(e_i) = h1/2 = -omega_{i,n}(e_i)
    b01 = sum(
        0.125 * p.h1 * (c[i] @ cb[n - 1] @ cb[i] - c[i] @ cb[i] @ cb[n - 1])
        for i in range(n - 1)
    )
    b02 = -(n - 1) / 4 * p.h1 * c[n - 1]
    p0 = b01 + b02 + p.theta_n * cb[n - 1] + thetap_sign * p.thetap_n * c[n - 1]

    def p1(xn, z):
        z = np.asarray(z)[:, None, None]
        return 1j * ((1 + p.h1 * xn / 2) * c[0] + z * c[n - 1])

    def p0_of(xn, z):
        return np.broadcast_to(p0, (len(z),) + p0.shape)

    return {1: p1, 0: p0_of}


def compose(a: dict, b: dict, min_order: int) -> dict:
    """Orders >= min_order of the composed symbol, first xi_n/x_n derivative terms only."""
    top = max(a) + max(b)
    if top - 2 >= min_order:
        raise ValueError("second derivatives would be needed")
    out = {}
    for order in range(top, min_order - 1, -1):
        pieces = []
        for i in a:
            if order - i in b:
                pieces.append((a[i], b[order - i]))
        derivative = []
        for i in a:
            if order + 1 - i in b:
                derivative.append((_d(a[i], "xin"), _d(b[order + 1 - i], "xn")))

        def term(xn, z, pieces=tuple(pieces), derivative=tuple(derivative)):
            val = sum(f(xn, z) @ g(xn, z) for f, g in pieces)
            return val + sum(-1j * (f(xn, z) @ g(xn, z)) for f, g in derivative)

        out[order] = term
    return out


def invert(sym: dict) -> dict:
    """Leading inverse (with its x_n dependence) and the next order."""
    top = max(sym)
    lead, sub = sym[top], sym[top - 1]

    def q_lead(xn, z):
        return np.linalg.inv(lead(xn, z))

    d_lead = _d(lead, "xin")
    dx_q = _d(q_lead, "xn")

    def q_sub(xn, z):
        q = q_lead(xn, z)
        return -q @ (sub(xn, z) @ q - 1j * d_lead(xn, z) @ dx_q(xn, z))

    return {-top: q_lead, -top - 1: q_sub}


def piplus(f):
    """Principal part at xi_n = i, by the Cauchy integral over a small circle."""
    phis = 2 * np.pi * np.arange(CONTOUR_POINTS) / CONTOUR_POINTS
    nodes = 1j + CONTOUR_RADIUS * np.exp(1j * phis)
    weights = CONTOUR_RADIUS * np.exp(1j * phis) / CONTOUR_POINTS  # dw / (2 pi i)

    def g(xn, z):
        kernel = weights[None, :] / (np.asarray(z)[:, None] - nodes[None, :])
        return np.einsum("zm,mab->zab", kernel, f(xn, nodes))

    return g


SUITES = {
    "kkw4": (4, 1, (-1,)),
    "kkw4sq": (4, 1, (1,)),
    "kkw6": (6, 1, (-1, 1, -1)),
    "kkw6cu": (6, 1, (1, 1, 1)),
}

# label -> (r, l, j, k) with alpha = 0; the tangential case vanishes identically
CASES = {
    4: {"a.II": (-1, -1, 1, 0), "a.III": (-1, -1, 0, 1), "b": (-2, -1, 0, 0), "c": (-1, -2, 0, 0)},
    6: {"a.II": (-1, -3, 1, 0), "a.III": (-1, -3, 0, 1), "b": (-1, -4, 0, 0), "c": (-2, -3, 0, 0)},
}


def pairing_symbols(suite: str, p: Params):
    n, first, second = SUITES[suite]
    A = invert(first_order_symbol(p, first))
    ops = [first_order_symbol(p, s) for s in second]
    if len(ops) == 1:
        B = invert(ops[0])
    else:
        B = invert(compose(compose(ops[0], ops[1], 1), ops[2], 2))
    return A, B


def case_value(suite: str, label: str, p: Params) -> complex:
    """Case density divided by pi * Omega."""
    A, B = pairing_symbols(suite, p)
    r, l, j, k = CASES[p.n][label]
    left = piplus(A[r])
    for _ in range(j):
        left = _d(left, "xn")
    for _ in range(k):
        left = _d(left, "xin")
    right = B[l]
    for _ in range(k):
        right = _d(right, "xn")
    for _ in range(j + 1):
        right = _d(right, "xin")
    coeff = (-1j) ** (j + k + 1) / math.factorial(j + k + 1)

    t, w = np.polynomial.legendre.leggauss(QUAD_NODES)
    t = t * np.pi / 2
    z = np.tan(t)
    jac = w * (np.pi / 2) / np.cos(t) ** 2
    traces = np.einsum("zab,zba->z", left(0.0, z), right(0.0, z))
    return complex(coeff * np.sum(jac * traces)) / math.pi


def linear_coefficients(suite: str, label: str, theta_n: float = 0.7) -> dict[str, complex]:
    """Coefficients of h1 and thetap_n, plus the residual of a linear fit."""
    n = SUITES[suite][0]
    at = lambda h1, tp: case_value(suite, label, Params(n, h1, theta_n, tp))
    base = at(0.0, 0.0)
    h1 = at(1.0, 0.0) - base
    tp = at(0.0, 1.0) - base
    residual = at(1.0, 1.0) - (base + h1 + tp)
    return {"const": base, "h1": h1, "thetap_n": tp, "nonlinear": residual}


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--suite", choices=sorted(SUITES), action="append")
    args = ap.parse_args(argv)
    for suite in args.suite or sorted(SUITES):
        n = SUITES[suite][0]
        for label in CASES[n]:
            co = linear_coefficients(suite, label)
            fmt = lambda v: f"{v.real:+.8f}{v.imag:+.8f}i"
            print(f"{suite:7s} {label:5s} h1 {fmt(co['h1'])}  thetap_n {fmt(co['thetap_n'])}"
                  f"  |const| {abs(co['const']):.1e}  |nonlinear| {abs(co['nonlinear']):.1e}")


if __name__ == "__main__":
    main()
