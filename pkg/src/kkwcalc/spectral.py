"""Witten deformation d + delta + cbar(theta) in four dimensions: heat coefficients
and the cutoff expansion of the bosonic spectral action.

Curvature convention: R_ijij summed over i, j equals -s, so that
(d + delta)^2 = -Laplacian - 1/8 sum R_ijkl cbar_i cbar_j c_k c_l + s/4.
Laplacians are positive, E_{,kk} = -Laplacian(E).
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Mapping

from kkwcalc import symbols as S
from kkwcalc.clifford import CliffordElem, c, cb, identity, matmul, matrix_trace
from kkwcalc.ring import Monomial, MultiPoly, Scalar

# invariant names used in recognized heat coefficients
THETA2 = "theta2"  # |theta|^2
GRAD_THETA2 = "grad_theta2"  # sum_i |nabla_{e_i} theta|^2
RIEM2 = "riem2"  # sum_{ijkl} R_ijkl^2
RIC2 = "ric2"  # sum_{ijkl} R_ijik R_ljlk


class UnrecognizedInvariant(ValueError):
    pass


def _sym(name: str) -> MultiPoly:
    return MultiPoly.symbol(name)


def _q(x) -> Scalar:
    return Scalar(Fraction(x))


@dataclass(frozen=True)
class CurvatureData:
    """Pointwise curvature, theta and its covariant derivative at one point.

    Entries are MultiPolys: symbols for the generic point, constants for a
    numeric instance.  ``riemann`` is keyed by ordered index quadruples.
    """

    n: int
    riemann: Mapping[tuple[int, int, int, int], MultiPoly] = field(repr=False)
    scalar: MultiPoly
    theta: tuple[MultiPoly, ...]
    grad_theta: Mapping[tuple[int, int], MultiPoly] = field(repr=False)

    def R(self, i, j, k, l) -> MultiPoly:
        return self.riemann.get((i, j, k, l), MultiPoly())

    @staticmethod
    def symbolic(n: int = 4) -> "CurvatureData":
        riem = {}
        for idx in product(range(1, n + 1), repeat=4):
            sign, name = S.curvature(*idx)
            if sign:
                riem[idx] = _sym(name).scale(sign)
        theta = tuple(_sym(S.theta(i, n)) for i in range(1, n + 1))
        grad = {(i, j): _sym(S.nabla_theta(i, j, n))
                for i in range(1, n + 1) for j in range(1, n + 1)}
        return CurvatureData(n, riem, _sym(S.SCALAR_CURV), theta, grad)

    @staticmethod
    def random(n: int, seed: int, bound: int = 5) -> "CurvatureData":
        """Exact-rational tensor with the pair symmetries; s is its contraction."""
        rng = random.Random(seed)
        draw = lambda: MultiPoly.const(_q(Fraction(rng.randint(-bound, bound), rng.randint(1, bound))))
        canon: dict[str, MultiPoly] = {}
        riem = {}
        for idx in product(range(1, n + 1), repeat=4):
            sign, name = S.curvature(*idx)
            if sign:
                if name not in canon:
                    canon[name] = draw()
                riem[idx] = canon[name].scale(sign)
        scalar = MultiPoly()
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                scalar = scalar - riem.get((i, j, i, j), MultiPoly())
        theta = tuple(draw() for _ in range(n))
        grad = {(i, j): draw() for i in range(1, n + 1) for j in range(1, n + 1)}
        return CurvatureData(n, riem, scalar, theta, grad)


# --------------------------------------------------------------------------
# contraction patterns


def theta_norm_sq(data: CurvatureData) -> MultiPoly:
    out = MultiPoly()
    for t in data.theta:
        out = out + t * t
    return out


def grad_theta_norm_sq(data: CurvatureData) -> MultiPoly:
    out = MultiPoly()
    for v in data.grad_theta.values():
        out = out + v * v
    return out


def riemann_norm_sq(data: CurvatureData) -> MultiPoly:
    out = MultiPoly()
    for v in data.riemann.values():
        out = out + v * v
    return out


def ricci_norm_sq(data: CurvatureData) -> MultiPoly:
    n = data.n
    out = MultiPoly()
    for j in range(1, n + 1):
        for k in range(1, n + 1):
            ric = MultiPoly()
            for i in range(1, n + 1):
                ric = ric + data.R(i, j, i, k)
            out = out + ric * ric
    return out


# --------------------------------------------------------------------------
# Clifford words


def curvature_word(data: CurvatureData) -> CliffordElem:
    """sum_{ijkl} R_ijkl cbar_i cbar_j c_k c_l."""
    out = CliffordElem(data.n)
    for (i, j, k, l), v in data.riemann.items():
        out = out + CliffordElem.word(data.n, (k, l), (i, j), v)
    return out


def gradient_word(data: CurvatureData) -> CliffordElem:
    """sum_i c(e_i) cbar(nabla_{e_i} theta)."""
    out = CliffordElem(data.n)
    for (i, j), v in data.grad_theta.items():
        out = out + c(data.n, i) * cb(data.n, j, v)
    return out


def witten_endomorphism(data: CurvatureData) -> CliffordElem:
    one = identity(data.n)
    E = curvature_word(data).scale(_q(Fraction(1, 8))) - gradient_word(data)
    return E - one.scale(data.scalar.scale(_q(Fraction(1, 4))) + theta_norm_sq(data))


def curvature_form(data: CurvatureData, i: int, j: int) -> CliffordElem:
    """Omega(e_i, e_j) = -1/4 sum_st R_ijst (cbar_s cbar_t - c_s c_t)."""
    n = data.n
    out = CliffordElem(n)
    for s in range(1, n + 1):
        for t in range(1, n + 1):
            r = data.R(i, j, s, t)
            if r:
                out = out + (cb(n, s) * cb(n, t) - c(n, s) * c(n, t)).scale(r)
    return out.scale(_q(Fraction(-1, 4)))


def _poly_trace(x: CliffordElem) -> MultiPoly:
    tr = x.trace()
    if tr.a or tr.b:
        raise AssertionError("trace picked up a pole")
    return tr.num


def curvature_form_trace(data: CurvatureData) -> MultiPoly:
    """sum_{ij} tr[Omega_ij Omega_ij]."""
    n = data.n
    out = MultiPoly()
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            w = curvature_form(data, i, j)
            if not w.is_zero():
                out = out + _poly_trace(w * w)
    return out


def curvature_form_trace_dense(data: CurvatureData) -> MultiPoly:
    """Same quantity through explicit 2^n x 2^n matrices; numeric data only."""
    n = data.n
    total = MultiPoly()
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            m = curvature_form(data, i, j).to_matrix({})
            if m:
                total = total + MultiPoly.const(matrix_trace(matmul(m, m)))
    return total


# --------------------------------------------------------------------------
# recognition of invariants


def _laplacian_of_trace(p: MultiPoly, data: CurvatureData) -> MultiPoly:
    """Laplacian applied to a polynomial that is linear in s and |theta|^2."""
    recognized = recognize(p, data)
    out = MultiPoly()
    for name, target in ((S.SCALAR_CURV, S.LAP_S), (THETA2, S.LAP_THETA2)):
        coeff = recognized.coefficient({name: 1})
        if coeff:
            out = out + coeff * _sym(target)
            recognized = recognized - coeff * _sym(name)
    if recognized.degree() > 0:
        raise UnrecognizedInvariant(f"no Laplacian rule for {recognized}")
    return out


def _patterns(data: CurvatureData) -> list[tuple[MultiPoly, MultiPoly]]:
    s = data.scalar
    th = theta_norm_sq(data)
    return [
        (s * s, _sym(S.SCALAR_CURV) ** 2),
        (s * th, _sym(S.SCALAR_CURV) * _sym(THETA2)),
        (th * th, _sym(THETA2) ** 2),
        (grad_theta_norm_sq(data), _sym(GRAD_THETA2)),
        (ricci_norm_sq(data), _sym(RIC2)),
        (riemann_norm_sq(data), _sym(RIEM2)),
        (s, _sym(S.SCALAR_CURV)),
        (th, _sym(THETA2)),
    ]


def _signature(pattern: MultiPoly, others: list[MultiPoly]) -> Monomial:
    for m in sorted(pattern.terms):
        if all(m not in o.terms for o in others):
            return m
    raise UnrecognizedInvariant("pattern has no distinguishing monomial")


def recognize(p: MultiPoly, data: CurvatureData) -> MultiPoly:
    """Rewrite a symbolic pointwise polynomial in the invariant symbols.

    Every contraction pattern has a monomial that no other pattern contains;
    its coefficient fixes the multiple, and the remainder must vanish.
    Symbols outside the patterns (Laplacian markers, Vol) pass through.
    """
    pats = _patterns(data)
    raw = {name for pat, _ in pats for name in pat.symbols()}
    passthrough = MultiPoly({m: v for m, v in p.terms.items()
                             if not any(s in raw for s, _ in m)})
    rest = p - passthrough
    out = passthrough
    for idx, (pat, inv) in enumerate(pats):
        if not pat.terms:
            continue
        others = [q for k, (q, _) in enumerate(pats) if k != idx and q.terms]
        sig = _signature(pat, others)
        lam = rest.terms.get(sig)
        if lam is None:
            continue
        mult = lam / pat.terms[sig]
        rest = rest - pat.scale(mult)
        out = out + inv.scale(mult)
    if rest:
        raise UnrecognizedInvariant(f"left over after recognition: {rest}")
    return out


# --------------------------------------------------------------------------
# heat coefficients


A4_SOURCES = ("lap_R", "lap_E", "scalar_sq", "scalar_E", "E_sq", "ricci", "riemann", "curvature_form")


@dataclass(frozen=True)
class HeatCoefficients:
    """Densities per unit volume, each to be multiplied by pi^pi_power.

    a4 sources hold the traced terms of the a4 integrand before the 1/360
    normalization, one per term of the local formula.
    """

    n: int
    pi_power: int
    a0: MultiPoly
    a2: MultiPoly
    a4: MultiPoly
    a4_sources: Mapping[str, MultiPoly] = field(repr=False)
    a4_normalization: Fraction = Fraction(1)

    @property
    def a4_bracket(self) -> MultiPoly:
        total = MultiPoly()
        for v in self.a4_sources.values():
            total = total + v
        return total


def heat_coefficients(data: CurvatureData | None = None, closed_manifold: bool = True) -> HeatCoefficients:
    if data is None:
        data = CurvatureData.symbolic(4)
    n = data.n
    if n % 2:
        raise ValueError("even dimension required")
    dim = 1 << n
    norm = Fraction(1, 4 ** (n // 2))  # (4 pi)^(-n/2) without the pi
    E = witten_endomorphism(data)
    s = data.scalar
    trE = _poly_trace(E)

    a0 = _sym(S.VOL).scale(_q(dim * norm))
    a2 = recognize((MultiPoly.const(_q(Fraction(dim, 6))) * s + trE).scale(_q(norm)), data)

    sources = {
        # R_ijij,kk is the Laplacian of s under the sign conventions above
        "lap_R": _sym(S.LAP_S).scale(_q(-12 * dim)),
        "lap_E": _laplacian_of_trace(trE.scale(_q(-60)), data),
        "scalar_sq": recognize((s * s).scale(_q(5 * dim)), data),
        "scalar_E": recognize((s * trE).scale(_q(60)), data),
        "E_sq": recognize(_poly_trace(E * E).scale(_q(180)), data),
        "ricci": recognize(ricci_norm_sq(data).scale(_q(-2 * dim)), data),
        "riemann": recognize(riemann_norm_sq(data).scale(_q(2 * dim)), data),
        "curvature_form": recognize(curvature_form_trace(data).scale(_q(30)), data),
    }
    if closed_manifold:
        drop = {S.LAP_S: 0, S.LAP_THETA2: 0}
        sources = {k: v.subs(drop) for k, v in sources.items()}
    a4_norm = norm * Fraction(1, 360)
    bracket = MultiPoly()
    for v in sources.values():
        bracket = bracket + v
    return HeatCoefficients(n, -(n // 2), a0, a2, bracket.scale(_q(a4_norm)), sources, a4_norm)


def spectral_asymptotics(coeffs: HeatCoefficients, F0, F2, F4) -> MultiPoly:
    """Lambda^4 F4 a0 + Lambda^2 F2 a2 + F0 a4, in units of pi^pi_power."""
    lam = _sym(S.LAMBDA)
    return (lam ** 4 * coeffs.a0).scale(_q(F4)) + (lam ** 2 * coeffs.a2).scale(_q(F2)) + coeffs.a4.scale(_q(F0))


# --------------------------------------------------------------------------
# vanishing trace identities


def vanishing_traces(n: int = 4) -> list[str]:
    """Names of the identities that fail; empty when all hold."""
    failures = []
    for i in range(1, n + 1):
        if not c(n, i).trace().is_zero():
            failures.append(f"tr c(e{i})")
        for j in range(1, n + 1):
            if i != j and not (c(n, i) * c(n, j)).trace().is_zero():
                failures.append(f"tr c(e{i})c(e{j})")
    for i, j, k, l in product(range(1, n + 1), repeat=4):
        if i != j and not (cb(n, i) * cb(n, j) * c(n, k) * c(n, l)).trace().is_zero():
            failures.append(f"tr cb(e{i})cb(e{j})c(e{k})c(e{l})")
    if not gradient_word(CurvatureData.symbolic(n)).trace().is_zero():
        failures.append("tr sum_i c(e_i) cb(nabla_i theta)")
    return failures


# --------------------------------------------------------------------------
# expectations and records


# coefficient vector of the a4 integrand times 5760 pi^2, by invariant and source
A4_VECTOR = (
    ("s2", None, S.SCALAR_CURV + "^2"),
    ("grad_theta2", None, GRAD_THETA2),
    ("theta4", None, THETA2 + "^2"),
    ("riem2.endomorphism", "E_sq", RIEM2),
    ("s_theta2", None, S.SCALAR_CURV + "*" + THETA2),
    ("ric2", "ricci", RIC2),
    ("riem2.direct", "riemann", RIEM2),
    ("riem2.curvature_form", "curvature_form", RIEM2),
)


def expectations() -> dict[str, MultiPoly]:
    from kkwcalc.ring import parse_poly as P

    return {
        "a0": P("Vol"),
        "a2": P("-1/12*s - theta2"),
        "a4.s2": P("20"),
        "a4.grad_theta2": P("2880"),
        "a4.theta4": P("2880"),
        "a4.riem2.endomorphism": P("180"),
        "a4.s_theta2": P("480"),
        "a4.ric2": P("-32"),
        "a4.riem2.direct": P("32"),
        "a4.riem2.curvature_form": P("-1920"),
        "a4.lap": P("48*lap_s + 960*lap_theta2"),
        "curvature_form.random": P("-4*riem2"),
        "vanishing_traces": P("0"),
    }


def _coefficient_of(p: MultiPoly, invariant: str) -> MultiPoly:
    from kkwcalc.ring import parse_poly

    target = parse_poly(invariant)
    (mono,) = target.terms
    return MultiPoly.const(p.terms.get(mono, Scalar(0)))


def records(expected=None):
    from kkwcalc.kkw import record

    if expected is None:
        expected = expectations()
    closed = heat_coefficients(closed_manifold=True)
    opened = heat_coefficients(closed_manifold=False)
    out = [
        record("a0", expected.get("a0"), closed.a0, [("pi_power", MultiPoly.const(closed.pi_power))]),
        record("a2", expected.get("a2"), closed.a2, [("pi_power", MultiPoly.const(closed.pi_power))]),
    ]
    bracket = closed.a4_bracket
    for slot, source, invariant in A4_VECTOR:
        poly = closed.a4_sources[source] if source else bracket
        out.append(record(f"a4.{slot}", expected.get(f"a4.{slot}"), _coefficient_of(poly, invariant)))
    lap = opened.a4_bracket - bracket
    out.append(record("a4.lap", expected.get("a4.lap"), lap,
                      [(k, v) for k, v in opened.a4_sources.items() if k.startswith("lap")]))
    mismatched = []
    for seed in range(20):
        data = CurvatureData.random(4, seed)
        machine = curvature_form_trace(data)
        dense = curvature_form_trace_dense(data)
        oracle = riemann_norm_sq(data).scale(_q(-4))
        if not (machine == dense == oracle):
            mismatched.append((f"seed {seed}", machine - oracle))
    computed = _sym(RIEM2).scale(_q(-4)) if not mismatched else MultiPoly.const(len(mismatched))
    out.append(record("curvature_form.random", expected.get("curvature_form.random"), computed, mismatched))
    failures = vanishing_traces(4)
    out.append(record("vanishing_traces", expected.get("vanishing_traces"),
                      MultiPoly.const(len(failures)), [(f, MultiPoly.const(1)) for f in failures]))
    return out
