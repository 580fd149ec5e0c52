"""Boundary cases, totals and interior integrands of the residue computations.

Every boundary case is evaluated by one pipeline:

    coefficient * tr( d_xn^j d_xin^k piplus sigma_r(A)  x  d_xin^(j+1) d_xn^k sigma_l(B) )
      -> integral over xin -> integral over the unit tangential sphere

Source markers (``src_*`` symbols) ride along the order-zero parts and the
geometric jet terms, so a single evaluation yields both the total and a
per-source ledger.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Callable, Sequence

from kkwcalc import symbols as S
from kkwcalc.boundary import SOURCES, OperatorSpec, chart_axioms
from kkwcalc.clifford import CliffordElem, c, cb, covector, identity, trace_product
from kkwcalc.ring import MultiPoly, Scalar, line_integral_xin, parse_poly, sphere_integrate
from kkwcalc.symcalc import JetSym, cube_and_invert, deriv, invert_first_order, piplus_elem

MARKERS = tuple(S.marker(t) for t in SOURCES + ("jet",))


class UnsupportedConfiguration(ValueError):
    pass


class OddDimension(ValueError):
    pass


# --------------------------------------------------------------------------
# cases


@dataclass(frozen=True)
class CaseSpec:
    r: int
    l: int
    j: int
    k: int
    alpha: int
    label: str = ""

    def coefficient(self) -> Scalar:
        """(-i)^(|alpha|+j+k+1) / (alpha! (j+k+1)!)."""
        power = self.alpha + self.j + self.k + 1
        unit = Scalar(0, -1) ** power
        return unit / (factorial(self.alpha) * factorial(self.j + self.k + 1))


SUPPORTED = {(4, 1, 1), (6, 1, 3)}


def enumerate_cases(n: int, p1: int, p2: int) -> list[CaseSpec]:
    """All (r, l, j, k, |alpha|) with r <= -p1, l <= -p2 and r+l-j-k-|alpha| = 1-n."""
    if (n, p1, p2) not in SUPPORTED:
        raise UnsupportedConfiguration(f"(n, p1, p2) = {(n, p1, p2)}")
    target = 1 - n
    found = []
    for r in range(-p1, target - 1, -1):
        for l in range(-p2, target - 1, -1):
            slack = r + l - target
            if slack < 0:
                continue
            for alpha in range(slack + 1):
                for j in range(slack - alpha + 1):
                    found.append((r, l, j, slack - alpha - j, alpha))
    leading = [f for f in found if (f[0], f[1]) == (-p1, -p2)]
    by_deriv = {(f[4], f[2], f[3]): f for f in leading}
    cases = [
        CaseSpec(*by_deriv[(1, 0, 0)], label="a.I"),
        CaseSpec(*by_deriv[(0, 1, 0)], label="a.II"),
        CaseSpec(*by_deriv[(0, 0, 1)], label="a.III"),
    ]
    lowered = [f for f in found if (f[0], f[1]) != (-p1, -p2)]
    # case b lowers the first factor in four dimensions and the second in six
    lowered.sort(key=lambda f: f[0], reverse=(n == 6))
    for label, f in zip(("b", "c"), lowered):
        cases.append(CaseSpec(*f, label=label))
    if len(cases) != len(found):
        raise AssertionError("case enumeration mismatch")
    return cases


@dataclass(frozen=True)
class BoundaryDensity:
    """Exact density per unit boundary volume: a polynomial in h1, thetap_n, pi, Omega."""

    coeff: MultiPoly
    n: int

    def __add__(self, o: "BoundaryDensity") -> "BoundaryDensity":
        if o.n != self.n:
            raise ValueError("dimension mismatch")
        return BoundaryDensity(self.coeff + o.coeff, self.n)

    def __str__(self):
        return str(self.coeff)


@dataclass(frozen=True)
class CaseResult:
    case: CaseSpec
    density: BoundaryDensity
    terms: tuple[tuple[str, MultiPoly], ...]


def _select(sym: JetSym, order: int, with_jet: bool) -> CliffordElem:
    return sym.jet(order) if with_jet else sym.value(order)


def _d_xin(x: CliffordElem, times: int) -> CliffordElem:
    for _ in range(times):
        x = x.d_xin()
    return x


def _split_markers(p: MultiPoly) -> tuple[MultiPoly, list[tuple[str, MultiPoly]]]:
    total = p.subs({m: 1 for m in MARKERS})
    terms = []
    rest = p
    for m in MARKERS:
        part = p.coefficient({m: 1})
        if part:
            terms.append((m[len("src_"):], part))
            rest = rest - part * MultiPoly.symbol(m)
    if rest:
        terms.insert(0, ("leading", rest))
    return total, terms


def evaluate_case(case: CaseSpec, A: JetSym, B: JetSym, n: int) -> CaseResult:
    if case.j > 1 or case.k > 1:
        raise UnsupportedConfiguration("only first normal derivatives are available")
    if case.alpha:
        # tangential x-derivatives vanish at x0, so the right factor is zero
        for t in range(1, n):
            right = _d_xin(deriv(B, f"x{t}").value(case.l), case.j + 1)
            if not right.is_zero():
                raise UnsupportedConfiguration("nonzero tangential jet")
        return CaseResult(case, BoundaryDensity(MultiPoly(), n), ())
    left = piplus_elem(_select(A, case.r, case.j == 1))
    left = _d_xin(left, case.k)
    right = _d_xin(_select(B, case.l, case.k == 1), case.j + 1)
    integrand = trace_product(left, right) * case.coefficient()
    density = sphere_integrate(line_integral_xin(integrand), n - 1)
    total, terms = _split_markers(density)
    return CaseResult(case, BoundaryDensity(total, n), tuple(terms))


def boundary_total(cases: Sequence[BoundaryDensity]) -> BoundaryDensity:
    if not cases:
        raise ValueError("no cases")
    out = cases[0]
    for d in cases[1:]:
        out = out + d
    return out


# --------------------------------------------------------------------------
# pairings


@dataclass(frozen=True)
class Pairing:
    n: int
    first: OperatorSpec
    second: tuple[OperatorSpec, ...]  # one spec, or three for a cube

    @property
    def orders(self) -> tuple[int, int]:
        return 1, len(self.second)

    def symbols(self, tagged: bool = True) -> tuple[JetSym, JetSym]:
        chart = chart_axioms(self.n)
        A = invert_first_order(self.first, chart, tagged)
        if len(self.second) == 1:
            B = invert_first_order(self.second[0], chart, tagged)
        else:
            B = cube_and_invert(self.second, chart, tagged).inverse
        return A, B


def pairing_for(suite: str, thetap_sign: int = 1) -> Pairing:
    def D(n):
        return OperatorSpec(n, thetap_sign=thetap_sign)

    def Dstar(n):
        return OperatorSpec(n, thetap_sign=-thetap_sign)

    table = {
        "kkw4": lambda: Pairing(4, D(4), (Dstar(4),)),
        "kkw4sq": lambda: Pairing(4, D(4), (D(4),)),
        "kkw6": lambda: Pairing(6, D(6), (Dstar(6), D(6), Dstar(6))),
        "kkw6cu": lambda: Pairing(6, D(6), (D(6), D(6), D(6))),
    }
    if suite not in table:
        raise KeyError(suite)
    return table[suite]()


def _eval_task(args):
    case, A, B, n = args
    return evaluate_case(case, A, B, n)


def run_pairing(p: Pairing, parallel: int = 1) -> list[CaseResult]:
    A, B = p.symbols(tagged=True)
    cases = enumerate_cases(p.n, *p.orders)
    tasks = [(case, A, B, p.n) for case in cases]
    if parallel > 1:
        with ProcessPoolExecutor(max_workers=parallel) as pool:
            return list(pool.map(_eval_task, tasks))
    return [_eval_task(t) for t in tasks]


# --------------------------------------------------------------------------
# interior


def wres_prefactor(n: int) -> MultiPoly:
    """(n-2)(4 pi)^(n/2) / (n/2 - 1)! with a formal pi."""
    if n % 2:
        raise OddDimension(f"n={n}")
    if n < 4:
        raise ValueError("n must be at least 4")
    half = n // 2
    value = Fraction((n - 2) * 4**half, factorial(half - 1))
    return MultiPoly.symbol(S.PI, half).scale(Scalar(value))


@dataclass(frozen=True)
class InteriorDensity:
    prefactor: MultiPoly
    integrand: MultiPoly

    def total(self) -> MultiPoly:
        return self.prefactor * self.integrand


def _sym(name: str) -> MultiPoly:
    return MultiPoly.symbol(name)


def curvature_word(n: int) -> CliffordElem:
    """sum_{ijkl} R_ijkl cbar_i cbar_j c_k c_l with canonical curvature symbols."""
    out = CliffordElem(n)
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            for k in range(1, n + 1):
                for l in range(1, n + 1):
                    sign, name = S.curvature(i, j, k, l)
                    if sign:
                        out = out + CliffordElem.word(n, (k, l), (i, j), _sym(name).scale(sign))
    return out


def theta_gradient_word(n: int) -> CliffordElem:
    """sum_i c(e_i) cbar(nabla_{e_i} theta)."""
    out = CliffordElem(n)
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            out = out + c(n, i) * cb(n, j, _sym(S.nabla_theta(i, j, n)))
    return out


def norm_sq(name, n: int) -> MultiPoly:
    out = MultiPoly()
    for i in range(1, n + 1):
        out = out + _sym(name(i, n)) ** 2
    return out


def endomorphism(variant: str, n: int) -> CliffordElem:
    """E at a point in normal coordinates, for D*D ("adjoint") or D^2 ("square")."""
    one = identity(n)
    ctp = covector(n, S.thetap, "c")
    cbt = covector(n, S.theta, "cb")
    E = curvature_word(n).scale(Scalar(Fraction(1, 8))) - theta_gradient_word(n)
    E = E - one.scale(_sym(S.SCALAR_CURV).scale(Scalar(Fraction(1, 4)))) - one.scale(norm_sq(S.theta, n))
    quarter = Scalar(Fraction(1, 4))
    half = Scalar(Fraction(1, 2))
    if variant == "adjoint":
        E = E + ctp * cbt - cbt * ctp - one.scale(norm_sq(S.thetap, n))
        for i in range(1, n + 1):
            comm = c(n, i) * ctp - ctp * c(n, i)
            E = E - (comm * comm).scale(quarter)
        for j in range(1, n + 1):
            grad = CliffordElem(n)
            for k in range(1, n + 1):
                grad = grad + c(n, k, _sym(S.nabla_thetap(j, k, n)))
            E = E - (c(n, j) * grad + grad * c(n, j)).scale(half)
    elif variant == "square":
        E = E - ctp * cbt - cbt * ctp + one.scale(norm_sq(S.thetap, n))
        for i in range(1, n + 1):
            anti = c(n, i) * ctp + ctp * c(n, i)
            E = E - (anti * anti).scale(quarter)
        for j in range(1, n + 1):
            grad = CliffordElem(n)
            for k in range(1, n + 1):
                grad = grad + c(n, k, _sym(S.nabla_thetap(j, k, n)))
            E = E + (grad * c(n, j) - c(n, j) * grad).scale(half)
    else:
        raise ValueError(f"unknown variant {variant!r}")
    return E


def recognize_divergence(p: MultiPoly, n: int) -> MultiPoly:
    """Replace a multiple of sum_j Tp_jj by that multiple of div_thp."""
    diag = [S.nabla_thetap(j, j, n) for j in range(1, n + 1)]
    first = p.coefficient({diag[0]: 1})
    if not first.is_constant():
        return p
    lam = first.constant_term()
    trace_part = MultiPoly()
    for name in diag:
        trace_part = trace_part + _sym(name)
    if p.coefficient({diag[0]: 1}) and all(p.coefficient({d: 1}) == first for d in diag):
        return p - trace_part.scale(lam) + _sym(S.DIV_THETAP).scale(lam)
    return p


def interior_integrand(variant: str, n: int) -> InteriorDensity:
    if n % 2:
        raise OddDimension(f"n={n}")
    E = endomorphism(variant, n)
    tr = (E + identity(n).scale(_sym(S.SCALAR_CURV).scale(Scalar(Fraction(1, 6))))).trace()
    if tr.a or tr.b:
        raise AssertionError("interior trace picked up a pole")
    return InteriorDensity(wres_prefactor(n), recognize_divergence(tr.num, n))


# --------------------------------------------------------------------------
# expectations and reports


def P(text: str) -> MultiPoly:
    return parse_poly(text)


def _omega(n: int) -> str:
    return S.omega(n - 1)


def _boundary_expectations() -> dict[str, dict[str, str]]:
    o3, o4 = _omega(4), _omega(6)
    k4 = {
        "a.I": "0",
        "a.II": f"-3/2*{o3}*h1*pi",
        "a.III": f"3/2*{o3}*h1*pi",
        "b": f"9/2*{o3}*h1*pi - 4*{o3}*pi*thetap_n",
        "c": f"-9/2*{o3}*h1*pi - 4*{o3}*pi*thetap_n",
        "total": f"-8*{o3}*pi*thetap_n",
    }
    k4sq = {
        "a.I": "0",
        "a.II": f"-3/2*{o3}*h1*pi",
        "a.III": f"3/2*{o3}*h1*pi",
        "a": "0",
        "b": f"9/2*{o3}*h1*pi - 4*{o3}*pi*thetap_n",
        "c": f"-9/2*{o3}*h1*pi + 4*{o3}*pi*thetap_n",
        "total": "0",
    }
    k6 = {
        "a.I": "0",
        "a.II": f"-15/2*{o4}*h1*pi",
        "a.III": f"25/2*{o4}*h1*pi",
        "b": f"(-195/8-41/8*i)*{o4}*h1*pi + 120*i*{o4}*pi*thetap_n",
        "c": f"55/2*{o4}*h1*pi",
        "total": f"(65/8-41/8*i)*{o4}*h1*pi + 120*i*{o4}*pi*thetap_n",
    }
    k6cu = {
        "a.I": "0",
        "a.II": f"-15/2*{o4}*h1*pi",
        "a.III": f"25/2*{o4}*h1*pi",
        "a": f"5*{o4}*h1*pi",
        "b": f"(-195/8-41/8*i)*{o4}*h1*pi",
        "c": f"55/2*{o4}*h1*pi",
        "total": f"(65/8-41/8*i)*{o4}*h1*pi",
    }
    return {"kkw4": k4, "kkw4sq": k4sq, "kkw6": k6, "kkw6cu": k6cu}


def _interior_expectations() -> dict[str, str]:
    th4 = " - 16*theta_1^2 - 16*theta_2^2 - 16*theta_3^2 - 16*theta_n^2"
    tp4 = " + 32*thetap_1^2 + 32*thetap_2^2 + 32*thetap_3^2 + 32*thetap_n^2"
    th6 = "".join(f" - 64*theta_{k}^2" for k in ("1", "2", "3", "4", "5", "n"))
    tp6 = "".join(f" + 256*thetap_{k}^2" for k in ("1", "2", "3", "4", "5", "n"))
    return {
        "n4.adjoint": f"32*pi^2*(16*div_thp - 4/3*s{th4}{tp4})",
        "n4.square": f"32*pi^2*(-4/3*s{th4})",
        "n6.adjoint": f"128*pi^3*(64*div_thp - 16/3*s{th6}{tp6})",
        "n6.square": f"128*pi^3*(-16/3*s{th6})",
    }


def _expand_product(text: str) -> MultiPoly:
    head, _, body = text.partition("*(")
    factor = P(head) if head else MultiPoly.const(1)
    return factor * P(body[:-1])


def expectations(suite: str) -> dict[str, MultiPoly]:
    if suite in ("kkw4", "kkw4sq", "kkw6", "kkw6cu"):
        return {k: P(v) for k, v in _boundary_expectations()[suite].items()}
    if suite == "interior":
        return {k: _expand_product(v) for k, v in _interior_expectations().items()}
    if suite == "lemmas":
        from kkwcalc import lemmas

        return lemmas.expectations()
    if suite == "spectral":
        from kkwcalc import spectral

        return spectral.expectations()
    raise KeyError(suite)


@dataclass
class CaseRecord:
    id: str
    expected: str
    computed: str
    match: bool
    terms: list[tuple[str, str]] = field(default_factory=list)

    def as_dict(self) -> dict:
        return {
            "id": self.id,
            "expected": self.expected,
            "computed": self.computed,
            "match": self.match,
            "terms": [{"source": s, "value": v} for s, v in self.terms],
        }


@dataclass
class SuiteReport:
    suite: str
    cases: list[CaseRecord]

    @property
    def passed(self) -> int:
        return sum(r.match for r in self.cases)

    @property
    def failed(self) -> int:
        return len(self.cases) - self.passed

    @property
    def ok(self) -> bool:
        return self.failed == 0

    def as_dict(self) -> dict:
        return {
            "suite": self.suite,
            "cases": [r.as_dict() for r in self.cases],
            "summary": {"passed": self.passed, "failed": self.failed},
        }


def record(case_id: str, expected: MultiPoly | None, computed: MultiPoly,
           terms: Sequence[tuple[str, MultiPoly]] = ()) -> CaseRecord:
    exp_text = str(expected) if expected is not None else "(none)"
    return CaseRecord(case_id, exp_text, str(computed),
                      expected is not None and expected == computed,
                      [(s, str(v)) for s, v in terms])


def boundary_records(suite: str, expected: dict[str, MultiPoly], results: list[CaseResult]) -> list[CaseRecord]:
    out = []
    by_label = {r.case.label: r for r in results}
    for r in results:
        out.append(record(r.case.label, expected.get(r.case.label), r.density.coeff, r.terms))
        if r.case.label == "a.III" and "a" in expected:
            group = boundary_total([by_label[x].density for x in ("a.I", "a.II", "a.III")])
            out.append(record("a", expected["a"], group.coeff))
    total = boundary_total([r.density for r in results])
    out.append(record("total", expected.get("total"), total.coeff))
    return out


def interior_records(expected: dict[str, MultiPoly]) -> list[CaseRecord]:
    out = []
    for n in (4, 6):
        for variant in ("adjoint", "square"):
            dens = interior_integrand(variant, n)
            key = f"n{n}.{variant}"
            out.append(record(key, expected.get(key), dens.total(),
                              [("prefactor", dens.prefactor), ("integrand", dens.integrand)]))
    return out


SUITES = ("kkw4", "kkw4sq", "kkw6", "kkw6cu", "interior", "lemmas", "spectral")


def verify_suite(suite: str, parallel: int = 1, expected: dict[str, MultiPoly] | None = None,
                 pairing_hook: Callable[[Pairing], Pairing] | None = None) -> SuiteReport:
    if suite not in SUITES:
        raise KeyError(suite)
    if expected is None:
        expected = expectations(suite)
    if suite in ("kkw4", "kkw4sq", "kkw6", "kkw6cu"):
        p = pairing_for(suite)
        if pairing_hook is not None:
            p = pairing_hook(p)
        results = run_pairing(p, parallel)
        return SuiteReport(suite, boundary_records(suite, expected, results))
    if suite == "interior":
        return SuiteReport(suite, interior_records(expected))
    if suite == "lemmas":
        from kkwcalc import lemmas

        return SuiteReport(suite, lemmas.records(expected))
    from kkwcalc import spectral

    return SuiteReport(suite, spectral.records(expected))
