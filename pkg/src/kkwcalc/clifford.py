"""The two Clifford actions c = eps - iota and cbar = eps + iota on the exterior algebra.

Elements are stored on the word basis: a word is a pair of index sets
(A, B) standing for the normal-ordered product ``c_A cbar_B`` with ascending
indices.  The key of a word is ``A | (B << n)`` as bitmasks.  Words span
End(Lambda^* R^n), and the product rule follows from the relations

    c_i c_j + c_j c_i = -2 delta_ij,  cbar_i cbar_j + cbar_j cbar_i = 2 delta_ij,
    c_i cbar_j + cbar_j c_i = 0.

``exterior_matrix`` builds the same generators as explicit 2^n x 2^n signed
permutation tables from eps/iota.  It is the reference model: tests check
that ``to_matrix`` is an algebra homomorphism and that the word trace equals
the matrix trace.

All numerators share a common denominator (xin-i)^a (xin+i)^b per element,
which keeps products cheap; ``entry`` returns a normalized ``RatXi``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Mapping, Sequence

from kkwcalc import symbols as S
from kkwcalc.ring import (
    I,
    MultiPoly,
    RatXi,
    Scalar,
    _from_xin_list,
    _poly_xin_list,
    _eval_at,
    _divide_linear,
    d_xin,
    format_ratxi,
    linear_power,
)

MAX_DIM = 8


class DimensionTooLarge(ValueError):
    pass


def _check_dim(n: int):
    if n > MAX_DIM:
        raise DimensionTooLarge(f"n={n} exceeds {MAX_DIM}")
    if n < 1:
        raise ValueError("dimension must be positive")


def _pairs_above(x: int, y: int) -> int:
    """Number of pairs (p in x, q in y) with p > q."""
    count = 0
    x >>= 1
    while x:
        count += (x & y).bit_count()
        x >>= 1
    return count


@lru_cache(maxsize=None)
def _word_product(n: int, k1: int, k2: int) -> tuple[int, int]:
    full = (1 << n) - 1
    a, b = k1 & full, k1 >> n
    c, d = k2 & full, k2 >> n
    parity = b.bit_count() * c.bit_count()
    parity += _pairs_above(a, c) + (a & c).bit_count()
    parity += _pairs_above(b, d)
    return (-1 if parity & 1 else 1), (a ^ c) | ((b ^ d) << n)


def word_key(n: int, c_idx: Sequence[int] = (), cb_idx: Sequence[int] = ()) -> tuple[int, int]:
    """Key and sign of the (not necessarily ordered) word c_{c_idx} cbar_{cb_idx}."""
    sign, key = 1, 0
    for i in c_idx:
        s, key = _word_product(n, key, 1 << (i - 1))
        sign *= s
    for i in cb_idx:
        s, key = _word_product(n, key, 1 << (n + i - 1))
        sign *= s
    return sign, key


def word_indices(n: int, key: int) -> tuple[list[int], list[int]]:
    full = (1 << n) - 1
    a, b = key & full, key >> n
    return [i + 1 for i in range(n) if a >> i & 1], [i + 1 for i in range(n) if b >> i & 1]


def format_word(n: int, key: int) -> str:
    cs, cbs = word_indices(n, key)
    parts = [f"c(e{i})" for i in cs] + [f"cb(e{i})" for i in cbs]
    return "*".join(parts) if parts else "1"


class CliffordElem:
    """Sum of words with coefficients num_w / ((xin-i)^a (xin+i)^b)."""

    __slots__ = ("n", "terms", "a", "b")

    def __init__(self, n: int, terms: Mapping[int, MultiPoly] | None = None, a: int = 0, b: int = 0):
        _check_dim(n)
        self.n = n
        self.terms = {k: v for k, v in (terms or {}).items() if v.terms}
        self.a, self.b = (a, b) if self.terms else (0, 0)

    # constructors
    @staticmethod
    def zero(n: int) -> "CliffordElem":
        return CliffordElem(n)

    @staticmethod
    def scalar(n: int, value=1) -> "CliffordElem":
        if isinstance(value, RatXi):
            return CliffordElem(n, {0: value.num}, value.a, value.b)
        return CliffordElem(n, {0: MultiPoly.coerce(value)})

    @staticmethod
    def word(n: int, c_idx: Sequence[int] = (), cb_idx: Sequence[int] = (), coeff=1) -> "CliffordElem":
        sign, key = word_key(n, c_idx, cb_idx)
        return CliffordElem(n, {key: MultiPoly.coerce(coeff).scale(sign)})

    # arithmetic
    def _lift(self, a: int, b: int) -> dict[int, MultiPoly]:
        if a == self.a and b == self.b:
            return self.terms
        f = MultiPoly.const(1)
        if a > self.a:
            f = f * linear_power(I, a - self.a)
        if b > self.b:
            f = f * linear_power(-I, b - self.b)
        return {k: v * f for k, v in self.terms.items()}

    def _same(self, o: "CliffordElem"):
        if o.n != self.n:
            raise ValueError("dimension mismatch")

    def __add__(self, o):
        if not isinstance(o, CliffordElem):
            o = CliffordElem.scalar(self.n, o)
        self._same(o)
        if not o.terms:
            return self
        if not self.terms:
            return o
        a, b = max(self.a, o.a), max(self.b, o.b)
        t = dict(self._lift(a, b))
        for k, v in o._lift(a, b).items():
            t[k] = t[k] + v if k in t else v
        return CliffordElem(self.n, t, a, b)

    __radd__ = __add__

    def __neg__(self):
        return CliffordElem(self.n, {k: -v for k, v in self.terms.items()}, self.a, self.b)

    def __sub__(self, o):
        return self + (-o if isinstance(o, CliffordElem) else -CliffordElem.scalar(self.n, o))

    def __rsub__(self, o):
        return CliffordElem.scalar(self.n, o) - self

    def scale(self, c) -> "CliffordElem":
        if isinstance(c, RatXi):
            t = {k: v * c.num for k, v in self.terms.items()}
            return CliffordElem(self.n, t, self.a + c.a, self.b + c.b)
        c = MultiPoly.coerce(c)
        return CliffordElem(self.n, {k: v * c for k, v in self.terms.items()}, self.a, self.b)

    def __mul__(self, o):
        if not isinstance(o, CliffordElem):
            return self.scale(o)
        self._same(o)
        n = self.n
        acc: dict[int, MultiPoly] = {}
        for k1, v1 in self.terms.items():
            for k2, v2 in o.terms.items():
                sign, key = _word_product(n, k1, k2)
                p = v1 * v2
                if sign < 0:
                    p = -p
                acc[key] = acc[key] + p if key in acc else p
        return CliffordElem(n, acc, self.a + o.a, self.b + o.b)

    def __rmul__(self, o):
        return self.scale(o)

    def __pow__(self, k: int):
        out = CliffordElem.scalar(self.n, 1)
        for _ in range(k):
            out = out * self
        return out

    # queries
    def is_zero(self) -> bool:
        return not self.terms

    def entry(self, key: int) -> RatXi:
        v = self.terms.get(key)
        return RatXi(v, self.a, self.b) if v is not None else RatXi(0)

    def entries(self) -> dict[int, RatXi]:
        return {k: RatXi(v, self.a, self.b) for k, v in self.terms.items()}

    def trace(self) -> RatXi:
        """Trace on Lambda^*(R^n): only the identity word has nonzero trace 2^n."""
        return self.entry(0) * (1 << self.n)

    def __eq__(self, o):
        if not isinstance(o, CliffordElem):
            return NotImplemented
        return (self - o).is_zero()

    __hash__ = None

    def reduced(self) -> "CliffordElem":
        """Cancel (xin -+ i) factors common to every numerator."""
        if not self.terms or not (self.a or self.b):
            return self
        lists = {k: _poly_xin_list(v) for k, v in self.terms.items()}
        a, b = self.a, self.b
        for z in (I, -I):
            while (a if z == I else b) > 0:
                if any(_eval_at(c, z).terms for c in lists.values()):
                    break
                lists = {k: _divide_linear(c, z) for k, c in lists.items()}
                if z == I:
                    a -= 1
                else:
                    b -= 1
        if (a, b) == (self.a, self.b):
            return self
        return CliffordElem(self.n, {k: _from_xin_list(c) for k, c in lists.items()}, a, b)

    def d_xin(self) -> "CliffordElem":
        out = CliffordElem(self.n)
        for k, v in self.terms.items():
            r = d_xin(v, self.a, self.b)
            out = out + CliffordElem(self.n, {k: r.num}, r.a, r.b)
        return out

    def map_entries(self, f) -> "CliffordElem":
        """Apply a RatXi -> RatXi map to each word coefficient."""
        out = CliffordElem(self.n)
        for k, r in self.entries().items():
            v = f(r)
            if v:
                out = out + CliffordElem(self.n, {k: v.num}, v.a, v.b)
        return out

    def map_numerators(self, f) -> "CliffordElem":
        """Apply a MultiPoly -> MultiPoly map that commutes with the denominator."""
        return CliffordElem(self.n, {k: f(v) for k, v in self.terms.items()}, self.a, self.b)

    def subs(self, values: Mapping[str, object]) -> "CliffordElem":
        return self.map_numerators(lambda p: p.subs(values))

    def symbols(self) -> set[str]:
        out: set[str] = set()
        for v in self.terms.values():
            out |= v.symbols()
        return out

    def to_matrix(self, values: Mapping[str, object] | None = None) -> dict[tuple[int, int], object]:
        """Materialize in the eps/iota model; coefficients as RatXi (or Scalar under ``values``)."""
        gens = exterior_matrix(self.n)
        out: dict = {}
        for k, r in self.entries().items():
            coeff = r.evaluate(values) if values is not None else r
            for rc, v in _word_matrix(self.n, k, gens).items():
                val = coeff * v
                out[rc] = out[rc] + val if rc in out else val
        return {rc: v for rc, v in out.items() if v}

    def __str__(self):
        return format_elem(self)

    def __repr__(self):
        return f"CliffordElem(n={self.n}, {format_elem(self)})"


def format_elem(x: CliffordElem) -> str:
    if not x.terms:
        return "0"
    parts = []
    for k in sorted(x.terms, key=lambda k: (bin(k).count("1"), word_indices(x.n, k))):
        coef = format_ratxi(RatXi(x.terms[k], x.a, x.b))
        w = format_word(x.n, k)
        if w == "1":
            parts.append(coef)
        else:
            parts.append(w if coef == "1" else f"({coef})*{w}")
    return " + ".join(parts)


# --------------------------------------------------------------------------
# generators and covectors


def c(n: int, i: int, coeff=1) -> CliffordElem:
    return CliffordElem.word(n, (i,), (), coeff)


def cb(n: int, i: int, coeff=1) -> CliffordElem:
    return CliffordElem.word(n, (), (i,), coeff)


def identity(n: int) -> CliffordElem:
    return CliffordElem.scalar(n, 1)


def generators(n: int) -> tuple[list[CliffordElem], list[CliffordElem], CliffordElem]:
    """(c(e_1..e_n), cbar(e_1..e_n), identity)."""
    if not 2 <= n <= MAX_DIM:
        if n > MAX_DIM:
            raise DimensionTooLarge(f"n={n} exceeds {MAX_DIM}")
        raise ValueError("generators need 2 <= n")
    return [c(n, i) for i in range(1, n + 1)], [cb(n, i) for i in range(1, n + 1)], identity(n)


@dataclass(frozen=True)
class CovectorExpr:
    coeffs: tuple[MultiPoly, ...]
    action: str = "c"  # "c" or "cb"

    def __post_init__(self):
        if self.action not in ("c", "cb"):
            raise ValueError("action must be 'c' or 'cb'")


def act_covector(v: CovectorExpr) -> CliffordElem:
    n = len(v.coeffs)
    gen = c if v.action == "c" else cb
    out = CliffordElem(n)
    for i, coef in enumerate(v.coeffs, start=1):
        coef = MultiPoly.coerce(coef)
        if coef.terms:
            out = out + gen(n, i, coef)
    return out


def covector(n: int, name, action: str = "c") -> CliffordElem:
    """Act with the covector whose components are the symbols ``name(i, n)``."""
    return act_covector(CovectorExpr(tuple(MultiPoly.symbol(name(i, n)) for i in range(1, n + 1)), action))


def c_xi_prime(n: int) -> CliffordElem:
    """c(xi') = sum_{j<n} xi_j c(e_j)."""
    return act_covector(CovectorExpr(tuple(MultiPoly.symbol(S.xi(j)) for j in range(1, n)) + (MultiPoly(),)))


def c_dxn(n: int) -> CliffordElem:
    return c(n, n)


def c_xi(n: int) -> CliffordElem:
    """c(xi) = c(xi') + xin c(dx_n)."""
    return c_xi_prime(n) + c(n, n, MultiPoly.symbol(S.XIN))


def dxn_cxi_realization(n: int) -> CliffordElem:
    """Normal derivative of c(xi') at the boundary point, realized as (h1/2) c(xi')."""
    return c_xi_prime(n).scale(MultiPoly.symbol(S.H1).scale(Scalar(1, 0) / 2))


# --------------------------------------------------------------------------
# explicit eps/iota model


def _below(mask: int, i: int) -> int:
    return (mask & ((1 << i) - 1)).bit_count()


@lru_cache(maxsize=None)
def exterior_matrix(n: int) -> dict[str, list[dict[tuple[int, int], int]]]:
    """Signed-permutation tables of c(e_i) = eps_i - iota_i and cbar(e_i) = eps_i + iota_i.

    Rows and columns are subsets of {1..n} as bitmasks; entry (row, col) is
    the coefficient of basis vector ``row`` in the image of ``col``.
    """
    _check_dim(n)
    eps, iota = [], []
    for i in range(n):
        e, t = {}, {}
        for s in range(1 << n):
            sign = -1 if _below(s, i) & 1 else 1
            if s >> i & 1:
                t[(s ^ (1 << i), s)] = sign
            else:
                e[(s | (1 << i), s)] = sign
        eps.append(e)
        iota.append(t)

    def combine(e, t, k):
        out = dict(e)
        for rc, v in t.items():
            out[rc] = out.get(rc, 0) + k * v
        return {rc: v for rc, v in out.items() if v}

    return {
        "c": [combine(eps[i], iota[i], -1) for i in range(n)],
        "cb": [combine(eps[i], iota[i], 1) for i in range(n)],
    }


def matmul(x: Mapping[tuple[int, int], object], y: Mapping[tuple[int, int], object]) -> dict:
    rows: dict[int, list] = {}
    for (r, k), v in y.items():
        rows.setdefault(r, []).append((k, v))
    out: dict = {}
    for (i, r), u in x.items():
        for k, v in rows.get(r, ()):
            val = u * v
            out[(i, k)] = out[(i, k)] + val if (i, k) in out else val
    return {rc: v for rc, v in out.items() if v}


def matrix_trace(x: Mapping[tuple[int, int], object]):
    total = 0
    for (r, col), v in x.items():
        if r == col:
            total = total + v
    return total


def _word_matrix(n: int, key: int, gens) -> dict[tuple[int, int], int]:
    cs, cbs = word_indices(n, key)
    out = {(s, s): 1 for s in range(1 << n)}
    for i in cs:
        out = matmul(out, gens["c"][i - 1])
    for i in cbs:
        out = matmul(out, gens["cb"][i - 1])
    return out


def trace_product(x: CliffordElem, y: CliffordElem) -> RatXi:
    """tr(x y) without forming the product: only equal words pair to the identity."""
    if x.n != y.n:
        raise ValueError("dimension mismatch")
    small, big = (x, y) if len(x.terms) <= len(y.terms) else (y, x)
    acc = MultiPoly()
    for k, v in small.terms.items():
        w = big.terms.get(k)
        if w is None:
            continue
        sign, _ = _word_product(x.n, k, k)
        p = v * w
        acc = acc + (p if sign > 0 else -p)
    return RatXi(acc, x.a + y.a, x.b + y.b) * (1 << x.n)
