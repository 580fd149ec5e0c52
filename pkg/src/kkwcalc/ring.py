"""Exact coefficient arithmetic.

Three layers:

* ``Scalar``: Gaussian rationals ``re + im*i`` backed by ``gmpy2.mpq``.
* ``MultiPoly``: sparse polynomials over ``Scalar`` in named formal symbols.
* ``RatXi``: ``num / ((xin - i)**a * (xin + i)**b)`` where ``num`` is a
  ``MultiPoly`` that may contain the normal covector symbol ``xin``.

Symbols are plain strings (see ``symbols``).  Monomials are sorted tuples of
``(name, exponent)`` pairs, so two equal polynomials always share one dict
representation.
"""

from __future__ import annotations

import re as _re
from fractions import Fraction
from math import comb, prod
from typing import Iterable, Mapping

from gmpy2 import mpq

from kkwcalc import symbols as S

Monomial = tuple  # tuple[tuple[str, int], ...]

_ZERO = mpq(0)
_ONE = mpq(1)


class NonDecaying(ArithmeticError):
    """The integrand does not decay fast enough for the normal line integral."""


def _q(x) -> mpq:
    if isinstance(x, Fraction):
        return mpq(x.numerator, x.denominator)
    if isinstance(x, str):
        return mpq(x)
    return mpq(x)


class Scalar:
    """Exact Gaussian rational."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = re if type(re) is type(_ZERO) else _q(re)
        self.im = im if type(im) is type(_ZERO) else _q(im)

    @staticmethod
    def coerce(x) -> "Scalar":
        if isinstance(x, Scalar):
            return x
        if isinstance(x, complex):
            raise TypeError("floating point complex values are not exact")
        return Scalar(x)

    def __add__(self, o):
        o = Scalar.coerce(o)
        return Scalar(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, o):
        o = Scalar.coerce(o)
        return Scalar(self.re - o.re, self.im - o.im)

    def __rsub__(self, o):
        return Scalar.coerce(o) - self

    def __mul__(self, o):
        if not isinstance(o, Scalar):
            if isinstance(o, (int, Fraction)) or type(o) is type(_ZERO):
                q = _q(o)
                return Scalar(self.re * q, self.im * q)
            return NotImplemented
        return Scalar(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __neg__(self):
        return Scalar(-self.re, -self.im)

    def conjugate(self):
        return Scalar(self.re, -self.im)

    def inverse(self) -> "Scalar":
        d = self.re * self.re + self.im * self.im
        if d == 0:
            raise ZeroDivisionError("Scalar inverse of zero")
        return Scalar(self.re / d, -self.im / d)

    def __truediv__(self, o):
        return self * Scalar.coerce(o).inverse()

    def __rtruediv__(self, o):
        return Scalar.coerce(o) * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out, base = ONE, self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, o):
        try:
            o = Scalar.coerce(o)
        except TypeError:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))

    def to_complex(self) -> complex:
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"Scalar({self})"

    def __str__(self):
        return format_scalar(self)


ZERO = Scalar(0)
ONE = Scalar(1)
I = Scalar(0, 1)


def _fmt_q(q: mpq) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def format_scalar(c: Scalar) -> str:
    if not c.im:
        return _fmt_q(c.re)
    im = "i" if c.im == 1 else "-i" if c.im == -1 else _fmt_q(c.im) + "*i"
    if not c.re:
        return im
    sign = "" if im.startswith("-") else "+"
    return f"({_fmt_q(c.re)}{sign}{im})"


# --------------------------------------------------------------------------
# monomials


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    out = []
    i = j = 0
    la, lb = len(a), len(b)
    while i < la and j < lb:
        sa, ea = a[i]
        sb, eb = b[j]
        if sa == sb:
            out.append((sa, ea + eb))
            i += 1
            j += 1
        elif sa < sb:
            out.append(a[i])
            i += 1
        else:
            out.append(b[j])
            j += 1
    if i < la:
        out.extend(a[i:])
    if j < lb:
        out.extend(b[j:])
    return tuple(out)


def mono_degree(m: Monomial) -> int:
    return sum(e for _, e in m)


def mono_key(m: Monomial):
    return (mono_degree(m), m)


def mono_from(powers: Mapping[str, int]) -> Monomial:
    return tuple(sorted((s, e) for s, e in powers.items() if e))


# --------------------------------------------------------------------------
# MultiPoly


class MultiPoly:
    """Sparse polynomial over ``Scalar``; treat as immutable."""

    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, Scalar] | None = None, *, _trusted=False):
        if _trusted:
            self.terms = terms
        else:
            self.terms = {}
            for m, c in (terms or {}).items():
                c = Scalar.coerce(c)
                if c:
                    self.terms[m] = c
        self._hash = None

    # constructors
    @staticmethod
    def const(c) -> "MultiPoly":
        c = Scalar.coerce(c)
        return MultiPoly({(): c}, _trusted=True) if c else MultiPoly({}, _trusted=True)

    @staticmethod
    def symbol(name: str, exp: int = 1) -> "MultiPoly":
        return MultiPoly({((name, exp),) if exp else (): ONE}, _trusted=True)

    @staticmethod
    def coerce(x) -> "MultiPoly":
        if isinstance(x, MultiPoly):
            return x
        return MultiPoly.const(x)

    # queries
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def symbols(self) -> set[str]:
        return {s for m in self.terms for s, _ in m}

    def degree(self, name: str | None = None) -> int:
        if not self.terms:
            return -1
        if name is None:
            return max(mono_degree(m) for m in self.terms)
        return max((dict(m).get(name, 0) for m in self.terms), default=-1)

    def constant_term(self) -> Scalar:
        return self.terms.get((), ZERO)

    def is_constant(self) -> bool:
        return all(not m for m in self.terms)

    # arithmetic
    def __add__(self, o):
        if not isinstance(o, MultiPoly):
            if isinstance(o, (RatXi,)):
                return NotImplemented
            o = MultiPoly.coerce(o)
        if not o.terms:
            return self
        if not self.terms:
            return o
        t = dict(self.terms)
        for m, c in o.terms.items():
            v = t.get(m)
            if v is None:
                t[m] = c
            else:
                v = v + c
                if v:
                    t[m] = v
                else:
                    del t[m]
        return MultiPoly(t, _trusted=True)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly({m: -c for m, c in self.terms.items()}, _trusted=True)

    def __sub__(self, o):
        if isinstance(o, RatXi):
            return NotImplemented
        return self + (-MultiPoly.coerce(o))

    def __rsub__(self, o):
        return MultiPoly.coerce(o) - self

    def scale(self, c) -> "MultiPoly":
        c = Scalar.coerce(c)
        if not c:
            return MultiPoly({}, _trusted=True)
        if c == ONE:
            return self
        return MultiPoly({m: v * c for m, v in self.terms.items()}, _trusted=True)

    def __mul__(self, o):
        if isinstance(o, RatXi):
            return NotImplemented
        if not isinstance(o, MultiPoly):
            return self.scale(o)
        if not self.terms or not o.terms:
            return MultiPoly({}, _trusted=True)
        if len(o.terms) == 1 and () in o.terms:
            return self.scale(o.terms[()])
        if len(self.terms) == 1 and () in self.terms:
            return o.scale(self.terms[()])
        t: dict = {}
        get = t.get
        for ma, ca in self.terms.items():
            car, cai = ca.re, ca.im
            for mb, cb in o.terms.items():
                m = mono_mul(ma, mb)
                re = car * cb.re - cai * cb.im
                im = car * cb.im + cai * cb.re
                v = get(m)
                if v is None:
                    t[m] = [re, im]
                else:
                    v[0] += re
                    v[1] += im
        out = {m: Scalar(v[0], v[1]) for m, v in t.items() if v[0] or v[1]}
        return MultiPoly(out, _trusted=True)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power of a polynomial")
        out = MultiPoly.const(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, o):
        if isinstance(o, RatXi):
            return o == self
        try:
            o = MultiPoly.coerce(o)
        except TypeError:
            return NotImplemented
        return self.terms == o.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    # calculus / substitution
    def diff(self, name: str) -> "MultiPoly":
        t = {}
        for m, c in self.terms.items():
            d = dict(m)
            e = d.get(name, 0)
            if e:
                d[name] = e - 1
                t[mono_from(d)] = c * e
        return MultiPoly(t)

    def subs(self, values: Mapping[str, object]) -> "MultiPoly":
        """Substitute symbols by scalars or polynomials."""
        vals = {k: MultiPoly.coerce(v) for k, v in values.items()}
        cache: dict = {}
        out = MultiPoly()
        for m, c in self.terms.items():
            keep = []
            factor = MultiPoly.const(c)
            for s, e in m:
                if s in vals:
                    key = (s, e)
                    p = cache.get(key)
                    if p is None:
                        p = cache[key] = vals[s] ** e
                    factor = factor * p
                else:
                    keep.append((s, e))
            out = out + factor * MultiPoly({tuple(keep): ONE}, _trusted=True)
        return out

    def coeffs_in(self, name: str) -> dict[int, "MultiPoly"]:
        """Split into ``{power of name: coefficient polynomial}``."""
        out: dict[int, dict] = {}
        for m, c in self.terms.items():
            e = 0
            rest = []
            for s, k in m:
                if s == name:
                    e = k
                else:
                    rest.append((s, k))
            out.setdefault(e, {})[tuple(rest)] = c
        return {e: MultiPoly(t, _trusted=True) for e, t in out.items()}

    def coefficient(self, monomial: Mapping[str, int]) -> "MultiPoly":
        """Coefficient of the given monomial, as polynomial in the remaining symbols."""
        want = dict(monomial)
        t = {}
        for m, c in self.terms.items():
            d = dict(m)
            if all(d.get(s, 0) == e for s, e in want.items()):
                for s in want:
                    d.pop(s, None)
                t[mono_from(d)] = c
        return MultiPoly(t, _trusted=True)

    def map_coeffs(self, f) -> "MultiPoly":
        return MultiPoly({m: f(c) for m, c in self.terms.items()})

    def real_part(self) -> "MultiPoly":
        return self.map_coeffs(lambda c: Scalar(c.re))

    def imag_part(self) -> "MultiPoly":
        return self.map_coeffs(lambda c: Scalar(c.im))

    def evaluate(self, values: Mapping[str, object]) -> Scalar:
        p = self.subs(values)
        if not p.is_constant():
            raise ValueError(f"unassigned symbols: {sorted(p.symbols())}")
        return p.constant_term()

    # text
    def __str__(self):
        return format_poly(self)

    def __repr__(self):
        return f"MultiPoly({format_poly(self)!r})"

    @staticmethod
    def parse(text: str) -> "MultiPoly":
        return parse_poly(text)


def _sym_str(s: str, e: int) -> str:
    return s if e == 1 else f"{s}^{e}"


def format_poly(p: MultiPoly) -> str:
    """Canonical text: graded-lex sorted terms, explicit signs, ``*`` joins."""
    if not p.terms:
        return "0"
    parts = []
    for m in sorted(p.terms, key=mono_key):
        c = p.terms[m]
        body = "*".join(_sym_str(s, e) for s, e in m)
        if c.im and c.re:
            cs, neg = format_scalar(c), False
        else:
            neg = (c.re < 0) if not c.im else (c.im < 0)
            cs = format_scalar(-c if neg else c)
        if body:
            text = body if cs == "1" else f"{cs}*{body}"
        else:
            text = cs
        if not parts:
            parts.append(("-" if neg else "") + text)
        else:
            parts.append((" - " if neg else " + ") + text)
    return "".join(parts)


_SYMBOL_POWER = _re.compile(r"([A-Za-z][A-Za-z0-9_]*)(?:\^(\d+))?")


def parse_poly(text: str) -> MultiPoly:
    """Inverse of ``format_poly``."""
    text = text.strip()
    if text == "0":
        return MultiPoly()
    out = MultiPoly()
    depth = 0
    # split on top-level +/- separators surrounded by spaces
    chunks, start, sign = [], 0, 1
    if text.startswith("-"):
        sign, start = -1, 1
    i = start
    while i < len(text):
        ch = text[i]
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif depth == 0 and text.startswith((" + ", " - "), i):
            chunks.append((sign, text[start:i]))
            sign = 1 if text[i + 1] == "+" else -1
            start = i + 3
            i += 3
            continue
        i += 1
    chunks.append((sign, text[start:]))
    for sgn, chunk in chunks:
        coef = Scalar(sgn)
        powers: dict[str, int] = {}
        for fac in _split_factors(chunk):
            if fac.startswith("("):
                coef = coef * _parse_scalar(fac[1:-1])
            elif _re.fullmatch(r"-?\d+(/\d+)?", fac):
                coef = coef * Scalar(mpq(fac))
            elif fac in ("i", "-i"):
                coef = coef * (I if fac == "i" else -I)
            else:
                m = _SYMBOL_POWER.fullmatch(fac)
                if not m:
                    raise ValueError(f"bad factor {fac!r} in {text!r}")
                name, e = m.group(1), m.group(2)
                powers[name] = powers.get(name, 0) + (int(e) if e else 1)
        out = out + MultiPoly({mono_from(powers): coef})
    return out


def _split_factors(chunk: str) -> list[str]:
    facs, depth, cur = [], 0, ""
    for ch in chunk:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "*" and depth == 0:
            facs.append(cur)
            cur = ""
        else:
            cur += ch
    facs.append(cur)
    return [f.strip() for f in facs if f.strip()]


def _parse_scalar(text: str) -> Scalar:
    m = _re.fullmatch(r"(-?\d+(?:/\d+)?)([+-])(?:(\d+(?:/\d+)?)\*)?i", text)
    if not m:
        raise ValueError(f"bad scalar {text!r}")
    im = mpq(m.group(3) or 1)
    return Scalar(mpq(m.group(1)), im if m.group(2) == "+" else -im)


def poly(x) -> MultiPoly:
    return MultiPoly.coerce(x)


def sym(name: str) -> MultiPoly:
    return MultiPoly.symbol(name)


XIN = S.XIN


# --------------------------------------------------------------------------
# RatXi


def _poly_xin_list(num: MultiPoly) -> list[MultiPoly]:
    d = num.coeffs_in(XIN)
    if not d:
        return []
    top = max(d)
    return [d.get(k, MultiPoly()) for k in range(top + 1)]


def _from_xin_list(coeffs: Iterable[MultiPoly]) -> MultiPoly:
    out: dict = {}
    for k, c in enumerate(coeffs):
        for m, v in c.terms.items():
            mm = mono_mul(m, ((XIN, k),)) if k else m
            out[mm] = v
    return MultiPoly(out, _trusted=True)


def _eval_at(coeffs: list[MultiPoly], z: Scalar) -> MultiPoly:
    acc = MultiPoly()
    for c in reversed(coeffs):
        acc = acc.scale(z) + c
    return acc


def _divide_linear(coeffs: list[MultiPoly], z: Scalar) -> list[MultiPoly]:
    """Synthetic division by (xin - z); caller guarantees exactness."""
    n = len(coeffs) - 1
    out = [MultiPoly()] * n
    carry = MultiPoly()
    for k in range(n, 0, -1):
        carry = coeffs[k] + carry.scale(z)
        out[k - 1] = carry
    return out


def linear_power(z: Scalar, k: int) -> MultiPoly:
    """(xin - z)**k as a polynomial."""
    return _from_xin_list(
        [MultiPoly.const(Scalar(comb(k, j)) * (-z) ** (k - j)) for j in range(k + 1)]
    )


_PLUS_I = linear_power(I, 1)  # xin - i
_MINUS_I = linear_power(-I, 1)  # xin + i


class RatXi:
    """``num / ((xin-i)^a (xin+i)^b)``, normalized on construction."""

    __slots__ = ("num", "a", "b")

    def __init__(self, num, a: int = 0, b: int = 0, *, normalize: bool = True):
        num = MultiPoly.coerce(num)
        if a < 0 or b < 0:
            raise ValueError("pole orders must be nonnegative")
        if normalize and (a or b) and num.terms:
            num, a, b = _normalize(num, a, b)
        if not num.terms:
            a = b = 0
        self.num, self.a, self.b = num, a, b

    @staticmethod
    def coerce(x) -> "RatXi":
        if isinstance(x, RatXi):
            return x
        return RatXi(MultiPoly.coerce(x))

    @staticmethod
    def pole(a: int = 0, b: int = 0, coeff=1) -> "RatXi":
        """``coeff / ((xin-i)^a (xin+i)^b)``."""
        return RatXi(MultiPoly.coerce(coeff), a, b)

    def is_zero(self) -> bool:
        return not self.num.terms

    def __bool__(self):
        return bool(self.num.terms)

    def num_coeffs(self) -> dict[int, MultiPoly]:
        return self.num.coeffs_in(XIN)

    def num_degree(self) -> int:
        return self.num.degree(XIN)

    def _lift(self, a: int, b: int) -> MultiPoly:
        num = self.num
        if a > self.a:
            num = num * linear_power(I, a - self.a)
        if b > self.b:
            num = num * linear_power(-I, b - self.b)
        return num

    def __add__(self, o):
        o = RatXi.coerce(o)
        if not o.num.terms:
            return self
        if not self.num.terms:
            return o
        a, b = max(self.a, o.a), max(self.b, o.b)
        return RatXi(self._lift(a, b) + o._lift(a, b), a, b)

    __radd__ = __add__

    def __neg__(self):
        return RatXi(-self.num, self.a, self.b, normalize=False)

    def __sub__(self, o):
        return self + (-RatXi.coerce(o))

    def __rsub__(self, o):
        return RatXi.coerce(o) - self

    def __mul__(self, o):
        if isinstance(o, RatXi):
            return RatXi(self.num * o.num, self.a + o.a, self.b + o.b)
        if isinstance(o, MultiPoly):
            return RatXi(self.num * o, self.a, self.b)
        try:
            c = Scalar.coerce(o)
        except TypeError:
            return NotImplemented
        return RatXi(self.num.scale(c), self.a, self.b, normalize=False)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        out = RatXi(MultiPoly.const(1))
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, o):
        if not isinstance(o, (RatXi, MultiPoly, Scalar, int, Fraction)):
            return NotImplemented
        o = RatXi.coerce(o)
        return self.a == o.a and self.b == o.b and self.num == o.num

    def __hash__(self):
        return hash((self.num, self.a, self.b))

    def d_xin(self) -> "RatXi":
        return d_xin(self.num, self.a, self.b)

    def map_num(self, f) -> "RatXi":
        return RatXi(f(self.num), self.a, self.b)

    def inverse(self) -> "RatXi":
        """Reciprocal; exists only when num is a constant times powers of (xin -+ i)."""
        coeffs = _poly_xin_list(self.num)
        powers = {}
        for z in (I, -I):
            powers[z] = 0
            while len(coeffs) > 1 and not _eval_at(coeffs, z):
                coeffs = _divide_linear(coeffs, z)
                powers[z] += 1
        if len(coeffs) != 1 or not coeffs[0] or not coeffs[0].is_constant():
            raise ZeroDivisionError(f"{self} has no inverse with poles at +-i only")
        unit = coeffs[0].constant_term().inverse()
        num = (linear_power(I, self.a) * linear_power(-I, self.b)).scale(unit)
        return RatXi(num, powers[I], powers[-I])

    def evaluate(self, values: Mapping[str, object]) -> Scalar:
        if XIN not in values and not (self.a or self.b):
            return self.num.evaluate(values)
        z = Scalar.coerce(values[XIN])
        den = (z - I) ** self.a * (z + I) ** self.b
        return self.num.evaluate(values) / den

    def __str__(self):
        return format_ratxi(self)

    def __repr__(self):
        return f"RatXi({format_ratxi(self)!r})"


def _normalize(num: MultiPoly, a: int, b: int):
    coeffs = None
    for z, attr in ((I, "a"), (-I, "b")):
        while (a if attr == "a" else b) > 0:
            if coeffs is None:
                coeffs = _poly_xin_list(num)
            if _eval_at(coeffs, z).terms:
                break
            coeffs = _divide_linear(coeffs, z)
            if attr == "a":
                a -= 1
            else:
                b -= 1
    if coeffs is not None:
        num = _from_xin_list(coeffs)
    return num, a, b


def d_xin(num: MultiPoly, a: int, b: int) -> RatXi:
    """Derivative in xin of num/((xin-i)^a(xin+i)^b)."""
    dn = num.diff(XIN)
    if a and b:
        new = dn * _PLUS_I * _MINUS_I - num * (_MINUS_I.scale(a) + _PLUS_I.scale(b))
        return RatXi(new, a + 1, b + 1)
    if a:
        return RatXi(dn * _PLUS_I - num.scale(a), a + 1, 0)
    if b:
        return RatXi(dn * _MINUS_I - num.scale(b), 0, b + 1)
    return RatXi(dn)


def format_ratxi(r: RatXi) -> str:
    num = format_poly(r.num)
    den = []
    if r.a:
        den.append("(xin-i)" + (f"^{r.a}" if r.a > 1 else ""))
    if r.b:
        den.append("(xin+i)" + (f"^{r.b}" if r.b > 1 else ""))
    if not den:
        return num
    return f"({num})/({'*'.join(den)})"


# --------------------------------------------------------------------------
# partial fractions and integration


def _laurent_head(coeffs: list[MultiPoly], z: Scalar, other: Scalar, b: int, count: int):
    """First ``count`` Taylor coefficients at ``z`` of num(x)/(x - other)^b."""
    # num(u + z) as polynomial in u
    shifted = [MultiPoly()] * len(coeffs)
    for k, c in enumerate(coeffs):
        if not c.terms:
            continue
        for j in range(k + 1):
            w = Scalar(comb(k, j)) * z ** (k - j)
            shifted[j] = shifted[j] + c.scale(w)
    # 1/(u + (z - other))^b = d^-b (1 + u/d)^-b
    d = z - other
    dinv = d.inverse()
    series = []
    for m in range(count):
        if b == 0:
            series.append(ONE if m == 0 else ZERO)
            continue
        # binom(-b, m) = (-1)^m binom(b+m-1, m)
        series.append(Scalar((-1) ** m * comb(b + m - 1, m)) * dinv ** (b + m))
    out = []
    for k in range(count):
        acc = MultiPoly()
        for j in range(min(k, len(shifted) - 1) + 1):
            if shifted[j].terms:
                acc = acc + shifted[j].scale(series[k - j])
        out.append(acc)
    return out


def _principal_part(r: RatXi, upper: bool) -> RatXi:
    a, b = (r.a, r.b) if upper else (r.b, r.a)
    if a == 0 or not r.num.terms:
        return RatXi(MultiPoly())
    z, other = (I, -I) if upper else (-I, I)
    coeffs = _poly_xin_list(r.num)
    head = _laurent_head(coeffs, z, other, b, a)
    # sum_k head[k] (x - z)^k over (x - z)^a
    num = MultiPoly()
    for k, c in enumerate(head):
        if c.terms:
            num = num + c * linear_power(z, k)
    return RatXi(num, a, 0) if upper else RatXi(num, 0, a)


def principal_parts(r: RatXi) -> tuple[RatXi, RatXi, RatXi]:
    """Split into (upper, lower, polynomial) parts; they sum back to ``r``."""
    up = _principal_part(r, True)
    lo = _principal_part(r, False)
    rest = r - up - lo
    if rest.a or rest.b:
        raise ArithmeticError("partial fraction remainder is not polynomial")
    return up, lo, rest


def piplus(r: RatXi) -> RatXi:
    return _principal_part(r, True)


def line_integral_xin(r: RatXi) -> MultiPoly:
    """Integral over the real xin axis: 2*pi*i times the residue at +i."""
    r = RatXi.coerce(r)
    if not r.num.terms:
        return MultiPoly()
    if r.num_degree() > r.a + r.b - 2:
        raise NonDecaying(
            f"numerator degree {r.num_degree()} exceeds {r.a + r.b - 2} for {format_ratxi(r)}"
        )
    if r.a == 0:
        return MultiPoly()
    head = _laurent_head(_poly_xin_list(r.num), I, -I, r.b, r.a)
    residue = head[r.a - 1]
    return residue.scale(Scalar(0, 2)) * sym(S.PI)


def _double_factorial(k: int) -> int:
    return prod(range(k, 0, -2)) if k > 0 else 1


def sphere_moment(alpha: Iterable[int], m: int) -> Fraction:
    """Integral of xi^alpha over the unit sphere in R^m, in units of its volume Omega_m."""
    alpha = list(alpha)
    if any(e % 2 for e in alpha):
        return Fraction(0)
    num = prod(_double_factorial(e - 1) for e in alpha)
    half = sum(alpha) // 2
    den = prod(m + 2 * k - 2 for k in range(1, half + 1))
    return Fraction(num, den)


def sphere_integrate(p: MultiPoly, m: int) -> MultiPoly:
    """Integrate over the unit sphere of the tangential covector xi' in R^m."""
    names = {S.xi(j): j for j in range(1, m + 1)}
    out: dict = {}
    omega = (S.omega(m), 1)
    for mono, c in p.terms.items():
        alpha = [0] * m
        rest = []
        for s, e in mono:
            j = names.get(s)
            if j is None:
                if s.startswith("xi_"):
                    raise ValueError(f"{s} outside the {m}-dimensional sphere")
                rest.append((s, e))
            else:
                alpha[j - 1] = e
        w = sphere_moment(alpha, m)
        if not w:
            continue
        key = mono_mul(tuple(rest), (omega,))
        v = c * w
        out[key] = out[key] + v if key in out else v
    return MultiPoly(out)


def sphere_points(m: int) -> list[dict[str, Fraction]]:
    """Exact rational points on the unit sphere in R^m used to test identities."""
    bases = [(1,), (Fraction(3, 5), Fraction(4, 5)), (Fraction(1, 3), Fraction(2, 3), Fraction(2, 3))]
    from itertools import permutations, product

    pts = set()
    for base in bases:
        if len(base) > m:
            continue
        vec = list(base) + [0] * (m - len(base))
        for perm in set(permutations(vec)):
            for signs in product((1, -1), repeat=m):
                pts.add(tuple(s * v for s, v in zip(signs, perm)))
    return [{S.xi(j + 1): v for j, v in enumerate(p)} for p in sorted(pts)]
