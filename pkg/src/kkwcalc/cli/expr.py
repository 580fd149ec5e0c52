"""Expression language for the ``eval`` command.

Grammar (whitespace-insensitive, ``^`` binds tighter than ``*`` and ``/``,
which bind tighter than ``+`` and ``-``)::

    expr   := term (("+" | "-") term)*
    term   := unary (("*" | "/") unary)*
    unary  := "-" unary | power
    power  := atom ("^" INT)?
    atom   := INT | NAME | "(" expr ")"
            | ("c" | "cb") "(" ARG ")" | "dxnc" "(" "xi'" ")"
            | FUNC "(" expr ")"
    FUNC   := tr | piplus | dxin | dxn | intxin | sphere
    ARG    := e<k> | xi' | xi | dxn | theta | thetap

NAME is ``i``, ``h1``, ``xin`` or any other formal symbol such as
``theta_1`` or ``xi_2``.  The apostrophe in ``xi'`` belongs to the token.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union

from kkwcalc import symbols as S
from kkwcalc.clifford import (
    CliffordElem,
    c,
    c_dxn,
    c_xi,
    c_xi_prime,
    cb,
    covector,
    dxn_cxi_realization,
    format_elem,
)
from kkwcalc.ring import I, MultiPoly, RatXi, format_poly, format_ratxi, line_integral_xin, sphere_integrate
from kkwcalc.symcalc import MissingJet, piplus_elem

FUNCS = ("tr", "piplus", "dxin", "dxn", "intxin", "sphere")
KEYWORDS = FUNCS + ("c", "cb", "dxnc")
_GEN_ARG = re.compile(r"e[1-9]\d*|xi'|xi|dxn|thetap|theta")


@dataclass(frozen=True)
class Num:
    value: int


@dataclass(frozen=True)
class Name:
    name: str


@dataclass(frozen=True)
class Gen:
    kind: str  # "c", "cb" or "dxnc"
    arg: str


@dataclass(frozen=True)
class Unary:
    op: str  # "neg" or one of FUNCS
    arg: "Expr"


@dataclass(frozen=True)
class Binary:
    op: str  # "+", "-", "*", "/", "^"
    left: "Expr"
    right: "Expr"


Expr = Union[Num, Name, Gen, Unary, Binary]


class ParseError(ValueError):
    def __init__(self, offset: int, expected: set[str], text: str):
        self.offset = offset
        self.expected = frozenset(expected)
        got = repr(text[offset]) if offset < len(text) else "end of input"
        super().__init__(f"offset {offset}: expected one of {', '.join(sorted(self.expected))}; got {got}")


class EvalError(ValueError):
    pass


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z][A-Za-z0-9_]*'?)|(.))")


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def _skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> tuple[str, str] | None:
        """(kind, text) of the next token without consuming it."""
        self._skip()
        if self.pos >= len(self.text):
            return None
        m = _TOKEN.match(self.text, self.pos)
        if m.group(1):
            return "int", m.group(1)
        if m.group(2):
            return "name", m.group(2)
        return "op", m.group(3)

    def expect(self, op: str):
        tok = self.peek()
        if tok != ("op", op):
            raise ParseError(self.pos, {op}, self.text)
        self.pos += 1

    def expr(self) -> Expr:
        node = self.term()
        while (tok := self.peek()) in (("op", "+"), ("op", "-")):
            self.pos += 1
            node = Binary(tok[1], node, self.term())
        return node

    def term(self) -> Expr:
        node = self.unary()
        while (tok := self.peek()) in (("op", "*"), ("op", "/")):
            self.pos += 1
            node = Binary(tok[1], node, self.unary())
        return node

    def unary(self) -> Expr:
        if self.peek() == ("op", "-"):
            self.pos += 1
            return Unary("neg", self.unary())
        return self.power()

    def power(self) -> Expr:
        base = self.atom()
        if self.peek() == ("op", "^"):
            self.pos += 1
            tok = self.peek()
            if tok is None or tok[0] != "int":
                raise ParseError(self.pos, {"integer exponent"}, self.text)
            self.pos += len(tok[1])
            return Binary("^", base, Num(int(tok[1])))
        return base

    def atom(self) -> Expr:
        start_expected = {"integer", "name", "(", "-"}
        tok = self.peek()
        if tok is None:
            raise ParseError(self.pos, start_expected, self.text)
        kind, text = tok
        if kind == "int":
            self.pos += len(text)
            return Num(int(text))
        if kind == "op":
            if text != "(":
                raise ParseError(self.pos, start_expected, self.text)
            self.pos += 1
            node = self.expr()
            self.expect(")")
            return node
        if text not in KEYWORDS:
            if text.endswith("'"):
                raise ParseError(self.pos, start_expected, self.text)
            self.pos += len(text)
            return Name(text)
        self.pos += len(text)
        self.expect("(")
        if text in FUNCS:
            node = Unary(text, self.expr())
        else:
            node = self.generator(text)
        self.expect(")")
        return node

    def generator(self, kind: str) -> Gen:
        allowed = {"xi'"} if kind == "dxnc" else {"e<k>", "xi'", "xi", "dxn", "theta", "thetap"}
        tok = self.peek()
        if tok is None or tok[0] != "name" or not _GEN_ARG.fullmatch(tok[1]):
            raise ParseError(self.pos, allowed, self.text)
        if kind == "dxnc" and tok[1] != "xi'":
            raise ParseError(self.pos, allowed, self.text)
        self.pos += len(tok[1])
        return Gen(kind, tok[1])


def parse_expr(text: str) -> Expr:
    p = _Parser(text)
    node = p.expr()
    if p.peek() is not None:
        raise ParseError(p.pos, {"+", "-", "*", "/", "^", "end of input"}, text)
    return node


# --------------------------------------------------------------------------
# printing

_PREC = {"+": 1, "-": 1, "*": 2, "/": 2, "neg": 3, "^": 4}


def _prec(node: Expr) -> int:
    if isinstance(node, Binary):
        return _PREC[node.op]
    if isinstance(node, Unary) and node.op == "neg":
        return _PREC["neg"]
    return 5


def format_expr(node: Expr) -> str:
    """Minimal-parenthesis rendering; ``parse_expr(format_expr(x)) == x``."""

    def wrap(child: Expr, need: int) -> str:
        s = format_expr(child)
        return f"({s})" if _prec(child) < need else s

    if isinstance(node, Num):
        return str(node.value)
    if isinstance(node, Name):
        return node.name
    if isinstance(node, Gen):
        return f"{node.kind}({node.arg})"
    if isinstance(node, Unary):
        if node.op == "neg":
            return "-" + wrap(node.arg, _PREC["neg"])
        return f"{node.op}({format_expr(node.arg)})"
    p = _PREC[node.op]
    if node.op == "^":
        return f"{wrap(node.left, 5)}^{format_expr(node.right)}"
    return f"{wrap(node.left, p)} {node.op} {wrap(node.right, p + 1)}"


# --------------------------------------------------------------------------
# evaluation


def _generator(g: Gen, n: int) -> CliffordElem:
    if g.kind == "dxnc":
        return dxn_cxi_realization(n)
    act = c if g.kind == "c" else cb
    if g.arg.startswith("e") and g.arg[1:].isdigit():
        k = int(g.arg[1:])
        if k > n:
            raise EvalError(f"{g.kind}({g.arg}) needs dimension at least {k}")
        return act(n, k)
    if g.arg in ("theta", "thetap"):
        name = S.theta if g.arg == "theta" else S.thetap
        return covector(n, name, g.kind)
    if g.kind == "cb":
        # cbar of the covector variables is never used by the calculus
        raise EvalError(f"cb({g.arg}) is not defined")
    return {"xi'": c_xi_prime, "xi": c_xi, "dxn": c_dxn}[g.arg](n)


def _scalar_part(x: CliffordElem, what: str) -> RatXi:
    if any(k != 0 for k in x.terms):
        raise EvalError(f"{what} must be scalar-valued")
    return x.entry(0)


def _normal_derivative(node: Expr) -> Expr:
    """d/dx_n at x0, as an expression; only c(xi') and c(xi) depend on x_n."""
    zero = Num(0)
    if isinstance(node, (Num, Name)):
        return zero
    if isinstance(node, Gen):
        if node.kind == "c" and node.arg in ("xi'", "xi"):
            return Gen("dxnc", "xi'")
        if node.kind == "dxnc":
            raise MissingJet("second normal derivative of c(xi')")
        return zero
    if isinstance(node, Unary):
        if node.op in ("neg", "tr", "piplus", "dxin", "intxin", "sphere"):
            return Unary(node.op, _normal_derivative(node.arg))
        raise MissingJet("second normal derivative")
    a, b = node.left, node.right
    if node.op in "+-":
        return Binary(node.op, _normal_derivative(a), _normal_derivative(b))
    if node.op == "*":
        return Binary("+", Binary("*", _normal_derivative(a), b), Binary("*", a, _normal_derivative(b)))
    if node.op == "/":
        # divisors are x_n-independent scalars or pole powers in xin
        if not _is_zero_expr(_normal_derivative(b)):
            raise EvalError("divisor depends on x_n")
        return Binary("/", _normal_derivative(a), b)
    k = b.value
    if k == 0:
        return zero
    return Binary("*", Binary("*", Num(k), Binary("^", a, Num(k - 1))), _normal_derivative(a))


def _is_zero_expr(node: Expr) -> bool:
    if isinstance(node, Num):
        return node.value == 0
    if isinstance(node, Unary):
        return _is_zero_expr(node.arg)
    if isinstance(node, Binary):
        if node.op in "+-":
            return _is_zero_expr(node.left) and _is_zero_expr(node.right)
        if node.op == "*":
            return _is_zero_expr(node.left) or _is_zero_expr(node.right)
        if node.op == "/":
            return _is_zero_expr(node.left)
    return False


def evaluate(node: Expr, n: int) -> CliffordElem:
    if isinstance(node, Num):
        return CliffordElem.scalar(n, node.value)
    if isinstance(node, Name):
        if node.name == "i":
            return CliffordElem.scalar(n, I)
        return CliffordElem.scalar(n, MultiPoly.symbol(node.name))
    if isinstance(node, Gen):
        return _generator(node, n)
    if isinstance(node, Unary):
        if node.op == "dxn":
            return evaluate(_normal_derivative(node.arg), n)
        x = evaluate(node.arg, n)
        if node.op == "neg":
            return -x
        if node.op == "tr":
            return CliffordElem.scalar(n, x.trace())
        if node.op == "piplus":
            return piplus_elem(x)
        if node.op == "dxin":
            return x.d_xin()
        if node.op == "intxin":
            return x.map_entries(lambda r: RatXi(line_integral_xin(r)))
        if node.op == "sphere":
            def integrate(r: RatXi) -> RatXi:
                if r.a or r.b:
                    raise EvalError("sphere() needs xin-free polynomial entries")
                return RatXi(sphere_integrate(r.num, n - 1))
            return x.map_entries(integrate)
    left = evaluate(node.left, n)
    if node.op == "^":
        return left ** node.right.value
    right = evaluate(node.right, n)
    if node.op == "+":
        return left + right
    if node.op == "-":
        return left - right
    if node.op == "*":
        return left * right
    try:
        inv = _scalar_part(right, "a divisor").inverse()
    except ZeroDivisionError as exc:
        raise EvalError(str(exc)) from None
    return left.scale(inv)


def format_value(x: CliffordElem) -> str:
    x = x.reduced()
    if not x.terms:
        return "0"
    if set(x.terms) == {0}:
        r = x.entry(0)
        return format_ratxi(r) if (r.a or r.b) else format_poly(r.num)
    return format_elem(x)
