"""Text syntax for numbers and set expressions.

Numbers are sums of terms ``c``, ``c*d^(p/q)``, ``d^(p/q)`` and ``d``::

    1 - d + 3/2*d^(2)

Sets combine intervals and primitives with ``|`` (union, lowest
precedence), ``&`` and ``\\`` (intersection, difference; left associative)
and prefix ``~`` (complement, which needs a trailing ``within [a, b]``)::

    let C = union(n, (d^((n-1)/n), 2*d^((n-1)/n)));
    (T([0, 1]) | C) & (S([0, 1]) | C)

Every parse error is a :class:`DSLError` carrying the ``(start, end)``
character span of the offending input.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from levicivita import patterns
from levicivita.core import LCNumber
from levicivita.errors import (
    DSLSyntaxError,
    DuplicateExponent,
    UnboundedComplement,
    UnknownPattern,
)
from levicivita.intervals import NEG_INF, POS_INF, Interval, render_interval
from levicivita.sets import (
    CertifiedCountableIntersect,
    CertifiedCountableUnion,
    CountableUnion,
    Dense,
    Diff,
    Empty,
    FiniteUnion,
    Intersect,
    LCSet,
    PointSeq,
    Single,
    Union,
    rationals_in,
)

_TOKEN = re.compile(
    r"\s*(?:(?P<int>\d+)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>\+\+|[-+*/^()\[\],|&\\~=;]))"
)


@dataclass(frozen=True)
class Token:
    kind: str  # "int", "name", "op" or "end"
    text: str
    start: int
    end: int


def tokenize(text: str) -> list:
    toks = []
    pos = 0
    n = len(text)
    while True:
        while pos < n and text[pos].isspace():
            pos += 1
        if pos >= n:
            break
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            raise DSLSyntaxError(f"unexpected character {text[pos]!r}", (pos, pos + 1))
        kind = m.lastgroup
        toks.append(Token(kind, m.group(kind), m.start(kind), m.end()))
        pos = m.end()
    toks.append(Token("end", "", n, n))
    return toks


class _Parser:
    def __init__(self, text):
        self.text = text
        self.toks = tokenize(text)
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def peek(self, k=1) -> Token:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def at(self, text) -> bool:
        return self.tok.text == text and self.tok.kind != "end"

    def advance(self) -> Token:
        t = self.tok
        if t.kind != "end":
            self.i += 1
        return t

    def expect(self, text) -> Token:
        if not self.at(text):
            self.fail(f"expected {text!r}")
        return self.advance()

    def fail(self, msg, span=None):
        t = self.tok
        found = "end of input" if t.kind == "end" else repr(t.text)
        raise DSLSyntaxError(f"{msg}, found {found}", span or (t.start, max(t.end, t.start + 1)))

    def expect_end(self):
        if self.tok.kind != "end":
            self.fail("unexpected trailing input")

    # -- numbers ------------------------------------------------------------

    def integer(self) -> int:
        if self.tok.kind != "int":
            self.fail("expected an integer")
        return int(self.advance().text)

    def rational(self) -> Fraction:
        num = self.integer()
        if self.at("/") and self.peek().kind == "int":
            self.advance()
            den_tok = self.tok
            den = self.integer()
            if den == 0:
                raise DSLSyntaxError("zero denominator", (den_tok.start, den_tok.end))
            return Fraction(num, den)
        return Fraction(num)

    def exponent(self) -> Fraction:
        """After ``d``: optional ``^(p/q)``, ``^(-p/q)`` or ``^p``."""
        if not self.at("^"):
            return Fraction(1)
        self.advance()
        if self.at("("):
            self.advance()
            neg = False
            if self.at("-") or self.at("+"):
                neg = self.advance().text == "-"
            q = self.rational()
            self.expect(")")
            return -q if neg else q
        return self.rational()

    def term(self):
        """One unsigned term: returns (exponent, coefficient)."""
        if self.tok.kind == "name" and self.tok.text == "d":
            self.advance()
            return self.exponent(), Fraction(1)
        if self.tok.kind != "int":
            self.fail("expected a number term")
        c = self.rational()
        if self.at("*"):
            self.advance()
            if not (self.tok.kind == "name" and self.tok.text == "d"):
                self.fail("expected 'd' after '*'")
            self.advance()
            return self.exponent(), c
        return Fraction(0), c

    def number(self) -> LCNumber:
        coeffs = {}
        sign = 1
        if self.at("-") or self.at("+"):
            sign = -1 if self.advance().text == "-" else 1
        while True:
            t0 = self.tok
            e, c = self.term()
            if e in coeffs:
                raise DuplicateExponent(f"exponent {e} appears twice", (t0.start, self.toks[self.i - 1].end))
            coeffs[e] = sign * c
            if self.at("+") or self.at("-"):
                sign = -1 if self.advance().text == "-" else 1
                continue
            break
        return LCNumber.from_dict(coeffs)

    def endpoint(self):
        if self.tok.kind == "name" and self.tok.text == "inf":
            self.advance()
            return POS_INF
        if self.at("+") and self.peek().text == "inf":
            self.advance()
            self.advance()
            return POS_INF
        if self.at("-") and self.peek().text == "inf":
            self.advance()
            self.advance()
            return NEG_INF
        return self.number()

    def interval(self) -> Interval:
        t0 = self.tok
        if not (self.at("[") or self.at("(")):
            self.fail("expected an interval")
        lo_closed = self.advance().text == "["
        lo = self.endpoint()
        self.expect(",")
        hi = self.endpoint()
        if not (self.at("]") or self.at(")")):
            self.fail("expected ']' or ')'")
        hi_closed = self.advance().text == "]"
        span = (t0.start, self.toks[self.i - 1].end)
        try:
            return Interval.make(lo, hi, lo_closed, hi_closed)
        except (ValueError, ArithmeticError) as exc:
            raise DSLSyntaxError(f"invalid interval: {exc}", span) from None

    # -- patterns in n ------------------------------------------------------

    def pexpr(self):
        node = self.pterm()
        while self.at("+") or self.at("-"):
            op = self.advance().text
            node = (op, node, self.pterm())
        return node

    def pterm(self):
        node = self.punary()
        while self.at("*") or self.at("/"):
            op = self.advance().text
            node = (op, node, self.punary())
        return node

    def punary(self):
        if self.at("-"):
            self.advance()
            return ("neg", self.punary())
        return self.ppow()

    def ppow(self):
        base = self.patom()
        if self.at("^"):
            self.advance()
            return ("^", base, self.punary())
        return base

    def patom(self):
        t = self.tok
        if t.kind == "int":
            self.advance()
            return ("int", int(t.text))
        if t.kind == "name" and t.text in ("n", "d"):
            self.advance()
            return ("var", t.text)
        if self.at("("):
            self.advance()
            node = self.pexpr()
            self.expect(")")
            return node
        self.fail("expected a pattern term")

    def pinterval(self) -> str:
        if not (self.at("[") or self.at("(")):
            self.fail("expected an interval pattern")
        left = self.advance().text
        lo = self.pexpr()
        self.expect(",")
        hi = self.pexpr()
        if not (self.at("]") or self.at(")")):
            self.fail("expected ']' or ')'")
        right = self.advance().text
        return f"{left}{render_pattern(lo)}, {render_pattern(hi)}{right}"

    def pattern(self) -> str:
        parts = [self.pinterval()]
        while self.at("++"):
            self.advance()
            parts.append(self.pinterval())
        return " ++ ".join(parts)

    # -- sets -----------------------------------------------------------------

    def program(self) -> LCSet:
        self.env = {}
        while self.tok.kind == "name" and self.tok.text == "let":
            self.advance()
            if self.tok.kind != "name":
                self.fail("expected a name")
            name = self.advance().text
            self.expect("=")
            self.env[name] = self.set_expr()
            self.expect(";")
        node = self.set_expr()
        if self.tok.kind == "name" and self.tok.text == "within":
            self.advance()
            amb = self.interval()
            node = _resolve_complements(node, amb)
        elif _has_complement(node):
            c = _first_complement(node)
            raise UnboundedComplement("complement needs a bounded ambient: add 'within [a, b]'", c.span)
        self.expect_end()
        return node

    def set_expr(self):
        node = self.set_term()
        while self.at("|"):
            self.advance()
            node = Union(node, self.set_term())
        return node

    def set_term(self):
        node = self.set_unary()
        while self.at("&") or self.at("\\"):
            op = self.advance().text
            rhs = self.set_unary()
            node = Intersect(node, rhs) if op == "&" else Diff(node, rhs)
        return node

    def set_unary(self):
        if self.at("~"):
            t = self.advance()
            inner = self.set_unary()
            return _Complement(inner, (t.start, self.toks[self.i - 1].end))
        return self.set_primary()

    def set_primary(self):
        t = self.tok
        if self.at("["):
            return _single(self.interval())
        if self.at("("):
            save = self.i
            try:
                iv = self.interval()
            except DSLSyntaxError:
                self.i = save
            else:
                return _single(iv)
            self.advance()
            node = self.set_expr()
            self.expect(")")
            return node
        if t.kind != "name":
            self.fail("expected a set")
        name = t.text
        if name in ("Q", "T", "S") and self.peek().text == "(":
            self.advance()
            self.expect("(")
            iv = self.interval()
            span = (t.start, self.tok.end)
            self.expect(")")
            try:
                if name == "Q":
                    return rationals_in(iv)
                return Dense(name, iv)
            except ValueError as exc:
                raise DSLSyntaxError(str(exc), span) from None
        if name in ("union", "intersect") and self.peek().text == "(":
            self.advance()
            self.expect("(")
            if not (self.tok.kind == "name" and self.tok.text == "n"):
                self.fail("expected the index variable 'n'")
            self.advance()
            self.expect(",")
            p0 = self.tok.start
            key = self.pattern()
            span = (p0, self.toks[self.i - 1].end)
            self.expect(")")
            if patterns.lookup(name, key) is None:
                raise UnknownPattern(f"no {name} family with members {key}", span)
            return patterns.build(name, key)
        if name == "empty":
            self.advance()
            return Empty()
        if name in getattr(self, "env", {}):
            self.advance()
            return self.env[name]
        self.fail("unknown name" if name not in _KEYWORDS else "expected a set")


def _single(iv: Interval) -> LCSet:
    return Empty() if iv.is_empty else Single(iv)


_KEYWORDS = {"let", "within", "union", "intersect", "Q", "T", "S", "empty", "d", "n", "inf"}


@dataclass(frozen=True)
class _Complement(LCSet):
    inner: LCSet
    span: tuple


def _has_complement(node) -> bool:
    return _first_complement(node) is not None


def _first_complement(node):
    if isinstance(node, _Complement):
        return node
    for attr in ("a", "b"):
        if hasattr(node, attr):
            hit = _first_complement(getattr(node, attr))
            if hit is not None:
                return hit
    return None


def _resolve_complements(node, amb: Interval):
    if isinstance(node, _Complement):
        return Diff(Single(amb), _resolve_complements(node.inner, amb))
    if isinstance(node, (Union, Intersect, Diff)):
        return type(node)(_resolve_complements(node.a, amb), _resolve_complements(node.b, amb))
    return node


_PREC = {"+": 1, "-": 1, "*": 2, "/": 2, "neg": 3, "^": 4}


def render_pattern(node, parent=0, right=False) -> str:
    """Canonical text of a pattern expression, minimal parentheses."""
    kind = node[0]
    if kind == "int":
        return str(node[1])
    if kind == "var":
        return node[1]
    if kind == "neg":
        s = "-" + render_pattern(node[1], _PREC["neg"])
        return f"({s})" if parent > _PREC["neg"] else s
    op, a, b = node
    if op == "^":
        base = render_pattern(a, 5)
        exp = render_pattern(b)
        if b[0] not in ("int", "var"):
            exp = f"({exp})"
        s = f"{base}^{exp}"
        return s
    p = _PREC[op]
    s = f"{render_pattern(a, p)}{op}{render_pattern(b, p, True)}"
    if parent > p or parent == p and right:
        return f"({s})"
    return s


def canonical_pattern(text: str) -> str:
    p = _Parser(text)
    key = p.pattern()
    p.expect_end()
    return key


# -- public API ------------------------------------------------------------------


def parse_number(text: str) -> LCNumber:
    p = _Parser(text)
    x = p.number()
    p.expect_end()
    return x


def parse_interval(text: str) -> Interval:
    p = _Parser(text)
    iv = p.interval()
    p.expect_end()
    return iv


def parse_set(text: str) -> LCSet:
    return _Parser(text).program()


def render_set(A: LCSet) -> str:
    """Fully parenthesised text that parses back to an equal AST."""
    if isinstance(A, Empty):
        return "empty"
    if isinstance(A, Single):
        return render_interval(A.interval)
    if isinstance(A, Dense):
        return f"{A.family}({render_interval(A.ambient)})"
    if isinstance(A, PointSeq):
        return A.label
    if isinstance(A, CountableUnion):
        return A.seq.label
    if isinstance(A, (CertifiedCountableUnion, CertifiedCountableIntersect)):
        return A.label
    if isinstance(A, Union):
        return f"({render_set(A.a)} | {render_set(A.b)})"
    if isinstance(A, Intersect):
        return f"({render_set(A.a)} & {render_set(A.b)})"
    if isinstance(A, Diff):
        return f"({render_set(A.a)} \\ {render_set(A.b)})"
    if isinstance(A, FiniteUnion):
        if not A.parts:
            return "empty"
        acc = render_set(A.parts[0])
        for p in A.parts[1:]:
            acc = f"({acc} | {render_set(p)})"
        return acc
    raise TypeError(f"cannot render {type(A).__name__}")


render = render_set
