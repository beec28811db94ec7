"""Arithmetic expressions over the field, and exact derivatives from them.

Evaluating ``f(x0 + d)`` gives the Taylor expansion of ``f`` at ``x0``: the
coefficient of ``d^n`` is ``f^(n)(x0) / n!``.

Grammar (``^`` takes an integer exponent, possibly negative)::

    expr   := term (("+" | "-") term)*
    term   := unary (("*" | "/") unary)*
    unary  := "-" unary | power
    power  := atom ["^" ["-"] INT]
    atom   := INT | "x" | "d" | "sqrt(" expr ")" | "root(" expr "," INT ")" | "(" expr ")"
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial

from levicivita.core import (
    DEFAULT_ORDER,
    LCNumber,
    coefficient,
    embed_real,
    ext,
    inverse,
    lam,
    make_dq,
    nth_root,
)
from levicivita.dsl import _Parser
from levicivita.errors import DivisionByZero, DSLSyntaxError


class _ExprParser(_Parser):
    def __init__(self, text, variables):
        super().__init__(text)
        self.variables = variables

    def parse(self):
        node = self.expr()
        self.expect_end()
        return node

    def expr(self):
        node = self.eterm()
        while self.at("+") or self.at("-"):
            op = self.advance().text
            node = (op, node, self.eterm())
        return node

    def eterm(self):
        node = self.eunary()
        while self.at("*") or self.at("/"):
            op = self.advance().text
            node = (op, node, self.eunary())
        return node

    def eunary(self):
        if self.at("-"):
            self.advance()
            return ("neg", self.eunary())
        return self.epower()

    def epower(self):
        base = self.eatom()
        if self.at("^"):
            self.advance()
            neg = False
            if self.at("-"):
                self.advance()
                neg = True
            k = self.integer()
            return ("pow", base, -k if neg else k)
        return base

    def eatom(self):
        t = self.tok
        if t.kind == "int":
            self.advance()
            return ("const", Fraction(int(t.text)))
        if t.kind == "name":
            if t.text in self.variables:
                self.advance()
                return ("var", t.text)
            if t.text in ("sqrt", "root"):
                self.advance()
                self.expect("(")
                arg = self.expr()
                n = 2
                if t.text == "root":
                    self.expect(",")
                    n = self.integer()
                    if n < 1:
                        raise DSLSyntaxError("root index must be positive", (t.start, self.tok.end))
                self.expect(")")
                return ("root", arg, n)
            self.fail("unknown name")
        if self.at("("):
            self.advance()
            node = self.expr()
            self.expect(")")
            return node
        self.fail("expected an expression")


def parse_expression(text: str, variables=("x",)):
    return _ExprParser(text, set(variables)).parse()


def evaluate(node, env: dict, K, finite_denominators=False) -> LCNumber:
    """Evaluate an expression AST; inverses and roots are kept to order K.

    With ``finite_denominators`` a divisor of positive valuation (one that
    vanishes at the expansion point) raises DivisionByZero.
    """
    kind = node[0]
    if kind == "const":
        return embed_real(node[1])
    if kind == "var":
        return env[node[1]]
    if kind == "neg":
        return -evaluate(node[1], env, K, finite_denominators)
    if kind == "pow":
        base = evaluate(node[1], env, K, finite_denominators)
        k = node[2]
        if k < 0:
            base = _invert(base, K, finite_denominators)
            k = -k
        return base**k
    if kind == "root":
        return nth_root(evaluate(node[1], env, K, finite_denominators), node[2], K)
    op, a, b = node
    x = evaluate(a, env, K, finite_denominators)
    y = evaluate(b, env, K, finite_denominators)
    if op == "+":
        return x + y
    if op == "-":
        return x - y
    if op == "*":
        return x * y
    return x * _invert(y, K, finite_denominators)


def _invert(y, K, finite_denominators):
    if finite_denominators and y.terms and lam(y) > 0:
        raise DivisionByZero("denominator vanishes at the expansion point")
    if finite_denominators and not y.terms:
        raise DivisionByZero("denominator vanishes at the expansion point")
    return inverse(y, K)


def eval_number_expression(text: str, K=DEFAULT_ORDER) -> LCNumber:
    """Evaluate an arithmetic expression in ``d`` to order K."""
    node = parse_expression(text, variables=("d",))
    return evaluate(node, {"d": make_dq(1)}, ext(K))


def derivative_demo(f, x0, n: int) -> Fraction:
    """``f^(n)(x0)`` computed as ``n! * f(x0 + d)[n]``.

    ``f`` is expression text in ``x`` (or an already parsed AST).
    """
    if n < 1:
        raise ValueError("derivative order must be positive")
    node = parse_expression(f) if isinstance(f, str) else f
    x = embed_real(Fraction(x0)) + make_dq(1)
    value = evaluate(node, {"x": x}, Fraction(n), finite_denominators=True)
    return factorial(n) * coefficient(value, n)
