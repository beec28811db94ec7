"""Library of countable families addressable from the DSL.

Each entry is keyed by the canonical text of its member pattern in ``n``
(see :func:`levicivita.dsl.canonical_pattern`) and builds the family along
with the certificate that makes it usable.  Arbitrary expressions in ``n``
are not accepted: a certificate has to be constructed together with the
family, and that needs the hand analysis recorded here.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from fractions import Fraction
from typing import Callable

from levicivita.core import ONE, ZERO, embed_real, make_dq
from levicivita.intervals import Interval, IntervalSeq
from levicivita.series import constant_certificate, geometric_certificate
from levicivita.sets import (
    CertifiedCountableIntersect,
    CertifiedCountableUnion,
    CountableUnion,
    Empty,
    Single,
)


@dataclass(frozen=True)
class Pattern:
    key: str  # canonical member text
    kinds: tuple  # which of "union" / "intersect" accept it
    build: Callable  # (kind, label) -> LCSet
    note: str = ""


def _floor_cert(label):
    return geometric_certificate(1, 0, label)


def _shifted_points(anchor, scale):
    """Members [anchor + 1/n, anchor + 1/n + scale*d^n]."""
    anchor, scale = Fraction(anchor), Fraction(scale)

    # members are immutable and approximants rebuild long prefixes, so keep them
    @lru_cache(maxsize=None)
    def at(n):
        lo = embed_real(anchor + Fraction(1, n))
        return Interval(lo, lo + scale * make_dq(n))

    return at


def geometric_family(anchor=0, scale=1, label=None) -> IntervalSeq:
    """Disjoint intervals of length ``scale*d^n`` at the reals ``anchor + 1/n``."""
    anchor, scale = Fraction(anchor), Fraction(scale)
    label = label or f"geo({anchor}, {scale})"
    hull = Interval(embed_real(anchor), embed_real(anchor + 1) + scale * make_dq(1))
    return IntervalSeq(_shifted_points(anchor, scale), _floor_cert(label), True, label, None, hull)


def _reciprocal_geo(kind, label):
    seq = geometric_family(0, 1, label)
    return CountableUnion(seq)


def _integer_geo(kind, label):
    @lru_cache(maxsize=None)
    def at(n):
        lo = embed_real(n)
        return Interval(lo, lo + make_dq(n))

    return CountableUnion(IntervalSeq(at, _floor_cert(label), True, label))


def _c_family(kind, label):
    # C_n = (d^((n-1)/n), 2 d^((n-1)/n)) for n >= 2; member m of the family is C_{m+1}
    def at(m):
        n = m + 1
        x = make_dq(Fraction(n - 1, n))
        return Interval(x, 2 * x, False, False)

    hull = Interval(ZERO, 2 * make_dq(Fraction(1, 2)))
    seq = IntervalSeq(at, None, True, label, Fraction(1), hull, "C")
    return CountableUnion(seq)


def _b_family(kind, label):
    # B_n = [0, 1 - 1/n] | [1 - d^(1/n), 1]; no limit of measures exists
    def at(n):
        left = Single(Interval(ZERO, embed_real(1 - Fraction(1, n))))
        right = Single(Interval(ONE - make_dq(Fraction(1, n)), ONE))
        return left | right

    return CertifiedCountableUnion(at, None, label, Single(Interval(ZERO, ONE)))


def _shrinking_window(kind, label):
    # (d^(1/n), 1/n): the intersection is empty but its measures 1/N - d^(1/N)
    # have no limit; every member lies inside the first, so the union is (d, 1)
    def at(n):
        return Single(Interval(make_dq(Fraction(1, n)), embed_real(Fraction(1, n)), False, False))

    if kind == "union":
        return CertifiedCountableUnion(at, constant_certificate(1, label), label, at(1))
    return CertifiedCountableIntersect(at, None, label, Empty())


def _decreasing_to_unit(kind, label):
    # [0, 1 + d^n]: measures 1 + d^N, differences of valuation N
    def at(n):
        return Single(Interval(ZERO, ONE + make_dq(n)))

    return CertifiedCountableIntersect(at, _floor_cert(label), label, Single(Interval(ZERO, ONE)))


def _nested_nulls(kind, label):
    # [0, d^n]: nested, union [0, d]; the partial unions are all [0, d]
    def at(n):
        return Single(Interval(ZERO, make_dq(n)))

    if kind == "union":
        return CertifiedCountableUnion(at, constant_certificate(1, label), label, Single(Interval(ZERO, make_dq(1))))
    # the intersection is the point 0
    return CertifiedCountableIntersect(at, _floor_cert(label), label, Single(Interval(ZERO, ZERO)))


PATTERNS = {
    p.key: p
    for p in [
        Pattern("[1/n, 1/n+d^n]", ("union",), _reciprocal_geo, "disjoint, lengths d^n"),
        Pattern("[n, n+d^n]", ("union",), _integer_geo, "disjoint, lengths d^n, unbounded"),
        Pattern("(d^((n-1)/n), 2*d^((n-1)/n))", ("union",), _c_family, "the set C, n >= 2"),
        Pattern("[0, 1-1/n] ++ [1-d^(1/n), 1]", ("union",), _b_family, "no measure limit"),
        Pattern("(d^(1/n), 1/n)", ("union", "intersect"), _shrinking_window, "no measure limit"),
        Pattern("[0, 1+d^n]", ("intersect",), _decreasing_to_unit, "measures 1 + d^N"),
        Pattern("[0, d^n]", ("union", "intersect"), _nested_nulls, "nested, lengths d^n"),
    ]
}


def lookup(kind: str, key: str):
    """The pattern entry for ``kind(n, key)``, or None."""
    p = PATTERNS.get(key)
    if p is None or kind not in p.kinds:
        return None
    return p


def build(kind: str, key: str):
    p = lookup(kind, key)
    if p is None:
        raise KeyError(key)
    return p.build(kind, f"{kind}(n, {key})")
