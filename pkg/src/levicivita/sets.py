"""Symbolic representable subsets of the Levi-Civita line.

Every node is an immutable dataclass.  Nodes that wrap lazy callables compare
by label rather than by the callable, so two parses of the same text are
equal.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import ceil, floor, gcd
from typing import Callable, Optional

from levicivita.core import LCNumber, embed_real, render_number
from levicivita.intervals import Interval, IntervalSeq, render_interval
from levicivita.series import DecayCertificate


class LCSet:
    """Base class; supports ``|``, ``&`` and ``-`` as set operations."""

    def __or__(self, other):
        return Union(self, other)

    def __and__(self, other):
        return Intersect(self, other)

    def __sub__(self, other):
        return Diff(self, other)


@dataclass(frozen=True)
class Empty(LCSet):
    def __str__(self):
        return "empty"


@dataclass(frozen=True)
class Single(LCSet):
    interval: Interval

    def __str__(self):
        return render_interval(self.interval)


@dataclass(frozen=True)
class FiniteUnion(LCSet):
    parts: tuple

    def __post_init__(self):
        object.__setattr__(self, "parts", tuple(self.parts))

    def __str__(self):
        return "(" + " | ".join(str(p) for p in self.parts) + ")"


@dataclass(frozen=True)
class CountableUnion(LCSet):
    seq: IntervalSeq

    def __eq__(self, other):
        return isinstance(other, CountableUnion) and self.seq.label == other.seq.label

    def __hash__(self):
        return hash(("CountableUnion", self.seq.label))

    def __str__(self):
        return self.seq.label


@dataclass(frozen=True, eq=False)
class PointSeq(LCSet):
    """A countable point set enumerated by ``at(n)``, ``n >= 1``."""

    at: Callable[[int], LCNumber]
    label: str = ""
    hull: Optional[Interval] = None

    def __eq__(self, other):
        return isinstance(other, PointSeq) and self.label == other.label

    def __hash__(self):
        return hash(("PointSeq", self.label))

    def __str__(self):
        return self.label


@dataclass(frozen=True)
class Dense(LCSet):
    """``T`` (finite-support elements) or ``S`` (the rest) inside an interval."""

    family: str
    ambient: Interval

    def __post_init__(self):
        if self.family not in ("T", "S"):
            raise ValueError(f"unknown dense family {self.family!r}")
        if not self.ambient.bounded:
            raise ValueError("dense families need a bounded ambient interval")

    def __str__(self):
        return f"{self.family}({render_interval(self.ambient)})"


@dataclass(frozen=True)
class Intersect(LCSet):
    a: LCSet
    b: LCSet

    def __str__(self):
        return f"({self.a} & {self.b})"


@dataclass(frozen=True)
class Union(LCSet):
    a: LCSet
    b: LCSet

    def __str__(self):
        return f"({self.a} | {self.b})"


@dataclass(frozen=True)
class Diff(LCSet):
    a: LCSet
    b: LCSet

    def __str__(self):
        return f"({self.a} \\ {self.b})"


@dataclass(frozen=True, eq=False)
class _Family(LCSet):
    """A countable family of sets ``n -> at(n)``, ``n >= 1``.

    ``decay`` certifies the measure increments of the partial unions (or
    intersections).  ``closed_form``, when given, is a representable set
    equal to the full union (or intersection).
    """

    at: Callable[[int], LCSet]
    decay: Optional[DecayCertificate] = None
    label: str = ""
    closed_form: Optional[LCSet] = None

    def __eq__(self, other):
        return type(self) is type(other) and self.label == other.label

    def __hash__(self):
        return hash((type(self).__name__, self.label))

    def __str__(self):
        return self.label

    def partial(self, n: int) -> LCSet:
        raise NotImplementedError


class CertifiedCountableUnion(_Family):
    def partial(self, n):
        acc = self.at(1)
        for i in range(2, n + 1):
            acc = Union(acc, self.at(i))
        return acc


class CertifiedCountableIntersect(_Family):
    def partial(self, n):
        acc = self.at(1)
        for i in range(2, n + 1):
            acc = Intersect(acc, self.at(i))
        return acc


def children(A: LCSet):
    if isinstance(A, FiniteUnion):
        return A.parts
    if isinstance(A, (Intersect, Union, Diff)):
        return (A.a, A.b)
    return ()


def walk(A: LCSet):
    """Pre-order traversal of the AST (family members are not expanded)."""
    stack = [A]
    while stack:
        node = stack.pop()
        yield node
        stack.extend(reversed(children(node)))


# -- point sets of rationals -----------------------------------------------------


def _real_value(x: LCNumber) -> Fraction:
    if not x.is_exact or any(e != 0 for e, _ in x.terms):
        raise ValueError(f"{render_number(x)} is not an embedded rational")
    return x.terms[0][1] if x.terms else Fraction(0)


class _RationalEnumeration:
    """Rationals of an interval ordered by denominator, then numerator."""

    def __init__(self, iv: Interval):
        self.iv = iv
        self.lo = _real_value(iv.lo)
        self.hi = _real_value(iv.hi)
        self.cache = []
        self.q = 0

    def _grow(self):
        self.q += 1
        q = self.q
        for p in range(ceil(self.lo * q), floor(self.hi * q) + 1):
            if gcd(p, q) != 1:
                continue
            r = Fraction(p, q)
            if r == self.lo and not self.iv.lo_closed or r == self.hi and not self.iv.hi_closed:
                continue
            self.cache.append(embed_real(r))

    def __call__(self, n: int) -> LCNumber:
        if self.lo == self.hi:
            if self.iv.lo_closed and self.iv.hi_closed:
                return embed_real(self.lo)
            raise ValueError("no rationals in an empty interval")
        while len(self.cache) < n:
            self._grow()
        return self.cache[n - 1]


def rationals_in(iv: Interval) -> PointSeq:
    """``Q(I)``: the embedded rationals of a bounded real-ended interval."""
    if iv.is_empty or not iv.bounded:
        raise ValueError("Q(I) needs a nonempty bounded interval")
    return PointSeq(_RationalEnumeration(iv), f"Q({render_interval(iv)})", iv)
