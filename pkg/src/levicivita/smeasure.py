"""S-measure from squeezing interval covers, and the interval decomposition.

A set is S-measurable when for every ``k`` there are disjoint interval
families ``inner(k)`` inside it and ``outer(k)`` around it whose total
lengths differ by at most ``d^k``; the S-measure is the common limit.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

from levicivita.core import DEFAULT_ORDER, ZERO, LCNumber, cap, ext, make_dq, render_number
from levicivita.errors import GapCertificateViolation, IdentityViolation, NotSMeasurable
from levicivita.intervals import (
    EMPTY,
    Interval,
    IntervalSeq,
    interleave,
    length,
    refine,
    subtract_all,
)
from levicivita.measure import CellAnalysis, Value, equal_at
from levicivita.series import (
    DEFAULT_SAMPLES,
    DecayCertificate,
    TermGenerator,
    limit_sequence,
)
from levicivita.sets import (
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
    _Family,
    walk,
)


@dataclass(frozen=True)
class CoverSequence:
    inner: Callable[[int], IntervalSeq] = field(compare=False)
    outer: Callable[[int], IntervalSeq] = field(compare=False)
    label: str = ""


def trivial_covers(ivs, label="") -> CoverSequence:
    """Inner and outer cover both equal to a fixed finite disjoint family."""
    seq = IntervalSeq.finite(ivs, label)
    return CoverSequence(lambda k: seq, lambda k: seq, label or seq.label)


def _real_point(x: LCNumber) -> bool:
    return x.is_exact and all(e == 0 for e, _ in x.terms)


def point_covers(P: PointSeq) -> CoverSequence:
    """Empty inner covers; point n sits in an interval of length d^(n+k).

    The points must be distinct real numbers, which keeps the infinitesimal
    intervals disjoint.
    """
    half = Fraction(1, 2)
    at = P.at

    def outer(k):
        def cover(n):
            p = at(n)
            if not _real_point(p):
                raise NotSMeasurable(f"point {render_number(p)} of {P.label} is not real")
            r = half * make_dq(n + k)
            return Interval(p - r, p + r)

        cert = DecayCertificate(lambda j, k=k: max(int((j - k) // 1), 0), f"d^(n+{k})")
        return IntervalSeq(cover, cert, True, f"cover_{k}({P.label})")

    empty = IntervalSeq.finite([], "empty")
    return CoverSequence(lambda k: empty, outer, f"points({P.label})")


def _point_in(A: LCSet, x) -> bool:
    """Membership of x in an interval-only expression."""
    if isinstance(A, Empty):
        return False
    if isinstance(A, Single):
        return A.interval.contains(x)
    if isinstance(A, FiniteUnion):
        return any(_point_in(p, x) for p in A.parts)
    if isinstance(A, Union):
        return _point_in(A.a, x) or _point_in(A.b, x)
    if isinstance(A, Intersect):
        return _point_in(A.a, x) and _point_in(A.b, x)
    if isinstance(A, Diff):
        return _point_in(A.a, x) and not _point_in(A.b, x)
    raise TypeError(type(A).__name__)


def _interval_form(A: LCSet):
    """A as an ordered list of disjoint intervals, when A is built only
    from intervals with ``|``, ``&`` and ``\\``; None otherwise."""
    for node in walk(A):
        if not isinstance(node, (Single, Empty, FiniteUnion, Union, Intersect, Diff)):
            return None
    ca = CellAnalysis(A)
    out = []
    cur = None  # (lo, lo_closed) of the run being built

    def close(hi, hi_closed):
        nonlocal cur
        if cur is not None:
            iv = Interval.make(cur[0], hi, cur[1], hi_closed)
            if not iv.is_empty:
                out.append(iv)
        cur = None

    for i, kind in ca.cells():
        lo, hi = ca.cell_bounds(i)
        if kind == "full":
            if not isinstance(lo, LCNumber) or not isinstance(hi, LCNumber):
                raise NotSMeasurable("set is unbounded")
            if cur is None:
                cur = (lo, False)
        elif cur is not None:
            # the run survived the previous break, so that break is inside
            close(lo, True)
        if i < len(ca.breaks):
            b = ca.breaks[i]
            inside = _point_in(A, b)
            if inside and cur is None:
                cur = (b, True)
            elif not inside and cur is not None:
                close(b, False)
    return out


def derive_covers(A: LCSet) -> CoverSequence:
    """Cover sequence for the S-measurable shapes; NotSMeasurable otherwise."""
    form = _interval_form(A)
    if form is not None:
        return trivial_covers(form)
    if isinstance(A, PointSeq):
        return point_covers(A)
    if isinstance(A, CountableUnion):
        s = A.seq
        if s.decay is None:
            raise NotSMeasurable(f"{s.label}: lengths carry no decay certificate")
        return CoverSequence(lambda k: s, lambda k: s, s.label)
    if isinstance(A, (Union, FiniteUnion)):
        parts = A.parts if isinstance(A, FiniteUnion) else (A.a, A.b)
        covers = [derive_covers(p) for p in parts]
        m = len(covers)

        def inner(k):
            seq = interleave([c.inner(k + m) for c in covers], f"inner_{k}")
            seq.check_disjoint(8)
            return seq

        def outer(k):
            return interleave([c.outer(k + m) for c in covers], f"outer_{k}")

        return CoverSequence(inner, outer, " | ".join(c.label for c in covers))
    if isinstance(A, Dense):
        raise NotSMeasurable(f"{A}: dense family has no inner interval cover")
    if isinstance(A, Diff) and any(isinstance(n, PointSeq) for n in walk(A.b)):
        raise NotSMeasurable(f"{A}: removing a dense point set leaves no inner interval cover")
    if isinstance(A, _Family):
        raise NotSMeasurable(f"{A.label}: no cover construction for families of sets")
    raise NotSMeasurable(f"no cover construction for {A}")


def _gap(covers: CoverSequence, k, K) -> LCNumber:
    return covers.outer(k).total_length(K) - covers.inner(k).total_length(K)


def check_gap(covers: CoverSequence, k, K) -> LCNumber:
    """The gap at level k, raising GapCertificateViolation if above d^k."""
    g = _gap(covers, k, K)
    if k <= K:
        slack = cap(make_dq(k) - g, K)
        if slack.terms and slack.terms[0][1] < 0:
            raise GapCertificateViolation(f"gap {render_number(g)} exceeds d^{k} at level {k}")
    return g


def s_measure(A: LCSet, K=DEFAULT_ORDER, covers: Optional[CoverSequence] = None, samples=DEFAULT_SAMPLES):
    """S-measure as the limit of inner cover sums, known to order K."""
    K = ext(K)
    covers = covers or derive_covers(A)
    for k in range(1, min(int(K), samples) + 1):
        check_gap(covers, k, K)

    def inner_total(k):
        return covers.inner(k).total_length(K)

    gen = TermGenerator(inner_total, DecayCertificate(lambda j: max(int(j // 1), 0), "gap <= d^k"))
    value = limit_sequence(gen, K)
    return Value(value, K, (f"inner covers {covers.label}: limit of sums",))


@dataclass(frozen=True)
class Decomposition:
    intervals: IntervalSeq
    null_part: LCSet
    residual: Callable[[int], IntervalSeq] = field(compare=False)
    interval_sum: LCNumber = None

    def residual_sum(self, k, K=DEFAULT_ORDER) -> LCNumber:
        return self.residual(k).total_length(K)


class _Stages:
    """Pieces kept at each refinement stage, computed lazily."""

    def __init__(self, covers, K):
        self.covers = covers
        self.K = K
        self.new = []  # new[k-1]: pieces first kept at stage k
        self.residue = {}
        self.seen = []

    def stage(self, k):
        while len(self.new) < k:
            j = len(self.new) + 1
            kept, R = refine(self.covers.outer(j + 1), self.covers.inner(j + 1), make_dq(j), max(self.K, j + 2))
            fresh = []
            for piece in kept:
                fresh.extend(subtract_all(piece, self.seen))
            self.seen.extend(fresh)
            self.new.append(fresh)
            self.residue[j] = R
        return self.new[k - 1]

    def count_through(self, k):
        return sum(len(self.stage(j)) for j in range(1, k + 1))

    def piece(self, n):
        j = 1
        while True:
            st = self.stage(j)
            if n <= len(st):
                return st[n - 1]
            n -= len(st)
            j += 1
            # finite decompositions stop producing pieces
            if j > 2 * self.K + 16 and not any(self.new[-8:]):
                return EMPTY


def decompose(A: LCSet, K=DEFAULT_ORDER, covers: Optional[CoverSequence] = None) -> Decomposition:
    """Disjoint intervals plus a null remainder, following the refinement proof.

    At stage k the outer and inner covers of level k+1 are refined against
    each other with tolerance d^k; the pieces not already kept join the
    interval family and the residue is a cover of what is left, with total
    length below d^k.
    """
    K = ext(K)
    covers = covers or derive_covers(A)
    st = _Stages(covers, K)

    def at(n):
        return st.piece(n)

    # pieces from stage j >= 2 have length below d^(j-1)
    cert = DecayCertificate(lambda k: st.count_through(max(int(k // 1), 0) + 1), "stage count")
    seq = IntervalSeq(at, cert, True, "intervals")
    # the certificate holds by construction, so sum the certified prefix directly
    total = ZERO
    for n in range(1, cert.threshold(K) + 1):
        total = total + length(seq.at(n))
    total = cap(total, K)
    expected = s_measure(A, K, covers).value
    if not equal_at(total, expected, K):
        raise IdentityViolation(f"interval sum {render_number(total)} != S-measure {render_number(expected)}")

    def residual(k):
        st.stage(k)
        return st.residue[k]

    return Decomposition(seq, _null_part(A, seq), residual, total)


def _null_part(A: LCSet, seq: IntervalSeq) -> LCSet:
    if _interval_form(A) is not None:
        return Empty()
    parts = list(A.parts) if isinstance(A, FiniteUnion) else [A]
    while any(isinstance(p, Union) for p in parts):
        p = next(p for p in parts if isinstance(p, Union))
        i = parts.index(p)
        parts[i:i + 1] = [p.a, p.b]
    points = [p for p in parts if isinstance(p, PointSeq)]
    rest = [p for p in parts if not isinstance(p, PointSeq)]
    if all(isinstance(p, CountableUnion) or _interval_form(p) is not None for p in rest):
        if not points:
            return Empty()
        acc = points[0]
        for p in points[1:]:
            acc = Union(acc, p)
        return Diff(acc, CountableUnion(seq))
    return Diff(A, CountableUnion(seq))
