"""Intervals of the Levi-Civita line and lazy countable families of them.

Endpoints are exact :class:`LCNumber` values or the symbolic ends
``NEG_INF`` / ``POS_INF``.  Boundary kinds are tracked for set identity but
never affect length.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

from levicivita.core import (
    INF,
    ZERO,
    IndistinguishableAtOrder,
    LCNumber,
    Ordering,
    coerce,
    compare,
    lam,
    render_number,
)
from levicivita.errors import IndeterminateOverlap, OverlapDetected, PrecisionExhausted, UnboundedLength
from levicivita.series import DecayCertificate, TermGenerator, sum_series

DISJOINT_SAMPLES = 32


class _End:
    """Symbolic unbounded endpoint."""

    def __init__(self, sgn):
        self.sign = sgn

    def __repr__(self):
        return "+inf" if self.sign > 0 else "-inf"

    def __reduce__(self):
        return (_end, (self.sign,))


def _end(sgn):
    return POS_INF if sgn > 0 else NEG_INF


NEG_INF = _End(-1)
POS_INF = _End(1)


def cmp_point(a, b) -> int:
    """Three-way comparison of endpoints (numbers or infinite ends)."""
    if isinstance(a, _End) or isinstance(b, _End):
        sa = a.sign if isinstance(a, _End) else 0
        sb = b.sign if isinstance(b, _End) else 0
        return (sa > sb) - (sa < sb)
    if a.order == INF and b.order == INF:
        return _cmp_exact(a.terms, b.terms)
    r = compare(a, b)
    if isinstance(r, IndistinguishableAtOrder):
        raise IndeterminateOverlap(f"endpoints {a} and {b} agree up to order {r.order}")
    return {Ordering.LESS: -1, Ordering.EQUAL: 0, Ordering.GREATER: 1}[r]


def _cmp_exact(xs, ys) -> int:
    # sign of x - y from the first exponent where the term lists differ
    i = j = 0
    nx, ny = len(xs), len(ys)
    while i < nx or j < ny:
        if j >= ny or i < nx and xs[i][0] < ys[j][0]:
            return 1 if xs[i][1] > 0 else -1
        if i >= nx or ys[j][0] < xs[i][0]:
            return -1 if ys[j][1] > 0 else 1
        cx, cy = xs[i][1], ys[j][1]
        if cx != cy:
            return 1 if cx > cy else -1
        i += 1
        j += 1
    return 0


def point_key(p):
    """Sort key ordering exact points (and infinite ends) like cmp_point.

    Term ``(e, c)`` maps to ``(1, -e, c)`` when c > 0 and ``(-1, e, c)``
    when c < 0, and a trailing ``(0,)`` stands for the zero coefficients
    that follow; tuple order then agrees with the order of the field.
    """
    if isinstance(p, _End):
        return ((2 * p.sign,),)
    if p.order != INF:
        raise IndeterminateOverlap(f"no exact sort key for truncated {p}")
    return tuple((1, -e, c) if c > 0 else (-1, e, c) for e, c in p.terms) + ((0,),)


def _pt(v):
    if isinstance(v, _End):
        return v
    v = coerce(v)
    if v is NotImplemented:
        raise TypeError("interval endpoints must be numbers")
    return v


@dataclass(frozen=True)
class Interval:
    lo: object
    hi: object
    lo_closed: bool = True
    hi_closed: bool = True

    def __post_init__(self):
        lo, hi = _pt(self.lo), _pt(self.hi)
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)
        if isinstance(lo, LCNumber) and not lo.is_exact or isinstance(hi, LCNumber) and not hi.is_exact:
            raise ValueError("interval endpoints must be exact")
        if lo is POS_INF or hi is NEG_INF:
            raise ValueError("interval ends reversed")
        if lo is NEG_INF and self.lo_closed or hi is POS_INF and self.hi_closed:
            raise ValueError("infinite ends must be open")
        c = cmp_point(lo, hi)
        if c > 0:
            raise ValueError("lower end exceeds upper end; use Interval.make")
        if c == 0 and not (self.lo_closed and self.hi_closed) and not _is_canonical_empty(self):
            raise ValueError("degenerate interval must be closed; use Interval.make")

    @staticmethod
    def make(lo, hi, lo_closed=True, hi_closed=True) -> "Interval":
        """Build an interval, normalizing anything without points to EMPTY."""
        lo, hi = _pt(lo), _pt(hi)
        c = cmp_point(lo, hi)
        if c > 0 or c == 0 and not (lo_closed and hi_closed):
            return EMPTY
        return Interval(lo, hi, lo_closed, hi_closed)

    @staticmethod
    def point(x) -> "Interval":
        return Interval(x, x, True, True)

    @property
    def is_empty(self) -> bool:
        return self is EMPTY or _is_canonical_empty(self)

    @property
    def bounded(self) -> bool:
        return not isinstance(self.lo, _End) and not isinstance(self.hi, _End)

    def contains(self, x) -> bool:
        if self.is_empty:
            return False
        x = _pt(x)
        a, b = cmp_point(self.lo, x), cmp_point(x, self.hi)
        return (a < 0 or a == 0 and self.lo_closed) and (b < 0 or b == 0 and self.hi_closed)

    def __str__(self):
        return render_interval(self)


def _is_canonical_empty(iv) -> bool:
    return (
        not iv.lo_closed
        and not iv.hi_closed
        and isinstance(iv.lo, LCNumber)
        and iv.lo.is_zero
        and isinstance(iv.hi, LCNumber)
        and iv.hi.is_zero
    )


EMPTY = Interval(ZERO, ZERO, False, False)


def render_point(p) -> str:
    return repr(p) if isinstance(p, _End) else render_number(p)


def render_interval(iv: Interval) -> str:
    if iv.is_empty:
        return "empty"
    left = "[" if iv.lo_closed else "("
    right = "]" if iv.hi_closed else ")"
    return f"{left}{render_point(iv.lo)}, {render_point(iv.hi)}{right}"


def length(iv: Interval) -> LCNumber:
    if iv.is_empty:
        return ZERO
    if not iv.bounded:
        raise UnboundedLength(f"{render_interval(iv)} has no length")
    return iv.hi - iv.lo


def _max_lo(a, ac, b, bc):
    c = cmp_point(a, b)
    if c == 0:
        return a, ac and bc
    return (a, ac) if c > 0 else (b, bc)


def _min_hi(a, ac, b, bc):
    c = cmp_point(a, b)
    if c == 0:
        return a, ac and bc
    return (a, ac) if c < 0 else (b, bc)


def intersect(I: Interval, J: Interval) -> Interval:
    if I.is_empty or J.is_empty:
        return EMPTY
    lo, lc = _max_lo(I.lo, I.lo_closed, J.lo, J.lo_closed)
    hi, hc = _min_hi(I.hi, I.hi_closed, J.hi, J.hi_closed)
    return Interval.make(lo, hi, lc, hc)


def disjoint(I: Interval, J: Interval) -> bool:
    return intersect(I, J).is_empty


def subset(I: Interval, J: Interval) -> bool:
    return I.is_empty or intersect(I, J) == I


def complement_within(I: Interval, J: Interval) -> list:
    """``J \\ I`` as at most two disjoint intervals."""
    if J.is_empty:
        return []
    K = intersect(I, J)
    if K.is_empty:
        return [J]
    pieces = [
        Interval.make(J.lo, K.lo, J.lo_closed, not K.lo_closed),
        Interval.make(K.hi, J.hi, not K.hi_closed, J.hi_closed),
    ]
    return [p for p in pieces if not p.is_empty]


def subtract_all(J: Interval, holes) -> list:
    """``J`` minus a finite union of intervals, as disjoint pieces in order."""
    pieces = [] if J.is_empty else [J]
    for h in holes:
        nxt = []
        for p in pieces:
            nxt.extend(complement_within(h, p))
        pieces = nxt
    return sort_intervals(pieces)


def sort_intervals(ivs) -> list:
    def key(iv):
        return (point_key(iv.lo), not iv.lo_closed)

    return sorted((iv for iv in ivs if not iv.is_empty), key=key)


def check_pairwise_disjoint(ivs) -> None:
    ivs = list(ivs)
    for i in range(len(ivs)):
        for j in range(i + 1, len(ivs)):
            if not disjoint(ivs[i], ivs[j]):
                raise OverlapDetected(f"{render_interval(ivs[i])} meets {render_interval(ivs[j])}")


def complement_of_finite_union(ivs) -> list:
    """Complement in the whole line of a finite disjoint union."""
    ivs = [iv for iv in ivs if not iv.is_empty]
    check_pairwise_disjoint(ivs)
    ivs = sort_intervals(ivs)
    out = []
    lo, lo_closed = NEG_INF, False
    for iv in ivs:
        out.append(Interval.make(lo, iv.lo, lo_closed, not iv.lo_closed))
        lo, lo_closed = iv.hi, not iv.hi_closed
    out.append(Interval.make(lo, POS_INF, lo_closed, False))
    return [p for p in out if not p.is_empty]


def hull(ivs) -> Interval:
    ivs = [iv for iv in ivs if not iv.is_empty]
    if not ivs:
        return EMPTY
    lo, lc = ivs[0].lo, ivs[0].lo_closed
    hi, hc = ivs[0].hi, ivs[0].hi_closed
    for iv in ivs[1:]:
        c = cmp_point(iv.lo, lo)
        if c < 0 or c == 0 and iv.lo_closed:
            lo, lc = iv.lo, iv.lo_closed
        c = cmp_point(iv.hi, hi)
        if c > 0 or c == 0 and iv.hi_closed:
            hi, hc = iv.hi, iv.hi_closed
    return Interval(lo, hi, lc, hc)


@dataclass(frozen=True)
class IntervalSeq:
    """A lazy family ``n -> at(n)``, ``n >= 1``, of intervals.

    ``decay`` certifies ``lam(length(at(n))) > k`` for ``n > N(k)``.  A family
    without a certificate may carry ``valuation_bound``: a witness that every
    length has valuation at most that bound, so the lengths do not tend to 0.
    ``hull`` is a bounded interval containing every member, when known.
    """

    at: Callable[[int], Interval] = field(compare=False)
    decay: Optional[DecayCertificate] = None
    pairwise_disjoint: bool = True
    label: str = ""
    valuation_bound: Optional[Fraction] = None
    hull: Optional[Interval] = None
    name: str = ""

    def threshold(self, k) -> int:
        if self.decay is None:
            raise PrecisionExhausted(f"family {self.label or '?'} has no decay certificate")
        return self.decay.threshold(k)

    def lengths(self) -> TermGenerator:
        at = self.at
        return TermGenerator(lambda n: length(at(n)), self.decay, f"l({self.label})")

    def total_length(self, K) -> LCNumber:
        return sum_series(self.lengths(), K)

    def prefix(self, n: int) -> list:
        return [self.at(i) for i in range(1, n + 1)]

    def check_disjoint(self, samples: int = DISJOINT_SAMPLES, extra=()) -> None:
        """Check all pairs among the first ``samples`` members plus extra indices."""
        if not self.pairwise_disjoint:
            raise OverlapDetected(f"family {self.label or '?'} is not asserted disjoint")
        idx = list(range(1, samples + 1)) + [i for i in extra if i > samples]
        members = [(i, self.at(i)) for i in idx]
        for a in range(len(members)):
            for b in range(a + 1, len(members)):
                if not disjoint(members[a][1], members[b][1]):
                    raise OverlapDetected(
                        f"members {members[a][0]} and {members[b][0]} of {self.label or 'family'} overlap"
                    )

    @staticmethod
    def finite(ivs, label="") -> "IntervalSeq":
        ivs = tuple(iv for iv in ivs if not iv.is_empty)
        n0 = len(ivs)

        def at(n):
            return ivs[n - 1] if n <= n0 else EMPTY

        return IntervalSeq(
            at,
            DecayCertificate(lambda k: n0, f"finite({n0})"),
            True,
            label or "{" + ", ".join(render_interval(iv) for iv in ivs) + "}",
            None,
            hull(ivs) if ivs else None,
        )

    def followed_by(self, head: list, skip: int) -> "IntervalSeq":
        """The family ``head + [at(skip+1), at(skip+2), ...]``."""
        head = tuple(head)
        L = len(head)
        at, dec = self.at, self.decay

        def new_at(n):
            return head[n - 1] if n <= L else at(skip + n - L)

        cert = None
        if dec is not None:
            cert = DecayCertificate(lambda k: L + max(dec.threshold(k) - skip, 0), f"{L}+tail")
        return IntervalSeq(new_at, cert, self.pairwise_disjoint, f"{self.label}[{skip}:]+{L}")

    @property
    def display(self) -> str:
        return f"{self.name} = {self.label}" if self.name else self.label


def interleave(parts, label="") -> IntervalSeq:
    """Merge finitely many certified families into one, round robin."""
    parts = tuple(parts)
    m = len(parts)

    def at(n):
        q, r = divmod(n - 1, m)
        return parts[r].at(q + 1)

    def threshold(k):
        return m * max(p.threshold(k) for p in parts)

    return IntervalSeq(at, DecayCertificate(threshold, "interleave"), all(p.pairwise_disjoint for p in parts), label)


def refine(outer: IntervalSeq, inner: IntervalSeq, eps: LCNumber, K) -> tuple:
    """Refine an outer cover against an inner one.

    Keeps the pieces ``J_m & I_n`` for ``m <= M`` and ``n <= N_m``, where
    ``M`` and ``N_m`` come from the decay certificates so that the dropped
    tails are below ``d^m * eps``.  The residue is the rest of each kept
    outer interval plus the outer tail.  Returns ``(S, R)`` with ``S`` a list
    and ``R`` an IntervalSeq; raises PrecisionExhausted unless the residue
    total is certified below ``eps`` at order K.
    """
    le = lam(eps)
    M = outer.threshold(le + 1)
    kept, residue = [], []
    for m in range(1, M + 1):
        J = outer.at(m)
        if J.is_empty:
            continue
        Nm = inner.threshold(m + le)
        pieces = [intersect(J, inner.at(n)) for n in range(1, Nm + 1)]
        pieces = [p for p in pieces if not p.is_empty]
        kept.extend(pieces)
        residue.extend(subtract_all(J, pieces))
    R = outer.followed_by(residue, M)
    total = R.total_length(K)
    r = compare(total, eps)
    if r is not Ordering.LESS:
        raise PrecisionExhausted(f"residue {total} not certified below {eps} at order {K}")
    return kept, R
