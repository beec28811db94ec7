"""Outer measure, L-measurability and the measure identities.

Evaluation works modulo null sets on a finite partition of the line.  The
finite endpoints of every interval, dense ambient and non-measurable hull in
the expression cut the line into open cells (the cut points themselves are
null).  Inside one cell each primitive is all-or-nothing, except that dense
families split the cell into its ``T`` and ``S`` parts and each
non-measurable family ``X_j`` splits it by membership in ``X_j``.  Those
pieces are the *atoms* of the cell, and the content of any expression in a
cell is a bitmask over atoms.

A cell whose content is every atom contributes its length; a cell whose
content contains all ``T`` atoms or all ``S`` atoms contains a dense subset
and also contributes its length; content that is exactly ``X_j`` over the
hull of ``X_j`` is not outer measurable.  Anything else is undecided.

Countable families are handled by finite approximants: the expression with
each family cut to its first ``N`` members is evaluated exactly, and the
limit over ``N`` is taken with the family's decay certificate.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from levicivita.core import (
    DEFAULT_ORDER,
    INF,
    ZERO,
    LCNumber,
    Ordering,
    cap,
    compare,
    ext,
    render_number,
)
from levicivita.errors import (
    CertificateViolation,
    IdentityViolation,
    MissingCertificate,
    NotEvaluable,
)
from levicivita.intervals import NEG_INF, POS_INF, Interval, cmp_point, point_key, render_interval
from levicivita.series import (
    DecayCertificate,
    TermGenerator,
    first_cauchy_failure,
    limit_sequence,
    validate_decay,
)
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
    _Family,
    walk,
)

# -- results ---------------------------------------------------------------------


@dataclass(frozen=True)
class Value:
    value: LCNumber
    order: object
    trace: tuple = ()

    def render(self):
        return f"measure = {render_number(self.value)} (order {_fmt(self.order)})"


@dataclass(frozen=True)
class NotOuterMeasurable:
    witness: str
    index: Optional[int] = None
    trace: tuple = ()

    def render(self):
        return f"NOT OUTER MEASURABLE: {self.witness}"


@dataclass(frozen=True)
class Undecided:
    reason: str
    trace: tuple = ()

    def render(self):
        return f"UNDECIDED: {self.reason}"


MeasureResult = (Value, NotOuterMeasurable, Undecided)


@dataclass(frozen=True)
class Yes:
    measure: LCNumber
    order: object
    trace: tuple = ()

    def render(self):
        return f"L-measurable: yes, M = {render_number(self.measure)} (order {_fmt(self.order)})"


@dataclass(frozen=True)
class No:
    witness: str
    trace: tuple = ()

    def render(self):
        return f"L-measurable: no: {self.witness}"


@dataclass(frozen=True)
class Unknown:
    reason: str
    trace: tuple = ()

    def render(self):
        return f"L-measurable: unknown: {self.reason}"


def _fmt(q):
    if q == INF:
        return "inf"
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def equal_at(x: LCNumber, y: LCNumber, K) -> bool:
    """True when x and y are known to agree on every exponent <= K."""
    diff = x - y
    return diff.order >= K and all(e > K for e, _ in diff.terms)


class _Stop(Exception):
    """Carries a non-Value result out of an approximant evaluation."""

    def __init__(self, result):
        self.result = result


# -- leaf classification -----------------------------------------------------------


def _is_bad(cu: CountableUnion) -> bool:
    s = cu.seq
    return s.decay is None and s.valuation_bound is not None and s.hull is not None


def _bad_witness(cu: CountableUnion) -> str:
    s = cu.seq
    return (
        f"{s.display}: every member length has valuation <= {_fmt(s.valuation_bound)}, "
        "so the lengths do not tend to 0"
    )


def _check_countable(cu: CountableUnion, K):
    """None if usable, else a NotOuterMeasurable/Undecided result."""
    s = cu.seq
    if s.decay is not None:
        try:
            validate_decay(s.lengths(), K)
        except CertificateViolation as exc:
            return NotOuterMeasurable(
                f"{s.label}: length certificate violated at n={exc.index}", exc.index,
                (f"decay check of {s.label}: {exc}",),
            )
        return None
    if _is_bad(cu):
        return None
    return Undecided(f"{s.label} has neither a decay certificate nor a valuation bound")


def _family_threshold(node, k) -> int:
    """Largest approximation index needed at level k for node and its members."""
    if isinstance(node, CountableUnion):
        return node.seq.threshold(k)
    if isinstance(node, _Family):
        n0 = node.decay.threshold(k)
        best = n0
        for n in range(1, n0 + 1):
            best = max(best, _tree_threshold(node.at(n), k))
        return best
    return 0


def _tree_threshold(A, k) -> int:
    best = 0
    for node in walk(A):
        if isinstance(node, CountableUnion) and not _is_bad(node) or isinstance(node, _Family):
            best = max(best, _family_threshold(node, k))
    return best


def _has_dense_or_bad(A) -> bool:
    for node in walk(A):
        if isinstance(node, Dense):
            return True
        if isinstance(node, CountableUnion) and node.seq.decay is None:
            return True
        if isinstance(node, _Family):
            if node.closed_form is not None and _has_dense_or_bad(node.closed_form):
                return True
    return False


# -- approximants ------------------------------------------------------------------


def _approximant(A: LCSet, N: int) -> LCSet:
    """A with every certified family cut to its first N members."""
    if isinstance(A, CountableUnion):
        if _is_bad(A):
            return A
        members = [A.seq.at(i) for i in range(1, N + 1)]
        members = [Single(iv) for iv in members if not iv.is_empty]
        return FiniteUnion(tuple(members)) if members else Empty()
    if isinstance(A, _Family):
        members = [_approximant(A.at(i), N) for i in range(1, N + 1)]
        acc = members[0]
        op = Union if isinstance(A, CertifiedCountableUnion) else Intersect
        for m in members[1:]:
            acc = op(acc, m)
        return acc
    if isinstance(A, FiniteUnion):
        return FiniteUnion(tuple(_approximant(p, N) for p in A.parts))
    if isinstance(A, Intersect):
        return Intersect(_approximant(A.a, N), _approximant(A.b, N))
    if isinstance(A, Union):
        return Union(_approximant(A.a, N), _approximant(A.b, N))
    if isinstance(A, Diff):
        return Diff(_approximant(A.a, N), _approximant(A.b, N))
    return A


def _substitute_closed_forms(A: LCSet):
    """Replace uncertified families by their closed forms; None if impossible."""
    if isinstance(A, _Family):
        if A.decay is not None:
            return A
        if A.closed_form is None:
            return None
        return _substitute_closed_forms(A.closed_form)
    if isinstance(A, FiniteUnion):
        parts = [_substitute_closed_forms(p) for p in A.parts]
        if any(p is None for p in parts):
            return None
        if all(p is q for p, q in zip(parts, A.parts)):
            return A
        return FiniteUnion(tuple(parts))
    if isinstance(A, (Intersect, Union, Diff)):
        a, b = _substitute_closed_forms(A.a), _substitute_closed_forms(A.b)
        if a is None or b is None:
            return None
        if a is A.a and b is A.b:
            return A
        return type(A)(a, b)
    return A


# -- the cell engine -----------------------------------------------------------------


def _sorted_points(points):
    # exact points are equal exactly when their term tuples are
    return sorted(set(points), key=point_key)


def _rep(b):
    return b[0] if b else ZERO


class CellAnalysis:
    """Atom masks of a family-free expression on its cell partition."""

    def __init__(self, A: LCSet):
        self.A = A
        bad, points = [], []
        for node in walk(A):
            if isinstance(node, Single) and not node.interval.is_empty:
                points += [p for p in (node.interval.lo, node.interval.hi) if isinstance(p, LCNumber)]
            elif isinstance(node, Dense):
                points += [node.ambient.lo, node.ambient.hi]
            elif isinstance(node, CountableUnion):
                if node not in bad:
                    bad.append(node)
                points += [node.seq.hull.lo, node.seq.hull.hi]
        self.bad = bad
        self.breaks = _sorted_points(points)
        self.index = {p: i for i, p in enumerate(self.breaks)}
        self.ncells = len(self.breaks) + 1
        self.natoms = 1 << (len(bad) + 1)
        w = self.natoms
        self.full_cell = (1 << w) - 1
        self.t_cell = sum(1 << a for a in range(w) if not a & 1)
        self.s_cell = sum(1 << a for a in range(w) if a & 1)
        self.bad_cell = [sum(1 << a for a in range(w) if a >> (j + 1) & 1) for j in range(len(bad))]
        self._memo = {}
        self.mask = self._mask(A)

    # cell i is the open gap between breaks[i-1] and breaks[i]
    def cell_bounds(self, i):
        lo = self.breaks[i - 1] if i > 0 else NEG_INF
        hi = self.breaks[i] if i < len(self.breaks) else POS_INF
        return lo, hi

    def _span(self, lo, hi, pattern):
        """pattern repeated over the cells strictly between breaks lo and hi."""
        if isinstance(lo, LCNumber):
            first = self.index[lo] + 1
        else:
            first = 0
        if isinstance(hi, LCNumber):
            last = self.index[hi]
        else:
            last = self.ncells - 1
        count = last - first + 1
        if count <= 0:
            return 0
        w = self.natoms
        rep = ((1 << (count * w)) - 1) // ((1 << w) - 1)
        return (rep * pattern) << (first * w)

    def _mask(self, node):
        key = id(node)
        hit = self._memo.get(key)
        if hit is not None and hit[0] is node:
            return hit[1]
        m = self._compute(node)
        self._memo[key] = (node, m)
        return m

    def _compute(self, node):
        if isinstance(node, (Empty, PointSeq)):
            return 0
        if isinstance(node, Single):
            iv = node.interval
            return 0 if iv.is_empty else self._span(iv.lo, iv.hi, self.full_cell)
        if isinstance(node, Dense):
            pat = self.t_cell if node.family == "T" else self.s_cell
            return self._span(node.ambient.lo, node.ambient.hi, pat)
        if isinstance(node, CountableUnion):
            j = self.bad.index(node)
            h = node.seq.hull
            return self._span(h.lo, h.hi, self.bad_cell[j])
        if isinstance(node, FiniteUnion):
            m = 0
            for p in node.parts:
                m |= self._mask(p)
            return m
        if isinstance(node, Union):
            return self._mask(node.a) | self._mask(node.b)
        if isinstance(node, Intersect):
            return self._mask(node.a) & self._mask(node.b)
        if isinstance(node, Diff):
            return self._mask(node.a) & ~self._mask(node.b)
        raise TypeError(f"cannot analyse {type(node).__name__}")

    def cell_mask(self, i, mask=None):
        m = self.mask if mask is None else mask
        return (m >> (i * self.natoms)) & self.full_cell

    def classify(self, i, mask=None):
        """One of 'empty', 'full', 'dense', 'bad:<j>', 'mixed'."""
        c = self.cell_mask(i, mask)
        if c == 0:
            return "empty"
        if c == self.full_cell:
            return "full"
        if c & self.t_cell == self.t_cell or c & self.s_cell == self.s_cell:
            return "dense"
        for j, b in enumerate(self.bad_cell):
            if c == b:
                h = self.bad[j].seq.hull
                lo, hi = self.cell_bounds(i)
                if cmp_point(lo, h.lo) == 0 and cmp_point(hi, h.hi) == 0:
                    return f"bad:{j}"
        return "mixed"

    def cells(self, mask=None):
        for i in range(self.ncells):
            yield i, self.classify(i, mask)


def _cell_str(lo, hi):
    return render_interval(Interval(lo, hi, False, False))


def _cell_eval(A: LCSet, with_trace=True):
    """Outer measure of a family-free expression: a Value with exact total.

    Without ``with_trace`` the per-cell lines of a Value are skipped.
    """
    ca = CellAnalysis(A)
    total = ZERO
    trace = []
    # quiet lengths are collected coefficient-wise and folded in at the end
    quiet = defaultdict(Fraction)
    for i, kind in ca.cells():
        if kind == "empty":
            continue
        lo, hi = ca.cell_bounds(i)
        if kind in ("full", "dense") and isinstance(lo, LCNumber) and isinstance(hi, LCNumber) and not with_trace:
            for e, c in hi.terms:
                quiet[e] += c
            for e, c in lo.terms:
                quiet[e] -= c
            continue
        where = _cell_str(lo, hi)
        if kind.startswith("bad:"):
            cu = ca.bad[int(kind[4:])]
            trace.append(f"{where}: set reduces to {cu.seq.name or cu.seq.label}")
            return NotOuterMeasurable(f"set reduces to {_bad_witness(cu)}", None, tuple(trace))
        if kind == "mixed":
            trace.append(f"{where}: no evaluation rule for this combination")
            return Undecided(f"no evaluation rule applies on {where}", tuple(trace))
        if lo is NEG_INF or hi is POS_INF:
            trace.append(f"{where}: unbounded piece")
            return Undecided(f"set is unbounded on {where}", tuple(trace))
        ln = hi - lo
        total = total + ln
        if kind == "full":
            trace.append(f"{where}: interval length {render_number(ln)}")
        else:
            trace.append(f"{where}: dense subset, outer measure = length {render_number(ln)}")
    if quiet:
        total = total + LCNumber.from_dict(quiet)
    return Value(total, INF, tuple(trace))


# -- public evaluators -----------------------------------------------------------------


def outer_measure(A: LCSet, K=DEFAULT_ORDER):
    """Outer measure of a representable set, known to order K."""
    K = ext(K)
    trace = []
    sub = _substitute_closed_forms(A)
    if sub is None:
        names = [n.label for n in walk(A) if isinstance(n, _Family) and n.decay is None]
        return Undecided(f"family {names[0]} has no measure certificate and no closed form")
    if sub is not A:
        trace.append("uncertified families replaced by their closed forms")
        A = sub
    nodes = list(walk(A))
    for node in nodes:
        if isinstance(node, CountableUnion):
            bad = _check_countable(node, K)
            if bad is not None:
                return type(bad)(*_with_trace(bad, trace))
        if isinstance(node, _Family) and _members_unsafe(node, K):
            return Undecided(
                f"members of {node.label} are not L-measurable intervals; continuity does not apply",
                tuple(trace),
            )
    approximable = [
        n for n in nodes if isinstance(n, CountableUnion) and not _is_bad(n) or isinstance(n, _Family)
    ]
    if not approximable:
        r = _cell_eval(A)
        return _finish(r, K, trace)

    cache = {}

    def at(N):
        if N not in cache:
            r = _cell_eval(_approximant(A, N), with_trace=False)
            if not isinstance(r, Value):
                raise _Stop(r)
            cache[N] = r
        return cache[N].value

    cert = DecayCertificate(lambda k: _tree_threshold(A, k), "max of family thresholds")
    gen = TermGenerator(at, cert, "finite approximants")
    try:
        value = limit_sequence(gen, K)
    except _Stop as stop:
        r = stop.result
        return type(r)(*_with_trace(r, trace + ["finite approximant evaluation"]))
    except CertificateViolation as exc:
        labels = ", ".join(n.seq.label if isinstance(n, CountableUnion) else n.label for n in approximable)
        return NotOuterMeasurable(
            f"measure certificate of {labels} violated at n={exc.index}", exc.index,
            tuple(trace + [f"limit of finite approximants: {exc}"]),
        )
    n0 = cert.threshold(K)
    trace.append(f"limit of finite approximants, N = {n0 + 1}")
    trace.extend(_cell_eval(_approximant(A, n0 + 1)).trace)
    return Value(value, K, tuple(trace))


def _members_unsafe(fam: _Family, K) -> bool:
    if fam.decay is None:
        return False
    n0 = min(fam.decay.threshold(K) + 1, 64)
    return any(_has_dense_or_bad(fam.at(n)) for n in range(1, n0 + 1))


def _with_trace(r, extra):
    if isinstance(r, NotOuterMeasurable):
        return r.witness, r.index, tuple(extra) + r.trace
    if isinstance(r, Undecided):
        return r.reason, tuple(extra) + r.trace
    return r.value, r.order, tuple(extra) + r.trace


def _finish(r, K, trace):
    if isinstance(r, Value):
        return Value(cap(r.value, K), K, tuple(trace) + r.trace)
    return type(r)(*_with_trace(r, trace))


def _l_kind(A: LCSet, K) -> bool:
    """True when every leaf is an interval, point set or certified family of them."""
    for node in walk(A):
        if isinstance(node, Dense):
            return False
        if isinstance(node, CountableUnion) and node.seq.decay is None:
            return False
        if isinstance(node, _Family):
            if node.decay is None:
                if node.closed_form is None or not _l_kind(node.closed_form, K):
                    return False
            elif _members_unsafe(node, K):
                return False
    return True


def is_L_measurable(A: LCSet, K=DEFAULT_ORDER):
    K = ext(K)
    r = outer_measure(A, K)
    if isinstance(r, NotOuterMeasurable):
        return No(f"not outer measurable: {r.witness}", r.trace)
    if _l_kind(A, K):
        if isinstance(r, Value):
            return Yes(r.value, K, ("built from intervals, null sets and certified families",) + r.trace)
        return Unknown(r.reason, r.trace)
    if any(isinstance(n, _Family) or isinstance(n, CountableUnion) and not _is_bad(n) for n in walk(A)):
        return Unknown("dense or non-measurable parts mixed with countable families", r.trace)
    ca = CellAnalysis(A)
    kinds = list(ca.cells())
    if all(k in ("full", "empty") for _, k in kinds) and isinstance(r, Value):
        return Yes(r.value, K, ("every cell is full or empty up to null sets",) + r.trace)
    for i, kind in kinds:
        if kind != "dense":
            continue
        lo, hi = ca.cell_bounds(i)
        if lo is NEG_INF or hi is POS_INF:
            continue
        B = Single(Interval(lo, hi, True, True))
        try:
            chk = caratheodory_check(A, B, K)
        except NotEvaluable:
            continue
        if not chk.holds:
            return No(
                f"B = {render_interval(B.interval)}: M_u(B) = {render_number(chk.m_b)} but "
                f"M_u(A & B) + M_u(~A & B) = {render_number(chk.m_in)} + {render_number(chk.m_out)}",
                chk.trace,
            )
    reason = r.reason if isinstance(r, Undecided) else "no sufficient condition applies"
    return Unknown(reason, r.trace)


@dataclass(frozen=True)
class CaratheodoryResult:
    holds: bool
    m_b: LCNumber
    m_in: LCNumber
    m_out: LCNumber
    trace: tuple = ()

    def __bool__(self):
        return self.holds


def _value_or_raise(r, what):
    if not isinstance(r, Value):
        detail = r.render()
        raise NotEvaluable(f"{what}: {detail}")
    return r.value


def caratheodory_check(A: LCSet, B: LCSet, K=DEFAULT_ORDER) -> CaratheodoryResult:
    """Test ``M_u(B) = M_u(A & B) + M_u(B \\ A)`` exactly at order K."""
    K = ext(K)
    mb = _value_or_raise(outer_measure(B, K), "M_u(B)")
    mi = _value_or_raise(outer_measure(Intersect(A, B), K), "M_u(A & B)")
    mo = _value_or_raise(outer_measure(Diff(B, A), K), "M_u(~A & B)")
    holds = equal_at(mb, mi + mo, K)
    trace = (
        f"M_u(B) = {render_number(mb)}",
        f"M_u(A & B) = {render_number(mi)}",
        f"M_u(~A & B) = {render_number(mo)}",
        f"additivity {'holds' if holds else 'fails'}: {render_number(mb)} {'=' if holds else '!='} {render_number(mi + mo)}",
    )
    return CaratheodoryResult(holds, mb, mi, mo, trace)


def lebesgue_measure(A: LCSet, K=DEFAULT_ORDER) -> LCNumber:
    r = is_L_measurable(A, K)
    if not isinstance(r, Yes):
        raise NotEvaluable(r.render())
    return r.measure


def measure_inclusion_exclusion(A: LCSet, B: LCSet, K=DEFAULT_ORDER):
    """Returns ``(M(A | B), M(A) + M(B) - M(A & B))``, asserting equality."""
    K = ext(K)
    lhs = lebesgue_measure(Union(A, B), K)
    rhs = lebesgue_measure(A, K) + lebesgue_measure(B, K) - lebesgue_measure(Intersect(A, B), K)
    if not equal_at(lhs, rhs, K):
        raise IdentityViolation(f"inclusion-exclusion fails: {lhs} != {rhs}")
    return lhs, rhs


@dataclass(frozen=True)
class ContinuityResult:
    lhs: LCNumber
    rhs: LCNumber
    holds: bool


def _continuity(family: _Family, X: LCSet, K, op):
    K = ext(K)
    cache = {}

    def at(N):
        if N not in cache:
            cache[N] = _value_or_raise(outer_measure(Intersect(X, family.partial(N)), K), f"N={N}")
        return cache[N]

    if family.decay is None:
        gen = TermGenerator(at, None, family.label)
        bad = first_cauchy_failure(gen, 0)
        if bad is not None:
            raise CertificateViolation(
                bad, f"partial measures {render_number(at(bad))}, {render_number(at(bad + 1))} of {family.label} "
                "differ at valuation <= 0: the limit does not exist",
            )
        raise MissingCertificate(f"{family.label} carries no measure certificate")
    lhs = limit_sequence(TermGenerator(at, family.decay, family.label), K)
    target = family.closed_form if family.closed_form is not None else family
    rhs = _value_or_raise(outer_measure(Intersect(X, target), K), f"M_u(X & {op})")
    if not equal_at(lhs, rhs, K):
        raise IdentityViolation(f"continuity fails for {family.label}: {lhs} != {rhs}")
    return ContinuityResult(lhs, rhs, True)


def continuity_union(family: CertifiedCountableUnion, X: LCSet, K=DEFAULT_ORDER) -> ContinuityResult:
    """``lim M_u(X & (A_1 | ... | A_N)) = M_u(X & union A_n)`` at order K."""
    return _continuity(family, X, K, "union")


def continuity_intersection(family: CertifiedCountableIntersect, X: LCSet, K=DEFAULT_ORDER) -> ContinuityResult:
    """``lim M_u(X & A_1 & ... & A_N) = M_u(X & intersection A_n)`` at order K."""
    return _continuity(family, X, K, "intersection")


def subadditivity_check(A: LCSet, B: LCSet, C: LCSet, K=DEFAULT_ORDER) -> bool:
    """``M_u(A) <= M_u(B) + M_u(C)``; the caller vouches that A is inside B | C."""
    K = ext(K)
    ma = _value_or_raise(outer_measure(A, K), "M_u(A)")
    mb = _value_or_raise(outer_measure(B, K), "M_u(B)")
    mc = _value_or_raise(outer_measure(C, K), "M_u(C)")
    return compare(cap(ma, K), cap(mb + mc, K)) is not Ordering.GREATER
