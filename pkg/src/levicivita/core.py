"""Truncated Levi-Civita numbers.

An :class:`LCNumber` is a finite sorted list of ``(exponent, coefficient)``
pairs standing for ``sum c * d**e``, together with the order ``K`` up to
which the value is known.  ``order == math.inf`` means the value is exact;
a finite order means the true number agrees with the listed terms on every
exponent ``<= K`` and nothing is known beyond.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from levicivita import _kernels
from levicivita.errors import (
    BeyondTruncation,
    DivisionByZero,
    IndeterminateSign,
    IndeterminateZeroToOrder,
    LeadingCoefficientNotPerfectPower,
    NonPositiveRadicand,
    TruncationBeyondKnowledge,
    ZeroOperand,
)

INF = math.inf
DEFAULT_ORDER = Fraction(16)

ExtRational = Union[Fraction, float]  # a Fraction, or math.inf
Term = tuple  # (Fraction exponent, Fraction coefficient)


def ext(v) -> ExtRational:
    """Coerce to an extended rational: ``math.inf`` or a Fraction."""
    if v == INF:
        return INF
    if isinstance(v, float):
        if math.isnan(v) or v == -INF:
            raise ValueError(f"not an extended rational: {v}")
        return Fraction(v)
    return Fraction(v)


@dataclass(frozen=True)
class LCNumber:
    terms: tuple = ()
    order: ExtRational = INF

    def __post_init__(self):
        terms = tuple((Fraction(e), Fraction(c)) for e, c in self.terms)
        order = ext(self.order)
        prev = None
        for e, c in terms:
            if c == 0:
                raise ValueError("zero coefficient in term list")
            if prev is not None and e <= prev:
                raise ValueError("exponents must be strictly ascending")
            if e > order:
                raise ValueError(f"term d^{e} lies beyond order {order}")
            prev = e
        object.__setattr__(self, "terms", terms)
        object.__setattr__(self, "order", order)

    @classmethod
    def _raw(cls, terms, order):
        # kernels already produce valid term lists
        obj = object.__new__(cls)
        object.__setattr__(obj, "terms", tuple(terms))
        object.__setattr__(obj, "order", order)
        return obj

    @classmethod
    def from_dict(cls, coeffs, order=INF):
        pairs = sorted((Fraction(e), Fraction(c)) for e, c in coeffs.items() if c)
        return cls(tuple(pairs), order)

    # -- basic queries --------------------------------------------------

    @property
    def is_exact(self) -> bool:
        return self.order == INF

    @property
    def is_zero(self) -> bool:
        """True only for the exact zero."""
        return not self.terms and self.order == INF

    def leading(self) -> Term:
        if self.terms:
            return self.terms[0]
        if self.order == INF:
            raise ZeroOperand("zero has no leading term")
        raise IndeterminateZeroToOrder(self.order)

    def as_dict(self):
        return dict(self.terms)

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other):
        other = coerce(other)
        if other is NotImplemented:
            return NotImplemented
        order = min(self.order, other.order)
        return LCNumber._raw(_kernels.add_terms(self.terms, other.terms, order), order)

    __radd__ = __add__

    def __neg__(self):
        return LCNumber._raw([(e, -c) for e, c in self.terms], self.order)

    def __pos__(self):
        return self

    def __sub__(self, other):
        other = coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = coerce(other)
        if other is NotImplemented:
            return NotImplemented
        order = min(self.order + _lower(other), other.order + _lower(self))
        return LCNumber._raw(_kernels.mul_terms(self.terms, other.terms, order), order)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if other.is_exact and len(other.terms) == 1:
            return self * inverse(other)
        return self * inverse(other, _div_order(self, other))

    def __rtruediv__(self, other):
        other = coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other / self

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return inverse(self) ** (-n)
        result = ONE
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    # -- order ------------------------------------------------------------

    def _cmp(self, other):
        other = coerce(other)
        if other is NotImplemented:
            return NotImplemented
        r = compare(self, other)
        if isinstance(r, IndistinguishableAtOrder):
            raise IndeterminateSign(f"operands agree up to order {r.order}")
        return r

    def __lt__(self, other):
        r = self._cmp(other)
        return r if r is NotImplemented else r is Ordering.LESS

    def __le__(self, other):
        r = self._cmp(other)
        return r if r is NotImplemented else r is not Ordering.GREATER

    def __gt__(self, other):
        r = self._cmp(other)
        return r if r is NotImplemented else r is Ordering.GREATER

    def __ge__(self, other):
        r = self._cmp(other)
        return r if r is NotImplemented else r is not Ordering.LESS

    # -- rendering ----------------------------------------------------------

    def __str__(self):
        return render_number(self)

    def __repr__(self):
        if self.is_exact:
            return f"LCNumber({render_number(self)!r})"
        return f"LCNumber({render_number(self)!r}, order={_fmt_q(self.order)})"


def _lower(x: LCNumber) -> ExtRational:
    """Smallest exponent at which x may be nonzero (its order if no terms)."""
    return x.terms[0][0] if x.terms else x.order


def _div_order(num: LCNumber, den: LCNumber):
    known = min(num.order, den.order)
    return DEFAULT_ORDER if known == INF else known


def coerce(v):
    if isinstance(v, LCNumber):
        return v
    if isinstance(v, (int, Fraction)):
        return embed_real(v)
    return NotImplemented


# -- construction ------------------------------------------------------------


def embed_real(r) -> LCNumber:
    r = Fraction(r)
    return LCNumber._raw([(Fraction(0), r)] if r else [], INF)


def make_dq(q) -> LCNumber:
    return LCNumber._raw([(Fraction(q), Fraction(1))], INF)


ZERO = LCNumber()
ONE = embed_real(1)
D = make_dq(1)


# -- valuation and order -----------------------------------------------------


def lam(x: LCNumber) -> ExtRational:
    """The valuation: least exponent of the support, inf for exact zero."""
    if x.terms:
        return x.terms[0][0]
    if x.order == INF:
        return INF
    raise IndeterminateZeroToOrder(x.order)


def valuation_norm(x: LCNumber) -> ExtRational:
    """``-log`` of the valuation norm, i.e. lambda itself.

    The norm ``exp(-lambda)`` is order-reversing in lambda, so comparing
    lambdas in reverse compares norms exactly.
    """
    return lam(x)


class Ordering(enum.Enum):
    LESS = "Less"
    EQUAL = "Equal"
    GREATER = "Greater"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class IndistinguishableAtOrder:
    order: ExtRational

    def __str__(self):
        return f"IndistinguishableAtOrder({_fmt_q(self.order)})"


def compare(x: LCNumber, y: LCNumber):
    diff = coerce(x) - coerce(y)
    if diff.terms:
        return Ordering.GREATER if diff.terms[0][1] > 0 else Ordering.LESS
    if diff.order == INF:
        return Ordering.EQUAL
    return IndistinguishableAtOrder(diff.order)


def sign(x: LCNumber) -> int:
    if x.terms:
        return 1 if x.terms[0][1] > 0 else -1
    if x.order == INF:
        return 0
    raise IndeterminateSign(f"value vanishes up to order {_fmt_q(x.order)}")


def lc_abs(x: LCNumber) -> LCNumber:
    return -x if sign(x) < 0 else x


def lc_min(x: LCNumber, y: LCNumber) -> LCNumber:
    return x if compare(x, y) is not Ordering.GREATER else y


def lc_max(x: LCNumber, y: LCNumber) -> LCNumber:
    return x if compare(x, y) is not Ordering.LESS else y


# -- inverse and roots ----------------------------------------------------------


def _normalize(x: LCNumber):
    """Split x = c * d^lam * (1 + eps); returns (c, lam, eps_terms, eps_order)."""
    if not x.terms:
        if x.order == INF:
            raise DivisionByZero("exact zero")
        raise IndeterminateZeroToOrder(x.order)
    lead, c = x.terms[0]
    eps = [(e - lead, v / c) for e, v in x.terms[1:]]
    return c, lead, eps, x.order - lead


def inverse(x: LCNumber, K=DEFAULT_ORDER) -> LCNumber:
    """Multiplicative inverse, known up to ``min(K, order(x) - 2*lam(x))``.

    Uses ``x = c d^lam (1 + eps)`` and the series of ``(1 + eps)^-1``.  The
    product ``x * inverse(x, K)`` equals 1 on every exponent up to
    ``K + lam(x)``.  An exact monomial has an exact inverse.
    """
    x = coerce(x)
    c, lead, eps, _ = _normalize(x)
    if not eps and x.order == INF:
        return LCNumber._raw([(-lead, 1 / c)], INF)
    order = min(ext(K), x.order - 2 * lead)
    series = _kernels.power_terms(eps, -1, order + lead)
    inv_c = 1 / c
    return LCNumber._raw([(e - lead, g * inv_c) for e, g in series], order)


def _rational_root(q: Fraction, n: int):
    def iroot(m):
        if m < 2:
            return m
        # integer Newton iteration from an overestimate
        r = 1 << (m.bit_length() // n + 1)
        while True:
            nr = ((n - 1) * r + m // r ** (n - 1)) // n
            if nr >= r:
                break
            r = nr
        return r if r**n == m else None

    a, b = iroot(q.numerator), iroot(q.denominator)
    if a is None or b is None:
        return None
    return Fraction(a, b)


def nth_root(x: LCNumber, n: int, K=DEFAULT_ORDER) -> LCNumber:
    """Positive n-th root, known up to ``min(K, order(x) - lam + lam/n)``.

    The leading coefficient must be an exact n-th power of a rational.
    """
    x = coerce(x)
    if not isinstance(n, int) or n < 1:
        raise ValueError("root index must be a positive integer")
    if not x.terms and x.order == INF:
        raise NonPositiveRadicand("radicand is zero")
    try:
        c, lead, eps, _ = _normalize(x)
    except DivisionByZero:  # pragma: no cover - handled above
        raise NonPositiveRadicand("radicand is zero")
    if c < 0:
        raise NonPositiveRadicand("radicand is negative")
    root_c = _rational_root(c, n)
    if root_c is None:
        raise LeadingCoefficientNotPerfectPower(f"{c} is not an exact {n}-th power")
    shift = lead / n
    if not eps and x.order == INF:
        return LCNumber._raw([(shift, root_c)], INF)
    order = min(ext(K), x.order - lead + shift)
    series = _kernels.power_terms(eps, Fraction(1, n), order - shift)
    return LCNumber._raw([(e + shift, g * root_c) for e, g in series], order)


# -- truncation and coefficients -------------------------------------------------


def truncate(x: LCNumber, k) -> LCNumber:
    """The k-th truncation: terms with exponent <= k, order set to k."""
    k = ext(k)
    if k > x.order:
        raise TruncationBeyondKnowledge(f"order {_fmt_q(k)} exceeds known order {_fmt_q(x.order)}")
    return LCNumber._raw([t for t in x.terms if t[0] <= k], k)


def cap(x: LCNumber, k) -> LCNumber:
    """Like truncate but never raises: the order becomes min(order, k)."""
    k = min(ext(k), x.order)
    if k == x.order:
        return x
    return LCNumber._raw([t for t in x.terms if t[0] <= k], k)


def coefficient(x: LCNumber, q) -> Fraction:
    q = Fraction(q)
    if q > x.order:
        raise BeyondTruncation(f"d^{_fmt_q(q)} lies beyond order {_fmt_q(x.order)}")
    for e, c in x.terms:
        if e == q:
            return c
        if e > q:
            break
    return Fraction(0)


def agree_up_to(x: LCNumber, y: LCNumber, k) -> bool:
    """True when x and y have equal coefficients on every exponent <= k."""
    k = ext(k)
    if k > x.order or k > y.order:
        raise TruncationBeyondKnowledge(f"order {_fmt_q(k)} not known for both operands")
    return [t for t in x.terms if t[0] <= k] == [t for t in y.terms if t[0] <= k]


def _nonzero_lead(x):
    if not x.terms and x.order == INF:
        raise ZeroOperand("magnitude relations need nonzero operands")
    return x.leading()


def agree_order(x: LCNumber, y: LCNumber) -> bool:
    return _nonzero_lead(x)[0] == _nonzero_lead(y)[0]


def agree_leading(x: LCNumber, y: LCNumber) -> bool:
    return _nonzero_lead(x) == _nonzero_lead(y)


class Magnitude(enum.Enum):
    INFINITESIMAL = "Infinitesimal"
    FINITE = "Finite"
    INFINITE = "Infinite"


def classify_magnitude(x: LCNumber) -> Magnitude:
    v = lam(x)
    if v > 0:
        return Magnitude.INFINITESIMAL
    if v < 0:
        return Magnitude.INFINITE
    return Magnitude.FINITE


# -- rendering -------------------------------------------------------------------


def _fmt_q(q) -> str:
    if q == INF:
        return "inf"
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _render_term(e, c) -> str:
    if e == 0:
        return _fmt_q(c)
    mono = "d" if e == 1 else f"d^({_fmt_q(e)})"
    if c == 1:
        return mono
    return f"{_fmt_q(c)}*{mono}"


def render_number(x: LCNumber) -> str:
    if not x.terms:
        return "0"
    parts = []
    for i, (e, c) in enumerate(x.terms):
        body = _render_term(e, abs(c))
        if i == 0:
            parts.append(body if c > 0 else f"-{body}")
        else:
            parts.append(f" + {body}" if c > 0 else f" - {body}")
    return "".join(parts)
