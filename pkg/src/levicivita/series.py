"""Limits and sums in the valuation topology, driven by decay certificates.

A sequence converges to 0 exactly when the valuations of its terms tend to
infinity.  A :class:`DecayCertificate` is the explicit witness ``N(k)`` of
that: every term past index ``N(k)`` has valuation above ``k``.  Evaluation
trusts the certificate for the value and spot-checks it on a few sampled
indices, so a false certificate is caught rather than silently used.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

from levicivita.core import INF, ZERO, LCNumber, cap, ext
from levicivita.errors import CertificateViolation

DEFAULT_SAMPLES = 8


@dataclass(frozen=True)
class DecayCertificate:
    threshold_fn: Callable[[Fraction], int] = field(compare=False)
    label: str = ""

    def threshold(self, k) -> int:
        n = int(self.threshold_fn(Fraction(k)))
        return max(n, 0)


@dataclass(frozen=True)
class TermGenerator:
    """A sequence ``n -> at(n)`` for ``n >= 1`` with an optional certificate."""

    at: Callable[[int], LCNumber] = field(compare=False)
    decay: Optional[DecayCertificate] = None
    label: str = ""

    def differences(self) -> "TermGenerator":
        at = self.at
        return TermGenerator(lambda n: at(n + 1) - at(n), self.decay, f"diff({self.label})")


def exceeds(x: LCNumber, k) -> bool:
    """True when lam(x) > k is certain from the known terms."""
    if x.terms:
        return x.terms[0][0] > k
    # truncated zero: every coefficient up to its order vanishes
    return x.order >= k if x.order != INF else True


def sample_indices(start: int, samples: int = DEFAULT_SAMPLES):
    """Geometrically spaced indices ``start + 2**i`` for ``i < samples``."""
    return [start + (1 << i) for i in range(samples)]


def _threshold(g: TermGenerator, k) -> int:
    return g.decay.threshold(k) if g.decay is not None else 0


def validate_decay(g: TermGenerator, k, samples: int = DEFAULT_SAMPLES) -> int:
    """Spot-check the certificate at level k; returns N(k)."""
    n0 = _threshold(g, k)
    for n in sample_indices(n0, samples):
        term = g.at(n)
        if not exceeds(term, k):
            raise CertificateViolation(n, f"term {term} has valuation <= {k}")
    return n0


def sum_series(g: TermGenerator, K, samples: int = DEFAULT_SAMPLES, stop: Optional[int] = None) -> LCNumber:
    """Sum of ``at(n)`` for ``n >= 1``, known to order K.

    Terms past ``N(K)`` vanish below ``d^K``, so the first ``N(K)`` terms
    (or ``stop`` terms, when a larger stopping index is given) decide the
    result.
    """
    K = ext(K)
    if g.decay is None:
        raise CertificateViolation(0, "series has no decay certificate")
    n0 = validate_decay(g, K, samples)
    if stop is not None:
        if stop < n0:
            raise ValueError(f"stopping index {stop} is below the certified N(K)={n0}")
        n0 = stop
    total = ZERO
    for n in range(1, n0 + 1):
        total = total + g.at(n)
    return cap(total, K)


def limit_sequence(g: TermGenerator, K, samples: int = DEFAULT_SAMPLES) -> LCNumber:
    """Limit of ``at(n)``; the certificate bounds the consecutive differences."""
    K = ext(K)
    if g.decay is None:
        raise CertificateViolation(0, "sequence has no decay certificate")
    n0 = validate_decay(g.differences(), K, samples)
    return cap(g.at(n0 + 1), K)


def first_cauchy_failure(g: TermGenerator, k, samples: int = DEFAULT_SAMPLES) -> Optional[int]:
    """First sampled n past N(k) with lam(at(n+1) - at(n)) <= k, or None."""
    n0 = _threshold(g, k)
    for n in sample_indices(n0, samples):
        if not exceeds(g.at(n + 1) - g.at(n), k):
            return n
    return None


def check_cauchy_prefix(g: TermGenerator, k, samples: int = DEFAULT_SAMPLES) -> bool:
    """True iff consecutive differences have valuation > k at sampled indices."""
    return first_cauchy_failure(g, k, samples) is None


def geometric_certificate(rate=1, offset=0, label="") -> DecayCertificate:
    """Certificate for terms with valuation ``>= rate*n + offset`` (rate > 0)."""
    rate, offset = Fraction(rate), Fraction(offset)

    def threshold(k):
        # need rate*n + offset > k for all n > N
        v = (k - offset) / rate
        return max(int(v // 1), 0)

    return DecayCertificate(threshold, label or f"lam >= {rate}n + {offset}")


def constant_certificate(n0: int = 0, label="") -> DecayCertificate:
    """Certificate for sequences whose terms vanish past index n0."""
    return DecayCertificate(lambda k: n0, label or f"zero past {n0}")
