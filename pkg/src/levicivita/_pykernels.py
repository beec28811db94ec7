"""Reference (pure Python) kernels for sparse series arithmetic.

A term list is a list of ``(exponent, coefficient)`` pairs of
:class:`fractions.Fraction`, sorted by strictly increasing exponent, with no
zero coefficients.  ``cutoff`` is the largest exponent to keep; it may be
``math.inf``.

The compiled module ``_ckernels`` exposes the same three functions with the
same contract.
"""

from __future__ import annotations

import heapq
from fractions import Fraction


def add_terms(xs, ys, cutoff):
    """Merge two term lists, dropping cancelled terms and exponents > cutoff."""
    out = []
    i = j = 0
    nx, ny = len(xs), len(ys)
    while i < nx or j < ny:
        if j >= ny or (i < nx and xs[i][0] < ys[j][0]):
            e, c = xs[i]
            i += 1
        elif i >= nx or ys[j][0] < xs[i][0]:
            e, c = ys[j]
            j += 1
        else:
            e = xs[i][0]
            c = xs[i][1] + ys[j][1]
            i += 1
            j += 1
        if e > cutoff:
            break
        if c:
            out.append((e, c))
    return out


def mul_terms(xs, ys, cutoff):
    """Convolution product of two term lists, keeping exponents <= cutoff."""
    if not xs or not ys:
        return []
    acc = {}
    y0 = ys[0][0]
    for ex, cx in xs:
        if ex + y0 > cutoff:
            break
        for ey, cy in ys:
            e = ex + ey
            if e > cutoff:
                break
            acc[e] = acc.get(e, 0) + cx * cy
    return [(e, acc[e]) for e in sorted(acc) if acc[e]]


def power_terms(eps, alpha, cutoff):
    """Terms of ``(1 + eps)**alpha`` up to ``cutoff``.

    ``eps`` must have strictly positive exponents.  Uses the recurrence
    obtained from ``t g'(t) (1 + eps) = alpha g(t) t eps'(t)``::

        g[e] = (1/e) * sum_a (alpha*a - (e - a)) * eps[a] * g[e - a]

    Candidate exponents are generated lazily from the monoid spanned by the
    exponents of ``eps``; only successors of nonzero coefficients are visited.
    """
    if cutoff < 0:
        return []
    alpha = Fraction(alpha)
    g = {Fraction(0): Fraction(1)}
    out = [(Fraction(0), Fraction(1))]
    if not eps:
        return out
    heap = []
    seen = set()
    for a, _ in eps:
        if a <= cutoff and a not in seen:
            seen.add(a)
            heapq.heappush(heap, a)
    while heap:
        e = heapq.heappop(heap)
        total = Fraction(0)
        for a, fa in eps:
            if a > e:
                break
            prev = g.get(e - a)
            if prev:
                total += (alpha * a - (e - a)) * fa * prev
        if not total:
            continue
        ge = total / e
        g[e] = ge
        out.append((e, ge))
        for a, _ in eps:
            ne = e + a
            if ne > cutoff:
                break
            if ne not in seen:
                seen.add(ne)
                heapq.heappush(heap, ne)
    return out
