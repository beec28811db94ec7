# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled sparse series kernels.

Same contract as :mod:`levicivita._pykernels`.  Exponents are rescaled to a
common denominator and handled as C integers; coefficients are carried as
reduced ``(numerator, denominator)`` Python integer pairs so the inner loops
never touch :class:`fractions.Fraction`.  Inputs whose scaled exponents would
not fit in 62 bits are handed to the Python kernels.
"""

from fractions import Fraction
from math import gcd, inf, floor
import heapq

from levicivita import _pykernels

cdef long long _LIMIT = 1LL << 62


cdef object _scale_for(object terms, object scale):
    for e, _ in terms:
        den = e.denominator
        scale = scale // gcd(scale, den) * den
    return scale


cdef bint _fits(object terms, object scale):
    for e, _ in terms:
        if abs(e.numerator * (scale // e.denominator)) >= _LIMIT:
            return False
    return True


cdef tuple _unpack(object terms, object scale):
    cdef Py_ssize_t n = len(terms)
    cdef list ex = [0] * n
    cdef list num = [0] * n
    cdef list den = [0] * n
    cdef Py_ssize_t i
    for i in range(n):
        e, c = terms[i]
        ex[i] = e.numerator * (scale // e.denominator)
        num[i] = c.numerator
        den[i] = c.denominator
    return ex, num, den


cdef long long _scaled_cutoff(object cutoff, object scale):
    if cutoff == inf:
        return _LIMIT
    v = floor(Fraction(cutoff) * scale)
    if v >= _LIMIT:
        return _LIMIT
    if v <= -_LIMIT:
        return -_LIMIT
    return v


def add_terms(xs, ys, cutoff):
    cdef Py_ssize_t i = 0, j = 0
    cdef Py_ssize_t nx = len(xs), ny = len(ys)
    cdef list out = []
    while i < nx or j < ny:
        if j >= ny or (i < nx and xs[i][0] < ys[j][0]):
            e, c = xs[i]
            i += 1
        elif i >= nx or ys[j][0] < xs[i][0]:
            e, c = ys[j]
            j += 1
        else:
            e = xs[i][0]
            a = xs[i][1]
            b = ys[j][1]
            an = a.numerator
            ad = a.denominator
            bn = b.numerator
            bd = b.denominator
            n = an * bd + bn * ad
            i += 1
            j += 1
            if e > cutoff:
                break
            if n == 0:
                continue
            d = ad * bd
            g = gcd(n, d)
            out.append((e, Fraction(n // g, d // g)))
            continue
        if e > cutoff:
            break
        out.append((e, c))
    return out


def mul_terms(xs, ys, cutoff):
    if not xs or not ys:
        return []
    scale = _scale_for(ys, _scale_for(xs, 1))
    if cutoff != inf:
        scale = scale // gcd(scale, Fraction(cutoff).denominator) * Fraction(cutoff).denominator
    if not (_fits(xs, scale) and _fits(ys, scale)):
        return _pykernels.mul_terms(xs, ys, cutoff)
    cdef long long cut = _scaled_cutoff(cutoff, scale)
    xe_, xn, xd = _unpack(xs, scale)
    ye_, yn, yd = _unpack(ys, scale)
    cdef Py_ssize_t nx = len(xs), ny = len(ys), i, j
    cdef long long ex, ey, e
    cdef dict acc = {}
    cdef list cell
    for i in range(nx):
        ex = xe_[i]
        if ex + <long long>ye_[0] > cut:
            break
        an = xn[i]
        ad = xd[i]
        for j in range(ny):
            ey = ye_[j]
            e = ex + ey
            if e > cut:
                break
            pn = an * yn[j]
            pd = ad * yd[j]
            cell = acc.get(e)
            if cell is None:
                acc[e] = [pn, pd]
            else:
                n = cell[0] * pd + pn * cell[1]
                d = cell[1] * pd
                g = gcd(n, d)
                cell[0] = n // g
                cell[1] = d // g
    cdef list out = []
    for e in sorted(acc):
        cell = acc[e]
        if cell[0]:
            out.append((Fraction(e, scale), Fraction(cell[0], cell[1])))
    return out


def power_terms(eps, alpha, cutoff):
    if cutoff < 0:
        return []
    alpha = Fraction(alpha)
    if not eps:
        return [(Fraction(0), Fraction(1))]
    scale = _scale_for(eps, 1)
    cden = Fraction(cutoff).denominator
    scale = scale // gcd(scale, cden) * cden
    if not _fits(eps, scale) or Fraction(cutoff) * scale >= _LIMIT:
        return _pykernels.power_terms(eps, alpha, cutoff)
    cdef long long cut = _scaled_cutoff(cutoff, scale)
    ae_, an_, ad_ = _unpack(eps, scale)
    cdef Py_ssize_t m = len(eps), i
    cdef long long a, e, ne
    alpha_n = alpha.numerator
    alpha_d = alpha.denominator
    cdef dict g = {0: (1, 1)}
    cdef list out = [(Fraction(0), Fraction(1))]
    cdef list heap = []
    cdef set seen = set()
    for i in range(m):
        a = ae_[i]
        if a <= cut and a not in seen:
            seen.add(a)
            heapq.heappush(heap, a)
    while heap:
        e = heapq.heappop(heap)
        tn = 0
        td = 1
        for i in range(m):
            a = ae_[i]
            if a > e:
                break
            prev = g.get(e - a)
            if prev is None:
                continue
            # weight = alpha*a - (e - a), in units of 1/scale
            wn = alpha_n * a - alpha_d * (e - a)
            if wn == 0:
                continue
            pn = wn * an_[i] * prev[0]
            pd = alpha_d * ad_[i] * prev[1]
            tn = tn * pd + pn * td
            td = td * pd
            gg = gcd(tn, td)
            tn //= gg
            td //= gg
        if tn == 0:
            continue
        # divide by e (also in units of 1/scale, which cancels)
        gn = tn
        gd = td * e
        gg = gcd(gn, gd)
        gn //= gg
        gd //= gg
        if gd < 0:
            gn = -gn
            gd = -gd
        g[e] = (gn, gd)
        out.append((Fraction(e, scale), Fraction(gn, gd)))
        for i in range(m):
            ne = e + <long long>ae_[i]
            if ne > cut:
                break
            if ne not in seen:
                seen.add(ne)
                heapq.heappush(heap, ne)
    return out
