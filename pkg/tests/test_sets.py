from fractions import Fraction as F

import pytest

from levicivita.core import embed_real, make_dq
from levicivita.intervals import Interval
from levicivita.sets import Dense, Diff, Empty, Single, Union, rationals_in, walk


def real(q):
    return embed_real(F(q))


def test_rationals_enumeration_order_and_coverage():
    P = rationals_in(Interval(real(0), real(1)))
    first = [P.at(n).terms[0][1] if P.at(n).terms else F(0) for n in range(1, 8)]
    assert first == [F(0), F(1), F(1, 2), F(1, 3), F(2, 3), F(1, 4), F(3, 4)]
    # every p/q in [0, 1] with q <= 6 shows up, exactly once
    seen = [P.at(n) for n in range(1, 14)]
    expected = {real(F(p, q)) for q in range(1, 7) for p in range(q + 1)}
    assert set(seen) == expected and len(seen) == len(expected)


def test_rationals_respect_open_ends():
    P = rationals_in(Interval(real(0), real(1), False, False))
    pts = [P.at(n) for n in range(1, 20)]
    assert real(0) not in pts and real(1) not in pts


def test_rationals_need_real_bounded_ends():
    with pytest.raises(ValueError):
        rationals_in(Interval(real(0), make_dq(1)))


def test_point_set_equality_by_label():
    a = rationals_in(Interval(real(0), real(1)))
    b = rationals_in(Interval(real(0), real(1)))
    assert a == b and hash(a) == hash(b)


def test_dense_validation():
    with pytest.raises(ValueError):
        Dense("Q", Interval(real(0), real(1)))


def test_operators_and_walk():
    A = Single(Interval(real(0), real(1)))
    B = Empty()
    tree = (A | B) - A
    assert tree == Diff(Union(A, B), A)
    assert [type(n).__name__ for n in walk(tree)] == ["Diff", "Union", "Single", "Empty", "Single"]
