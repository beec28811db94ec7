from fractions import Fraction as F
from math import inf

import pytest
from hypothesis import given, settings

from levicivita.core import (
    DEFAULT_ORDER,
    ONE,
    ZERO,
    IndistinguishableAtOrder,
    LCNumber,
    Magnitude,
    Ordering,
    agree_leading,
    agree_order,
    agree_up_to,
    cap,
    classify_magnitude,
    coefficient,
    compare,
    embed_real,
    inverse,
    lam,
    lc_abs,
    lc_max,
    lc_min,
    make_dq,
    nth_root,
    render_number,
    sign,
    truncate,
    valuation_norm,
)
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

from strategies import lc_numbers, naive_add, naive_mul, nonzero_lc

d = make_dq(1)


def lc(*pairs, order=inf):
    return LCNumber(tuple((F(e), F(c)) for e, c in pairs), order)


class TestConstruction:
    def test_embed_real(self):
        assert embed_real(0).terms == ()
        assert embed_real(5).terms == ((0, 5),)
        assert embed_real(F(-3, 2)).terms == ((0, F(-3, 2)),)

    def test_make_dq(self):
        assert make_dq(1) == lc((1, 1))
        assert make_dq(0) == ONE
        half = make_dq(F(1, 2))
        assert half.terms == ((F(1, 2), 1),)
        assert half * half == d

    @pytest.mark.parametrize(
        "terms",
        [((0, 0),), ((1, 1), (0, 1)), ((1, 1), (1, 2))],
        ids=["zero-coef", "descending", "repeated"],
    )
    def test_rejects_bad_term_lists(self, terms):
        with pytest.raises(ValueError):
            LCNumber(terms)

    def test_terms_beyond_order_rejected(self):
        with pytest.raises(ValueError):
            LCNumber(((3, 1),), 2)

    def test_from_dict_drops_zeros(self):
        assert LCNumber.from_dict({2: 1, 0: 0, 1: -1}) == lc((1, -1), (2, 1))


class TestArithmetic:
    def test_addition_examples(self):
        assert (1 + d) + (1 - d) == embed_real(2)
        assert make_dq(F(1, 2)) + d == lc((F(1, 2), 1), (1, 1))

    @given(lc_numbers())
    def test_additive_inverse(self, x):
        assert (x + (-x)).is_zero

    def test_multiplication_examples(self):
        assert d * d == make_dq(2)
        assert (1 + d) * (1 - d) == 1 - make_dq(2)

    @given(lc_numbers())
    def test_multiplicative_identity(self, x):
        assert x * embed_real(1) == x

    @given(lc_numbers(), lc_numbers())
    def test_ops_match_naive_oracle(self, x, y):
        assert (x + y).as_dict() == naive_add(x, y)
        assert (x * y).as_dict() == naive_mul(x, y)

    def test_order_propagates_through_add(self):
        x = lc((0, 1), (1, 1), order=3)
        assert (x + d).order == 3

    def test_order_propagates_through_mul(self):
        # (1 + d + O(d^3)) * d^2 is known through d^5
        x = lc((0, 1), (1, 1), order=3)
        assert (x * make_dq(2)).order == 5

    def test_integer_power(self):
        assert (1 + d) ** 3 == 1 + 3 * d + 3 * make_dq(2) + make_dq(3)
        assert d**0 == ONE


class TestValuation:
    def test_lambda(self):
        assert lam(make_dq(F(3, 2))) == F(3, 2)
        assert lam(ZERO) == inf
        assert lam(5 + d) == 0

    def test_lambda_of_truncated_zero(self):
        with pytest.raises(IndeterminateZeroToOrder):
            lam(LCNumber((), 4))

    def test_valuation_norm(self):
        assert valuation_norm(make_dq(2)) == 2
        assert valuation_norm(ZERO) == inf

    @given(nonzero_lc, nonzero_lc)
    def test_lambda_is_additive(self, x, y):
        assert lam(x * y) == lam(x) + lam(y)

    @given(lc_numbers(), lc_numbers())
    def test_strong_triangle(self, x, y):
        assert lam(x + y) >= min(lam(x), lam(y))


class TestOrder:
    def test_compare_examples(self):
        assert compare(d, embed_real(F(1, 1000000))) is Ordering.LESS
        assert compare(2 + d, embed_real(2)) is Ordering.GREATER
        x = 3 - make_dq(F(1, 2))
        assert compare(x, x) is Ordering.EQUAL

    def test_truncated_values_can_be_indistinguishable(self):
        r = compare(lc((0, 1), order=2), lc((0, 1), order=3))
        assert r == IndistinguishableAtOrder(2)

    def test_sign_of_truncated_zero_raises(self):
        with pytest.raises(IndeterminateSign):
            sign(LCNumber((), 1))

    def test_abs(self):
        assert lc_abs(-d) == d
        assert lc_abs(ZERO) == ZERO
        assert lc_abs(3 - d) == 3 - d

    def test_min_max(self):
        assert lc_min(d, ONE) == d
        assert lc_max(d, ONE) == ONE

    def test_rich_comparisons(self):
        assert d < 1
        assert -d < 0 < d
        assert make_dq(-1) > 1000


class TestInverse:
    def test_geometric(self):
        r = inverse(1 - d, 3)
        assert r == lc((0, 1), (1, 1), (2, 1), (3, 1), order=3)
        # multiply-back oracle
        assert agree_up_to((1 - d) * r, ONE, 3)

    def test_monomials_and_reals(self):
        assert inverse(d) == make_dq(-1)
        assert inverse(embed_real(2)) == embed_real(F(1, 2))

    def test_zero(self):
        with pytest.raises(DivisionByZero):
            inverse(ZERO)
        with pytest.raises(IndeterminateZeroToOrder):
            inverse(LCNumber((), 3))

    @settings(max_examples=60)
    @given(nonzero_lc)
    def test_multiply_back(self, x):
        K = DEFAULT_ORDER
        prod = x * inverse(x, K)
        assert agree_up_to(prod, ONE, K + lam(x))

    def test_truncated_input_limits_order(self):
        x = lc((1, 1), (2, 1), order=5)
        assert inverse(x, 16).order == 3


class TestRoots:
    def test_monomials(self):
        assert nth_root(make_dq(2), 2) == d
        assert nth_root(d, 2) == make_dq(F(1, 2))

    def test_binomial_series(self):
        r = nth_root(1 + d, 2, 2)
        assert r == lc((0, 1), (1, F(1, 2)), (2, F(-1, 8)), order=2)
        assert agree_up_to(r * r, 1 + d, 2)

    def test_rational_leading_root(self):
        assert nth_root(embed_real(F(8, 27)), 3) == embed_real(F(2, 3))

    def test_errors(self):
        with pytest.raises(NonPositiveRadicand):
            nth_root(-1 + d, 2)
        with pytest.raises(NonPositiveRadicand):
            nth_root(ZERO, 2)
        with pytest.raises(LeadingCoefficientNotPerfectPower):
            nth_root(embed_real(2), 2)

    @settings(max_examples=40)
    @given(nonzero_lc)
    def test_square_root_of_square(self, x):
        if x.terms[0][1] < 0:
            x = -x
        r = nth_root(x * x, 2, 6)
        assert agree_up_to(r, x, 6)


class TestTruncation:
    def test_truncate(self):
        assert truncate(1 + d + make_dq(2), 1) == lc((0, 1), (1, 1), order=1)
        x = 3 * d + make_dq(2)
        assert truncate(x, lam(x)).terms == ((1, 3),)
        assert truncate(ZERO, 4) == LCNumber((), 4)

    def test_truncate_beyond_knowledge(self):
        with pytest.raises(TruncationBeyondKnowledge):
            truncate(lc((0, 1), order=2), 3)

    def test_cap_never_raises(self):
        x = lc((0, 1), order=2)
        assert cap(x, 3) is x

    def test_coefficient(self):
        x = 3 + 2 * d
        assert coefficient(x, 1) == 2
        assert coefficient(x, F(1, 2)) == 0
        assert coefficient(make_dq(F(5, 3)), F(5, 3)) == 1
        with pytest.raises(BeyondTruncation):
            coefficient(lc((0, 1), order=1), 2)


class TestMagnitude:
    def test_agree(self):
        assert agree_order(d, 2 * d) and not agree_leading(d, 2 * d)
        x = 3 * d
        assert agree_order(x, x + make_dq(2)) and agree_leading(x, x + make_dq(2))
        assert not agree_order(ONE, d) and not agree_leading(ONE, d)

    def test_zero_operand(self):
        with pytest.raises(ZeroOperand):
            agree_order(ZERO, d)

    def test_classify(self):
        assert classify_magnitude(make_dq(F(1, 2))) is Magnitude.INFINITESIMAL
        assert classify_magnitude(make_dq(-1)) is Magnitude.INFINITE
        assert classify_magnitude(7 + d) is Magnitude.FINITE


class TestRendering:
    @pytest.mark.parametrize(
        "x, text",
        [
            (ZERO, "0"),
            (1 - d + F(3, 2) * make_dq(2), "1 - d + 3/2*d^(2)"),
            (make_dq(F(1, 2)), "d^(1/2)"),
            (-make_dq(-1), "-d^(-1)"),
            (F(-2, 3) + d, "-2/3 + d"),
        ],
    )
    def test_render(self, x, text):
        assert render_number(x) == text
