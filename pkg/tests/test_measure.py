from fractions import Fraction as F

import pytest

from levicivita.core import ONE, ZERO, cap, embed_real, inverse, make_dq, truncate
from levicivita.dsl import parse_set
from levicivita.errors import CertificateViolation, MissingCertificate, NotEvaluable
from levicivita.measure import (
    No,
    NotOuterMeasurable,
    Undecided,
    Unknown,
    Value,
    Yes,
    caratheodory_check,
    continuity_intersection,
    continuity_union,
    equal_at,
    is_L_measurable,
    lebesgue_measure,
    measure_inclusion_exclusion,
    outer_measure,
    subadditivity_check,
)
from levicivita.patterns import build
from levicivita.sets import CertifiedCountableIntersect, CertifiedCountableUnion, Empty, Single
from levicivita.intervals import Interval

d = make_dq(1)
C_TEXT = "union(n, (d^((n-1)/n), 2*d^((n-1)/n)))"


def M(text, K=16):
    return outer_measure(parse_set(text), K)


def value_of(text, K=16):
    r = M(text, K)
    assert isinstance(r, Value), r.render()
    return r.value


def geo_oracle(K):
    return truncate(d * inverse(1 - d, K), K)


class TestOuterMeasure:
    def test_interval(self):
        assert value_of("[0,1]") == cap(ONE, 16)

    def test_dense_family(self):
        assert value_of("T([0,1])") == cap(ONE, 16)
        assert value_of("S([0,1]) & [0,1/3]") == cap(embed_real(F(1, 3)), 16)

    def test_set_c(self):
        r = M(C_TEXT)
        assert isinstance(r, NotOuterMeasurable)
        assert "valuation <= 1" in r.witness

    def test_geometric_union(self):
        assert value_of("union(n, [1/n, 1/n+d^n])", 6) == geo_oracle(6)

    def test_counterexample_intersection(self):
        r = M(f"let C = {C_TEXT}; (T([0,1]) | C) & (S([0,1]) | C)")
        assert isinstance(r, (NotOuterMeasurable, Undecided))
        assert any("reduces to C" in line for line in r.trace)

    def test_points_are_null(self):
        assert value_of("Q([0,1])") == cap(ZERO, 16)
        assert value_of(r"[0,1] \ Q([0,1])") == cap(ONE, 16)

    def test_unbounded_is_undecided(self):
        assert isinstance(M("union(n, [n, n+d^n])", 4), Value)
        assert isinstance(M("(-inf, 0] | [1,2]"), Undecided)

    def test_uncertified_family_without_closed_form(self):
        fam = CertifiedCountableUnion(lambda n: Single(Interval(ZERO, ONE)), None, "bare")
        assert isinstance(outer_measure(fam), Undecided)

    def test_decreasing_intersection(self):
        assert value_of("intersect(n, [0, 1+d^n])", 8) == cap(ONE, 8)

    def test_tail_removed(self):
        # [0,1] \ U I_n: the limit of 1 - (d + ... + d^N)
        got = value_of(r"[0,1] \ union(n, [1/n, 1/n+d^n])", 6)
        assert got == cap(1 - geo_oracle(6) + d, 6)  # I_1 = [1, 1+d] meets [0,1] only at 1


class TestLMeasurable:
    def test_points(self):
        r = is_L_measurable(parse_set("Q([0,1])"))
        assert isinstance(r, Yes) and r.measure == cap(ZERO, 16)

    def test_dense_is_not(self):
        r = is_L_measurable(parse_set("T([0,1])"))
        assert isinstance(r, No)
        assert r.witness.startswith("B = [0, 1]") and r.witness.endswith("1 + 1")

    def test_complement_of_rationals(self):
        r = is_L_measurable(parse_set(r"[0,1] \ Q([0,1])"))
        assert isinstance(r, Yes) and r.measure == cap(ONE, 16)

    def test_dense_union_fills(self):
        r = is_L_measurable(parse_set("T([0,1]) | S([0,1])"))
        assert isinstance(r, Yes)

    def test_set_c(self):
        assert isinstance(is_L_measurable(parse_set(C_TEXT)), No)

    def test_unknown(self):
        r = is_L_measurable(parse_set("T([0,1]) | union(n, [1/n, 1/n+d^n])"))
        assert isinstance(r, Unknown)


class TestCaratheodory:
    def test_examples(self):
        unit = parse_set("[0,1]")
        assert caratheodory_check(parse_set("Q([0,1])"), unit)
        assert caratheodory_check(parse_set("[0,1/2]"), unit)
        r = caratheodory_check(parse_set("T([0,1])"), unit)
        assert not r and r.m_b == cap(ONE, 16) and r.m_in + r.m_out == cap(embed_real(2), 16)

    def test_not_evaluable(self):
        with pytest.raises(NotEvaluable):
            caratheodory_check(parse_set("[0,1]"), parse_set(C_TEXT))


class TestIdentities:
    def test_inclusion_exclusion(self):
        lhs, rhs = measure_inclusion_exclusion(parse_set("[0,2]"), parse_set("[1,3]"))
        assert lhs == rhs == cap(embed_real(3), 16)
        lhs, _ = measure_inclusion_exclusion(parse_set("[0,1]"), parse_set("[2,3]"))
        assert lhs == cap(embed_real(2), 16)
        lhs, _ = measure_inclusion_exclusion(parse_set("[0,1]"), parse_set("[0,3]"))
        assert lhs == cap(embed_real(3), 16)

    def test_lebesgue_measure_rejects_non_measurable(self):
        with pytest.raises(NotEvaluable):
            lebesgue_measure(parse_set("T([0,1])"))

    def test_subadditivity(self):
        s = parse_set
        assert subadditivity_check(s("[0,1]"), s("[0,1]"), s("[0,1]"))
        assert subadditivity_check(s("[0,1]"), s("[0,1/2]"), s("[1/2,1]"))
        assert subadditivity_check(s("Q([0,1])"), Empty(), s("[0,1]"))
        assert not subadditivity_check(s("[0,2]"), s("[0,1/2]"), s("[1/2,1]"))


class TestContinuity:
    unit = parse_set("[0,1]")

    def test_nested_nulls(self):
        r = continuity_union(build("union", "[0, d^n]"), self.unit, 12)
        assert r.holds and r.lhs == cap(d, 12)

    def test_decreasing_to_unit(self):
        r = continuity_intersection(build("intersect", "[0, 1+d^n]"), parse_set("[0,2]"), 12)
        assert r.holds and r.lhs == cap(ONE, 12)

    def test_constant_families(self):
        one = CertifiedCountableUnion(lambda n: self.unit, build("union", "[0, d^n]").decay, "const", self.unit)
        assert continuity_union(one, self.unit, 8).holds
        cap_ = CertifiedCountableIntersect(lambda n: self.unit, build("union", "[0, d^n]").decay, "const", self.unit)
        assert continuity_intersection(cap_, self.unit, 8).holds

    def test_divergent_families(self):
        with pytest.raises(CertificateViolation):
            continuity_union(build("union", "[0, 1-1/n] ++ [1-d^(1/n), 1]"), self.unit, 12)
        with pytest.raises(CertificateViolation):
            continuity_intersection(build("intersect", "(d^(1/n), 1/n)"), self.unit, 12)

    def test_missing_certificate(self):
        fam = CertifiedCountableUnion(lambda n: self.unit, None, "still")
        with pytest.raises(MissingCertificate):
            continuity_union(fam, self.unit, 4)


def test_equal_at():
    assert equal_at(1 + make_dq(5), ONE, 4)
    assert not equal_at(1 + make_dq(3), ONE, 4)
