"""Exact arithmetic in the Levi-Civita field, a set algebra over it, and
the S-, outer and Lebesgue-like measures of representable sets."""

from levicivita._kernels import BACKEND
from levicivita.core import (
    DEFAULT_ORDER,
    INF,
    LCNumber,
    Magnitude,
    Ordering,
    agree_leading,
    agree_order,
    agree_up_to,
    classify_magnitude,
    coefficient,
    compare,
    embed_real,
    inverse,
    lam,
    make_dq,
    nth_root,
    render_number,
    sign,
    truncate,
)
from levicivita.derive import derivative_demo
from levicivita.dsl import parse_interval, parse_number, parse_set, render_set
from levicivita.intervals import Interval, IntervalSeq, length, refine
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
    is_L_measurable,
    lebesgue_measure,
    measure_inclusion_exclusion,
    outer_measure,
)
from levicivita.series import DecayCertificate, TermGenerator, check_cauchy_prefix, limit_sequence, sum_series
from levicivita.smeasure import decompose, derive_covers, s_measure

__version__ = "0.1.0"

__all__ = [
    "agree_leading",
    "agree_order",
    "agree_up_to",
    "BACKEND",
    "caratheodory_check",
    "check_cauchy_prefix",
    "classify_magnitude",
    "coefficient",
    "compare",
    "continuity_intersection",
    "continuity_union",
    "DecayCertificate",
    "decompose",
    "DEFAULT_ORDER",
    "derivative_demo",
    "derive_covers",
    "embed_real",
    "INF",
    "Interval",
    "IntervalSeq",
    "inverse",
    "is_L_measurable",
    "lam",
    "LCNumber",
    "lebesgue_measure",
    "length",
    "limit_sequence",
    "Magnitude",
    "make_dq",
    "measure_inclusion_exclusion",
    "No",
    "NotOuterMeasurable",
    "nth_root",
    "Ordering",
    "outer_measure",
    "parse_interval",
    "parse_number",
    "parse_set",
    "refine",
    "render_number",
    "render_set",
    "s_measure",
    "sign",
    "sum_series",
    "TermGenerator",
    "truncate",
    "Undecided",
    "Unknown",
    "Value",
    "Yes",
]
