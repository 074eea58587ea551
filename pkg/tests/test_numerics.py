from __future__ import annotations

import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from tentlim.errors import MalformedNumber, PrecisionExhausted, ZeroDenominator
from tentlim.numerics import (
    Interval,
    Ordering,
    compare,
    default_precision,
    parse_scalar,
    scalar_from_json,
    scalar_to_json,
    smin,
)

fractions = st.fractions(min_value=-10, max_value=10, max_denominator=10**6)


def test_parse_rationals_and_decimals():
    assert parse_scalar("3/2") == Fraction(3, 2)
    assert parse_scalar("2") == Fraction(2)
    assert parse_scalar("1.415") == Fraction(283, 200)
    assert parse_scalar(" -4/6 ") == Fraction(-2, 3)


def test_parse_errors():
    with pytest.raises(ZeroDenominator):
        parse_scalar("1/0")
    for bad in ("abc", "1//2", "", "sqrt(sqrt2)"):
        with pytest.raises(MalformedNumber):
            parse_scalar(bad)


def test_sqrt2_enclosure_width():
    x = parse_scalar("sqrt2", 64)
    assert isinstance(x, Interval)
    assert x.width <= Fraction(1, 2**64)
    assert x.lo * x.lo < 2 < x.hi * x.hi


def test_rational_square_root_is_exact():
    assert parse_scalar("sqrt(9/4)") == Fraction(3, 2)


def test_golden_ratio_encloses_phi():
    phi = parse_scalar("phi", 80)
    assert phi.lo < (1 + math.sqrt(5)) / 2 + 1e-15
    assert (phi * phi - phi - 1).contains(0)


def test_compare_examples():
    assert compare(Fraction(3, 2), Fraction(3, 2)) is Ordering.EQ
    assert compare(Fraction(1, 2), Fraction(3, 4)) is Ordering.LT
    with pytest.raises(PrecisionExhausted):
        compare(Interval(Fraction(141, 100), Fraction(142, 100), 64), Fraction(1415, 1000))


def test_point_intervals_compare_equal():
    x = Interval(Fraction(1, 2), Fraction(1, 2), 8)
    assert compare(x, Fraction(1, 2)) is Ordering.EQ


def test_division_by_interval_containing_zero():
    with pytest.raises(PrecisionExhausted):
        Fraction(1) / Interval(Fraction(-1, 4), Fraction(1, 4), 8)


@given(fractions, fractions)
def test_rational_arithmetic_is_exact(a, b):
    assert (a + b) - b == a
    assert compare(a, b) is Ordering(-compare(b, a))


@given(fractions, fractions, st.sampled_from(["add", "sub", "mul", "div"]))
def test_interval_arithmetic_encloses_truth(a, b, op):
    bits = 20
    ia, ib = Interval.enclose(a, a, bits), Interval.enclose(b, b, bits)
    if op == "div" and ib.contains(0):
        return
    truth = {"add": a + b, "sub": a - b, "mul": a * b, "div": a / b if b else None}[op]
    got = {"add": ia + ib, "sub": ia - ib, "mul": ia * ib, "div": ia / ib if op == "div" else None}[op]
    assert got.contains(truth)


@given(fractions, fractions)
def test_smin_encloses_min(a, b):
    m = smin(Interval.enclose(a, a, 16), b)
    assert m.contains(min(a, b))


@given(fractions)
def test_json_round_trip(x):
    assert scalar_from_json(scalar_to_json(x)) == x
    assert scalar_to_json(x) == f"{x.numerator}/{x.denominator}"


def test_interval_json_round_trip():
    x = parse_scalar("sqrt3", 40)
    y = scalar_from_json(scalar_to_json(x))
    assert y.same_as(x)


def test_precision_env(monkeypatch):
    monkeypatch.setenv("TENTLIM_PRECISION_BITS", "100")
    assert default_precision() == 100
    assert parse_scalar("sqrt2").bits == 100
    monkeypatch.setenv("TENTLIM_PRECISION_BITS", "3")
    with pytest.raises(MalformedNumber):
        default_precision()
