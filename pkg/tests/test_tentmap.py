from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from tentlim.errors import OutOfDomain, PrecisionExhausted, PreperiodicOrbit, SlopeOutOfRange
from tentlim.numerics import parse_scalar
from tentlim.tentmap import (
    HALF,
    TentMap,
    adjacent_level_pairs,
    critical_orbit,
    delta_bound,
    fixed_point,
    right_pullback,
    tent_eval,
)

slopes = st.fractions(min_value=Fraction(1415, 1000), max_value=2, max_denominator=500).filter(lambda s: s * s > 2)


def test_constants_for_three_halves():
    t = TentMap(Fraction(3, 2))
    assert (t.c1, t.c2, t.c2_hat, t.r) == (Fraction(3, 4), Fraction(3, 8), Fraction(5, 8), Fraction(3, 5))


def test_slope_range():
    with pytest.raises(SlopeOutOfRange):
        TentMap(Fraction(7, 5))
    with pytest.raises(SlopeOutOfRange):
        TentMap(Fraction(201, 100))
    with pytest.raises(SlopeOutOfRange):
        TentMap(parse_scalar("sqrt2"))
    TentMap(Fraction(2))


def test_eval_domain():
    t = TentMap(Fraction(2))
    assert tent_eval(t, HALF) == 1
    with pytest.raises(OutOfDomain):
        tent_eval(t, Fraction(3, 2))


def test_orbit_three_halves():
    orb = critical_orbit(TentMap(Fraction(3, 2)), 7)
    expect = ["3/4", "3/8", "9/16", "21/32", "33/64", "93/128", "105/256"]
    assert [f"{p.numerator}/{p.denominator}" for p in orb.points] == expect
    assert orb.kappa == 7 and not orb.preperiodic


def test_kappa_three_at_seven_quarters():
    assert critical_orbit(TentMap(Fraction(7, 4)), 5).kappa == 3


def test_slope_two_is_preperiodic():
    orb = critical_orbit(TentMap(Fraction(2)), 5)
    assert orb.preperiodic and orb.preperiodic_at == (2, 1)


@given(slopes)
def test_kappa_parity(s):
    k = critical_orbit(TentMap(s), 10).kappa
    assert k >= 3 and (k - 3) % 2 == 0


@given(slopes)
def test_fixed_point_and_pullback(s):
    t = TentMap(s)
    r = fixed_point(t)
    assert tent_eval(t, r) == r
    y = Fraction(1, 3)
    assert tent_eval(t, right_pullback(t, y)) == y


def test_delta_examples():
    d, cert = delta_bound(TentMap(Fraction(3, 2)), 20)
    assert d == Fraction(1, 6400) and cert.term == "|c-c_i|" and cert.index == 5
    d2, cert2 = delta_bound(TentMap(Fraction(2)), 5)
    assert d2 == Fraction(1, 600) and cert2.term == "|c-r|"


def test_delta_oracle_against_brute_force():
    # the adjacent-image gaps agree with a direct scan of T^n on a fine fold table
    from tentlim.folding import fold_table

    t = TentMap(Fraction(8, 5))
    N = 8
    d, _ = delta_bound(t, N)
    best = min([abs(HALF - p) for p in critical_orbit(t, N).points] + [abs(HALF - fixed_point(t))])
    for n in range(1, N + 1):
        table = fold_table(t, n, (Fraction(0), Fraction(1)))
        tp = table.turning_indices()
        for a, b in zip(tp, tp[1:]):
            gap = abs(table.ys[a] - table.ys[b])
            if table.ys[a] and table.ys[b]:
                best = min(best, gap)
    assert d == best / 100


def test_delta_golden_ratio_is_preperiodic():
    with pytest.raises((PreperiodicOrbit, PrecisionExhausted)):
        delta_bound(TentMap(parse_scalar("phi")), 10)


def test_adjacent_level_pairs_start():
    laps = adjacent_level_pairs(TentMap(Fraction(3, 2)), 3)
    assert laps[0] == {(0, 1), (1, 0)}
