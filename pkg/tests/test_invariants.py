from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from tentlim.folding import is_symmetric_pattern, k_pattern
from tentlim.invariants import Pattern, count_levels, distinguish, invariant_sequence
from tentlim.tentmap import HALF, TentMap, right_pullback

F = Fraction


def test_base_case():
    for s in (F(3, 2), F(7, 4), F(2)):
        seq = invariant_sequence(TentMap(s), 4)
        assert seq.entry(2).pattern.levels == (1, 2)
        assert seq.entry(3).pattern.levels == (2, 1, 3)


def test_side_bits_three_halves():
    seq = invariant_sequence(TentMap(F(3, 2)), 7)
    assert [seq.entry(n).side for n in range(3, 8)] == [True, True, True, True, False]


def test_recurrence_cross_checked():
    seq = invariant_sequence(TentMap(F(3, 2)), 15)
    assert all(e.checked for e in seq.entries)


def test_long_patterns_use_fingerprints():
    seq = invariant_sequence(TentMap(F(2)), 22, cross_check_limit=0)
    last = seq.entry(22).pattern
    assert not last.explicit and last.length > 2**16
    assert seq.to_json()["entries"][-1]["pattern"]["length"] == last.length


def test_fingerprint_agrees_with_explicit():
    levels = (3, 1, 2, 1, 4)
    a = Pattern.of(levels)
    b = Pattern.of(levels[:2]) + Pattern.of(levels[2:])
    assert a.same(b) and (a.h1, a.h2) == (b.h1, b.h2)
    assert not a.same(Pattern.of((3, 1, 2, 4, 1)))


def test_distinguish_examples():
    assert distinguish(F(3, 2), F(3, 2), 40) is None
    n, reason = distinguish(F(3, 2), F(7, 4), 40)
    assert n <= 40 and reason in ("pattern-mismatch", "side-mismatch")
    assert distinguish(F(7, 4), F(3, 2), 40) == (n, reason)


@settings(max_examples=25, deadline=None)
@given(st.fractions(min_value=F(1415, 1000), max_value=2, max_denominator=200).filter(lambda s: s * s > 2))
def test_self_identity(s):
    assert distinguish(s, s, 30) is None


def test_count_levels_examples():
    t = TentMap(F(3, 2))
    for K in range(2, 8):
        assert count_levels(t, K - 1, K, closed=True) == 1
        assert count_levels(t, K, K + 2) == 0


def test_count_levels_shift_identity():
    for s in (F(3, 2), F(8, 5), F(7, 4)):
        t = TentMap(s)
        for K in range(1, 10):
            for n in range(1, K + 2):
                assert count_levels(t, K, n) == count_levels(t, K + 1, n + 1)


def test_count_levels_against_direct_extraction():
    t = TentMap(F(8, 5))
    for K in range(1, 9):
        pattern = k_pattern(t, K + 1, (HALF, right_pullback(t, HALF)))
        half_open = pattern[1:]  # positional order starts at c = m_(K+1), which is excluded
        for n in range(1, K + 3):
            assert count_levels(t, K, n) == half_open.count(n)


def test_patterns_never_symmetric():
    seq = invariant_sequence(TentMap(F(8, 5)), 12)
    assert not any(is_symmetric_pattern(e.pattern.levels) for e in seq.entries)


@pytest.mark.parametrize("s", [F(3, 2), F(2)])
def test_json_shape(s):
    doc = invariant_sequence(TentMap(s), 5).to_json()
    assert doc["entries"][0] == {"n": 2, "pattern": [1, 2], "side": False}
