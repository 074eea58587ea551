from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from tentlim.arcs import (
    Arc,
    arc_A,
    arc_at_depth,
    contains,
    salient_points,
    salient_position,
    verify_arc_lattice,
)
from tentlim.errors import AnchorAtFold, AnchorOutside, PreconditionError
from tentlim.folding import fold_table
from tentlim.tentmap import HALF, TentMap, fixed_point, iterate

F = Fraction


def test_arc_A_window():
    t = TentMap(F(3, 2))
    a = arc_A(t, 3, 2)
    assert a.depth == 5 and a.J == (F(3, 8), F(5, 8)) and a.anchor == F(3, 5)


def test_anchor_validation():
    with pytest.raises(AnchorOutside):
        Arc(depth=1, J=(F(0), F(1, 4)), anchor=F(1, 2))
    t = TentMap(F(3, 2))
    with pytest.raises(AnchorAtFold):
        arc_at_depth(t, Arc(depth=0, J=(F(1, 4), F(3, 4)), anchor=HALF), 1)


@given(st.sampled_from([F(3, 2), F(2), F(7, 4), F(8, 5)]), st.integers(1, 5), st.integers(0, 3), st.integers(0, 10))
def test_transport_round_trip(s, i, k, extra):
    t = TentMap(s)
    a = arc_A(t, i, k)
    b = arc_at_depth(t, a, a.depth + extra)
    table = fold_table(t, extra, b.J)
    assert (min(table.ys), max(table.ys)) == a.J
    assert iterate(t, b.anchor, extra) == a.anchor


def test_nesting_two_steps():
    t = TentMap(F(3, 2))
    for i in range(1, 10):
        assert contains(t, arc_A(t, i + 2), arc_A(t, i))


def test_contains_needs_common_anchor():
    t = TentMap(F(3, 2))
    other = Arc(depth=1, J=(F(3, 8), F(5, 8)), anchor=F(1, 2) + F(1, 100))
    with pytest.raises(PreconditionError):
        contains(t, arc_A(t, 1), other)


def test_salient_positions():
    t = TentMap(F(3, 2))
    assert salient_position(t, 3, 3) == HALF
    assert salient_position(t, 3, 1) == F(3, 8)  # c_2
    assert salient_position(t, 2, 3) == 1 - HALF / t.slope
    pts = salient_points(t, 4)
    assert [p.position_at(4) for p in pts] == [salient_position(t, i, 4) for i in range(1, 5)]


def test_salient_points_alternate_around_r():
    # read at one deep level, consecutive midpoints sit on opposite sides of r and move outward
    t = TentMap(F(7, 4))
    r = fixed_point(t)
    pos = [salient_position(t, i, 14) for i in range(1, 13)]
    for a, b, c in zip(pos, pos[1:], pos[2:]):
        assert (a - r) * (b - r) < 0
        assert abs(c - r) > abs(a - r)


@pytest.mark.parametrize("s", [F(3, 2), F(7, 4), F(8, 5), F(1501, 1000), F(143, 100)])
def test_lattice_passes(s):
    rep = verify_arc_lattice(TentMap(s), 20)
    assert rep.passed, rep.failures()[:3]
    assert not rep.degenerate


def test_lattice_wrong_kappa_is_caught():
    rep = verify_arc_lattice(TentMap(F(3, 2)), 20, kappa=5)
    assert not rep.passed


def test_slope_two_is_degenerate():
    # 1 - c2 = c1 at s = 2; the strict non-containment facts fail there
    rep = verify_arc_lattice(TentMap(F(2)), 8)
    assert rep.degenerate
    failed = {name for name, _ in rep.failures()}
    assert "kappa_gap" in failed and "nesting" not in failed
