from __future__ import annotations

from fractions import Fraction

import pytest

from oracles import palindromic_centres
from tentlim.arcs import arc_A
from tentlim.chains import (
    LinkSequence,
    _arc_walk,
    _expand,
    is_link_symmetric,
    link_sequence,
    natural_chain,
    smallest_k_below,
    verify_completeness,
)
from tentlim.errors import DepthTooShallow
from tentlim.tentmap import TentMap, fixed_point, iterate, HALF

F = Fraction


def test_chain_slope_two():
    ch = natural_chain(TentMap(F(2)), 1)
    assert ch.boundaries == (F(1, 4), F(1, 2), F(3, 4)) and ch.mesh == F(1, 4) and ch.n_links == 4


def test_chain_boundaries_are_preimages_of_c():
    t = TentMap(F(3, 2))
    ch = natural_chain(t, 4)
    for b in ch.boundaries:
        assert any(iterate(t, b, j) == HALF for j in range(5))


def test_chains_refine():
    t = TentMap(F(8, 5))
    for k in range(5):
        assert set(natural_chain(t, k).boundaries) <= set(natural_chain(t, k + 1).boundaries)


def test_link_sequence_of_A1():
    t = TentMap(F(2))
    ch = natural_chain(t, 1)
    seq = link_sequence(ch, t, arc_A(t, 1, 1))
    assert seq.indices == (1, 2, 3, 4, 3, 2, 1) and seq.is_palindrome()
    sym = is_link_symmetric(ch, t, arc_A(t, 1, 1))
    assert (sym.midlink, sym.midpoint, sym.level) == (4, HALF, 1)


def test_link_sequence_validation():
    with pytest.raises(ValueError):
        LinkSequence((1, 3))
    t = TentMap(F(3, 2))
    with pytest.raises(DepthTooShallow):
        link_sequence(natural_chain(t, 3), t, arc_A(t, 1, 0))


@pytest.mark.parametrize("s", [F(3, 2), F(2), F(7, 4), F(8, 5)])
def test_enumeration_matches_brute_force(s):
    t = TentMap(s)
    for k in range(4):
        D = k + 8
        rep = verify_completeness(t, k, D)
        ch = natural_chain(t, k)
        seq = _expand(_arc_walk(ch, t, arc_A(t, D - k, k)))
        assert len(seq) == rep.visits
        assert seq[rep.rho_visit] == ch.link_range(fixed_point(t))[0]
        assert {(e["center_visit"], e["radius"]) for e in rep.entries} == palindromic_centres(seq, rep.rho_visit)


@pytest.mark.parametrize("s", [F(3, 2), F(7, 4), F(8, 5)])
def test_completeness_small_k(s):
    t = TentMap(s)
    for k in (2, 4):
        assert verify_completeness(t, k, k + 10).passed


def test_completeness_negative_control():
    t = TentMap(F(3, 2))
    assert not verify_completeness(t, 4, 14, midpoint_indices=[1]).passed


def test_smallest_k_below():
    t = TentMap(F(2))
    ch = smallest_k_below(t, F(1, 100))
    assert ch.mesh < F(1, 100) <= natural_chain(t, ch.k - 1).mesh
