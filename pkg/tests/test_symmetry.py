from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from tentlim.errors import CenterOutside, NotFound, PreconditionError
from tentlim.folding import PLFunction, pl_restrict
from tentlim.symmetry import (
    core_branches,
    frechet_1d,
    frechet_less,
    frechet_values,
    is_eps_close,
    is_eps_symmetric,
    verify_lemma12,
    verify_no_symmetry,
)
from tentlim.tentmap import HALF, TentMap

F = Fraction
values = st.lists(st.fractions(min_value=0, max_value=1, max_denominator=50), min_size=1, max_size=7)


def _pl(vals) -> PLFunction:
    return PLFunction(tuple(F(j, max(1, len(vals))) for j in range(len(vals))), tuple(vals))


def _brute_candidates(fv, gv):
    out = {F(0)}
    out |= {abs(a - b) for a in fv for b in gv}
    for seq in (fv, gv):
        out |= {abs(a - b) / 2 for a in seq for b in seq}
    return sorted(out)


def test_trivial_distances():
    f = _pl([F(0), F(1), F(0)])
    assert frechet_1d(f, f) == 0
    assert frechet_1d(_pl([F(0), F(0)]), _pl([F(1), F(1)])) == 1


def test_classic_one_dimensional_example():
    # a monotone curve against one with a back-and-forth excursion: the excursion costs half its depth
    assert frechet_values([F(0), F(1)], [F(0), F(3, 4), F(1, 4), F(1)]) == F(1, 4)


@settings(max_examples=150, deadline=None)
@given(values, values)
def test_distance_is_symmetric_and_a_candidate(fv, gv):
    d = frechet_values(fv, gv)
    assert d == frechet_values(gv, fv)
    assert d in _brute_candidates(fv, gv)


@settings(max_examples=80, deadline=None)
@given(values, values, values)
def test_triangle_inequality(a, b, c):
    assert frechet_values(a, c) <= frechet_values(a, b) + frechet_values(b, c)


@settings(max_examples=80, deadline=None)
@given(values, values, st.fractions(min_value=0, max_value=1, max_denominator=64))
def test_monotone_in_eps(fv, gv, eps):
    if frechet_less(fv, gv, eps):
        assert frechet_less(fv, gv, eps + F(1, 1000))
    assert frechet_less(fv, gv, eps) == (frechet_values(fv, gv) < eps)


def test_full_tent_is_mirror_symmetric():
    f = pl_restrict(TentMap(F(2)), 1, (F(0), F(1)))
    res = is_eps_symmetric(f, F(1, 10**6), center=HALF)
    assert res.close and res.matching is not None and res.margin < 0


def test_increasing_function_is_not_symmetric():
    f = _pl([F(0), F(1, 3), F(1)])
    res = is_eps_symmetric(f, F(1, 2))
    assert not res.close and res.matching is None and res.margin >= 0


def test_center_must_be_inside():
    f = _pl([F(0), F(1)])
    with pytest.raises(CenterOutside):
        is_eps_symmetric(f, F(1, 10), center=F(2))


def test_symmetric_windows_around_c():
    for s in (F(3, 2), F(8, 5)):
        t = TentMap(s)
        for n in range(1, 7):
            f = pl_restrict(t, n, (F(2, 5), F(3, 5)))
            assert is_eps_symmetric(f, F(1, 10**9), center=HALF).close


def test_asymmetric_window_not_symmetric_off_center():
    t = TentMap(F(3, 2))
    f = pl_restrict(t, 3, (F(3, 8), F(3, 4)))
    assert not is_eps_symmetric(f, F(1, 1000), center=F(9, 16)).close


def test_closeness_is_symmetric_and_reflexive():
    rng = random.Random(3)
    for _ in range(40):
        f = _pl([F(rng.randint(0, 20), 20) for _ in range(rng.randint(1, 6))])
        g = _pl([F(rng.randint(0, 20), 20) for _ in range(rng.randint(1, 6))])
        eps = F(rng.randint(1, 20), 40)
        assert is_eps_close(f, g, eps).close == is_eps_close(g, f, eps).close
        assert is_eps_close(f, f, F(1, 10**9)).close


def test_witness_is_within_eps():
    f = _pl([F(0), F(1), F(1, 5), F(4, 5), F(0)])
    g = _pl([F(0), F(9, 10), F(0)])
    res = is_eps_close(f, g, F(1, 2))
    assert res.close
    (x0, y0), (x1, y1) = res.matching[0], res.matching[-1]
    assert (x0, x1) == f.domain and {y0, y1} <= set(g.domain)


def test_more_folds_are_not_close():
    t = TentMap(F(3, 2))
    f = pl_restrict(t, 4, t.core)
    g = pl_restrict(t, 4, (F(1, 2), F(9, 16)))
    assert not is_eps_close(f, g, F(1, 1000)).close


def test_lemma12_examples():
    t = TentMap(F(3, 2))
    eps = F(1, 6400)
    assert verify_lemma12(t, eps, 2, 2, t.core) == (0, t.core)
    for branch in core_branches(t, 2):
        assert verify_lemma12(t, eps, 0, 2, branch) == (2, branch)
    with pytest.raises(PreconditionError):
        verify_lemma12(t, eps, 1, 2, (F(1, 2), F(9, 16)))


def test_core_branches_cover_the_core():
    t = TentMap(F(3, 2))
    for k in range(1, 5):
        for lo, hi in core_branches(t, k):
            ends = {pl_restrict(t, k, (lo, hi)).values[0], pl_restrict(t, k, (lo, hi)).values[-1]}
            assert ends == set(t.core)


def test_no_symmetry_small_grid():
    t = TentMap(F(3, 2))
    eps, rep = verify_no_symmetry(t, F(1, 6400), 5, 24)
    assert eps > 0 and not rep.violations and rep.configs > 0
    assert rep.to_json()["ladder"][-1]["violations"] == 0
