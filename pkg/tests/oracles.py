"""Independent brute-force oracles shared by the tests."""

from __future__ import annotations

from fractions import Fraction

import numpy as np


def sample_pl(values, per_segment: int) -> np.ndarray:
    """Values of a PL curve sampled uniformly in parameter, vertices included."""
    v = np.asarray([float(x) for x in values])
    if len(v) == 1:
        return v
    u = np.arange(per_segment) / per_segment
    pts = (v[:-1, None] + (v[1:, None] - v[:-1, None]) * u[None, :]).ravel()
    return np.append(pts, v[-1])


def discrete_frechet_leq(a: np.ndarray, b: np.ndarray, eps: float) -> bool:
    """Discrete Frechet decision on dense samples, swept along anti-diagonals."""
    n, m = len(a), len(b)
    free = np.abs(a[:, None] - b[None, :]) <= eps
    reach = np.zeros((n, m), dtype=bool)
    reach[0, 0] = free[0, 0]
    for s in range(1, n + m - 1):
        i = np.arange(max(0, s - m + 1), min(n, s + 1))
        j = s - i
        prev = np.zeros(len(i), dtype=bool)
        ok = i > 0
        prev[ok] |= reach[i[ok] - 1, j[ok]]
        ok = j > 0
        prev[ok] |= reach[i[ok], j[ok] - 1]
        ok = (i > 0) & (j > 0)
        prev[ok] |= reach[i[ok] - 1, j[ok] - 1]
        reach[i, j] = prev & free[i, j]
    return bool(reach[-1, -1])


def grid_matcher(fv, gv, eps: float, max_points: int = 20000) -> bool:
    """Dense-grid matcher for "continuous distance <= eps".

    Discrete Frechet on the samples lies between the continuous distance d and d + h, with h
    the largest jump between consecutive samples. A discrete "yes" at eps proves d <= eps and
    a discrete "no" at eps + h proves d > eps; otherwise the grid is refined fourfold.
    """
    per = 16
    while True:
        a, b = sample_pl(fv, per), sample_pl(gv, per)
        if discrete_frechet_leq(a, b, eps):
            return True
        h = max(np.abs(np.diff(a)).max(initial=0.0), np.abs(np.diff(b)).max(initial=0.0))
        if not discrete_frechet_leq(a, b, eps + h):
            return False
        if (len(fv) + len(gv)) * per * 4 > max_points:
            return False
        per *= 4


def palindromic_centres(seq, v: int) -> set:
    """(centre, radius) of every maximal palindrome of radius >= 1 whose span covers index v."""
    out = set()
    n = len(seq)
    for c in range(1, n - 1):
        rad = 0
        while c - rad - 1 >= 0 and c + rad + 1 < n and seq[c - rad - 1] == seq[c + rad + 1]:
            rad += 1
        if rad >= 1 and abs(v - c) <= rad:
            out.add((c, rad))
    return out


def sign_change_turning_points(slope: Fraction, n: int, lo: float, hi: float, step: float = 1e-6):
    """Approximate turning points of T^n on [lo, hi] from slope sign changes on a fine grid."""
    s = float(slope)
    x = np.arange(lo, hi + step / 2, step)
    y = x.copy()
    for _ in range(n):
        y = np.minimum(s * y, s * (1 - y))
    d = np.sign(np.diff(y))
    idx = np.nonzero(d[1:] != d[:-1])[0] + 1
    return x[idx]
