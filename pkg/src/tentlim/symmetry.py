"""epsilon-symmetry and epsilon-closeness of piecewise-linear graphs.

Both notions ask for a homeomorphism h with sup |f - g o h| < eps, which for
PL inputs is the Frechet distance between the two value sequences viewed as
curves in R. The decision procedure is the classical free-space reachability
over breakpoint cells; in one dimension every cell's free space is convex, and
the distance is one of the critical values

    0, |f_a - g_b|, |f_a - f_b| / 2, |g_a - g_b| / 2.

Exact answers come from Fractions. A float pass narrows the candidate list
first, and only the few candidates near the float estimate are decided
exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .errors import CenterOutside, NoEpsilonFound, NotFound, PreconditionError
from .folding import PLFunction, fold_table, pl_restrict
from .numerics import ExactScalar, Ordering, compare, scalar_to_json
from .tentmap import HALF, TentMap, orbit_points

# -- free-space decision ----------------------------------------------------


def _free(v, g0, g1, eps):
    """Local parameters u in [0, 1] with |v - (g0 + u (g1 - g0))| <= eps, or None."""
    dg = g1 - g0
    if dg == 0:
        return (0, 1) if abs(v - g0) <= eps else None
    u0 = (v - eps - g0) / dg
    u1 = (v + eps - g0) / dg
    if u0 > u1:
        u0, u1 = u1, u0
    lo = u0 if u0 > 0 else 0
    hi = u1 if u1 < 1 else 1
    if lo > hi:
        return None
    return (lo, hi)


def _reach(fv: Sequence, gv: Sequence, eps, keep: bool = False):
    """Free-space reachability. Returns (reachable, tables) where tables are kept on request.

    LR[a][b] is the reachable part of the left edge of cell (a, b) (local t in
    [0, 1]); BR[a][b] is the reachable part of its bottom edge (local s).
    """
    p, q = len(fv) - 1, len(gv) - 1
    if abs(fv[0] - gv[0]) > eps or abs(fv[-1] - gv[-1]) > eps:
        return False, None
    if p == 0:
        return all(abs(fv[0] - g) <= eps for g in gv), None
    if q == 0:
        return all(abs(f - gv[0]) <= eps for f in fv), None
    # bottom row of reachable bottom edges (t = 0)
    BR = [None] * p
    ok = True
    for a in range(p):
        iv = _free(gv[0], fv[a], fv[a + 1], eps) if ok else None
        # same formula with roles swapped: s such that |F(s) - g_0| <= eps
        if iv is not None and iv[0] == 0:
            BR[a] = iv
            ok = iv[1] == 1
        else:
            ok = False
    rowsL = [] if keep else None
    rowsB = [list(BR)] if keep else None
    lrow_prev_top = None
    for b in range(q):
        LR = [None] * (p + 1)
        iv = _free(fv[0], gv[b], gv[b + 1], eps)
        if b == 0:
            LR[0] = iv if iv is not None and iv[0] == 0 else None
        else:
            LR[0] = iv if (lrow_prev_top and iv is not None and iv[0] == 0) else None
        lrow_prev_top = LR[0] is not None and LR[0][1] == 1
        newB = [None] * p
        for a in range(p):
            left, bottom = LR[a], BR[a]
            right_free = _free(fv[a + 1], gv[b], gv[b + 1], eps)
            top_free = _free(gv[b + 1], fv[a], fv[a + 1], eps)
            if right_free is not None:
                if bottom is not None:
                    LR[a + 1] = right_free
                elif left is not None:
                    lo = right_free[0] if right_free[0] > left[0] else left[0]
                    LR[a + 1] = (lo, right_free[1]) if lo <= right_free[1] else None
            if top_free is not None:
                if left is not None:
                    newB[a] = top_free
                elif bottom is not None:
                    lo = top_free[0] if top_free[0] > bottom[0] else bottom[0]
                    newB[a] = (lo, top_free[1]) if lo <= top_free[1] else None
        if keep:
            rowsL.append(LR)
            rowsB.append(newB)
        BR = newB
        last_left = LR
    corner = (last_left[p] is not None and last_left[p][1] == 1) or (BR[p - 1] is not None and BR[p - 1][1] == 1)
    return corner, ((rowsL, rowsB) if keep else None)


def frechet_decide(fv: Sequence, gv: Sequence, eps) -> bool:
    """Is the Frechet distance of the two value sequences <= eps?"""
    return _reach(fv, gv, eps)[0]


def _candidates(fv: Sequence, gv: Sequence) -> list:
    vals = {Fraction(0)} if not isinstance(fv[0], float) else {0.0}
    for f in fv:
        for g in gv:
            vals.add(abs(f - g))
    for seq in (fv, gv):
        for a in range(len(seq)):
            for b in range(a + 1, len(seq)):
                vals.add(abs(seq[a] - seq[b]) / 2)
    return sorted(vals)


def _float_candidates(fv: np.ndarray, gv: np.ndarray) -> np.ndarray:
    parts = [np.zeros(1), np.abs(fv[:, None] - gv[None, :]).ravel()]
    for seq in (fv, gv):
        iu = np.triu_indices(len(seq), 1)
        parts.append(np.abs(seq[iu[0]] - seq[iu[1]]) / 2)
    return np.unique(np.concatenate(parts))


def _float_distance(ff: list, gf: list) -> float:
    cands = _float_candidates(np.asarray(ff), np.asarray(gf))
    lo, hi = 0, len(cands) - 1
    while lo < hi:
        mid = (lo + hi) // 2
        if _reach(ff, gf, float(cands[mid]))[0]:
            hi = mid
        else:
            lo = mid + 1
    return float(cands[lo])


FLOAT_SLACK = 1e-12


def frechet_values(fv: Sequence, gv: Sequence) -> ExactScalar:
    """Exact Frechet distance between two value sequences."""
    fv, gv = list(fv), list(gv)
    ff, gf = [float(x) for x in fv], [float(x) for x in gv]
    est = _float_distance(ff, gf)
    near = _near_candidates(fv, gv, est)
    if near:
        # the answer is the smallest near candidate that decides true, provided the
        # candidate just below the window decides false
        for cand in near:
            if frechet_decide(fv, gv, cand):
                below = _largest_candidate_below(fv, gv, cand)
                if below is None or not frechet_decide(fv, gv, below):
                    return cand
                break
    cands = _candidates(fv, gv)
    lo, hi = 0, len(cands) - 1
    while lo < hi:
        mid = (lo + hi) // 2
        if frechet_decide(fv, gv, cands[mid]):
            hi = mid
        else:
            lo = mid + 1
    return cands[lo]


def _near_candidates(fv, gv, est: float) -> list:
    lo, hi = est - FLOAT_SLACK, est + FLOAT_SLACK
    out = set()
    if lo <= 0 <= hi:
        out.add(Fraction(0))
    ff, gf = [float(x) for x in fv], [float(x) for x in gv]
    for f, fl_f in zip(fv, ff):
        for g, fl_g in zip(gv, gf):
            if lo <= abs(fl_f - fl_g) <= hi:
                out.add(abs(f - g))
    for seq in (fv, gv):
        fl = [float(x) for x in seq]
        for a in range(len(seq)):
            for b in range(a + 1, len(seq)):
                if lo <= abs(fl[a] - fl[b]) / 2 <= hi:
                    out.add(abs(seq[a] - seq[b]) / 2)
    return sorted(out)


def _largest_candidate_below(fv, gv, x) -> Optional[ExactScalar]:
    best = None
    xf = float(x)

    def consider(d):
        nonlocal best
        if d < x and (best is None or d > best):
            best = d

    if x > 0:
        consider(Fraction(0))
    # exact values are only formed for candidates within float reach of x
    ff, gf = [float(v) for v in fv], [float(v) for v in gv]
    for f, fl_f in zip(fv, ff):
        for g, fl_g in zip(gv, gf):
            dfl = abs(fl_f - fl_g)
            if dfl <= xf + FLOAT_SLACK and (best is None or dfl >= float(best) - FLOAT_SLACK):
                consider(abs(f - g))
    for seq, fl in ((fv, ff), (gv, gf)):
        for a in range(len(seq)):
            for b in range(a + 1, len(seq)):
                dfl = abs(fl[a] - fl[b]) / 2
                if dfl <= xf + FLOAT_SLACK and (best is None or dfl >= float(best) - FLOAT_SLACK):
                    consider(abs(seq[a] - seq[b]) / 2)
    return best


def frechet_less(fv: Sequence, gv: Sequence, eps) -> bool:
    """Exact test of distance < eps (the strict inequality the definitions ask for)."""
    fv, gv = list(fv), list(gv)
    if abs(fv[0] - gv[0]) >= eps or abs(fv[-1] - gv[-1]) >= eps:
        return False
    if not frechet_decide(fv, gv, eps):
        return False
    below = _largest_candidate_below(fv, gv, eps)
    if below is None:
        return False
    # distance <= eps; it equals eps only if eps is itself the distance
    if _is_candidate(fv, gv, eps):
        return frechet_decide(fv, gv, below)
    return True


def _is_candidate(fv, gv, x) -> bool:
    if x == 0:
        return True
    for f in fv:
        for g in gv:
            if abs(f - g) == x:
                return True
    for seq in (fv, gv):
        for a in range(len(seq)):
            for b in range(a + 1, len(seq)):
                if abs(seq[a] - seq[b]) == 2 * x:
                    return True
    return False


def frechet_1d(f: PLFunction, g: PLFunction) -> ExactScalar:
    """inf over increasing homeomorphisms h of sup |f - g o h|."""
    return frechet_values(f.values, g.values)


# -- witnesses --------------------------------------------------------------


def _witness_path(fv: Sequence, gv: Sequence, eps) -> Optional[list[tuple]]:
    """A monotone path through the free space at level eps, in (s, t) vertex coordinates."""
    p, q = len(fv) - 1, len(gv) - 1
    if p == 0 or q == 0:
        if not frechet_decide(fv, gv, eps):
            return None
        return [(0, 0), (p, q)]
    ok, tables = _reach(fv, gv, eps, keep=True)
    if not ok:
        return None
    rowsL, rowsB = tables
    path = [(Fraction(p), Fraction(q))]
    a, b = p - 1, q - 1
    s_cur, t_cur = Fraction(p), Fraction(q)
    while (a, b) != (-1, -1) and not (s_cur == 0 and t_cur == 0):
        left = rowsL[b][a] if b >= 0 and a >= 0 else None
        bottom = rowsB[b][a] if b >= 0 and a >= 0 else None
        # prefer the bottom edge, then the left edge, keeping the path monotone
        if bottom is not None and a + bottom[0] <= s_cur:
            s_new = a + min(bottom[1], s_cur - a)
            s_new = max(s_new, a + bottom[0])
            s_new = Fraction(a) + Fraction(bottom[0]) if s_new < a + bottom[0] else Fraction(s_new)
            t_new = Fraction(b)
            path.append((s_new, t_new))
            s_cur, t_cur = s_new, t_new
            b -= 1
        elif left is not None and b + left[0] <= t_cur:
            t_new = Fraction(b) + Fraction(max(left[0], min(left[1], t_cur - b)))
            s_new = Fraction(a)
            path.append((s_new, t_new))
            s_cur, t_cur = s_new, t_new
            a -= 1
        else:
            return None
        if a < 0 and b >= 0:
            path.append((Fraction(0), Fraction(0)))
            break
        if b < 0 and a >= 0:
            path.append((Fraction(0), Fraction(0)))
            break
    if path[-1] != (0, 0):
        path.append((Fraction(0), Fraction(0)))
    path.reverse()
    return path


def _param_to_x(f: PLFunction, s) -> ExactScalar:
    xs = f.breakpoints
    a = int(s)
    if a >= len(xs) - 1:
        return xs[-1]
    u = s - a
    return xs[a] + (xs[a + 1] - xs[a]) * u


@dataclass(frozen=True, eq=False)
class MatchResult:
    close: bool
    distance: ExactScalar
    margin: ExactScalar
    matching: Optional[tuple] = None

    def to_json(self) -> dict:
        return {
            "close": self.close,
            "distance": scalar_to_json(self.distance),
            "margin": scalar_to_json(self.margin),
            "matching": None
            if self.matching is None
            else [[scalar_to_json(x), scalar_to_json(y)] for x, y in self.matching],
        }


def _match(f: PLFunction, g: PLFunction, eps, witness: bool) -> MatchResult:
    d = frechet_values(f.values, g.values)
    close = compare(d, eps) is Ordering.LT
    matching = None
    if close and witness:
        level = (d + eps) / 2
        path = _witness_path(list(f.values), list(g.values), level)
        if path is not None:
            matching = tuple((_param_to_x(f, s), _param_to_x(g, t)) for s, t in path)
    return MatchResult(close=close, distance=d, margin=d - eps, matching=matching)


def _split(f: PLFunction, m) -> tuple[PLFunction, PLFunction]:
    a, b = f.domain
    if compare(m, a) is not Ordering.GT or compare(m, b) is not Ordering.LT:
        raise CenterOutside(f"center {m} is not inside ({a}, {b})")
    return f.restrict(a, m), f.restrict(m, b)


def is_eps_symmetric(
    f: PLFunction, eps: ExactScalar, center: Optional[ExactScalar] = None, witness: bool = True
) -> MatchResult:
    """Is there an endpoint-swapping bijection i with |f(x) - f(i(x))| < eps?

    With a center m the bijection must fix m, so f on [a, m] is matched against
    f on [m, b] read backwards.
    """
    if center is None:
        return _match(f, f.reversed(), eps, witness)
    left, right = _split(f, center)
    return _match(left, right.reversed(), eps, witness)


def is_eps_close(f: PLFunction, g: PLFunction, eps: ExactScalar, witness: bool = True) -> MatchResult:
    """epsilon-closeness allows either orientation of the homeomorphism."""
    fwd = _match(f, g, eps, witness)
    if fwd.close:
        return fwd
    bwd = _match(f, g.reversed(), eps, witness)
    return bwd if compare(bwd.distance, fwd.distance) is Ordering.LT else fwd


# -- the no-symmetry desk check --------------------------------------------


def _lower_bound_centered(lv: Sequence, rv: Sequence) -> float:
    """Cheap lower bound on the Frechet distance of f|[a,m] vs reversed f|[m,b]."""
    return max(abs(lv[0] - rv[0]), abs(max(lv) - max(rv)), abs(min(lv) - min(rv)))


@dataclass(frozen=True, eq=False)
class Config:
    rule: str
    n: int
    window: tuple
    center: ExactScalar
    lv: tuple
    rv: tuple
    exempt_scale: Optional[ExactScalar]  # |c - m| * s^n for the alternative branch; None if no alternative

    def to_json(self) -> dict:
        return {
            "rule": self.rule,
            "n": self.n,
            "window": [scalar_to_json(self.window[0]), scalar_to_json(self.window[1])],
            "center": scalar_to_json(self.center),
        }


def _values_on(tmap: TentMap, n: int, lo, hi) -> tuple:
    return pl_restrict(tmap, n, (lo, hi)).values


def _grid_points(lo, hi, count: int) -> list:
    return [lo + (hi - lo) * Fraction(j, count + 1) for j in range(1, count + 1)]


def _configs(tmap: TentMap, delta, maxN: int, grid: int, orbit_depth: int) -> list[Config]:
    c2, c1 = tmap.core
    s = tmap.slope
    out: list[Config] = []

    def centered(rule: str, n: int, lo, hi, m, exempt=None):
        table_l = _values_on(tmap, n, lo, m)
        table_r = _values_on(tmap, n, m, hi)
        out.append(Config(rule, n, (lo, hi), m, tuple(table_l), tuple(reversed(table_r)), exempt))

    def uncentered(rule: str, n: int, lo, hi, m):
        vals = _values_on(tmap, n, lo, hi)
        out.append(Config(rule, n, (lo, hi), m, tuple(vals), tuple(reversed(vals)), abs(HALF - m) * s**n))

    centers = _grid_points(c2, c1, grid)
    near_c = _grid_points(HALF - delta, HALF + delta, grid)
    for n in range(0, maxN + 1):
        for m in centers:
            if abs(m - HALF) > delta:
                # H contains c and m and keeps away from c at both ends
                windows = [(c2, c1)]
                w = min(m - c2, c1 - m)
                windows.append((m - w, m + w))
                for lo, hi in windows:
                    if HALF - lo > delta and hi - HALF > delta and lo < m < hi:
                        centered("no-symmetry-far-center", n, lo, hi, m)
        for m in centers + near_c:
            w = min(m - c2, c1 - m)
            lo, hi = m - w, m + w
            if HALF - lo >= delta and hi - HALF >= delta:
                uncentered("symmetric-window-near-c", n, lo, hi, m)
        for i, ci in enumerate(orbit_points(tmap, orbit_depth), start=1):
            w = min(ci - c2, c1 - ci)
            if w <= delta:
                continue
            for width in (delta + (w - delta) / 2, w):
                centered(f"orbit-center-{i}", n, ci - width, ci + width, ci)
    return out


@dataclass(frozen=True, eq=False)
class SymmetryReport:
    slope: ExactScalar
    delta: ExactScalar
    max_n: int
    grid: int
    eps: ExactScalar
    ladder: tuple
    configs: int
    screened: int
    binding: Optional[dict]
    violations: tuple

    def to_json(self) -> dict:
        return {
            "slope": scalar_to_json(self.slope),
            "delta": scalar_to_json(self.delta),
            "max_n": self.max_n,
            "grid": self.grid,
            "eps": scalar_to_json(self.eps),
            "ladder": [{"eps": scalar_to_json(e), "violations": v} for e, v in self.ladder],
            "configs": self.configs,
            "screened": self.screened,
            "binding": self.binding,
            "violations": list(self.violations),
        }


def _violates(cfg: Config, d: ExactScalar, eps) -> bool:
    if compare(d, eps) is not Ordering.LT:
        return False
    if cfg.exempt_scale is None:
        return True
    return compare(cfg.exempt_scale, eps) is Ordering.GT


def verify_no_symmetry(
    tmap: TentMap,
    delta: ExactScalar,
    maxN: int,
    grid: int,
    rungs: int = 40,
    orbit_depth: Optional[int] = None,
) -> tuple[ExactScalar, SymmetryReport]:
    """Largest eps on the ladder delta / 2^j with no forbidden eps-symmetry on the grid.

    Three families of configurations are checked for every n <= maxN:
    windows H with c in H and a center m far from c (no symmetry around m);
    windows with midpoint m containing c well inside (symmetry only when
    |c - m| <= eps s^-n); and windows around c_i (no symmetry with midpoint c_i).
    """
    depth = maxN if orbit_depth is None else orbit_depth
    configs = _configs(tmap, delta, maxN, grid, depth)
    ladder = [delta / 2**j for j in range(rungs + 1)]
    # only distances below delta can violate any rung; a cheap bound screens the rest
    dists: list[tuple[Config, ExactScalar]] = []
    for cfg in configs:
        if _lower_bound_centered(cfg.lv, cfg.rv) >= delta:
            continue
        lf, rf = [float(x) for x in cfg.lv], [float(x) for x in cfg.rv]
        if not _reach(lf, rf, float(delta) * (1 + 1e-9))[0]:
            continue
        d = frechet_values(cfg.lv, cfg.rv)
        if compare(d, delta) is Ordering.LT:
            dists.append((cfg, d))
    ladder_report = []
    found = None
    for eps in ladder:
        bad = [(cfg, d) for cfg, d in dists if _violates(cfg, d, eps)]
        ladder_report.append((eps, len(bad)))
        if not bad:
            found = eps
            break
    if found is None:
        raise NoEpsilonFound(f"no rung down to delta/2^{rungs} is free of violations")
    binding = None
    if dists:
        cfg, d = min(dists, key=lambda cd: float(cd[1]))
        binding = dict(cfg.to_json(), distance=scalar_to_json(d))
    report = SymmetryReport(
        slope=tmap.slope,
        delta=delta,
        max_n=maxN,
        grid=grid,
        eps=found,
        ladder=tuple(ladder_report),
        configs=len(configs),
        screened=len(dists),
        binding=binding,
        violations=(),
    )
    return found, report


# -- Lemma 4.4 ---------------------------------------------------------------


def core_branches(tmap: TentMap, k: int) -> list[tuple]:
    """Subintervals of the core that T^k maps homeomorphically onto the core, left to right."""
    c2, c1 = tmap.core
    if k == 0:
        return [(c2, c1)]
    table = fold_table(tmap, k, (c2, c1))
    out = []
    for j in range(len(table.xs) - 1):
        x0, x1, y0, y1 = table.xs[j], table.xs[j + 1], table.ys[j], table.ys[j + 1]
        lo_y, hi_y = (y0, y1) if compare(y0, y1) is Ordering.LT else (y1, y0)
        if compare(lo_y, c2) is Ordering.GT or compare(hi_y, c1) is Ordering.LT:
            continue
        # preimages of c2 and c1 on this affine lap
        t2 = x0 + (c2 - y0) * (x1 - x0) / (y1 - y0)
        t1 = x0 + (c1 - y0) * (x1 - x0) / (y1 - y0)
        out.append((t2, t1) if compare(t2, t1) is Ordering.LT else (t1, t2))
    return out


def verify_lemma12(
    tmap: TentMap, eps: ExactScalar, i: int, j: int, ab: tuple
) -> tuple[int, tuple]:
    """Find k = j - i and J' near ab (endpoint drift < eps) that T^k maps onto the core."""
    if i > j:
        raise PreconditionError("verify_lemma12 needs i <= j")
    core = tmap.core
    f = pl_restrict(tmap, i, core)
    g = pl_restrict(tmap, j, ab)
    if not is_eps_close(f, g, eps, witness=False).close:
        raise PreconditionError("T^i on the core and T^j on ab are not eps-close")
    k = j - i
    a, b = ab
    for lo, hi in core_branches(tmap, k):
        if compare(abs(lo - a), eps) is Ordering.LT and compare(abs(hi - b), eps) is Ordering.LT:
            return k, (lo, hi)
    raise NotFound(f"no branch of T^{k} onto the core within {eps} of [{a}, {b}]")


def lemma12_cases(tmap: TentMap, eps: ExactScalar, max_j: int) -> list[tuple[int, int, tuple]]:
    """(i, j, ab) with i < j <= max_j and T^j on ab eps-close to T^i on the core.

    Candidates are the exact branches of T^(j-i) onto the core, the same
    windows with endpoints moved by eps/2, and the single laps of T^j on the core.
    Only candidates that pass the closeness test are kept.
    """
    core = tmap.core
    cases = []
    for j in range(1, max_j + 1):
        table = fold_table(tmap, j, core)
        laps = list(zip(table.xs, table.xs[1:]))
        for i in range(0, j):
            f = pl_restrict(tmap, i, core)
            cands = []
            for lo, hi in core_branches(tmap, j - i):
                cands.append((lo, hi))
                for dl in (-eps / 2, eps / 2):
                    for dh in (-eps / 2, eps / 2):
                        a, b = lo + dl, hi + dh
                        if compare(a, 0) is not Ordering.LT and compare(b, 1) is not Ordering.GT and compare(a, b) is Ordering.LT:
                            cands.append((a, b))
            cands.extend(laps)
            for ab in cands:
                g = pl_restrict(tmap, j, ab)
                if is_eps_close(f, g, eps, witness=False).close:
                    cases.append((i, j, ab))
    return cases
