"""Natural chains C_k, link walks, link-symmetry, and the completeness check of {A_i}.

Links are the closed gaps between consecutive boundary points (the <= k step
preimages of c in I = [0, s/2]), numbered from 1 at the left end of I. A walk
records the links visited by T^(depth - k) over an arc window, collapsing
repeats. Boundary convention: a walk that starts on a boundary point is in the
link it departs into, and one that ends on a boundary point is in the link it
arrived from.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .arcs import Arc, arc_A, salient_position
from .errors import DepthTooShallow
from .folding import FoldTable, fold_table
from .numerics import ExactScalar, Ordering, compare, scalar_to_json
from .tentmap import TentMap, fixed_point


@dataclass(frozen=True, eq=False)
class Chain:
    k: int
    boundaries: tuple
    lo: ExactScalar
    hi: ExactScalar
    mesh: ExactScalar

    @property
    def n_links(self) -> int:
        return len(self.boundaries) + 1

    def link_range(self, y: ExactScalar) -> tuple[int, int]:
        """(link below, link above) of y; the two agree unless y is a boundary point."""
        p = bisect.bisect_left(self.boundaries, y)
        if p < len(self.boundaries) and compare(self.boundaries[p], y) is Ordering.EQ:
            return p + 1, p + 2
        return p + 1, p + 1

    def link(self, ell: int) -> tuple:
        pts = (self.lo,) + self.boundaries + (self.hi,)
        return pts[ell - 1], pts[ell]

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "boundaries": [scalar_to_json(b) for b in self.boundaries],
            "mesh": scalar_to_json(self.mesh),
        }


def natural_chain(tmap: TentMap, k: int) -> Chain:
    if k < 0:
        raise ValueError("natural_chain needs k >= 0")
    lo, hi = Fraction(0), tmap.c1
    table = fold_table(tmap, k + 1, (lo, hi))
    bounds = tuple(table.xs[j] for j in table.turning_indices())
    pts = (lo,) + bounds + (hi,)
    mesh = max((b - a for a, b in zip(pts, pts[1:])), key=_sort_key)
    return Chain(k=k, boundaries=bounds, lo=lo, hi=hi, mesh=mesh)


def _sort_key(x):
    return x.hi if hasattr(x, "hi") else x


@dataclass(frozen=True, eq=False)
class Walk:
    """A link walk at breakpoint resolution.

    ``visit[j]`` is the index (into the collapsed link sequence) of the visit
    that contains breakpoint j, and ``links`` is the collapsed sequence itself
    when it was materialized.
    """

    table: FoldTable
    arrive: tuple
    depart: tuple
    visit: tuple
    length: int


def _walk(chain: Chain, table: FoldTable) -> Walk:
    ys = table.ys
    L = len(ys)
    arrive, depart = [], []
    for j, y in enumerate(ys):
        below, above = chain.link_range(y)
        if below == above:
            arrive.append(below)
            depart.append(below)
            continue
        up_in = j > 0 and compare(ys[j - 1], y) is Ordering.LT
        up_out = j + 1 < L and compare(ys[j + 1], y) is Ordering.GT
        a = below if up_in else above
        d = above if up_out else below
        if j == 0:
            a = d
        if j == L - 1:
            d = a
        arrive.append(a)
        depart.append(d)
    visit = [0]
    cur = depart[0]
    idx = 0
    for j in range(1, L):
        if depart[j - 1] != cur:
            idx += 1
            cur = depart[j - 1]
        idx += abs(arrive[j] - cur)
        cur = arrive[j]
        visit.append(idx)
    return Walk(table=table, arrive=tuple(arrive), depart=tuple(depart), visit=tuple(visit), length=idx + 1)


def _expand(walk: Walk) -> list[int]:
    seq = [walk.depart[0]]
    for j in range(1, len(walk.arrive)):
        start = walk.depart[j - 1]
        if start != seq[-1]:
            seq.append(start)
        target = walk.arrive[j]
        step = 1 if target > seq[-1] else -1
        while seq[-1] != target:
            seq.append(seq[-1] + step)
    return seq


def _arc_walk(chain: Chain, tmap: TentMap, a: Arc) -> Walk:
    if a.depth < chain.k:
        raise DepthTooShallow(f"arc depth {a.depth} is below chain level {chain.k}")
    return _walk(chain, fold_table(tmap, a.depth - chain.k, a.J))


@dataclass(frozen=True)
class LinkSequence:
    indices: tuple

    def __post_init__(self) -> None:
        for a, b in zip(self.indices, self.indices[1:]):
            if abs(a - b) != 1:
                raise ValueError("consecutive links in a walk must be adjacent")

    def is_palindrome(self) -> bool:
        return self.indices == self.indices[::-1]


def link_sequence(chain: Chain, tmap: TentMap, a: Arc) -> LinkSequence:
    return LinkSequence(tuple(_expand(_arc_walk(chain, tmap, a))))


@dataclass(frozen=True, eq=False)
class LinkSymmetry:
    midlink: int
    midpoint: Optional[ExactScalar]
    level: Optional[int]


def _visit_folds(walk: Walk, v: int) -> list[int]:
    """Breakpoint indices that are turning points lying in visit v."""
    return [j for j, vis in enumerate(walk.visit) if vis == v and walk.table.ms[j] is not None]


def _top_fold(walk: Walk, v: int) -> tuple[Optional[ExactScalar], Optional[int]]:
    folds = _visit_folds(walk, v)
    if not folds:
        return None, None
    n = walk.table.n
    best = max(folds, key=lambda j: n - walk.table.ms[j])
    return walk.table.xs[best], n - walk.table.ms[best]


def is_link_symmetric(chain: Chain, tmap: TentMap, a: Arc) -> Optional[LinkSymmetry]:
    walk = _arc_walk(chain, tmap, a)
    seq = _expand(walk)
    if seq != seq[::-1]:
        return None
    mid = len(seq) // 2
    pos, level = _top_fold(walk, mid)
    return LinkSymmetry(midlink=seq[mid], midpoint=pos, level=level)


# -- completeness -----------------------------------------------------------


def _extremes(walk: Walk) -> list[tuple[int, int]]:
    """(visit index, link) of the start, every reversal, and the end of the walk."""
    marks: list[tuple[int, int]] = []
    for j, v in enumerate(walk.visit):
        link = _arrival(walk, j)
        if not marks or marks[-1][0] != v:
            marks.append((v, link))
        if walk.depart[j] != link:
            marks.append((v + 1, walk.depart[j]))
    out = [marks[0]]
    for t in range(1, len(marks) - 1):
        before, (v, link), after = marks[t - 1][1], marks[t], marks[t + 1][1]
        if (link - before) * (after - link) < 0:
            out.append((v, link))
    if len(marks) > 1:
        out.append(marks[-1])
    return out


def palindrome_radii(ext: list[tuple[int, int]]) -> list[int]:
    """Largest palindromic radius (in visits) around each interior extreme of a zigzag walk.

    ``ext`` lists (visit index, link) at the start, each reversal and the end.
    Both sides of a reversal move in the same direction, so the mirror match
    proceeds run by run until two runs differ in length or one side ends.
    """
    M = len(ext) - 1
    runs = [abs(ext[t + 1][1] - ext[t][1]) for t in range(M)]
    radii = [0] * (M + 1)
    for p in range(1, M):
        rad, t = 0, 1
        while p - t >= 0 and p + t <= M:
            left, right = runs[p - t], runs[p + t - 1]
            rad += min(left, right)
            if left != right:
                break
            t += 1
        radii[p] = rad
    return radii


@dataclass(frozen=True, eq=False)
class CompletenessReport:
    slope: ExactScalar
    k: int
    D: int
    mesh: ExactScalar
    visits: int
    rho_visit: int
    entries: tuple

    @property
    def passed(self) -> bool:
        return all(e["pass"] for e in self.entries)

    def to_json(self) -> dict:
        return {
            "slope": scalar_to_json(self.slope),
            "k": self.k,
            "D": self.D,
            "mesh": scalar_to_json(self.mesh),
            "visits": self.visits,
            "rho_visit": self.rho_visit,
            "symmetric_arcs": len(self.entries),
            "pass": self.passed,
            "entries": list(self.entries),
        }


def verify_completeness(
    tmap: TentMap, k: int, D: int, midpoint_indices: Optional[list[int]] = None
) -> CompletenessReport:
    """Every k-link-symmetric subarc of A_(D-k) through rho has some m_i as midpoint.

    Symmetric subarcs are exactly the palindromic stretches of the walk that
    contain rho's visit; each is centred on a reversal, so it suffices to take,
    for every reversal, its maximal palindromic radius. ``midpoint_indices``
    restricts the admissible midpoints (negative controls).
    """
    if D < k + 4:
        raise ValueError("verify_completeness needs D >= k + 4")
    chain = natural_chain(tmap, k)
    arc = arc_A(tmap, D - k, k)
    walk = _arc_walk(chain, tmap, arc)
    depth = D - k
    r = fixed_point(tmap)
    xs = walk.table.xs
    j = bisect.bisect_left(xs, r)
    # r is never a breakpoint: T^m(r) = r != c
    lo_j = j - 1
    r_link = chain.link_range(r)[0]
    rho_visit = walk.visit[lo_j] + (1 if walk.depart[lo_j] != _arrival(walk, lo_j) else 0)
    rho_visit += abs(r_link - walk.depart[lo_j])

    allowed = list(range(1, depth + 1)) if midpoint_indices is None else list(midpoint_indices)
    m_pos = {i: salient_position(tmap, i, depth) for i in allowed}
    ext = _extremes(walk)
    radii = palindrome_radii(ext)
    entries = []
    for p in range(1, len(ext) - 1):
        v, link = ext[p]
        if radii[p] < 1 or abs(v - rho_visit) > radii[p]:
            continue
        pos, level = _top_fold(walk, v)
        hit = None
        if pos is not None:
            for i in allowed:
                if level == i and compare(m_pos[i], pos) is Ordering.EQ:
                    hit = i
                    break
        entries.append(
            {
                "center_visit": v,
                "midlink": link,
                "radius": radii[p],
                "midpoint": scalar_to_json(pos) if pos is not None else None,
                "level": level,
                "m_index": hit,
                "pass": hit is not None,
            }
        )
    return CompletenessReport(
        slope=tmap.slope,
        k=k,
        D=D,
        mesh=chain.mesh,
        visits=walk.length,
        rho_visit=rho_visit,
        entries=tuple(entries),
    )


def _arrival(walk: Walk, j: int) -> int:
    return walk.arrive[j] if j > 0 else walk.depart[0]



def smallest_k_below(tmap: TentMap, eps: ExactScalar, k_max: int = 64) -> Chain:
    """The coarsest natural chain whose mesh is below eps."""
    for k in range(k_max + 1):
        chain = natural_chain(tmap, k)
        if compare(chain.mesh, eps) is Ordering.LT:
            return chain
    raise ValueError(f"no natural chain with mesh < {eps} up to k = {k_max}")
