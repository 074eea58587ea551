"""Turning points and k-patterns of T^n restricted to an interval.

The workhorse is :func:`fold_table`, which pushes an interval forward one step
at a time and splits a lap exactly where its current image passes through c.
Every split point t is a turning point with T^m(t) = c for the step m at which
it was found, so minimality of m is automatic.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .errors import LengthMismatch, OutOfDomain
from .numerics import ExactScalar, Ordering, compare, scalar_to_json
from .tentmap import HALF, TentMap, tent_eval

Window = tuple  # (lo, hi) pair of ExactScalar


@dataclass(frozen=True, eq=False)
class TurningPoint:
    position: ExactScalar
    m: int


@dataclass(frozen=True, eq=False)
class PLFunction:
    """Piecewise-linear interpolation of (breakpoints, values)."""

    breakpoints: tuple
    values: tuple

    def __post_init__(self) -> None:
        if len(self.breakpoints) != len(self.values):
            raise LengthMismatch("breakpoints and values differ in length")
        if not self.breakpoints:
            raise ValueError("empty PLFunction")
        for a, b in zip(self.breakpoints, self.breakpoints[1:]):
            if compare(a, b) is not Ordering.LT:
                raise ValueError("breakpoints must be strictly increasing")

    @property
    def domain(self) -> Window:
        return (self.breakpoints[0], self.breakpoints[-1])

    def reversed(self) -> "PLFunction":
        """x -> f(a + b - x), same domain."""
        a, b = self.domain
        return PLFunction(
            tuple(a + b - x for x in reversed(self.breakpoints)),
            tuple(reversed(self.values)),
        )

    def __call__(self, x):
        xs, ys = self.breakpoints, self.values
        if len(xs) == 1:
            return ys[0]
        lo, hi = 0, len(xs) - 1
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if compare(xs[mid], x) is Ordering.GT:
                hi = mid
            else:
                lo = mid
        x0, x1 = xs[lo], xs[hi]
        return ys[lo] + (ys[hi] - ys[lo]) * (x - x0) / (x1 - x0)

    def restrict(self, lo, hi) -> "PLFunction":
        """Restriction to [lo, hi] (inside the domain), with the new endpoints inserted."""
        xs = [lo] + [x for x in self.breakpoints if compare(lo, x) is Ordering.LT and compare(x, hi) is Ordering.LT]
        if compare(lo, hi) is Ordering.LT:
            xs.append(hi)
        return PLFunction(tuple(xs), tuple(self(x) for x in xs))

    def to_json(self) -> dict:
        return {
            "breakpoints": [scalar_to_json(x) for x in self.breakpoints],
            "values": [scalar_to_json(y) for y in self.values],
        }


@dataclass(frozen=True, eq=False)
class FoldTable:
    """Breakpoints of T^n on a window with their T^n values and fold indices.

    ``ms[j]`` is the minimal m < n with T^m(xs[j]) = c, or None for a window
    endpoint that is not a turning point.
    """

    n: int
    xs: tuple
    ys: tuple
    ms: tuple

    def turning_indices(self) -> list[int]:
        return [j for j, m in enumerate(self.ms) if m is not None]


def _check_window(tmap: TentMap, J: Window) -> None:
    lo, hi = J
    if compare(lo, hi) is Ordering.GT:
        raise OutOfDomain(f"empty window [{lo}, {hi}]")
    if compare(lo, 0) is Ordering.LT or compare(hi, 1) is Ordering.GT:
        raise OutOfDomain(f"window [{lo}, {hi}] is not inside [0, 1]")


def _strictly_between(y0, y1, c=HALF) -> bool:
    a, b = compare(y0, c), compare(y1, c)
    return (a is Ordering.LT and b is Ordering.GT) or (a is Ordering.GT and b is Ordering.LT)


def fold_table(tmap: TentMap, n: int, J: Window) -> FoldTable:
    _check_window(tmap, J)
    lo, hi = J
    if compare(lo, hi) is Ordering.EQ:
        xs, ys, ms = [lo], [lo], [None]
    else:
        xs, ys, ms = [lo, hi], [lo, hi], [None, None]
    for k in range(n):
        for idx in {0, len(xs) - 1}:
            if ms[idx] is None and compare(ys[idx], HALF) is Ordering.EQ:
                ms[idx] = k
        nx, ny, nm = [xs[0]], [ys[0]], [ms[0]]
        for j in range(1, len(xs)):
            y0, y1 = ys[j - 1], ys[j]
            if _strictly_between(y0, y1):
                x0, x1 = xs[j - 1], xs[j]
                t = x0 + (HALF - y0) * (x1 - x0) / (y1 - y0)
                nx.append(t)
                ny.append(HALF)
                nm.append(k)
            nx.append(xs[j])
            ny.append(ys[j])
            nm.append(ms[j])
        xs, ms = nx, nm
        ys = [tent_eval(tmap, y) for y in ny]
    return FoldTable(n=n, xs=tuple(xs), ys=tuple(ys), ms=tuple(ms))


def turning_points(tmap: TentMap, n: int, J: Window) -> list[TurningPoint]:
    """All t in J (closed) with T^m(t) = c for some m < n, with minimal m, sorted."""
    if n < 1:
        raise ValueError("turning_points needs n >= 1")
    table = fold_table(tmap, n, J)
    return [TurningPoint(table.xs[j], table.ms[j]) for j in table.turning_indices()]


def k_pattern(tmap: TentMap, i: int, J: Window) -> tuple[int, ...]:
    """Levels i - m of the turning points of T^i in J, in positional order."""
    if i < 1:
        return ()
    table = fold_table(tmap, i, J)
    return tuple(i - table.ms[j] for j in table.turning_indices())


def pl_restrict(tmap: TentMap, n: int, J: Window) -> PLFunction:
    table = fold_table(tmap, n, J)
    return PLFunction(table.xs, table.ys)


def is_symmetric_pattern(P: Sequence[int]) -> bool:
    """Odd-length palindrome whose middle entry is the strict maximum."""
    P = tuple(P)
    if len(P) % 2 == 0 or P != P[::-1]:
        return False
    mid = len(P) // 2
    return all(v < P[mid] for j, v in enumerate(P) if j != mid)


def shift_pattern(P: Sequence[int], crossings: Sequence[bool]) -> tuple[int, ...]:
    """Pattern one step deeper: every level +1, and a new 1 in each gap that crosses c.

    ``crossings`` has one flag per gap, including the two boundary gaps, so its
    length is len(P) + 1.
    """
    P = tuple(P)
    if len(crossings) != len(P) + 1:
        raise LengthMismatch(f"expected {len(P) + 1} crossing flags, got {len(crossings)}")
    out: list[int] = []
    for j, level in enumerate(P):
        if crossings[j]:
            out.append(1)
        out.append(level + 1)
    if crossings[-1]:
        out.append(1)
    return tuple(out)


def crossing_flags(tmap: TentMap, i: int, J: Window) -> list[bool]:
    """For each gap between consecutive k-points of T^i on J, does a new fold appear at depth i+1?

    An interior gap gains a fold exactly when its image passes strictly through c.
    A boundary gap whose outer end is not a turning point also gains one when
    that end lands on c itself.
    """
    table = fold_table(tmap, i, J)
    turning = table.turning_indices()
    last = len(table.xs) - 1
    anchors = [0] + turning + [last]
    flags = []
    for g in range(len(turning) + 1):
        a, b = anchors[g], anchors[g + 1]
        if g < len(turning) and g > 0:
            flags.append(_gap_crosses(table, a, b, closed=()))
            continue
        closed = tuple(e for e in (a, b) if table.ms[e] is None and e in (0, last))
        flags.append(_gap_crosses(table, a, b, closed=closed))
    return flags


def _gap_crosses(table: FoldTable, a: int, b: int, closed: tuple) -> bool:
    if a == b:
        # degenerate gap: an endpoint that is not (yet) a turning point
        return a in closed and compare(table.ys[a], HALF) is Ordering.EQ
    # between consecutive k-points T^i is monotone, so the gap's image is [y_a, y_b]
    y0, y1 = table.ys[a], table.ys[b]
    if _strictly_between(y0, y1):
        return True
    return any(compare(table.ys[e], HALF) is Ordering.EQ for e in closed)


def realize_pattern(
    tmap: TentMap, P: Sequence[int], maxN: int
) -> Optional[tuple[int, Window]]:
    """Smallest n <= maxN and a window J of the core on which T^n has pattern P.

    Windows run between the midpoints of the turning points adjacent to a
    contiguous run (or the core ends), so they are maximal up to the choice of
    cut point. Returns None when the budget is exhausted.
    """
    P = tuple(P)
    if not P:
        raise ValueError("realize_pattern needs a nonempty pattern")
    core = tmap.core
    for n in range(1, maxN + 1):
        table = fold_table(tmap, n, core)
        turning = table.turning_indices()
        levels = [n - table.ms[j] for j in turning]
        L = len(P)
        for start in range(0, len(levels) - L + 1):
            if tuple(levels[start : start + L]) != P:
                continue
            first, last = turning[start], turning[start + L - 1]
            if start > 0:
                lo = (table.xs[turning[start - 1]] + table.xs[first]) / 2
            else:
                lo = core[0]
            if start + L < len(turning):
                hi = (table.xs[last] + table.xs[turning[start + L]]) / 2
            else:
                hi = core[1]
            if k_pattern(tmap, n, (lo, hi)) == P:
                return n, (lo, hi)
    return None


# -- Lemma 2.1: images of adjacent turning points ---------------------------


def _covers_exactly(values: Sequence, start: int, step: int, target: tuple) -> bool:
    """Scan from ``start`` in direction ``step``; True when the running range equals target."""
    lo_t, hi_t = target
    rmin = rmax = values[start]
    j = start + step
    while 0 <= j < len(values):
        v = values[j]
        nmin = rmin if compare(rmin, v) is not Ordering.GT else v
        nmax = rmax if compare(rmax, v) is not Ordering.LT else v
        inside = compare(lo_t, nmin) is not Ordering.GT and compare(nmax, hi_t) is not Ordering.GT
        if inside:
            if compare(nmin, lo_t) is Ordering.EQ and compare(nmax, hi_t) is Ordering.EQ:
                return True
            rmin, rmax = nmin, nmax
            j += step
            continue
        # the range left the target during this segment; it passed through the
        # target exactly iff the opposite end had already been reached
        if compare(nmin, lo_t) is Ordering.LT:
            return compare(rmax, hi_t) is Ordering.EQ and compare(nmax, hi_t) is not Ordering.GT
        return compare(rmin, lo_t) is Ordering.EQ and compare(nmin, lo_t) is not Ordering.LT
    return False


@dataclass(frozen=True, eq=False)
class AdjacentViolation:
    n: int
    x: ExactScalar
    y: ExactScalar
    direction: str

    def to_json(self) -> dict:
        return {"n": self.n, "x": scalar_to_json(self.x), "y": scalar_to_json(self.y), "direction": self.direction}


def check_adjacent_images(table: FoldTable) -> list[AdjacentViolation]:
    """Check the adjacent-image property on an explicit fold table (possibly corrupted)."""
    turning = table.turning_indices()
    out = []
    for a, b in zip(turning, turning[1:]):
        ya, yb = table.ys[a], table.ys[b]
        target = (ya, yb) if compare(ya, yb) is not Ordering.GT else (yb, ya)
        if not _covers_exactly(table.ys, b, +1, target):
            out.append(AdjacentViolation(table.n, table.xs[a], table.xs[b], "right"))
        if not _covers_exactly(table.ys, a, -1, target):
            out.append(AdjacentViolation(table.n, table.xs[a], table.xs[b], "left"))
    return out


def verify_adjacent_images(tmap: TentMap, n: int) -> list[AdjacentViolation]:
    """Every adjacent pair x < y of turning points of T^n has z > y with T^n([y, z]) = [T^n x, T^n y].

    The mirrored statement (z < x, T^n([z, x]) = same interval) is checked too.
    """
    if n < 2:
        raise ValueError("verify_adjacent_images needs n >= 2")
    return check_adjacent_images(fold_table(tmap, n, (Fraction(0), Fraction(1))))
