"""The tent map T(x) = min(sx, s(1-x)), its critical orbit, and derived constants."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .errors import (
    KappaUndefined,
    OutOfDomain,
    PrecisionExhausted,
    PreperiodicOrbit,
    Renormalizable,
    SlopeOutOfRange,
)
from .numerics import (
    ExactScalar,
    Interval,
    Ordering,
    compare,
    scalar_to_json,
    smin,
)

HALF = Fraction(1, 2)


@dataclass(frozen=True, eq=False)
class TentMap:
    """Tent map with slope s in (sqrt2, 2]; the critical point is c = 1/2."""

    slope: ExactScalar

    def __post_init__(self) -> None:
        s = self.slope
        if isinstance(s, int):
            object.__setattr__(self, "slope", Fraction(s))
            s = self.slope
        try:
            too_small = compare(s * s, 2) is not Ordering.GT
            too_large = compare(s, 2) is Ordering.GT
        except PrecisionExhausted as exc:
            raise SlopeOutOfRange(f"cannot certify sqrt2 < s <= 2 for {s!r}") from exc
        if too_small or too_large:
            raise SlopeOutOfRange(f"slope {s} is outside (sqrt2, 2]")

    @property
    def c(self) -> Fraction:
        return HALF

    @property
    def c1(self) -> ExactScalar:
        return self.slope / 2

    @property
    def c2(self) -> ExactScalar:
        s = self.slope
        return s * (1 - s / 2)

    @property
    def c2_hat(self) -> ExactScalar:
        return 1 - self.c2

    @property
    def r(self) -> ExactScalar:
        return fixed_point(self)

    @property
    def core(self) -> tuple[ExactScalar, ExactScalar]:
        return (self.c2, self.c1)

    @property
    def is_rational(self) -> bool:
        return not isinstance(self.slope, Interval)

    def key(self):
        """Hashable identity of the slope (intervals are not hashable)."""
        s = self.slope
        if isinstance(s, Interval):
            return ("interval", s.lo, s.hi, s.bits)
        return ("rational", s)

    def __eq__(self, other) -> bool:
        return isinstance(other, TentMap) and self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())

    def __repr__(self) -> str:
        return f"TentMap({scalar_to_json(self.slope)!r})"


def tent_eval(tmap: TentMap, x: ExactScalar) -> ExactScalar:
    """T(x); intervals are evaluated as the hull of both branches, no branch decision needed."""
    if compare(x, 0) is Ordering.LT or compare(x, 1) is Ordering.GT:
        raise OutOfDomain(f"x = {x} is outside [0, 1]")
    s = tmap.slope
    if isinstance(x, Interval) or isinstance(s, Interval):
        return smin(s * x, s * (1 - x))
    return s * x if x <= HALF else s * (1 - x)


def iterate(tmap: TentMap, x: ExactScalar, n: int) -> ExactScalar:
    for _ in range(n):
        x = tent_eval(tmap, x)
    return x


def fixed_point(tmap: TentMap) -> ExactScalar:
    s = tmap.slope
    return s / (s + 1)


def right_pullback(tmap: TentMap, y: ExactScalar) -> ExactScalar:
    """Preimage of y on the decreasing branch [c, 1]; the branch that contains r."""
    return 1 - y / tmap.slope


def left_pullback(tmap: TentMap, y: ExactScalar) -> ExactScalar:
    return y / tmap.slope


@dataclass(frozen=True, eq=False)
class CriticalOrbit:
    slope: ExactScalar
    depth: int
    points: tuple
    preperiodic_at: Optional[tuple[int, int]]
    kappa: int
    recurrence_gap: ExactScalar
    hits_c: bool = field(default=False)

    @property
    def preperiodic(self) -> bool:
        return self.preperiodic_at is not None

    def point(self, i: int) -> ExactScalar:
        """c_i, 1-based."""
        return self.points[i - 1]

    def to_json(self) -> dict:
        pre = None
        if self.preperiodic_at is not None:
            pre = {"tail": self.preperiodic_at[0], "period": self.preperiodic_at[1]}
        return {
            "slope": scalar_to_json(self.slope),
            "points": [scalar_to_json(p) for p in self.points],
            "kappa": self.kappa,
            "preperiodic": pre,
            "gap": scalar_to_json(self.recurrence_gap),
        }


def orbit_points(tmap: TentMap, n: int) -> list:
    """c_1 .. c_n without any of the bookkeeping of critical_orbit."""
    pts = []
    x: ExactScalar = HALF
    for _ in range(n):
        x = tent_eval(tmap, x)
        pts.append(x)
    return pts


def _find_repeat(points: list) -> Optional[tuple[int, int]]:
    seen: dict = {}
    for idx, p in enumerate(points, start=1):
        if p in seen:
            return (seen[p], idx - seen[p])
        seen[p] = idx
    return None


def _kappa(tmap: TentMap, points: list, repeat: Optional[tuple[int, int]]) -> int:
    """Smallest i >= 3 with c_i <= c, iterating past the stored depth when needed."""
    for i in range(3, len(points) + 1):
        if compare(points[i - 1], HALF) is not Ordering.GT:
            return i
    if repeat is not None:
        # the whole future orbit is already stored
        raise KappaUndefined(f"critical orbit of {tmap!r} never returns to [0, c]")
    x = points[-1]
    # an orbit that stays in (c, c1] forever is the fixed point r; the cap is generous
    for i in range(len(points) + 1, len(points) + 4096):
        x = tent_eval(tmap, x)
        if compare(x, HALF) is not Ordering.GT:
            return i
    raise KappaUndefined(f"no c_i <= c found for {tmap!r} within the search cap")


def critical_orbit(tmap: TentMap, N: int) -> CriticalOrbit:
    if N < 3:
        raise ValueError("critical_orbit needs N >= 3")
    points = orbit_points(tmap, N)
    repeat = _find_repeat(points) if tmap.is_rational else None
    hits_c = False
    gap = None
    for p in points:
        d = abs(HALF - p)
        if not isinstance(d, Interval) and d == 0:
            hits_c = True
        gap = d if gap is None else smin(gap, d)
    if hits_c and repeat is None:
        # c_i = c makes the orbit periodic; the repeat shows up one period later
        repeat = _find_repeat(orbit_points(tmap, 2 * N + 2))
    kappa = _kappa(tmap, points, repeat)
    if (kappa - 3) % 2 != 0:
        raise Renormalizable(f"kappa = {kappa} for {tmap!r}: kappa - 3 is odd")
    return CriticalOrbit(
        slope=tmap.slope,
        depth=N,
        points=tuple(points),
        preperiodic_at=repeat,
        kappa=kappa,
        recurrence_gap=gap,
        hits_c=hits_c,
    )


# -- the delta budget -------------------------------------------------------

BOUNDARY = 0  # label of a lap endpoint that is 0 or 1 rather than a turning point


def _label_value(points: list, label: int) -> ExactScalar:
    return Fraction(0) if label == BOUNDARY else points[label - 1]


def adjacent_level_pairs(tmap: TentMap, N: int) -> list[set]:
    """For each n = 1..N, the set of laps of T^n on [0, 1] as (left, right) value labels.

    Label j >= 1 stands for c_j (the value of T^n at a turning point t with
    T^(n-j)(t) = c); BOUNDARY stands for T^n(0) = T^n(1) = 0. The set stays small
    because laps with the same labels evolve identically.
    """
    points = orbit_points(tmap, N + 1)

    def side(label: int) -> Ordering:
        return compare(_label_value(points, label), HALF)

    def step(label: int) -> int:
        return BOUNDARY if label == BOUNDARY else label + 1

    out: list[set] = []
    laps = {(BOUNDARY, 1), (1, BOUNDARY)}
    out.append(set(laps))
    for _ in range(2, N + 1):
        nxt = set()
        for a, b in laps:
            sa, sb = side(a), side(b)
            if Ordering.EQ in (sa, sb):
                raise PreperiodicOrbit(f"critical orbit of {tmap!r} hits c")
            if sa != sb:
                nxt.add((step(a), 1))
                nxt.add((1, step(b)))
            else:
                nxt.add((step(a), step(b)))
        laps = nxt
        out.append(set(laps))
    return out


@dataclass(frozen=True, eq=False)
class DeltaCertificate:
    term: str
    index: Optional[int]
    labels: Optional[tuple[int, int]]
    depth: int

    def to_json(self) -> dict:
        return {
            "term": self.term,
            "index": self.index,
            "labels": list(self.labels) if self.labels is not None else None,
            "valid_up_to_depth": self.depth,
        }


def delta_bound(tmap: TentMap, N: int) -> tuple[ExactScalar, DeltaCertificate]:
    """(1/100) * min(|c - c_i|, |c - r|, adjacent turning-point image gaps), truncated at depth N."""
    if N < 3:
        raise ValueError("delta_bound needs N >= 3")
    points = orbit_points(tmap, N + 1)
    candidates: list[tuple] = []
    for i, p in enumerate(points[:N], start=1):
        d = abs(HALF - p)
        if isinstance(d, Interval) and d.lo <= 0:
            raise PreperiodicOrbit(
                f"c_{i} cannot be separated from c for {tmap!r}; treated as c_{i} = c"
            )
        if d == 0:
            raise PreperiodicOrbit(f"c_{i} = c for {tmap!r}; delta would be 0")
        candidates.append((d, "|c-c_i|", i, None, 0))
    candidates.append((abs(HALF - fixed_point(tmap)), "|c-r|", None, None, 0))
    seen = set()
    for n, laps in enumerate(adjacent_level_pairs(tmap, N), start=1):
        for a, b in sorted(laps):
            if BOUNDARY in (a, b):
                continue
            key = (min(a, b), max(a, b))
            if key in seen:
                continue
            seen.add(key)
            gap = abs(_label_value(points, a) - _label_value(points, b))
            candidates.append((gap, "|T^n(x)-T^n(y)|", n, key, 1))
    best = candidates[0]
    for cand in candidates[1:]:
        if compare(cand[0], best[0]) is Ordering.LT:
            best = cand
    value, term, index, labels, _ = best
    return value / 100, DeltaCertificate(term=term, index=index, labels=labels, depth=N)
