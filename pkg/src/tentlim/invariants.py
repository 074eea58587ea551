"""The slope invariant: patterns of [m_(n-1), m_n] with side bits, level counts, comparison.

At depth n the arc [m_(n-1), m_n] projects onto [c, R(c)], with m_n at c
(level n) and m_(n-1) at R(c) (level n - 1). Pulling turning points back
through one branch of T preserves their levels, which gives a recurrence on
orbit-labelled intervals: writing G(a, b, t) for the levels of the interior
turning points of T^t between c_a and c_b (read from c_a towards c_b),

    G(a, b, t) = G(a+1, 1, t-1) + [t] + G(1, b+1, t-1)   if c lies strictly between c_a and c_b
    G(a, b, t) = G(a+1, b+1, t-1)                          otherwise

and the pattern read from m_(n-1) to m_n is [n-1] + G(1, 2, n-2) + [n].
Patterns grow like s^n, so beyond a length budget they are carried as
(length, two polynomial hashes) rather than spelled out.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Union

from .errors import PreperiodicOrbit, RecurrenceMismatch
from .folding import crossing_flags, k_pattern, shift_pattern
from .numerics import ExactScalar, Ordering, compare, scalar_to_json
from .tentmap import HALF, TentMap, orbit_points, right_pullback

EXPLICIT_LIMIT = 1 << 16
CROSS_CHECK_LIMIT = 4096

_MODS = ((1 << 61) - 1, 1_000_000_007)
_BASES = (1_000_003, 911_382_323)


@dataclass(frozen=True)
class Pattern:
    """A level sequence, spelled out when short and always fingerprinted."""

    length: int
    h1: int
    h2: int
    levels: Optional[tuple] = None

    @classmethod
    def of(cls, levels) -> "Pattern":
        out = _EMPTY
        for v in levels:
            out = out + _single(v)
        return out

    @property
    def explicit(self) -> bool:
        return self.levels is not None

    def __add__(self, other: "Pattern") -> "Pattern":
        n = self.length + other.length
        h1 = (self.h1 * pow(_BASES[0], other.length, _MODS[0]) + other.h1) % _MODS[0]
        h2 = (self.h2 * pow(_BASES[1], other.length, _MODS[1]) + other.h2) % _MODS[1]
        levels = None
        if self.levels is not None and other.levels is not None and n <= EXPLICIT_LIMIT:
            levels = self.levels + other.levels
        return Pattern(n, h1, h2, levels)

    def same(self, other: "Pattern") -> bool:
        if self.levels is not None and other.levels is not None:
            return self.levels == other.levels
        return (self.length, self.h1, self.h2) == (other.length, other.h1, other.h2)

    def to_json(self):
        if self.levels is not None:
            return list(self.levels)
        return {"length": self.length, "digest": f"{self.h1:016x}{self.h2:08x}"}


_EMPTY = Pattern(0, 0, 0, ())


def _single(v: int) -> Pattern:
    return Pattern(1, v % _MODS[0], v % _MODS[1], (v,))


class _Recurrence:
    """Memoized G(a, b, t) for one slope; c_0 is never used as an endpoint."""

    def __init__(self, tmap: TentMap, depth: int) -> None:
        self.tmap = tmap
        self.points = orbit_points(tmap, depth + 2)
        self._sides: dict[int, Ordering] = {}
        self.G = lru_cache(maxsize=None)(self._G)
        self.count = lru_cache(maxsize=None)(self._count)

    def side(self, a: int) -> Ordering:
        got = self._sides.get(a)
        if got is None:
            got = compare(self.points[a - 1], HALF)
            if got is Ordering.EQ:
                raise PreperiodicOrbit(f"c_{a} = c for {self.tmap!r}")
            self._sides[a] = got
        return got

    def _splits(self, a: int, b: int) -> bool:
        return self.side(a) is not self.side(b)

    def _G(self, a: int, b: int, t: int) -> Pattern:
        if t <= 0:
            return _EMPTY
        if self._splits(a, b):
            return self.G(a + 1, 1, t - 1) + _single(t) + self.G(1, b + 1, t - 1)
        return self.G(a + 1, b + 1, t - 1)

    def _count(self, a: int, b: int, t: int, level: int) -> int:
        # only levels <= t occur in G(a, b, t)
        if t <= 0 or level > t:
            return 0
        if self._splits(a, b):
            here = 1 if level == t else 0
            return here + self.count(a + 1, 1, t - 1, level) + self.count(1, b + 1, t - 1, level)
        return self.count(a + 1, b + 1, t - 1, level)

    def pattern(self, n: int) -> Pattern:
        """Levels along [m_(n-1), m_n] at depth n, read from m_(n-1)."""
        return _single(n - 1) + self.G(1, 2, n - 2) + _single(n)


@dataclass(frozen=True, eq=False)
class InvariantEntry:
    n: int
    pattern: Pattern
    side: bool
    checked: bool

    def to_json(self) -> dict:
        return {"n": self.n, "pattern": self.pattern.to_json(), "side": self.side}


@dataclass(frozen=True, eq=False)
class InvariantSequence:
    slope: ExactScalar
    entries: tuple

    def entry(self, n: int) -> InvariantEntry:
        return self.entries[n - 2]

    def to_json(self) -> dict:
        return {"slope": scalar_to_json(self.slope), "entries": [e.to_json() for e in self.entries]}


def _direct(tmap: TentMap, n: int) -> tuple:
    J = (HALF, right_pullback(tmap, HALF))
    return tuple(reversed(k_pattern(tmap, n, J)))


def invariant_sequence(
    tmap: TentMap, N: int, cross_check_limit: int = CROSS_CHECK_LIMIT
) -> InvariantSequence:
    """Entries n = 2..N. Short patterns are cross-checked against direct extraction and shift_pattern."""
    if N < 2:
        raise ValueError("invariant_sequence needs N >= 2")
    rec = _Recurrence(tmap, N)
    J = (HALF, right_pullback(tmap, HALF))
    entries = []
    prev_positional: Optional[tuple] = None
    for n in range(2, N + 1):
        pat = rec.pattern(n)
        checked = False
        if pat.explicit and pat.length <= cross_check_limit:
            direct = _direct(tmap, n)
            if direct != pat.levels:
                raise RecurrenceMismatch(f"n = {n}: recurrence {pat.levels} vs direct {direct}")
            positional = tuple(reversed(direct))
            if prev_positional is not None:
                shifted = shift_pattern(prev_positional, crossing_flags(tmap, n - 1, J))
                if shifted != positional:
                    raise RecurrenceMismatch(f"n = {n}: shift_pattern {shifted} vs direct {positional}")
            prev_positional = positional
            checked = True
        else:
            prev_positional = None
        entries.append(InvariantEntry(n=n, pattern=pat, side=rec.side(n) is Ordering.GT, checked=checked))
    return InvariantSequence(slope=tmap.slope, entries=tuple(entries))


def _as_map(s: Union[TentMap, ExactScalar]) -> TentMap:
    return s if isinstance(s, TentMap) else TentMap(s)


def distinguish(
    s1: Union[TentMap, ExactScalar], s2: Union[TentMap, ExactScalar], N: int
) -> Optional[tuple[int, str]]:
    """First n <= N where the invariant sequences differ, with the reason, or None."""
    a = invariant_sequence(_as_map(s1), N, cross_check_limit=0)
    b = invariant_sequence(_as_map(s2), N, cross_check_limit=0)
    for ea, eb in zip(a.entries, b.entries):
        if not ea.pattern.same(eb.pattern):
            return ea.n, "pattern-mismatch"
        if ea.side != eb.side:
            return ea.n, "side-mismatch"
    return None


def count_levels(tmap: TentMap, K: int, n: int, closed: bool = False) -> int:
    """Number of k-points of level n on [m_K, m_(K+1)), or on the closed arc if ``closed``.

    The half-open convention makes the windows for consecutive K partition the arc component.
    """
    if K < 1 or n < 1:
        raise ValueError("count_levels needs K >= 1 and n >= 1")
    depth = K + 1
    rec = _Recurrence(tmap, depth)
    total = 1 if n == K else 0  # m_K itself
    if closed and n == K + 1:
        total += 1
    return total + rec.count(1, 2, depth - 2, n)
