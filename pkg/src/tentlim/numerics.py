"""Certified scalars: exact rationals, or outward-rounded dyadic intervals.

Every comparison made in tentlim goes through this module, either via
:func:`compare` / :func:`sign` or via the rich comparison operators of
:class:`Interval`, which raise :class:`PrecisionExhausted` instead of guessing.
"""

from __future__ import annotations

import enum
import math
import os
import re
from fractions import Fraction
from typing import Union

from .errors import MalformedNumber, PrecisionExhausted, ZeroDenominator

DEFAULT_PRECISION_BITS = 64
PRECISION_ENV = "TENTLIM_PRECISION_BITS"


def default_precision() -> int:
    raw = os.environ.get(PRECISION_ENV)
    if raw is None:
        return DEFAULT_PRECISION_BITS
    try:
        bits = int(raw)
    except ValueError as exc:
        raise MalformedNumber(f"{PRECISION_ENV}={raw!r} is not an integer") from exc
    if bits < 8:
        raise MalformedNumber(f"{PRECISION_ENV} must be >= 8, got {bits}")
    return bits


class Ordering(enum.IntEnum):
    LT = -1
    EQ = 0
    GT = 1


def _floor_dyadic(x: Fraction, bits: int) -> Fraction:
    scale = 1 << bits
    return Fraction(math.floor(x * scale), scale)


def _ceil_dyadic(x: Fraction, bits: int) -> Fraction:
    scale = 1 << bits
    return Fraction(math.ceil(x * scale), scale)


class Interval:
    """Closed interval [lo, hi] with dyadic endpoints at ``bits`` fractional bits.

    Arithmetic is performed exactly on the endpoints and then rounded outward,
    so the true value is always enclosed. Comparisons are certified: they answer
    only when the intervals are disjoint (or both are the same point) and raise
    PrecisionExhausted otherwise. Instances are immutable and unhashable.
    """

    __slots__ = ("lo", "hi", "bits")
    __hash__ = None  # type: ignore[assignment]

    def __init__(self, lo: Fraction, hi: Fraction, bits: int) -> None:
        lo = Fraction(lo)
        hi = Fraction(hi)
        if lo > hi:
            raise ValueError(f"empty interval [{lo}, {hi}]")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)
        object.__setattr__(self, "bits", bits)

    def __setattr__(self, name, value):
        raise AttributeError("Interval is immutable")

    @classmethod
    def enclose(cls, lo: Fraction, hi: Fraction, bits: int) -> "Interval":
        return cls(_floor_dyadic(Fraction(lo), bits), _ceil_dyadic(Fraction(hi), bits), bits)

    @classmethod
    def point(cls, x, bits: int) -> "Interval":
        return cls.enclose(Fraction(x), Fraction(x), bits)

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def contains(self, x) -> bool:
        if isinstance(x, Interval):
            return self.lo <= x.lo and x.hi <= self.hi
        return self.lo <= x <= self.hi

    def __repr__(self) -> str:
        return f"Interval({float(self.lo)!r}, {float(self.hi)!r}, bits={self.bits})"

    # -- arithmetic ---------------------------------------------------------

    def _coerce(self, other) -> "Interval | None":
        if isinstance(other, Interval):
            return other
        if isinstance(other, (int, Fraction)):
            return Interval(Fraction(other), Fraction(other), self.bits)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        bits = max(self.bits, o.bits)
        return Interval.enclose(self.lo + o.lo, self.hi + o.hi, bits)

    __radd__ = __add__

    def __neg__(self) -> "Interval":
        return Interval(-self.hi, -self.lo, self.bits)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        bits = max(self.bits, o.bits)
        return Interval.enclose(self.lo - o.hi, self.hi - o.lo, bits)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o.__sub__(self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        bits = max(self.bits, o.bits)
        products = (self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi)
        return Interval.enclose(min(products), max(products), bits)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if o.lo <= 0 <= o.hi:
            if o.lo == o.hi == 0:
                raise ZeroDenominator("division by zero")
            raise PrecisionExhausted("divisor interval contains zero")
        bits = max(self.bits, o.bits)
        quotients = (self.lo / o.lo, self.lo / o.hi, self.hi / o.lo, self.hi / o.hi)
        return Interval.enclose(min(quotients), max(quotients), bits)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o.__truediv__(self)

    def __abs__(self) -> "Interval":
        if self.lo >= 0:
            return self
        if self.hi <= 0:
            return -self
        return Interval(Fraction(0), max(-self.lo, self.hi), self.bits)

    # -- certified comparisons -----------------------------------------------

    def _order(self, other) -> Ordering:
        o = self._coerce(other)
        if o is None:
            raise TypeError(f"cannot compare Interval with {type(other).__name__}")
        if self.hi < o.lo:
            return Ordering.LT
        if self.lo > o.hi:
            return Ordering.GT
        if self.lo == self.hi == o.lo == o.hi:
            return Ordering.EQ
        raise PrecisionExhausted(
            f"cannot order [{float(self.lo)}, {float(self.hi)}] and "
            f"[{float(o.lo)}, {float(o.hi)}] at {max(self.bits, o.bits)} bits"
        )

    def __lt__(self, other) -> bool:
        return self._order(other) is Ordering.LT

    def __le__(self, other) -> bool:
        return self._order(other) is not Ordering.GT

    def __gt__(self, other) -> bool:
        return self._order(other) is Ordering.GT

    def __ge__(self, other) -> bool:
        return self._order(other) is not Ordering.LT

    def __eq__(self, other) -> bool:  # type: ignore[override]
        if not isinstance(other, (Interval, int, Fraction)):
            return NotImplemented
        return self._order(other) is Ordering.EQ

    def __ne__(self, other) -> bool:  # type: ignore[override]
        if not isinstance(other, (Interval, int, Fraction)):
            return NotImplemented
        return self._order(other) is not Ordering.EQ

    def same_as(self, other: "Interval") -> bool:
        """Structural identity (not a numeric comparison)."""
        return (self.lo, self.hi, self.bits) == (other.lo, other.hi, other.bits)


ExactScalar = Union[Fraction, Interval]


def is_rational(x) -> bool:
    return isinstance(x, (int, Fraction))


def compare(a: ExactScalar, b: ExactScalar) -> Ordering:
    if isinstance(a, Interval):
        return a._order(b)
    if isinstance(b, Interval):
        return Ordering(-b._order(a))
    if a < b:
        return Ordering.LT
    if a > b:
        return Ordering.GT
    return Ordering.EQ


def sign(x: ExactScalar) -> int:
    return int(compare(x, Fraction(0)))


def smin(a: ExactScalar, b: ExactScalar) -> ExactScalar:
    """Certified minimum; never needs to decide which argument is smaller."""
    if isinstance(a, Interval) or isinstance(b, Interval):
        bits = max(x.bits for x in (a, b) if isinstance(x, Interval))
        ia = a if isinstance(a, Interval) else Interval(Fraction(a), Fraction(a), bits)
        ib = b if isinstance(b, Interval) else Interval(Fraction(b), Fraction(b), bits)
        return Interval(min(ia.lo, ib.lo), min(ia.hi, ib.hi), bits)
    return min(a, b)


def smax(a: ExactScalar, b: ExactScalar) -> ExactScalar:
    return -smin(-a, -b)


def to_float(x: ExactScalar) -> float:
    if isinstance(x, Interval):
        return float(x.mid)
    return float(x)


# -- parsing ----------------------------------------------------------------

_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)\s*/\s*([+-]?\d+)\s*$")
_DECIMAL_RE = re.compile(r"^\s*[+-]?(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?\s*$")
_SQRT_RE = re.compile(r"^\s*sqrt\(\s*([^()]+?)\s*\)\s*$")


def sqrt_interval(q: Fraction, bits: int) -> ExactScalar:
    """sqrt(q) exactly when q is a rational square, else an enclosure of width 2^-bits."""
    q = Fraction(q)
    if q < 0:
        raise MalformedNumber(f"sqrt of negative number {q}")
    rn, rd = math.isqrt(q.numerator), math.isqrt(q.denominator)
    if rn * rn == q.numerator and rd * rd == q.denominator:
        return Fraction(rn, rd)
    scale = 1 << bits
    root = math.isqrt(math.floor(q * scale * scale))
    return Interval(Fraction(root, scale), Fraction(root + 1, scale), bits)


def _named_constant(name: str, bits: int) -> ExactScalar | None:
    key = name.strip().lower()
    if key in ("sqrt2", "sqrt3", "sqrt5"):
        return sqrt_interval(Fraction(int(key[-1])), bits)
    if key in ("phi", "golden"):
        root5 = sqrt_interval(Fraction(5), bits + 1)
        return (root5 + 1) / 2
    return None


def parse_scalar(text: str, precision: int | None = None) -> ExactScalar:
    """Parse ``"p/q"``, a decimal literal, or a named irrational constant.

    >>> parse_scalar("3/2")
    Fraction(3, 2)
    """
    bits = default_precision() if precision is None else precision
    if not isinstance(text, str):
        raise MalformedNumber(f"expected a string, got {type(text).__name__}")
    m = _RATIONAL_RE.match(text)
    if m:
        num, den = int(m.group(1)), int(m.group(2))
        if den == 0:
            raise ZeroDenominator(f"zero denominator in {text!r}")
        return Fraction(num, den)
    if _DECIMAL_RE.match(text):
        return Fraction(text.strip())
    named = _named_constant(text, bits)
    if named is not None:
        return named
    m = _SQRT_RE.match(text)
    if m:
        inner = parse_scalar(m.group(1), bits)
        if isinstance(inner, Interval):
            raise MalformedNumber(f"nested irrational in {text!r}")
        return sqrt_interval(inner, bits)
    raise MalformedNumber(f"cannot parse {text!r} as a number")


# -- serialization ----------------------------------------------------------


def _dyadic_decimal(x: Fraction) -> str:
    """Exact decimal expansion of a fraction whose denominator is a power of two."""
    den = x.denominator
    k = den.bit_length() - 1
    if den != 1 << k:
        raise ValueError(f"{x} is not dyadic")
    sign_ = "-" if x < 0 else ""
    digits = abs(x.numerator) * 5**k
    if k == 0:
        return f"{sign_}{digits}"
    s = str(digits).rjust(k + 1, "0")
    return f"{sign_}{s[:-k]}.{s[-k:]}".rstrip("0").rstrip(".")


def scalar_to_json(x: ExactScalar):
    if isinstance(x, Interval):
        return {"lo": _dyadic_decimal(x.lo), "hi": _dyadic_decimal(x.hi), "bits": x.bits}
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def scalar_from_json(obj) -> ExactScalar:
    if isinstance(obj, dict):
        return Interval(Fraction(obj["lo"]), Fraction(obj["hi"]), int(obj["bits"]))
    return parse_scalar(obj)
