"""Exception hierarchy shared by every tentlim module."""

from __future__ import annotations


class TentlimError(Exception):
    """Base class for all library errors."""


class MalformedNumber(TentlimError, ValueError):
    pass


class ZeroDenominator(TentlimError, ZeroDivisionError):
    pass


class PrecisionExhausted(TentlimError, ArithmeticError):
    """An interval comparison could not be certified at the working precision.

    Re-running with more bits may succeed; guessing is never an option.
    """


class OutOfDomain(TentlimError, ValueError):
    pass


class SlopeOutOfRange(TentlimError, ValueError):
    pass


class Renormalizable(TentlimError):
    """kappa - 3 came out odd, which only happens for slopes <= sqrt(2)."""


class KappaUndefined(TentlimError):
    """No orbit point c_i <= c was found (orbit absorbed by the fixed point)."""


class PreperiodicOrbit(TentlimError):
    """The critical orbit hits c, or cannot be separated from c."""


class LengthMismatch(TentlimError, ValueError):
    pass


class AnchorOutside(TentlimError):
    pass


class AnchorAtFold(TentlimError):
    pass


class DepthTooShallow(TentlimError, ValueError):
    pass


class CenterOutside(TentlimError, ValueError):
    pass


class NoEpsilonFound(TentlimError):
    pass


class NotFound(TentlimError):
    """verify_lemma12 found no branch; this is a counterexample report."""


class PreconditionError(TentlimError, ValueError):
    pass


class RecurrenceMismatch(TentlimError):
    """A pattern from the shift recurrence disagrees with direct extraction."""
