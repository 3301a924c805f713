"""Coercion and formatting of exact rationals."""

from fractions import Fraction
from numbers import Rational

from .errors import ValidationError


def as_fraction(value) -> Fraction:
    """Coerce ``value`` to a Fraction without ever passing through float.

    Accepts ints, Fractions, and strings such as ``"3/4"``, ``"0.05"`` or
    ``"1e-3"``.  Floats are rejected: ``0.1`` as a float is not 1/10.
    """
    if type(value) is Fraction:
        return value
    if isinstance(value, bool):
        raise ValidationError(f"not a rational: {value!r}")
    if isinstance(value, Rational):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        try:
            return Fraction(text)
        except (ValueError, ZeroDivisionError):
            raise ValidationError(f"not a rational: {value!r}") from None
    raise ValidationError(f"not a rational: {value!r} (floats are not accepted)")


def fmt(q: Fraction) -> str:
    """Render as ``p/q`` (or ``p`` when integral)."""
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"
