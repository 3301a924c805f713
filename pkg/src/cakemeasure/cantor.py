"""The Cantor function (devil's staircase) on [0, 1].

Two evaluation routes are provided on purpose:

* :func:`cantor_cdf` truncates the ternary-digit formula after ``depth``
  digits and returns a certified lower bound together with its error.
* :func:`cantor_exact` returns the exact value at a rational point.  A
  rational has an eventually periodic ternary expansion, so the binary
  expansion of its image is eventually periodic too and sums in closed form.

The quantile routines invert the function exactly at rational levels.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import DomainError
from .intervals import IntervalSet, open_interval
from .rational import as_fraction, fmt

DEFAULT_DEPTH = 40


def _check_unit(x: Fraction) -> Fraction:
    x = as_fraction(x)
    if not (0 <= x <= 1):
        raise DomainError(f"point {fmt(x)} outside [0,1]")
    return x


def cantor_cdf(x, depth: int = DEFAULT_DEPTH) -> tuple[Fraction, Fraction]:
    """Truncated Cantor function.

    Returns ``(value, error)`` with ``value <= C(x) <= value + error``.  The
    error is ``0`` when a ternary digit 1 shows up within ``depth`` digits
    (``x`` then sits on a plateau and the value is exact), else ``2**-depth``.
    """
    if depth < 1:
        raise DomainError("depth must be >= 1")
    x = _check_unit(x)
    if x == 1:
        return Fraction(1), Fraction(0)
    value = Fraction(0)
    weight = Fraction(1, 2)
    r = x
    for _ in range(depth):
        r *= 3
        digit = r.numerator // r.denominator
        r -= digit
        if digit == 1:
            return value + weight, Fraction(0)
        if digit == 2:
            value += weight
        weight /= 2
    if r == 0:
        return value, Fraction(0)
    return value, Fraction(1, 2**depth)


def _periodic_sum(prefix_bits: list[int], cycle_bits: list[int]) -> Fraction:
    """Value of the binary fraction 0.prefix(cycle)(cycle)..."""
    value = Fraction(0)
    for i, b in enumerate(prefix_bits, start=1):
        if b:
            value += Fraction(1, 2**i)
    if cycle_bits:
        period = len(cycle_bits)
        block = sum(b << (period - 1 - i) for i, b in enumerate(cycle_bits))
        value += Fraction(block, (2**period - 1) * 2 ** len(prefix_bits))
    return value


def cantor_exact(x) -> Fraction:
    """Exact value of the Cantor function at a rational point."""
    x = _check_unit(x)
    if x == 1:
        return Fraction(1)
    bits: list[int] = []
    seen: dict[Fraction, int] = {}
    r = x
    while r not in seen:
        seen[r] = len(bits)
        r3 = 3 * r
        digit = r3.numerator // r3.denominator
        if digit == 1:
            return _periodic_sum(bits + [1], [])
        bits.append(digit // 2)
        r = r3 - digit
    start = seen[r]
    return _periodic_sum(bits[:start], bits[start:])


def _binary_digits(p: Fraction) -> tuple[list[int], list[int]]:
    """Binary expansion of ``p`` in [0, 1) as (prefix, cycle)."""
    bits: list[int] = []
    seen: dict[Fraction, int] = {}
    r = p
    while r not in seen:
        seen[r] = len(bits)
        r2 = 2 * r
        bit = 1 if r2 >= 1 else 0
        bits.append(bit)
        r = r2 - bit
    start = seen[r]
    return bits[:start], bits[start:]


def _ternary_from_bits(prefix: list[int], cycle: list[int]) -> Fraction:
    """Point of the Cantor set whose ternary digits are twice the given bits."""
    value = Fraction(0)
    for i, b in enumerate(prefix, start=1):
        if b:
            value += Fraction(2, 3**i)
    if cycle:
        period = len(cycle)
        block = sum(2 * b * 3 ** (period - 1 - i) for i, b in enumerate(cycle))
        value += Fraction(block, (3**period - 1) * 3 ** len(prefix))
    return value


def _is_dyadic(p: Fraction) -> bool:
    d = p.denominator
    return d & (d - 1) == 0


def cantor_quantile(p) -> Fraction:
    """Leftmost ``x`` with ``C(x) >= p``.

    For dyadic ``p`` this is the left end of the plateau at height ``p``,
    obtained from the binary expansion of ``p`` that ends in repeating ones.
    """
    p = _check_unit(p)
    if p == 0:
        return Fraction(0)
    if p == 1:
        return Fraction(1)
    if _is_dyadic(p):
        # p = 0.b1...bk with bk = 1; use 0.b1...b(k-1)0111...
        k = p.denominator.bit_length() - 1
        bits = [(p.numerator >> (k - i)) & 1 for i in range(1, k + 1)]
        return _ternary_from_bits(bits[:-1], []) + Fraction(1, 3**k)
    prefix, cycle = _binary_digits(p)
    return _ternary_from_bits(prefix, cycle)


def cantor_quantile_right(p) -> Fraction:
    """Rightmost ``x`` with ``C(x) <= p`` (right end of a plateau)."""
    p = _check_unit(p)
    if p == 1:
        return Fraction(1)
    if p == 0:
        return Fraction(0)
    if _is_dyadic(p):
        k = p.denominator.bit_length() - 1
        bits = [(p.numerator >> (k - i)) & 1 for i in range(1, k + 1)]
        return _ternary_from_bits(bits, [])
    prefix, cycle = _binary_digits(p)
    return _ternary_from_bits(prefix, cycle)


def removed_intervals(generation: int) -> list[tuple[Fraction, Fraction, Fraction]]:
    """Open middle thirds removed in step ``generation`` with their plateau value.

    Returns ``(a, b, value)`` triples; step ``n`` removes ``2**(n-1)`` intervals
    of length ``3**-n`` on which the Cantor function equals ``i / 2**n`` for
    odd ``i``.
    """
    if generation < 1:
        raise DomainError("generation must be >= 1")
    out = []
    scale = Fraction(1, 3**generation)
    for idx in range(2 ** (generation - 1)):
        # left endpoints of the surviving intervals of the previous step
        digits = [2 * ((idx >> (generation - 2 - i)) & 1) for i in range(generation - 1)]
        base = sum((Fraction(d, 3 ** (i + 1)) for i, d in enumerate(digits)), Fraction(0))
        a = base + scale
        value = Fraction(2 * idx + 1, 2**generation)
        out.append((a, a + scale, value))
    return out


def removed_middle_thirds(generations: int) -> IntervalSet:
    """Union of everything removed in steps ``1..generations``."""
    parts = [open_interval(a, b) for n in range(1, generations + 1) for a, b, _ in removed_intervals(n)]
    return IntervalSet(parts)
