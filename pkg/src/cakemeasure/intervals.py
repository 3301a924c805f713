"""Finite unions of subintervals of [0, 1] with exact rational endpoints.

These are the pieces of cake.  Every :class:`IntervalSet` is kept in
canonical form: parts sorted, pairwise disjoint, and no two neighbours that
could be merged.  Canonical forms of equal point sets are equal as data.

Textual form::

    (0,1/2] u {3/4} u (7/8,1)
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator

from .errors import DomainError, ValidationError
from .rational import as_fraction, fmt

ZERO = Fraction(0)
ONE = Fraction(1)


@dataclass(frozen=True, order=True)
class Interval:
    lo: Fraction
    hi: Fraction
    lo_closed: bool = True
    hi_closed: bool = True

    def __post_init__(self):
        lo, hi = as_fraction(self.lo), as_fraction(self.hi)
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)
        if not (ZERO <= lo <= hi <= ONE):
            raise ValidationError(f"interval endpoints must satisfy 0 <= lo <= hi <= 1, got {fmt(lo)}, {fmt(hi)}")
        if lo == hi and not (self.lo_closed and self.hi_closed):
            raise ValidationError(f"degenerate interval at {fmt(lo)} must be a closed singleton")

    @property
    def is_point(self) -> bool:
        return self.lo == self.hi

    @property
    def length(self) -> Fraction:
        return self.hi - self.lo

    def __contains__(self, x) -> bool:
        if x < self.lo or x > self.hi:
            return False
        if x == self.lo and not self.lo_closed:
            return False
        if x == self.hi and not self.hi_closed:
            return False
        return True

    def __str__(self) -> str:
        if self.is_point:
            return "{" + fmt(self.lo) + "}"
        return f"{'[' if self.lo_closed else '('}{fmt(self.lo)},{fmt(self.hi)}{']' if self.hi_closed else ')'}"


def closed(a, b) -> Interval:
    return Interval(a, b, True, True)


def open_interval(a, b) -> Interval:
    return Interval(a, b, False, False)


def left_open(a, b) -> Interval:
    """``(a, b]``"""
    return Interval(a, b, False, True)


def right_open(a, b) -> Interval:
    """``[a, b)``"""
    return Interval(a, b, True, False)


def point(x) -> Interval:
    return Interval(x, x, True, True)


def _touches(cur: Interval, nxt: Interval) -> bool:
    # assumes cur.lo <= nxt.lo
    if nxt.lo < cur.hi:
        return True
    if nxt.lo == cur.hi:
        return cur.hi_closed or nxt.lo_closed
    return False


def _intersect_parts(a: Interval, b: Interval) -> Interval | None:
    if a.lo > b.lo:
        lo, lo_c = a.lo, a.lo_closed
    elif b.lo > a.lo:
        lo, lo_c = b.lo, b.lo_closed
    else:
        lo, lo_c = a.lo, a.lo_closed and b.lo_closed
    if a.hi < b.hi:
        hi, hi_c = a.hi, a.hi_closed
    elif b.hi < a.hi:
        hi, hi_c = b.hi, b.hi_closed
    else:
        hi, hi_c = a.hi, a.hi_closed and b.hi_closed
    if lo < hi or (lo == hi and lo_c and hi_c):
        return Interval(lo, hi, lo_c, hi_c)
    return None


def normalize(raw: Iterable[Interval]) -> tuple[Interval, ...]:
    """Canonical tuple of parts covering exactly the points of ``raw``."""
    items = sorted(raw, key=lambda iv: (iv.lo, not iv.lo_closed))
    out: list[Interval] = []
    for iv in items:
        if not isinstance(iv, Interval):
            raise ValidationError(f"not an Interval: {iv!r}")
        if out and _touches(out[-1], iv):
            cur = out[-1]
            if iv.hi > cur.hi:
                hi, hi_c = iv.hi, iv.hi_closed
            elif iv.hi == cur.hi:
                hi, hi_c = cur.hi, cur.hi_closed or iv.hi_closed
            else:
                hi, hi_c = cur.hi, cur.hi_closed
            out[-1] = Interval(cur.lo, hi, cur.lo_closed, hi_c)
        else:
            out.append(iv)
    return tuple(out)


class IntervalSet:
    """Canonical finite union of disjoint intervals of [0, 1]."""

    __slots__ = ("parts",)

    def __init__(self, parts: Iterable[Interval] = ()):
        self.parts = normalize(parts)

    @classmethod
    def empty(cls) -> "IntervalSet":
        return cls(())

    @classmethod
    def unit(cls) -> "IntervalSet":
        return cls((closed(0, 1),))

    @classmethod
    def of(cls, *parts: Interval) -> "IntervalSet":
        return cls(parts)

    @classmethod
    def parse(cls, text: str) -> "IntervalSet":
        return parse_interval_set(text)

    def __iter__(self) -> Iterator[Interval]:
        return iter(self.parts)

    def __len__(self) -> int:
        return len(self.parts)

    def __bool__(self) -> bool:
        return bool(self.parts)

    def __eq__(self, other) -> bool:
        return isinstance(other, IntervalSet) and self.parts == other.parts

    def __hash__(self) -> int:
        return hash(self.parts)

    def __repr__(self) -> str:
        return f"IntervalSet({str(self)!r})"

    def __str__(self) -> str:
        return format_interval_set(self)

    def __contains__(self, x) -> bool:
        return contains(self, x)

    def union(self, other: "IntervalSet") -> "IntervalSet":
        return IntervalSet(self.parts + other.parts)

    def intersect(self, other: "IntervalSet") -> "IntervalSet":
        out = []
        j = 0
        for a in self.parts:
            # parts of `other` are sorted; skip those entirely left of `a`
            while j < len(other.parts) and other.parts[j].hi < a.lo:
                j += 1
            k = j
            while k < len(other.parts) and other.parts[k].lo <= a.hi:
                piece = _intersect_parts(a, other.parts[k])
                if piece is not None:
                    out.append(piece)
                k += 1
        return IntervalSet(out)

    def complement(self) -> "IntervalSet":
        out = []
        cursor, cursor_closed = ZERO, True
        for part in self.parts:
            hi, hi_closed = part.lo, not part.lo_closed
            if cursor < hi or (cursor == hi and cursor_closed and hi_closed):
                out.append(Interval(cursor, hi, cursor_closed, hi_closed))
            cursor, cursor_closed = part.hi, not part.hi_closed
        if cursor < ONE or (cursor == ONE and cursor_closed):
            out.append(Interval(cursor, ONE, cursor_closed, True))
        return IntervalSet(out)

    def difference(self, other: "IntervalSet") -> "IntervalSet":
        return self.intersect(other.complement())

    def issubset(self, other: "IntervalSet") -> bool:
        return self.difference(other).is_empty()

    def is_empty(self) -> bool:
        return not self.parts

    def isdisjoint(self, other: "IntervalSet") -> bool:
        return self.intersect(other).is_empty()

    __or__ = union
    __and__ = intersect
    __sub__ = difference
    __le__ = issubset

    def __invert__(self) -> "IntervalSet":
        return self.complement()

    def endpoints(self) -> list[Fraction]:
        pts = set()
        for part in self.parts:
            pts.add(part.lo)
            pts.add(part.hi)
        return sorted(pts)


def set_op(kind: str, a: IntervalSet, b: IntervalSet | None = None) -> IntervalSet:
    """Boolean operation selected by name; complement is relative to [0, 1]."""
    if kind == "complement":
        return a.complement()
    if b is None:
        raise ValidationError(f"set operation {kind!r} needs two operands")
    try:
        fn = {"union": IntervalSet.union, "intersect": IntervalSet.intersect, "difference": IntervalSet.difference}[kind]
    except KeyError:
        raise ValidationError(f"unknown set operation {kind!r}") from None
    return fn(a, b)


def contains(s: IntervalSet, x) -> bool:
    x = as_fraction(x)
    if not (ZERO <= x <= ONE):
        raise DomainError(f"point {fmt(x)} outside [0,1]")
    return any(x in part for part in s.parts)


def format_interval_set(s: IntervalSet) -> str:
    if not s.parts:
        return "empty"
    return " u ".join(str(p) for p in s.parts)


_PART_RE = re.compile(r"^\s*(?:\{\s*([^{}\s]+)\s*\}|([(\[])\s*([^,\s]+)\s*,\s*([^\])\s]+)\s*([)\]]))\s*$")


def parse_interval_set(text: str) -> IntervalSet:
    """Parse the textual form (parts joined by ``u`` or ``∪``)."""
    body = text.strip()
    if body in ("empty", "∅", "{}", ""):
        return IntervalSet.empty()
    parts = []
    for chunk in re.split(r"(?<=[\])}])\s*(?:u|∪)\s*(?=[\[({])", body):
        m = _PART_RE.match(chunk)
        if not m:
            raise ValidationError(f"cannot parse interval {chunk!r}")
        if m.group(1) is not None:
            parts.append(point(as_fraction(m.group(1))))
        else:
            parts.append(Interval(as_fraction(m.group(3)), as_fraction(m.group(4)), m.group(2) == "[", m.group(5) == "]"))
    return IntervalSet(parts)
