"""Generalized distribution functions on [0, 1].

A :class:`GeneralizedCDF` is a monotone function stored as breakpoints that
carry three values each (``F(x-)``, ``F(x)``, ``F(x+)``) and, between
consecutive breakpoints, a continuous segment that is either linear or an
affinely placed window of the Cantor function.  Storing ``F(x)`` separately
from both one-sided limits is what lets a single type hold measures
(right-continuous) as well as contents whose value at a jump sits strictly
between the limits.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .cantor import cantor_exact, cantor_quantile, cantor_quantile_right
from .errors import DomainError, PreconditionError, ValidationError
from .rational import as_fraction, fmt

SIDES = ("left", "at", "right")


@dataclass(frozen=True)
class Breakpoint:
    x: Fraction
    left: Fraction
    at: Fraction
    right: Fraction

    def __post_init__(self):
        for name in ("x", "left", "at", "right"):
            object.__setattr__(self, name, as_fraction(getattr(self, name)))
        if not (0 <= self.x <= 1):
            raise ValidationError(f"breakpoint {fmt(self.x)} outside [0,1]")
        if not (0 <= self.left <= self.at <= self.right):
            raise ValidationError(
                f"breakpoint {fmt(self.x)}: need 0 <= left <= at <= right, "
                f"got {fmt(self.left)}, {fmt(self.at)}, {fmt(self.right)}"
            )

    @property
    def left_gap(self) -> Fraction:
        return self.at - self.left

    @property
    def right_gap(self) -> Fraction:
        return self.right - self.at


@dataclass(frozen=True)
class Segment:
    """Shape of the cdf strictly between two breakpoints.

    ``linear`` rises at constant slope.  ``cantor`` follows the Cantor
    function over the window ``[u0, u1]`` of its domain, mapped affinely onto
    the span and scaled to the observed rise.
    """

    kind: str = "linear"
    u0: Fraction = Fraction(0)
    u1: Fraction = Fraction(1)

    def __post_init__(self):
        if self.kind not in ("linear", "cantor"):
            raise ValidationError(f"unknown segment kind {self.kind!r}")
        object.__setattr__(self, "u0", as_fraction(self.u0))
        object.__setattr__(self, "u1", as_fraction(self.u1))
        if self.kind == "cantor" and not (0 <= self.u0 < self.u1 <= 1):
            raise ValidationError("cantor window must satisfy 0 <= u0 < u1 <= 1")

    @property
    def full_window(self) -> bool:
        return self.u0 == 0 and self.u1 == 1


LINEAR = Segment("linear")
CANTOR = Segment("cantor")


@dataclass(frozen=True)
class Jump:
    x: Fraction
    left_gap: Fraction
    right_gap: Fraction


@dataclass(frozen=True)
class Classification:
    is_right_continuous: bool
    is_continuous: bool
    jumps: tuple[Jump, ...] = field(default_factory=tuple)


class GeneralizedCDF:
    """Monotone function on [0, 1] with ``F(0-) = 0`` and ``F(1) = total_mass``."""

    __slots__ = ("breakpoints", "segments", "_xs", "_cont")

    def __init__(self, breakpoints: Sequence[Breakpoint], segments: Sequence[Segment] | None = None):
        bps = tuple(breakpoints)
        if segments is None:
            segments = (LINEAR,) * (len(bps) - 1)
        segs = tuple(segments)
        if len(bps) < 2 or bps[0].x != 0 or bps[-1].x != 1:
            raise ValidationError("breakpoints must start at 0 and end at 1")
        if len(segs) != len(bps) - 1:
            raise ValidationError("need exactly one segment between consecutive breakpoints")
        if bps[0].left != 0:
            raise ValidationError("F(0-) must be 0")
        if bps[-1].right != bps[-1].at:
            raise ValidationError("F(1+) must equal F(1)")
        for a, b in zip(bps, bps[1:]):
            if not a.x < b.x:
                raise ValidationError(f"breakpoints not strictly increasing at {fmt(b.x)}")
            if a.right > b.left:
                raise ValidationError(f"cdf decreases between {fmt(a.x)} and {fmt(b.x)}")
        for i, seg in enumerate(segs):
            if seg.kind == "cantor":
                inc = cantor_exact(seg.u1) - cantor_exact(seg.u0)
                rise = bps[i + 1].left - bps[i].right
                if inc == 0 and rise != 0:
                    raise ValidationError(f"cantor window on ({fmt(bps[i].x)},{fmt(bps[i + 1].x)}) is flat but the cdf rises")
        self.breakpoints = bps
        self.segments = segs
        self._xs = [bp.x for bp in bps]
        self._cont = None

    # -- construction helpers -------------------------------------------------

    @classmethod
    def piecewise_linear(cls, knots: Iterable[tuple]) -> "GeneralizedCDF":
        """Continuous piecewise-linear cdf through ``(x, F(x))`` knots."""
        pts = [(as_fraction(x), as_fraction(y)) for x, y in knots]
        bps = [Breakpoint(x, y if x > 0 else 0, y, y) for x, y in pts]
        return cls(bps)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, GeneralizedCDF)
            and self.breakpoints == other.breakpoints
            and self.segments == other.segments
        )

    def __hash__(self) -> int:
        return hash((self.breakpoints, self.segments))

    def __repr__(self) -> str:
        return f"GeneralizedCDF({len(self.breakpoints)} breakpoints, total={fmt(self.total_mass)})"

    @property
    def total_mass(self) -> Fraction:
        return self.breakpoints[-1].at

    @property
    def xs(self) -> list[Fraction]:
        return list(self._xs)

    def breakpoint_at(self, x) -> Breakpoint | None:
        i = bisect.bisect_left(self._xs, x)
        if i < len(self._xs) and self._xs[i] == x:
            return self.breakpoints[i]
        return None

    def segment_bounds(self, i: int) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        """``(a, b, F(a+), F(b-))`` for segment ``i``."""
        lo, hi = self.breakpoints[i], self.breakpoints[i + 1]
        return lo.x, hi.x, lo.right, hi.left

    def segment_rise(self, i: int) -> Fraction:
        return self.breakpoints[i + 1].left - self.breakpoints[i].right

    def segment_slope(self, i: int) -> Fraction:
        if self.segments[i].kind != "linear":
            raise ValidationError("slope is only defined for linear segments")
        a, b, _, _ = self.segment_bounds(i)
        return self.segment_rise(i) / (b - a)

    def segment_index(self, x) -> int:
        """Index of the segment whose open span contains ``x`` (not a breakpoint)."""
        return bisect.bisect_right(self._xs, x) - 1

    # -- evaluation -------------------------------------------------------------

    def _cantor_scale(self, i: int) -> Fraction:
        seg = self.segments[i]
        return cantor_exact(seg.u1) - cantor_exact(seg.u0)

    def _segment_value(self, i: int, x: Fraction) -> Fraction:
        a, b, ya, yb = self.segment_bounds(i)
        rise = yb - ya
        if rise == 0:
            return ya
        t = (x - a) / (b - a)
        seg = self.segments[i]
        if seg.kind == "linear":
            return ya + rise * t
        u = seg.u0 + (seg.u1 - seg.u0) * t
        return ya + rise * (cantor_exact(u) - cantor_exact(seg.u0)) / self._cantor_scale(i)

    def eval_at(self, x, side: str = "at") -> Fraction:
        """``F(x-)``, ``F(x)`` or ``F(x+)`` selected by ``side``."""
        x = as_fraction(x)
        if not (0 <= x <= 1):
            raise DomainError(f"point {fmt(x)} outside [0,1]")
        if side not in SIDES:
            raise ValidationError(f"side must be one of {SIDES}")
        bp = self.breakpoint_at(x)
        if bp is not None:
            return getattr(bp, side)
        return self._segment_value(self.segment_index(x), x)

    __call__ = eval_at

    def _segment_quantile(self, i: int, y: Fraction) -> Fraction:
        # leftmost x in (a, b] with value >= y, for ya < y <= yb
        a, b, ya, yb = self.segment_bounds(i)
        frac = (y - ya) / (yb - ya)
        seg = self.segments[i]
        if seg.kind == "linear":
            return a + (b - a) * frac
        c0 = cantor_exact(seg.u0)
        u = cantor_quantile(c0 + frac * self._cantor_scale(i))
        return a + (b - a) * (u - seg.u0) / (seg.u1 - seg.u0)

    def quantile_leftmost(self, p) -> Fraction:
        """``inf {x : F(x) >= p}`` for a continuous cdf (exactly, in rationals).

        Raises :class:`PreconditionError` carrying the first jump if the cdf is
        not continuous.
        """
        p = as_fraction(p)
        for bp in self.breakpoints:
            if bp.left_gap or bp.right_gap:
                raise PreconditionError(f"cdf jumps at {fmt(bp.x)}; quantile needs a continuous cdf", witness=bp)
        if not (0 <= p <= self.total_mass):
            raise DomainError(f"level {fmt(p)} outside [0, {fmt(self.total_mass)}]")
        return self._quantile_continuous(p)

    def _quantile_continuous(self, p: Fraction) -> Fraction:
        if p <= 0:
            return Fraction(0)
        for i in range(len(self.segments)):
            a, b, ya, yb = self.segment_bounds(i)
            if yb >= p:
                if p <= ya:
                    return a
                return self._segment_quantile(i, p)
        return Fraction(1)

    # -- structure --------------------------------------------------------------

    def classify(self) -> Classification:
        jumps = tuple(Jump(bp.x, bp.left_gap, bp.right_gap) for bp in self.breakpoints if bp.left_gap or bp.right_gap)
        rc = all(bp.right_gap == 0 for bp in self.breakpoints)
        cont = rc and all(bp.left_gap == 0 for bp in self.breakpoints)
        return Classification(rc, cont, jumps)

    def left_end_positive(self, i: int) -> bool:
        """True when every right-neighbourhood of the segment's left end has positive increment."""
        if self.segment_rise(i) == 0:
            return False
        seg = self.segments[i]
        if seg.kind == "linear":
            return True
        return cantor_quantile_right(cantor_exact(seg.u0)) == seg.u0

    def right_end_positive(self, i: int) -> bool:
        """True when every left-neighbourhood of the segment's right end has positive increment."""
        if self.segment_rise(i) == 0:
            return False
        seg = self.segments[i]
        if seg.kind == "linear":
            return True
        return cantor_quantile(cantor_exact(seg.u1)) == seg.u1

    def has_flat_gap(self, i: int) -> bool:
        """True when some open subinterval of the segment carries zero increment."""
        return self.segment_rise(i) == 0 or self.segments[i].kind == "cantor"

    def continuous_part(self) -> "GeneralizedCDF":
        """The cdf with every jump removed and segments kept."""
        if self._cont is not None:
            return self._cont
        removed = Fraction(0)
        bps = []
        for bp in self.breakpoints:
            removed += bp.left_gap
            v = bp.at - removed
            bps.append(Breakpoint(bp.x, v if bp.x > 0 else 0, v, v))
            removed += bp.right_gap
        # F(0) may carry a left gap at 0 which is removed above
        self._cont = GeneralizedCDF(bps, self.segments)
        return self._cont

    def refine(self, points: Iterable) -> "GeneralizedCDF":
        """Same function with extra (continuous) breakpoints inserted."""
        new = sorted({as_fraction(p) for p in points} - set(self._xs))
        if not new:
            return self
        bps: list[Breakpoint] = []
        segs: list[Segment] = []
        j = 0
        for i, seg in enumerate(self.segments):
            bps.append(self.breakpoints[i])
            a, b, ya, yb = self.segment_bounds(i)
            cuts = []
            while j < len(new) and new[j] < b:
                if new[j] > a:
                    cuts.append(new[j])
                j += 1
            prev_u = seg.u0
            for c in cuts:
                v = self._segment_value(i, c)
                if seg.kind == "cantor":
                    u = seg.u0 + (seg.u1 - seg.u0) * (c - a) / (b - a)
                    segs.append(_window(prev_u, u))
                    prev_u = u
                else:
                    segs.append(LINEAR)
                bps.append(Breakpoint(c, v, v, v))
            segs.append(_window(prev_u, seg.u1) if seg.kind == "cantor" else LINEAR)
        bps.append(self.breakpoints[-1])
        return GeneralizedCDF(bps, segs)

    def scaled(self, w) -> "GeneralizedCDF":
        w = as_fraction(w)
        if w < 0:
            raise ValidationError("scale factor must be non-negative")
        bps = [Breakpoint(bp.x, w * bp.left, w * bp.at, w * bp.right) for bp in self.breakpoints]
        return GeneralizedCDF(bps, self.segments if w else (LINEAR,) * len(self.segments))

    def __add__(self, other: "GeneralizedCDF") -> "GeneralizedCDF":
        xs = set(self._xs) | set(other._xs)
        f, g = self.refine(xs), other.refine(xs)
        bps = [
            Breakpoint(p.x, p.left + q.left, p.at + q.at, p.right + q.right)
            for p, q in zip(f.breakpoints, g.breakpoints)
        ]
        segs = []
        for i, (s, t) in enumerate(zip(f.segments, g.segments)):
            rf, rg = f.segment_rise(i), g.segment_rise(i)
            if rf == 0:
                segs.append(t if rg else LINEAR)
            elif rg == 0:
                segs.append(s)
            elif s.kind == "linear" and t.kind == "linear":
                segs.append(LINEAR)
            else:
                a, b, _, _ = f.segment_bounds(i)
                raise ValidationError(
                    f"cannot represent a sum of two rising shapes on ({fmt(a)},{fmt(b)}) "
                    f"unless both are linear"
                )
        return GeneralizedCDF(bps, segs)


def _window(u0: Fraction, u1: Fraction) -> Segment:
    if cantor_exact(u1) == cantor_exact(u0):
        return LINEAR
    return Segment("cantor", u0, u1)


def uniform_cdf(mass=1) -> GeneralizedCDF:
    m = as_fraction(mass)
    return GeneralizedCDF.piecewise_linear([(0, 0), (1, m)])


def cantor_distribution(mass=1) -> GeneralizedCDF:
    m = as_fraction(mass)
    return GeneralizedCDF([Breakpoint(0, 0, 0, 0), Breakpoint(1, m, m, m)], [CANTOR])


def dirac_cdf(x, mass=1) -> GeneralizedCDF:
    """Right-continuous step of height ``mass`` at ``x``."""
    x, m = as_fraction(x), as_fraction(mass)
    if x == 0:
        return GeneralizedCDF([Breakpoint(0, 0, m, m), Breakpoint(1, m, m, m)])
    if x == 1:
        return GeneralizedCDF([Breakpoint(0, 0, 0, 0), Breakpoint(1, 0, m, m)])
    return GeneralizedCDF([Breakpoint(0, 0, 0, 0), Breakpoint(x, 0, m, m), Breakpoint(1, m, m, m)])
