"""Valuations of pieces of cake: measures and finitely additive contents.

A :class:`Valuation` pairs a :class:`~cakemeasure.cdf.GeneralizedCDF` with
an evaluation convention:

``stieltjes``
    the measure rule ``mu(a,b] = F(b) - F(a)``, ``mu[a,b] = F(b) - F(a-)``,
    ``mu(a,b) = F(b-) - F(a)``, ``mu{a} = F(a) - F(a-)``.  Requires a
    right-continuous cdf.
``content``
    every non-degenerate interval with endpoints ``a < b`` gets
    ``F(b) - F(a)`` whatever its endpoint flags, and every singleton gets 0.
    Any monotone cdf is allowed; jumps become *phantom* masses that belong to
    no point but to one side of it.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .cdf import Breakpoint, GeneralizedCDF
from .errors import ValidationError
from .intervals import Interval, IntervalSet, closed, right_open
from .rational import as_fraction, fmt


class Convention(str, enum.Enum):
    STIELTJES = "stieltjes"
    CONTENT = "content"


@dataclass(frozen=True)
class Valuation:
    cdf: GeneralizedCDF
    convention: Convention = Convention.STIELTJES
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "convention", Convention(self.convention))
        if self.convention is Convention.STIELTJES and not self.cdf.classify().is_right_continuous:
            bad = next(j for j in self.cdf.classify().jumps if j.right_gap)
            raise ValidationError(f"stieltjes valuation needs a right-continuous cdf (F(x) < F(x+) at x={fmt(bad.x)})")

    @property
    def is_measure(self) -> bool:
        return self.convention is Convention.STIELTJES

    @property
    def total_mass(self) -> Fraction:
        f = self.cdf
        if self.is_measure:
            return f.total_mass
        return f.total_mass - f.breakpoints[0].at

    def __call__(self, s: IntervalSet) -> Fraction:
        return eval_set(self, s)

    def renamed(self, name: str) -> "Valuation":
        return Valuation(self.cdf, self.convention, name)


@dataclass(frozen=True)
class Token:
    """An indivisible jump mass.

    ``side`` is ``atom`` (a measure's point mass, captured by containing the
    point), or ``left`` / ``right`` (a content's phantom, captured by
    containing a one-sided neighbourhood of ``x``).  ``forced`` is True when
    every such neighbourhood carries positive continuous mass, so capturing
    the token, or excluding it from a piece that could hold it, always costs
    some continuous mass.
    """

    x: Fraction
    side: str
    mass: Fraction
    forced: bool = False


def jump_tokens(v: Valuation) -> list[Token]:
    f = v.cdf
    out = []
    for i, bp in enumerate(f.breakpoints):
        if v.is_measure:
            if bp.left_gap:
                out.append(Token(bp.x, "atom", bp.left_gap, False))
            continue
        if bp.x > 0 and bp.left_gap:
            out.append(Token(bp.x, "left", bp.left_gap, f.right_end_positive(i - 1)))
        if bp.x < 1 and bp.right_gap:
            out.append(Token(bp.x, "right", bp.right_gap, f.left_end_positive(i)))
    return out


def _interval_mass(v: Valuation, iv: Interval) -> Fraction:
    f = v.cdf
    if v.is_measure:
        upper = f.eval_at(iv.hi, "at" if iv.hi_closed else "left")
        lower = f.eval_at(iv.lo, "left" if iv.lo_closed else "at")
        return upper - lower
    if iv.is_point:
        return Fraction(0)
    return f.eval_at(iv.hi) - f.eval_at(iv.lo)


def eval_set(v: Valuation, s: IntervalSet) -> Fraction:
    """Mass of a piece under the valuation's convention."""
    return sum((_interval_mass(v, iv) for iv in s.parts), Fraction(0))


@dataclass(frozen=True)
class MassReport:
    atoms: tuple[tuple[Fraction, Fraction], ...]
    left_phantoms: tuple[tuple[Fraction, Fraction], ...]
    right_phantoms: tuple[tuple[Fraction, Fraction], ...]
    continuous_mass: Fraction
    total_mass: Fraction

    @property
    def point_mass(self) -> Fraction:
        pieces = self.atoms + self.left_phantoms + self.right_phantoms
        return sum((m for _, m in pieces), Fraction(0))

    @property
    def atom_free(self) -> bool:
        return not self.atoms

    @property
    def jump_free(self) -> bool:
        return not (self.atoms or self.left_phantoms or self.right_phantoms)


def mass_report(v: Valuation) -> MassReport:
    toks = jump_tokens(v)
    atoms = tuple((t.x, t.mass) for t in toks if t.side == "atom")
    left = tuple((t.x, t.mass) for t in toks if t.side == "left")
    right = tuple((t.x, t.mass) for t in toks if t.side == "right")
    jumps = sum((t.mass for t in toks), Fraction(0))
    total = v.total_mass
    return MassReport(atoms, left, right, total - jumps, total)


def continuous_mass(v: Valuation, s: IntervalSet, fc: GeneralizedCDF | None = None) -> Fraction:
    """Mass of ``s`` under the jump-free part of the valuation."""
    fc = fc or v.cdf.continuous_part()
    return sum((fc.eval_at(p.hi) - fc.eval_at(p.lo) for p in s.parts), Fraction(0))


# -- continuity from below along increasing chains --------------------------------


@dataclass(frozen=True)
class ChainPart:
    """Interval whose n-th member has endpoints ``lo + lo_rate/n`` and ``hi + hi_rate/n``."""

    lo: Fraction
    hi: Fraction
    lo_rate: Fraction = Fraction(0)
    hi_rate: Fraction = Fraction(0)
    lo_closed: bool = True
    hi_closed: bool = True

    def __post_init__(self):
        for name in ("lo", "hi", "lo_rate", "hi_rate"):
            object.__setattr__(self, name, as_fraction(getattr(self, name)))

    def at(self, n: int) -> Interval:
        return Interval(self.lo + self.lo_rate / n, self.hi + self.hi_rate / n, self.lo_closed, self.hi_closed)

    def limit(self) -> Interval:
        lo_c = self.lo_closed and self.lo_rate == 0
        hi_c = self.hi_closed and self.hi_rate == 0
        return Interval(self.lo, self.hi, lo_c, hi_c)


@dataclass(frozen=True)
class IncreasingChain:
    parts: tuple[ChainPart, ...]
    start: int = 1

    def __post_init__(self):
        object.__setattr__(self, "parts", tuple(self.parts))
        for p in self.parts:
            if p.lo_rate < 0 or p.hi_rate > 0:
                raise ValidationError("chain is not increasing: lower ends must move left and upper ends right")
        try:
            first = self.at(self.start)
        except ValidationError as exc:
            raise ValidationError(f"chain member n={self.start} is not a valid piece: {exc}") from None
        if len(first.parts) != len(self.parts):
            raise ValidationError("chain parts must be disjoint")

    def at(self, n: int) -> IntervalSet:
        if n < self.start:
            raise ValidationError(f"chain starts at n={self.start}")
        return IntervalSet(p.at(n) for p in self.parts)

    def union(self) -> IntervalSet:
        return IntervalSet(p.limit() for p in self.parts)


def half_open_chain(lo, hi, lo_rate=0, hi_rate=0, start=1) -> IncreasingChain:
    """Chain of ``(lo + lo_rate/n, hi + hi_rate/n]``."""
    return IncreasingChain((ChainPart(lo, hi, lo_rate, hi_rate, False, True),), start)


@dataclass(frozen=True)
class ChainReport:
    limit_of_values: Fraction
    value_of_union: Fraction
    equal: bool
    union: IntervalSet
    samples: tuple[tuple[int, Fraction], ...] = field(default_factory=tuple)


def _limit_part(v: Valuation, p: ChainPart) -> Fraction:
    f = v.cdf
    if p.hi_rate < 0:
        upper = f.eval_at(p.hi, "left")
    elif v.is_measure:
        upper = f.eval_at(p.hi, "at" if p.hi_closed else "left")
    else:
        upper = f.eval_at(p.hi)
    if p.lo_rate > 0:
        lower = f.eval_at(p.lo, "right")
    elif v.is_measure:
        lower = f.eval_at(p.lo, "left" if p.lo_closed else "at")
    else:
        lower = f.eval_at(p.lo)
    if not v.is_measure and p.lo == p.hi:
        return Fraction(0)
    return upper - lower


def chain_continuity_check(
    v: Valuation,
    chain: IncreasingChain,
    declared_union: IntervalSet | None = None,
    cap: int = 10**6,
) -> ChainReport:
    """Compare ``sup_n v(chain(n))`` with ``v(union of the chain)``.

    The supremum is computed from one-sided limits of the cdf, not by
    iterating; members at ``n = start, 10, 100, ..., cap`` are evaluated as a
    consistency check (values must be nondecreasing and below the limit).
    """
    union = chain.union()
    if declared_union is not None and declared_union != union:
        raise ValidationError(f"declared union {declared_union} differs from the chain's union {union}")
    limit = sum((_limit_part(v, p) for p in chain.parts), Fraction(0))
    samples = []
    ns = sorted({chain.start, *[10**k for k in range(1, 20) if chain.start < 10**k <= cap], cap})
    prev = None
    for n in ns:
        if n < chain.start:
            continue
        value = eval_set(v, chain.at(n))
        if prev is not None and value < prev:
            raise ValidationError("chain values decrease; chain is not increasing")
        if value > limit:
            raise ValidationError("chain value exceeds its computed limit")
        samples.append((n, value))
        prev = value
    union_value = eval_set(v, union)
    return ChainReport(limit, union_value, limit == union_value, union, tuple(samples))


# -- distribution function round trip ----------------------------------------------


def distribution_function(v: Valuation) -> Callable[[Fraction], Fraction]:
    """``x -> v([0, x])``."""

    def F(x):
        return eval_set(v, IntervalSet.of(closed(0, x)))

    return F


def rebuild_cdf(mass: Callable[[IntervalSet], Fraction], knots: Sequence) -> GeneralizedCDF:
    """Reconstruct a right-continuous piecewise-linear cdf from interval masses.

    ``knots`` must include every breakpoint of the target (0 and 1 included);
    between knots the cdf is assumed linear.
    """
    xs = sorted({as_fraction(k) for k in knots} | {Fraction(0), Fraction(1)})
    bps = []
    for x in xs:
        at = mass(IntervalSet.of(closed(0, x)))
        left = mass(IntervalSet.of(right_open(0, x))) if x > 0 else Fraction(0)
        bps.append(Breakpoint(x, left, at, at))
    return GeneralizedCDF(bps)


def restrict_tokens(tokens: Iterable[Token], piece: IntervalSet) -> list[Token]:
    """Tokens that some subset of ``piece`` can capture."""
    out = []
    for t in tokens:
        if t.side == "atom":
            ok = t.x in piece
        elif t.side == "left":
            ok = any(p.lo < t.x <= p.hi for p in piece.parts)
        else:
            ok = any(p.lo <= t.x < p.hi for p in piece.parts)
        if ok:
            out.append(t)
    return out
