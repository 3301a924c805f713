"""Exact division, divisibility decisions and the increasing-sequence construction.

Every subset ``S`` of a piece ``A`` (a finite union of intervals) has mass

    v(S) = (sum of jump tokens captured by S) + (continuous mass of S).

For a fixed set ``J`` of captured tokens the continuous mass sweeps an
interval from 0 to the continuous mass of ``A``.  The lower end is missed
when some token of ``J`` is *forced* (capturing it drags in positive
continuous mass); the upper end is missed when some capturable token outside
``J`` is forced (keeping it out costs positive continuous mass).  The union
of these ranges over all ``J`` is the :class:`AchievableSet`.

Masses reachable as suprema of increasing sequences of subsets are the same
ranges with the upper end always included: along a nested sequence the
captured tokens eventually stabilise, and the continuous part can creep up
to the full remaining mass while never reaching the lower end.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction

from .errors import CapacityError, DomainError, PreconditionError, ValidationError
from .intervals import IntervalSet, closed, open_interval, point
from .rational import as_fraction, fmt
from .valuation import Token, Valuation, continuous_mass, eval_set, jump_tokens, restrict_tokens

MAX_TOKENS = 30


@dataclass(frozen=True)
class Component:
    """Masses ``jump_mass + c`` for ``c`` between ``lo`` and ``hi`` (flags say which ends count)."""

    jump_mass: Fraction
    lo: Fraction
    hi: Fraction
    lo_open: bool
    hi_open: bool
    captured: tuple[Token, ...] = ()

    @property
    def total_lo(self) -> Fraction:
        return self.jump_mass + self.lo

    @property
    def total_hi(self) -> Fraction:
        return self.jump_mass + self.hi

    def contains(self, t: Fraction) -> bool:
        c = t - self.jump_mass
        if c < self.lo or c > self.hi:
            return False
        if c == self.lo and self.lo_open:
            return False
        if c == self.hi and self.hi_open:
            return False
        return True

    def sup_contains(self, t: Fraction) -> bool:
        c = t - self.jump_mass
        if c < self.lo or c > self.hi:
            return False
        if c == self.lo and self.lo_open and c != self.hi:
            return False
        return True


@dataclass(frozen=True)
class AchievableSet:
    piece: IntervalSet
    tokens: tuple[Token, ...]
    continuous_mass: Fraction
    components: tuple[Component, ...]

    def contains(self, t) -> bool:
        return self.find(t) is not None

    def sup_contains(self, t) -> bool:
        return self.find_sup(t) is not None

    def find(self, t) -> Component | None:
        t = as_fraction(t)
        return next((c for c in self.components if c.contains(t)), None)

    def find_sup(self, t) -> Component | None:
        t = as_fraction(t)
        return next((c for c in self.components if c.sup_contains(t)), None)

    def gap(self, t) -> tuple[Fraction | None, Fraction | None]:
        """Nearest achievable masses below and above ``t`` (as sup / inf)."""
        t = as_fraction(t)
        below = [min(c.total_hi, t) for c in self.components if c.total_lo < t]
        above = [max(c.total_lo, t) for c in self.components if c.total_hi > t]
        return (max(below) if below else None, min(above) if above else None)

    def sup_at_most(self, bound) -> tuple[Fraction, bool, Component | None]:
        """``sup`` of achievable masses in ``(0, bound]``, whether it is attained, and a component realising it."""
        bound = as_fraction(bound)
        best = (Fraction(0), False, None)
        for c in self.components:
            lo, lo_in = c.total_lo, not c.lo_open
            if lo <= 0:
                lo, lo_in = Fraction(0), False
            if c.total_hi > bound:
                hi, hi_in = bound, True
            else:
                hi, hi_in = c.total_hi, not c.hi_open
            if lo < hi or (lo == hi and lo_in and hi_in):
                if hi > best[0] or (hi == best[0] and hi_in and not best[1]):
                    best = (hi, hi_in, c)
        return best


@dataclass(frozen=True)
class Decision:
    achievable: bool
    target: Fraction
    mode: str
    witness: IntervalSet | None = None
    sequence: tuple[IntervalSet, ...] = ()
    description: str = ""
    gap_below: Fraction | None = None
    gap_above: Fraction | None = None
    anchor: str = ""


def achievable_set(v: Valuation, a: IntervalSet, max_tokens: int = MAX_TOKENS) -> AchievableSet:
    """All masses of subsets of ``a`` that are finite unions of intervals."""
    toks = restrict_tokens(jump_tokens(v), a)
    if len(toks) > max_tokens:
        raise CapacityError(f"piece holds {len(toks)} jumps; the enumeration bound is {max_tokens}")
    cm = continuous_mass(v, a)
    states: dict[tuple, tuple[Token, ...]] = {(Fraction(0), False, False): ()}
    for t in toks:
        nxt: dict[tuple, tuple[Token, ...]] = {}
        for (m, lo_open, hi_open), cap in states.items():
            nxt.setdefault((m, lo_open, hi_open or t.forced), cap)
            nxt.setdefault((m + t.mass, lo_open or t.forced, hi_open), cap + (t,))
        states = nxt
    comps = [Component(m, Fraction(0), cm, lo_open, hi_open, cap) for (m, lo_open, hi_open), cap in states.items()]
    comps.sort(key=lambda c: (c.total_lo, c.lo_open, len(c.captured)))
    return AchievableSet(a, tuple(toks), cm, tuple(comps))


# -- witnesses ---------------------------------------------------------------------


def _neighbourhood(t: Token, delta: Fraction) -> IntervalSet:
    if t.side == "atom":
        return IntervalSet.of(point(t.x))
    if t.side == "left":
        return IntervalSet.of(open_interval(t.x - delta, t.x))
    return IntervalSet.of(open_interval(t.x, t.x + delta))


def _union_all(sets) -> IntervalSet:
    parts = []
    for s in sets:
        parts.extend(s.parts)
    return IntervalSet(parts)


def _initial_delta(v: Valuation, a: IntervalSet) -> Fraction:
    pts = sorted(set(v.cdf.xs) | set(a.endpoints()))
    gaps = [q - p for p, q in zip(pts, pts[1:]) if q > p]
    return min(gaps) / 4


def prefix_cut(fc, piece: IntervalSet, amount: Fraction) -> IntervalSet:
    """``piece ∩ [0, x]`` for the leftmost ``x`` whose continuous mass reaches ``amount``.

    ``fc`` must be a continuous cdf; ``amount`` lies in ``(0, fc-mass of piece]``.
    """
    if amount <= 0:
        return IntervalSet.empty()
    cum = Fraction(0)
    for p in piece.parts:
        lo_val = fc.eval_at(p.lo)
        m = fc.eval_at(p.hi) - lo_val
        if cum + m >= amount:
            x = fc._quantile_continuous(lo_val + (amount - cum))
            return piece & IntervalSet.of(closed(0, x))
        cum += m
    raise ValidationError(f"piece carries only {fmt(cum)} continuous mass, cannot cut {fmt(amount)}")


def _build_witness(v: Valuation, ach: AchievableSet, comp: Component, target: Fraction, verify: bool = True) -> IntervalSet:
    a = ach.piece
    fc = v.cdf.continuous_part()
    c = target - comp.jump_mass
    captured = set(comp.captured)
    excluded = [t for t in ach.tokens if t not in captured]
    delta = _initial_delta(v, a)
    for _ in range(512):
        q = _union_all(_neighbourhood(t, delta) for t in comp.captured)
        e = _union_all(_neighbourhood(t, delta) for t in excluded)
        r = a - e
        cq, cr = continuous_mass(v, q, fc), continuous_mass(v, r, fc)
        if cq <= c <= cr:
            break
        delta /= 2
    else:  # pragma: no cover - ranges are derived from the same limits
        raise RuntimeError("witness search did not converge")
    s = q | prefix_cut(fc, r - q, c - cq)
    if not verify:
        return s
    got = eval_set(v, s)
    if got != target or not s <= a:  # pragma: no cover - internal consistency
        raise RuntimeError(f"witness mass {fmt(got)} != target {fmt(target)}")
    return s


def _sup_sequence(v: Valuation, ach: AchievableSet, comp: Component, count: int = 5) -> tuple[IntervalSet, ...]:
    """Nested sets excluding ever smaller neighbourhoods of the uncaptured tokens."""
    captured = set(comp.captured)
    excluded = [t for t in ach.tokens if t not in captured]
    delta = _initial_delta(v, ach.piece)
    out = []
    for _ in range(count):
        e = _union_all(_neighbourhood(t, delta) for t in excluded)
        out.append(ach.piece - e)
        delta /= 2
    return tuple(out)


def _check_alpha(alpha) -> Fraction:
    alpha = as_fraction(alpha)
    if not (0 < alpha < 1):
        raise DomainError(f"alpha must lie in (0,1), got {fmt(alpha)}")
    return alpha


def check_target(v: Valuation, a: IntervalSet, target) -> Decision:
    """Is there a subset of ``a`` with mass exactly ``target``?"""
    target = as_fraction(target)
    ach = achievable_set(v, a)
    below, above = ach.gap(target)
    comp = ach.find(target)
    if comp is None:
        return Decision(False, target, "none", gap_below=below, gap_above=above, anchor="divisibility (D) fails: target lies in a gap")
    w = _build_witness(v, ach, comp, target)
    return Decision(True, target, "exactSet", witness=w, sequence=(w,), gap_below=below, gap_above=above, anchor="divisibility (D) holds")


def check_divisibility(v: Valuation, a: IntervalSet, alpha) -> Decision:
    """Property (D) for one piece: a subset of ``a`` with mass ``alpha * v(a)``."""
    alpha = _check_alpha(alpha)
    return check_target(v, a, alpha * eval_set(v, a))


def check_sup_target(v: Valuation, a: IntervalSet, target) -> Decision:
    """Is ``target`` the supremum of masses along an increasing sequence of subsets of ``a``?"""
    target = as_fraction(target)
    ach = achievable_set(v, a)
    below, above = ach.gap(target)
    comp = ach.find(target)
    if comp is not None:
        w = _build_witness(v, ach, comp, target)
        return Decision(True, target, "exactSet", witness=w, sequence=(w,), description="constant sequence at an exact witness",
                        gap_below=below, gap_above=above, anchor="sup-divisibility (DD) holds")
    comp = ach.find_sup(target)
    if comp is None:
        return Decision(False, target, "none", gap_below=below, gap_above=above, anchor="sup-divisibility (DD) fails: target lies in a gap")
    seq = _sup_sequence(v, ach, comp)
    names = ", ".join(f"{t.side}@{fmt(t.x)}" for t in ach.tokens if t not in set(comp.captured))
    desc = f"B^n = piece minus one-sided neighbourhoods of width delta/2^n around {names}; masses increase to {fmt(target)}"
    return Decision(True, target, "increasingSequenceSup", sequence=seq, description=desc,
                    gap_below=below, gap_above=above, anchor="sup-divisibility (DD) holds only as a supremum")


def check_sup_divisibility(v: Valuation, a: IntervalSet, alpha) -> Decision:
    """Property (DD) for one piece."""
    alpha = _check_alpha(alpha)
    return check_sup_target(v, a, alpha * eval_set(v, a))


# -- exact division ------------------------------------------------------------------


def _first_jump(v: Valuation):
    cls = v.cdf.classify()
    return None if cls.is_continuous else cls.jumps[0]


def exact_divide(v: Valuation, b: IntervalSet, alpha) -> IntervalSet:
    """``b ∩ [0, x]`` where ``x`` is the leftmost point at which the conditional cdf of ``b`` reaches ``alpha``.

    Needs a valuation without atoms (a continuous cdf) and a piece of
    positive mass; the result has mass exactly ``alpha * v(b)``.
    """
    alpha = _check_alpha(alpha)
    jump = _first_jump(v)
    if jump is not None:
        kind = "atom" if v.is_measure else "jump"
        raise PreconditionError(
            f"{kind} at {fmt(jump.x)} of mass {fmt(jump.left_gap + jump.right_gap)}: exact division needs an atom-free measure",
            witness=jump,
        )
    mass = eval_set(v, b)
    if mass == 0:
        raise PreconditionError("piece has zero mass; nothing to divide", witness=b)
    return prefix_cut(v.cdf, b, alpha * mass)


# -- increasing-sequence construction ----------------------------------------------------


@dataclass(frozen=True)
class DDConstruction:
    sets: tuple[IntervalSet, ...]
    masses: tuple[Fraction, ...]
    normalized: tuple[Fraction, ...]
    start_index: int
    alpha: Fraction
    strategy: str


def _quantile_slices(fc, piece: IntervalSet, size: Fraction) -> list[IntervalSet]:
    """Consecutive pieces of continuous mass ``size`` (the last may be smaller)."""
    out = []
    rest = piece
    total = sum((fc.eval_at(p.hi) - fc.eval_at(p.lo) for p in rest.parts), Fraction(0))
    while total > 0:
        cut = prefix_cut(fc, rest, min(size, total))
        out.append(cut)
        rest = rest - cut
        total -= min(size, total)
    return out


def construct_dd(v: Valuation, a: IntervalSet, alpha, steps: int, strategy: str = "aligned") -> DDConstruction:
    """Nested sets ``B_k ⊆ B_{k+1} ⊆ ...`` inside ``a`` whose masses increase to ``alpha * v(a)``.

    At stage ``n`` (starting from ``k = floor(1/alpha) + 1``) the unused part
    of ``a`` is cut into pieces of normalized mass below ``1/n`` and the
    longest prefix of pieces that does not overshoot the outstanding deficit
    is added.  The normalized masses satisfy ``alpha - 1/n < mass <= alpha``.

    ``strategy`` picks the slicing: ``aligned`` uses equal pieces that tile
    the outstanding deficit exactly (so the very first stage already reaches
    ``alpha``); ``uniform`` uses pieces of normalized mass ``1/(n+1)``.
    """
    alpha = _check_alpha(alpha)
    if strategy not in ("aligned", "uniform"):
        raise ValidationError(f"unknown strategy {strategy!r}")
    blocking = restrict_tokens(jump_tokens(v), a)
    if blocking:
        t = blocking[0]
        what = "atom" if t.side == "atom" else f"{t.side} phantom jump"
        raise PreconditionError(f"{what} at {fmt(t.x)} of mass {fmt(t.mass)} makes the piece non-sliceable", witness=t)
    k = math.floor(1 / alpha) + 1
    total = eval_set(v, a)
    if total == 0:
        empty = tuple(IntervalSet.empty() for _ in range(steps))
        zeros = tuple(Fraction(0) for _ in range(steps))
        return DDConstruction(empty, zeros, zeros, k, alpha, strategy)
    fc = v.cdf.continuous_part()
    target = alpha * total
    current = IntervalSet.empty()
    got = Fraction(0)
    sets, masses = [], []
    for i in range(steps):
        n = k + i
        deficit = target - got
        rest = a - current
        if deficit > 0:
            if strategy == "aligned":
                size = deficit / (math.floor(deficit * n / total) + 1)
            else:
                size = total / (n + 1)
            pieces = _quantile_slices(fc, rest, size)
            acc = Fraction(0)
            chosen = []
            for piece in pieces:
                m = eval_set(v, piece)
                if acc + m > deficit:
                    break
                acc += m
                chosen.append(piece)
            current = _union_all([current, *chosen])
            got = eval_set(v, current)
        sets.append(current)
        masses.append(got)
    return DDConstruction(tuple(sets), tuple(masses), tuple(m / total for m in masses), k, alpha, strategy)


# -- fewest intervals ---------------------------------------------------------------------

# a mass range is (lo, lo_closed, hi, hi_closed)


def _range_add(r, s):
    return (r[0] + s[0], r[1] and s[1], r[2] + s[2], r[3] and s[3])


def _range_contains(r, t) -> bool:
    lo, lo_c, hi, hi_c = r
    return (lo < t < hi) or (t == lo and lo_c) or (t == hi and hi_c)


def _merge_ranges(rs):
    rs = sorted(set(rs), key=lambda r: (r[0], not r[1]))
    out = []
    for r in rs:
        if out:
            lo, lo_c, hi, hi_c = out[-1]
            if r[0] < hi or (r[0] == hi and (hi_c or r[1])):
                if r[2] > hi:
                    out[-1] = (lo, lo_c, r[2], r[3])
                elif r[2] == hi:
                    out[-1] = (lo, lo_c, hi, hi_c or r[3])
                continue
        out.append(r)
    return out


def _cell_patterns(v: Valuation, j: int):
    """``(range, adds_components, continues, touches_left, inside_after)`` per way of meeting cell ``j``."""
    f = v.cdf
    m = f.segment_rise(j)
    z = Fraction(0)
    if m == 0:
        flat = (z, True, z, True)
        inner = touch_l = touch_r = both = full = flat
    else:
        lpos, rpos, gap = f.left_end_positive(j), f.right_end_positive(j), f.has_flat_gap(j)
        inner = (z, True, m, not lpos and not rpos)
        touch_l = (z, not lpos, m, not rpos)
        touch_r = (z, not rpos, m, not lpos)
        full = (m, True, m, True)
        both = (z, not lpos and not rpos, m, gap)
    # (range, extra components beyond a possible continuation, may continue, touches left, inside after)
    return [
        ((z, True, z, True), 0, False, False, False),  # empty
        (inner, 1, False, False, False),
        (touch_l, 0, True, True, False),
        (touch_r, 1, False, False, True),
        (full, 0, True, True, True),
        (both, 1, True, True, True),
    ]


def min_interval_count(v: Valuation, target, max_parts: int = 4) -> int | None:
    """Fewest disjoint intervals whose union has mass exactly ``target`` (``None`` if more than ``max_parts`` are needed).

    Exact dynamic programme over the breakpoints and the open cells between
    them, tracking for every part count the set of reachable masses.
    """
    if max_parts > 4 or max_parts < 0:
        raise CapacityError("min_interval_count supports 0 <= max_parts <= 4")
    target = as_fraction(target)
    f = v.cdf
    bps = f.breakpoints
    measure = v.is_measure
    states = {(0, False): [(Fraction(0), True, Fraction(0), True)]}
    for j, bp in enumerate(bps):
        nxt = defaultdict(list)
        atom = bp.left_gap if measure else Fraction(0)
        left_tok = bp.left_gap if (not measure and j > 0) else Fraction(0)
        for (cnt, inside), rs in states.items():
            shift = left_tok if inside else Fraction(0)
            nxt[(cnt, False)].extend(_range_add(r, (shift, True, shift, True)) for r in rs)
            c2 = cnt + (0 if inside else 1)
            if c2 <= max_parts:
                add = atom + shift
                nxt[(c2, True)].extend(_range_add(r, (add, True, add, True)) for r in rs)
        states = {k: _merge_ranges(rs) for k, rs in nxt.items()}
        if j == len(bps) - 1:
            break
        right_tok = Fraction(0) if measure else bp.right_gap
        nxt = defaultdict(list)
        for (cnt, inside), rs in states.items():
            for rng, extra, can_continue, touch_l, inside_after in _cell_patterns(v, j):
                if rng == (Fraction(0), True, Fraction(0), True) and extra == 0 and not touch_l:
                    c2 = cnt
                else:
                    c2 = cnt + extra + (0 if (can_continue and inside) else (1 if can_continue else 0))
                if c2 > max_parts:
                    continue
                cell = _range_add(rng, (right_tok, True, right_tok, True)) if touch_l else rng
                nxt[(c2, inside_after)].extend(_range_add(r, cell) for r in rs)
        states = {k: _merge_ranges(rs) for k, rs in nxt.items()}
    best = None
    for (cnt, _), rs in states.items():
        if any(_range_contains(r, target) for r in rs):
            best = cnt if best is None else min(best, cnt)
    return best
