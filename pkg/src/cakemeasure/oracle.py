"""Brute-force grid model used to cross-check the analytic decisions.

The unit interval is cut into cells ``[0,h], (h,2h], ...`` of width ``h``.
Each cell carries the continuous mass over its span, treated as freely
divisible.  Jumps become indivisible tokens bound to a position:

* ``point``: a measure's atom, captured by containing the point;
* ``left`` / ``right``: a content's one-sided jump, captured by taking some
  of the cell that abuts the point from that side.

The model has its own cdf evaluator (cantor segments go through the
truncated ternary formula) and never calls the achievable-set code.
"""

from __future__ import annotations

import bisect
import itertools
from dataclasses import dataclass
from fractions import Fraction

from .cantor import cantor_cdf
from .errors import CapacityError, RefinementError, ValidationError
from .intervals import Interval, IntervalSet
from .rational import as_fraction, fmt
from .valuation import Valuation

MAX_ORACLE_TOKENS = 20
DEFAULT_TOL = Fraction(1, 2**30)
REFERENCE_DEPTH = 60


@dataclass(frozen=True)
class Cell:
    span: Interval
    mass: Fraction
    linear: bool


@dataclass(frozen=True)
class SideMass:
    x: Fraction
    side: str
    mass: Fraction


@dataclass(frozen=True)
class GridModel:
    mesh: Fraction
    cells: tuple[Cell, ...]
    tokens: tuple[SideMass, ...]
    exact: bool
    total: Fraction
    source: Valuation

    @property
    def n(self) -> int:
        return len(self.cells)

    def cell_ending_at(self, x: Fraction) -> int | None:
        i = x / self.mesh
        return int(i) - 1 if i.denominator == 1 and i >= 1 else None

    def cell_starting_at(self, x: Fraction) -> int | None:
        i = x / self.mesh
        return int(i) if i.denominator == 1 and i < self.n else None

    def tol(self, tol) -> Fraction:
        return Fraction(0) if self.exact else as_fraction(tol)


def _reference_value(v: Valuation, x: Fraction) -> tuple[Fraction, bool]:
    """Continuous part of the cdf at ``x`` and whether it is exact."""
    f = v.cdf
    bps, segs = f.breakpoints, f.segments
    removed = Fraction(0)
    for k, bp in enumerate(bps):
        if bp.x == x:
            return bp.at - removed - bp.left_gap, True
        if bp.x > x:
            a, prev = bps[k - 1], bps[k - 1]
            ya, yb = prev.right, bp.left
            t = (x - a.x) / (bp.x - a.x)
            seg = segs[k - 1]
            if ya == yb:
                return ya - removed, True
            if seg.kind == "linear":
                return ya + (yb - ya) * t - removed, True
            u = seg.u0 + (seg.u1 - seg.u0) * t
            cu, eu = cantor_cdf(u, REFERENCE_DEPTH)
            c0, e0 = cantor_cdf(seg.u0, REFERENCE_DEPTH)
            c1, e1 = cantor_cdf(seg.u1, REFERENCE_DEPTH)
            frac = (cu - c0) / (c1 - c0)
            return ya + (yb - ya) * frac - removed, eu == e0 == e1 == 0
        removed += bp.left_gap + bp.right_gap
    raise ValidationError(f"point {fmt(x)} outside [0,1]")  # pragma: no cover


def discretize(v: Valuation, mesh) -> GridModel:
    """Grid model of ``v`` at cell width ``mesh`` (which must be ``1/N``)."""
    mesh = as_fraction(mesh)
    if mesh <= 0 or mesh.numerator != 1:
        raise ValidationError(f"mesh must be 1/N, got {fmt(mesh)}")
    n = mesh.denominator
    f = v.cdf
    tokens = []
    for i, bp in enumerate(f.breakpoints):
        jumpy = bp.left_gap if v.is_measure else (bp.left_gap if bp.x > 0 else 0) + (bp.right_gap if bp.x < 1 else 0)
        if jumpy and (bp.x / mesh).denominator != 1:
            raise RefinementError(f"jump at {fmt(bp.x)} is not on the grid of width {fmt(mesh)}; refine the mesh")
        if v.is_measure:
            if bp.left_gap:
                tokens.append(SideMass(bp.x, "point", bp.left_gap))
        else:
            if bp.x > 0 and bp.left_gap:
                tokens.append(SideMass(bp.x, "left", bp.left_gap))
            if bp.x < 1 and bp.right_gap:
                tokens.append(SideMass(bp.x, "right", bp.right_gap))
    kinks = [bp.x for bp in f.breakpoints]
    values, exact = [], True
    for i in range(n + 1):
        val, ok = _reference_value(v, Fraction(i, n))
        values.append(val)
        exact = exact and ok
    cells = []
    for i in range(n):
        a, b = Fraction(i, n), Fraction(i + 1, n)
        span = Interval(a, b, i == 0, True)
        seg_i = bisect.bisect_right(kinks, a) - 1
        linear = kinks[seg_i + 1] >= b and f.segments[seg_i].kind == "linear"
        cells.append(Cell(span, values[i + 1] - values[i], linear))
    total = sum((c.mass for c in cells), Fraction(0)) + sum((t.mass for t in tokens), Fraction(0))
    return GridModel(mesh, tuple(cells), tuple(tokens), exact, total, v)


# -- queries -------------------------------------------------------------------------


def _aligned(model: GridModel, piece: IntervalSet) -> None:
    for x in piece.endpoints():
        if (x / model.mesh).denominator != 1:
            raise RefinementError(f"piece endpoint {fmt(x)} is not on the grid of width {fmt(model.mesh)}")


def _piece_structure(model: GridModel, piece: IntervalSet):
    _aligned(model, piece)
    # aligned parts cover whole cells, so membership is an index range
    inside = [False] * model.n
    for p in piece.parts:
        for i in range(int(p.lo / model.mesh), int(p.hi / model.mesh)):
            inside[i] = True
    avail = sum((c.mass for c, ok in zip(model.cells, inside) if ok), Fraction(0))
    capt = []
    for t in model.tokens:
        if t.side == "point":
            ok, abut = t.x in piece, Fraction(0)
        elif t.side == "left":
            i = model.cell_ending_at(t.x)
            ok = i is not None and inside[i]
            abut = model.cells[i].mass if ok else Fraction(0)
        else:
            i = model.cell_starting_at(t.x)
            ok = i is not None and inside[i]
            abut = model.cells[i].mass if ok else Fraction(0)
        if ok:
            capt.append((t, abut > 0))
    if len(capt) > MAX_ORACLE_TOKENS:
        raise CapacityError(f"{len(capt)} tokens in piece; the oracle enumerates at most {MAX_ORACLE_TOKENS}")
    return avail, capt


def _scan(model: GridModel, piece: IntervalSet, target, tol, sup: bool) -> bool:
    target = as_fraction(target)
    eps = model.tol(tol)
    avail, capt = _piece_structure(model, piece)
    for choice in itertools.product((False, True), repeat=len(capt)):
        jm = sum((t.mass for (t, _), c in zip(capt, choice) if c), Fraction(0))
        low_strict = any(forced for (_, forced), c in zip(capt, choice) if c)
        high_strict = any(forced for (_, forced), c in zip(capt, choice) if not c) and not sup
        r = target - jm
        lo_ok = r > eps if low_strict else r >= -eps
        hi_ok = r < avail - eps if high_strict else r <= avail + eps
        if lo_ok and hi_ok:
            return True
    return False


def oracle_achievable(model: GridModel, piece: IntervalSet, target, tol=DEFAULT_TOL) -> bool:
    """Some subset of ``piece`` has mass ``target``."""
    return _scan(model, piece, target, tol, sup=False)


def oracle_sup_achievable(model: GridModel, piece: IntervalSet, target, tol=DEFAULT_TOL) -> bool:
    """``target`` is the supremum of masses along an increasing sequence of subsets of ``piece``."""
    return _scan(model, piece, target, tol, sup=True)


def oracle_quantile(model: GridModel, p, tol=DEFAULT_TOL) -> Fraction:
    """Leftmost ``x`` with continuous cdf at least ``p``, by a cumulative scan over the cells."""
    p = as_fraction(p)
    if p <= 0:
        return Fraction(0)
    cum = Fraction(0)
    for c in model.cells:
        if cum + c.mass >= p and c.mass > 0:
            a, b = c.span.lo, c.span.hi
            if c.linear:
                return a + (b - a) * (p - cum) / c.mass
            lo, hi = a, b
            base = _reference_value(model.source, a)[0] - cum
            while hi - lo > as_fraction(tol) / 4:
                mid = (lo + hi) / 2
                if _reference_value(model.source, mid)[0] - base >= p:
                    hi = mid
                else:
                    lo = mid
            return hi
        cum += c.mass
    return Fraction(1)


def _attached(model: GridModel) -> list[Fraction]:
    extra = [Fraction(0)] * model.n
    for t in model.tokens:
        if t.side == "right":
            i = model.cell_starting_at(t.x)
        elif t.x == 0:
            i = 0
        else:
            i = model.cell_ending_at(t.x)
        extra[i] += t.mass
    return extra


def partition_search(model: GridModel, epsilon) -> list[IntervalSet] | None:
    """A partition of ``[0,1]`` into grid-aligned intervals of mass in ``(0, epsilon]``, or ``None``."""
    epsilon = as_fraction(epsilon)
    heavy = next((c for c in model.cells if c.mass > epsilon), None)
    if heavy is not None:
        raise RefinementError(
            f"cell starting at {fmt(heavy.span.lo)} holds {fmt(heavy.mass)} > epsilon; refine the mesh"
        )
    extra = _attached(model)
    prefix = [Fraction(0)]
    for c, e in zip(model.cells, extra):
        prefix.append(prefix[-1] + c.mass + e)
    n = model.n
    back: list[int | None] = [None] * (n + 1)
    reach = [False] * (n + 1)
    reach[0] = True
    starts = [0]
    for j in range(1, n + 1):
        for i in reversed(starts):
            run = prefix[j] - prefix[i]
            if run > epsilon:
                break
            if run > 0:
                reach[j], back[j] = True, i
                break
        if reach[j]:
            starts.append(j)
    if not reach[n]:
        return None
    cuts = [n]
    while cuts[-1] != 0:
        cuts.append(back[cuts[-1]])
    cuts.reverse()
    h = model.mesh
    return [IntervalSet.of(Interval(i * h, j * h, i == 0, True)) for i, j in zip(cuts, cuts[1:])]


def default_epsilon(model: GridModel) -> Fraction:
    if model.tokens:
        return max(t.mass for t in model.tokens) / 2
    return Fraction(1, 8)


def oracle_sliceable(model: GridModel, epsilon=None) -> bool:
    """Grid verdict on sliceability at one ``epsilon`` (jump-free zero valuations count as sliceable)."""
    if model.total == 0 and not model.tokens:
        return True
    eps = default_epsilon(model) if epsilon is None else as_fraction(epsilon)
    return partition_search(model, eps) is not None


def oracle_check(model: GridModel, query: str, value=None, piece: IntervalSet | None = None, tol=DEFAULT_TOL) -> dict:
    """Dispatch one of ``achievable``, ``sup-achievable``, ``quantile``, ``sliceable``, ``partition``."""
    piece = piece if piece is not None else IntervalSet.unit()
    if query == "achievable":
        return {"query": query, "target": value, "verdict": oracle_achievable(model, piece, value, tol)}
    if query == "sup-achievable":
        return {"query": query, "target": value, "verdict": oracle_sup_achievable(model, piece, value, tol)}
    if query == "quantile":
        return {"query": query, "level": value, "verdict": oracle_quantile(model, value, tol)}
    if query == "sliceable":
        eps = default_epsilon(model) if value is None else as_fraction(value)
        return {"query": query, "epsilon": eps, "verdict": oracle_sliceable(model, eps)}
    if query == "partition":
        eps = default_epsilon(model) if value is None else as_fraction(value)
        parts = partition_search(model, eps)
        return {"query": query, "epsilon": eps, "verdict": parts is not None, "pieces": parts}
    raise ValidationError(f"unknown oracle query {query!r}")
