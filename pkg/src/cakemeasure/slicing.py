"""Sliceability, quantile slicings, the greedy slicing procedure and the truth-table harness."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .divisibility import (
    _build_witness,
    achievable_set,
    check_divisibility,
    check_sup_divisibility,
)
from .errors import CakeError, PreconditionError, ValidationError
from .intervals import Interval, IntervalSet, closed, left_open, point, right_open
from .rational import as_fraction, fmt
from .valuation import Convention, Token, Valuation, continuous_mass, eval_set, jump_tokens, mass_report


@dataclass(frozen=True)
class Sliceability:
    sliceable: bool
    obstruction: Token | None = None
    recipe: str = ""

    def describe(self) -> str:
        if self.sliceable:
            return self.recipe
        t = self.obstruction
        kind = "atom" if t.side == "atom" else f"{t.side} phantom"
        return f"{kind} at {fmt(t.x)} of mass {fmt(t.mass)}"


def is_sliceable(v: Valuation) -> Sliceability:
    """A valuation is sliceable exactly when it has no jump of any kind.

    Any finite partition into intervals has one piece that captures a given
    jump in full, so a jump of mass ``g`` rules out every ``epsilon < g``.
    Without jumps the quantile cuts of :func:`slice_valuation` work for every
    ``epsilon``.
    """
    toks = jump_tokens(v)
    if toks:
        big = max(toks, key=lambda t: (t.mass, -t.x))
        return Sliceability(False, big)
    return Sliceability(True, None, "quantile cuts at masses epsilon, 2*epsilon, ...")


@dataclass(frozen=True)
class Slicing:
    pieces: tuple[IntervalSet, ...]
    epsilon: Fraction
    masses: tuple[Fraction, ...]
    cuts: tuple[Fraction, ...] = ()


def slice_valuation(v: Valuation, epsilon) -> Slicing:
    """Partition ``[0,1]`` into consecutive intervals of mass at most ``epsilon``.

    Cuts sit at the leftmost quantiles of ``epsilon, 2*epsilon, ...``; the
    pieces are ``[0,x1], (x1,x2], ..., (x_{n-1},1]``.  A valuation of total
    mass zero yields the single piece ``[0,1]``.
    """
    epsilon = as_fraction(epsilon)
    if epsilon <= 0:
        raise ValidationError("epsilon must be positive")
    rep = is_sliceable(v)
    if not rep.sliceable:
        raise PreconditionError(f"not sliceable: {rep.describe()}", witness=rep.obstruction)
    total = v.total_mass
    if total == 0:
        return Slicing((IntervalSet.unit(),), epsilon, (Fraction(0),))
    fc = v.cdf.continuous_part()
    base = fc.eval_at(0)
    n = math.ceil(total / epsilon)
    cuts = [fc._quantile_continuous(base + k * epsilon) for k in range(1, n)]
    edges = [Fraction(0), *cuts, Fraction(1)]
    pieces = [IntervalSet.of(closed(edges[0], edges[1]))]
    pieces += [IntervalSet.of(left_open(a, b)) for a, b in zip(edges[1:], edges[2:])]
    masses = tuple(eval_set(v, p) for p in pieces)
    return Slicing(tuple(pieces), epsilon, masses, tuple(cuts))


# -- greedy procedure ----------------------------------------------------------------


@dataclass(frozen=True)
class GreedyStep:
    piece: IntervalSet
    piece_mass: Fraction
    remainder_mass: Fraction
    c_of_remainder: Fraction


@dataclass
class GreedyTrace:
    epsilon: Fraction
    steps: list[GreedyStep] = field(default_factory=list)
    terminated: bool = False
    final_remainder_mass: Fraction = Fraction(0)
    observed_remainder_mass: Fraction = Fraction(0)
    remainder_tends_to_zero: bool = False
    stop_reason: str = ""
    drain_from_step: int | None = None

    @property
    def rule_holds(self) -> bool:
        """Every chosen piece has ``c/2 < mass <= epsilon`` (``mass = c`` when the sup is attained)."""
        return all(2 * s.piece_mass >= s.c_of_remainder and 0 < s.piece_mass <= self.epsilon for s in self.steps)

    @property
    def remainders_nonincreasing(self) -> bool:
        ms = [s.remainder_mass for s in self.steps]
        return all(a >= b for a, b in zip(ms, ms[1:]))


def _captures_below(ach, epsilon) -> bool:
    """Can some subset with positive mass at most ``epsilon`` capture a jump?"""
    for c in ach.components:
        if not c.captured:
            continue
        if c.total_lo < epsilon or (c.total_lo == epsilon and not c.lo_open):
            return True
    return False


def greedy_slicing(v: Valuation, epsilon, max_iter: int = 10**4) -> GreedyTrace:
    """Run the greedy selection from the proof that atom-free contents are sliceable.

    Step ``n`` looks at the remainder ``Y``; ``c(Y)`` is the supremum of the
    masses of subsets of ``Y`` lying in ``(0, epsilon]``.  The chosen piece has
    mass ``c(Y)`` when that supremum is attained and otherwise sits strictly
    between ``c(Y)/2`` and ``c(Y)``.  The procedure stops once the remainder
    has mass at most ``epsilon``.

    When no subset with mass in ``(0, epsilon]`` can capture a jump the run can
    only drain continuous mass, by at least a fixed fraction per step, so the
    remainder converges to its jump mass.  ``final_remainder_mass`` reports that
    limit; ``observed_remainder_mass`` is the remainder after the last
    executed step.
    """
    epsilon = as_fraction(epsilon)
    if epsilon <= 0:
        raise ValidationError("epsilon must be positive")
    if max_iter < 1:
        raise ValidationError("max_iter must be >= 1")
    trace = GreedyTrace(epsilon)
    y = IntervalSet.unit()
    fc = v.cdf.continuous_part()
    drain_limit = None
    my = eval_set(v, y)
    for _ in range(max_iter):
        if my <= epsilon:
            trace.terminated = True
            trace.stop_reason = "remainder mass at most epsilon"
            break
        ach = achievable_set(v, y)
        c, attained, comp = ach.sup_at_most(epsilon)
        if c == 0:
            trace.stop_reason = "no admissible piece"
            break
        if drain_limit is None and not _captures_below(ach, epsilon):
            drain_limit = my - continuous_mass(v, y, fc)
            trace.drain_from_step = len(trace.steps)
        if attained:
            target = c
        else:
            lo = max(comp.total_lo, Fraction(0))
            target = (max(c / 2, lo) + c) / 2
        s = _build_witness(v, ach, comp, target, verify=False)
        y = y - s
        my -= target
        trace.steps.append(GreedyStep(s, target, my, c))
    else:
        trace.stop_reason = "iteration limit"
    observed = eval_set(v, y)
    trace.observed_remainder_mass = observed
    if trace.terminated or drain_limit is None:
        trace.final_remainder_mass = observed
        trace.remainder_tends_to_zero = observed == 0 or trace.terminated
    else:
        trace.final_remainder_mass = drain_limit
        trace.remainder_tends_to_zero = drain_limit == 0
    if trace.stop_reason == "no admissible piece":
        trace.remainder_tends_to_zero = False
    return trace


# -- decomposition ---------------------------------------------------------------------


@dataclass(frozen=True)
class Decomposition:
    atoms: tuple[tuple[Fraction, Fraction], ...]
    remainder: Valuation

    @property
    def atom_mass(self) -> Fraction:
        return sum((m for _, m in self.atoms), Fraction(0))


def decompose(v: Valuation) -> Decomposition:
    """Split a measure into its atoms and an atom-free (hence sliceable) remainder."""
    if not v.is_measure:
        raise PreconditionError("decomposition into atoms and a sliceable part is defined for measures only")
    atoms = tuple((bp.x, bp.left_gap) for bp in v.cdf.breakpoints if bp.left_gap)
    rest = Valuation(v.cdf.continuous_part(), Convention.STIELTJES, f"{v.name or 'valuation'} without atoms")
    return Decomposition(atoms, rest)


# -- truth table -------------------------------------------------------------------------


@dataclass(frozen=True)
class Probe:
    piece: IntervalSet
    alpha: Fraction
    d: bool
    dd: bool
    oracle_d: bool | None = None
    oracle_dd: bool | None = None


@dataclass
class TruthRow:
    fixture: str
    convention: str
    atom_free: bool = False
    sliceable: bool = False
    d_universal: bool = False
    dd_universal: bool = False
    theorem_consistent: bool = False
    lemma3_holds: bool | None = None
    probes_consistent: bool = True
    refutation: Probe | None = None
    probes: list[Probe] = field(default_factory=list)
    skipped: str = ""


def refutation_probe(v: Valuation, t: Token) -> tuple[IntervalSet, Fraction]:
    """A small piece holding only the jump ``t`` with less continuous mass than the jump; halving its mass fails."""
    if t.side == "atom":
        return IntervalSet.of(point(t.x)), Fraction(1, 2)
    f = v.cdf
    fc = f.continuous_part()
    xs = f.xs
    i = xs.index(t.x)
    if t.side == "left":
        delta = t.x - xs[i - 1]
        make = lambda d: IntervalSet.of(left_open(t.x - d, t.x))
    else:
        delta = xs[i + 1] - t.x
        make = lambda d: IntervalSet.of(right_open(t.x, t.x + d))
    delta /= 2
    while continuous_mass(v, make(delta), fc) >= t.mass:
        delta /= 2
    return make(delta), Fraction(1, 2)


def _random_piece(rng: random.Random, grid: int = 64) -> IntervalSet:
    parts = []
    for _ in range(rng.choice((1, 1, 2))):
        a, b = sorted(rng.sample(range(grid + 1), 2))
        lo, hi = Fraction(a, grid), Fraction(b, grid)
        parts.append(Interval(lo, hi, rng.random() < 0.5, rng.random() < 0.5))
    return IntervalSet(parts)


def truth_row(v: Valuation, sample_count: int = 50, seed: int = 0, oracle_mesh: Fraction | None = None) -> TruthRow:
    """Classify one valuation and cross-check the analytic verdicts by random probes.

    With ``oracle_mesh`` set every probe is also decided by the grid oracle.
    """
    from .oracle import discretize, oracle_achievable, oracle_sup_achievable

    label = v.name or "valuation"
    row = TruthRow(label, v.convention.value)
    rep = mass_report(v)
    row.atom_free = rep.atom_free
    row.sliceable = is_sliceable(v).sliceable
    toks = jump_tokens(v)
    row.d_universal = row.dd_universal = not toks
    try:
        model = discretize(v, oracle_mesh) if oracle_mesh is not None else None
        rng = random.Random(seed)
        checks = []
        if toks:
            piece, alpha = refutation_probe(v, max(toks, key=lambda t: t.mass))
            checks.append((piece, alpha, True))
        for _ in range(sample_count):
            piece = _random_piece(rng)
            alpha = Fraction(rng.randint(1, 63), 64)
            checks.append((piece, alpha, False))
        for piece, alpha, is_refutation in checks:
            d = check_divisibility(v, piece, alpha)
            dd = check_sup_divisibility(v, piece, alpha)
            od = odd = None
            if model is not None and not is_refutation:
                target = alpha * eval_set(v, piece)
                od = oracle_achievable(model, piece, target)
                odd = oracle_sup_achievable(model, piece, target)
            probe = Probe(piece, alpha, d.achievable, dd.achievable, od, odd)
            ok = True
            if d.achievable and eval_set(v, d.witness) != alpha * eval_set(v, piece):
                ok = False
            if od is not None and (od != d.achievable or odd != dd.achievable):
                ok = False
            if row.d_universal and not d.achievable:
                ok = False
            if v.is_measure and d.achievable != dd.achievable:
                ok = False
            if is_refutation:
                row.refutation = probe
                ok = ok and not d.achievable and not dd.achievable
            else:
                row.probes.append(probe)
            row.probes_consistent = row.probes_consistent and ok
    except CakeError as exc:
        row.skipped = f"{type(exc).__name__}: {exc}"
        row.probes_consistent = False
    predicted = row.sliceable and row.atom_free
    if v.is_measure:
        row.theorem_consistent = row.d_universal == predicted
    else:
        row.theorem_consistent = row.dd_universal == predicted
        row.lemma3_holds = (not row.atom_free) or row.sliceable
    return row


def truth_table(fixtures: Sequence[Valuation], sample_count: int = 50, seed: int = 0, oracle_mesh=None) -> list[TruthRow]:
    """One :class:`TruthRow` per valuation, in input order (rows run sequentially)."""
    mesh = as_fraction(oracle_mesh) if oracle_mesh is not None else None
    return [truth_row(v, sample_count, seed + i, mesh) for i, v in enumerate(fixtures)]
