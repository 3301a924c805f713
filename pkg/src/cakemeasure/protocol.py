"""Proportional cake division by recursive halving on top of exact division."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .divisibility import exact_divide
from .errors import PreconditionError, ValidationError
from .intervals import IntervalSet, closed
from .rational import fmt
from .valuation import Valuation, eval_set


@dataclass(frozen=True)
class Allocation:
    pieces: tuple[IntervalSet, ...]
    values: tuple[Fraction, ...]
    marks: tuple[tuple[int, Fraction], ...]

    @property
    def n(self) -> int:
        return len(self.pieces)


def _check_agent(i: int, v: Valuation) -> None:
    if not v.is_measure:
        raise PreconditionError(f"agent {i}: needs a measure, got a content")
    cls = v.cdf.classify()
    if not cls.is_continuous:
        j = cls.jumps[0]
        raise PreconditionError(
            f"agent {i}: atom at {fmt(j.x)} of mass {fmt(j.left_gap)}; exact division needs an atom-free measure",
            witness=j,
        )
    if v.total_mass != 1:
        raise PreconditionError(f"agent {i}: total mass {fmt(v.total_mass)} is not 1")


def _mark(v: Valuation, piece: IntervalSet, alpha: Fraction) -> Fraction:
    """Right end of the shortest prefix of ``piece`` worth ``alpha`` of it to ``v``."""
    if eval_set(v, piece) == 0:
        return Fraction(1)
    left = exact_divide(v, piece, alpha)
    return max(left.endpoints(), default=Fraction(0))


def demo_proportional(valuations: Sequence[Valuation]) -> Allocation:
    """Give each of ``n`` agents a piece worth at least ``1/n`` to them.

    A group of ``n`` agents sharing piece ``P`` marks, for ``k = n // 2``,
    the leftmost cut where the prefix of ``P`` is worth ``k/n`` of ``P``.  The
    ``k`` agents with the smallest marks share ``P ∩ [0, x]`` (``x`` the k-th
    smallest mark) and the rest share the remainder; each half recurses.
    """
    if len(valuations) < 2:
        raise ValidationError("demo needs at least two agents")
    for i, v in enumerate(valuations):
        _check_agent(i, v)
    pieces: dict[int, IntervalSet] = {}
    marks: list[tuple[int, Fraction]] = []

    def share(piece: IntervalSet, agents: list[int]) -> None:
        if len(agents) == 1:
            pieces[agents[0]] = piece
            return
        n = len(agents)
        k = n // 2
        alpha = Fraction(k, n)
        marked = sorted(((_mark(valuations[i], piece, alpha), i) for i in agents), key=lambda t: (t[0], t[1]))
        marks.extend((i, x) for x, i in marked)
        cut = marked[k - 1][0]
        left = piece & IntervalSet.of(closed(0, cut))
        share(left, [i for _, i in marked[:k]])
        share(piece - left, [i for _, i in marked[k:]])

    share(IntervalSet.unit(), list(range(len(valuations))))
    order = range(len(valuations))
    alloc = tuple(pieces[i] for i in order)
    values = tuple(eval_set(valuations[i], alloc[i]) for i in order)
    return Allocation(alloc, values, tuple(marks))
