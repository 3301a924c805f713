"""Seeded random piecewise-linear valuations for property tests and sweeps."""

from __future__ import annotations

import random
from fractions import Fraction

from .cdf import Breakpoint, GeneralizedCDF
from .valuation import Convention, Valuation


def random_valuation(
    rng: random.Random,
    convention: Convention = Convention.STIELTJES,
    max_breakpoints: int = 8,
    max_jumps: int = 3,
    grid: int = 16,
    allow_flat: bool = True,
) -> Valuation:
    """Probability valuation with breakpoints on the ``1/grid`` lattice.

    Segment rises and jump sizes are small random integers (zero rises give
    flat stretches), normalised so the total mass is 1.
    """
    convention = Convention(convention)
    inner = sorted(rng.sample(range(1, grid), rng.randint(0, min(max_breakpoints - 2, grid - 1))))
    xs = [Fraction(0), *(Fraction(k, grid) for k in inner), Fraction(1)]
    rises = [rng.randint(0 if allow_flat else 1, 4) for _ in range(len(xs) - 1)]
    slots = []
    for i, x in enumerate(xs):
        if convention is Convention.STIELTJES:
            slots.append((i, "L"))
        else:
            if i > 0:
                slots.append((i, "L"))
            if i < len(xs) - 1:
                slots.append((i, "R"))
    chosen = rng.sample(slots, rng.randint(0, min(max_jumps, len(slots))))
    gaps = {s: rng.randint(1, 4) for s in chosen}
    if sum(rises) + sum(gaps.values()) == 0:
        rises[-1] = 1
    total = sum(rises) + sum(gaps.values())
    bps = []
    level = 0
    for i, x in enumerate(xs):
        left = level
        level += gaps.get((i, "L"), 0)
        at = level
        level += gaps.get((i, "R"), 0)
        bps.append(Breakpoint(x, Fraction(left, total), Fraction(at, total), Fraction(level, total)))
        if i < len(rises):
            level += rises[i]
    return Valuation(GeneralizedCDF(bps), convention, f"random[{len(xs)}bp,{len(chosen)}jumps]")


def random_continuous(rng: random.Random, max_breakpoints: int = 8, grid: int = 16) -> Valuation:
    """Atom-free probability measure (continuous piecewise-linear cdf)."""
    return random_valuation(rng, Convention.STIELTJES, max_breakpoints, 0, grid, allow_flat=True)
