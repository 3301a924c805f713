"""Compare analytic verdicts with the grid oracle over seeded random fixtures."""

import argparse
import random
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction

from cakemeasure.divisibility import check_sup_target, check_target
from cakemeasure.intervals import Interval, IntervalSet
from cakemeasure.oracle import discretize, oracle_achievable, oracle_sliceable, oracle_sup_achievable
from cakemeasure.random_fixtures import random_valuation
from cakemeasure.slicing import is_sliceable
from cakemeasure.valuation import eval_set


@dataclass
class Config:
    count: int = 200
    probes: int = 5
    mesh: Fraction = Fraction(1, 1024)
    seed: int = 0
    max_jumps: int = 3


def random_piece(rng: random.Random, grid: int = 32) -> IntervalSet:
    parts = []
    for _ in range(rng.choice((1, 2))):
        a, b = sorted(rng.sample(range(grid + 1), 2))
        parts.append(Interval(Fraction(a, grid), Fraction(b, grid), rng.random() < 0.5, rng.random() < 0.5))
    return IntervalSet(parts)


def main(cfg: Config) -> Counter:
    rng = random.Random(cfg.seed)
    tally = Counter()
    for idx in range(cfg.count):
        conv = ("stieltjes", "content")[idx % 2]
        v = random_valuation(rng, conv, max_jumps=cfg.max_jumps)
        m = discretize(v, cfg.mesh)
        tally["sliceable " + ("agree" if is_sliceable(v).sliceable == oracle_sliceable(m) else "DISAGREE")] += 1
        for _ in range(cfg.probes):
            piece = random_piece(rng)
            target = Fraction(rng.randint(0, 64), 64) * eval_set(v, piece)
            d = check_target(v, piece, target).achievable
            dd = check_sup_target(v, piece, target).achievable
            tally[f"D {'agree' if d == oracle_achievable(m, piece, target) else 'DISAGREE'}"] += 1
            tally[f"DD {'agree' if dd == oracle_sup_achievable(m, piece, target) else 'DISAGREE'}"] += 1
            tally[f"{conv} D={'T' if d else 'F'} DD={'T' if dd else 'F'}"] += 1
    for k in sorted(tally):
        print(f"{k:28s} {tally[k]}")
    return tally


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--count", type=int, default=Config.count)
    ap.add_argument("--probes", type=int, default=Config.probes)
    ap.add_argument("--mesh", type=Fraction, default=Config.mesh)
    ap.add_argument("--seed", type=int, default=Config.seed)
    a = ap.parse_args()
    main(Config(a.count, a.probes, a.mesh, a.seed))
