"""Trace the greedy selection on a content: remainder mass per step as CSV."""

import argparse
import sys
from dataclasses import dataclass
from fractions import Fraction

from cakemeasure import fixtures as fx
from cakemeasure.slicing import greedy_slicing


@dataclass
class Config:
    fixture: str = "exF(1/10)"
    epsilon: Fraction = Fraction(1, 5)
    max_iter: int = 200
    every: int = 10


def main(cfg: Config) -> None:
    t = greedy_slicing(fx.resolve(cfg.fixture), cfg.epsilon, cfg.max_iter)
    out = sys.stdout
    out.write("step,piece_mass,remainder_mass,c_of_remainder\n")
    for i, s in enumerate(t.steps):
        if i % cfg.every == 0 or i == len(t.steps) - 1:
            out.write(f"{i},{float(s.piece_mass):.12g},{float(s.remainder_mass):.12g},{float(s.c_of_remainder):.12g}\n")
    print(
        f"# stop={t.stop_reason} final={t.final_remainder_mass} rule_holds={t.rule_holds} drain_from={t.drain_from_step}",
        file=sys.stderr,
    )


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--fixture", default=Config.fixture)
    ap.add_argument("--epsilon", type=Fraction, default=Config.epsilon)
    ap.add_argument("--max-iter", type=int, default=Config.max_iter)
    ap.add_argument("--every", type=int, default=Config.every)
    a = ap.parse_args()
    main(Config(a.fixture, a.epsilon, a.max_iter, a.every))
