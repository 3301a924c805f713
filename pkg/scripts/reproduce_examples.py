"""Print the worked examples with their exact values."""

from dataclasses import dataclass
from fractions import Fraction as Fr

from cakemeasure import fixtures as fx
from cakemeasure.cantor import removed_middle_thirds
from cakemeasure.divisibility import check_divisibility, check_sup_target, exact_divide, min_interval_count
from cakemeasure.intervals import IntervalSet, parse_interval_set as P
from cakemeasure.protocol import demo_proportional
from cakemeasure.slicing import decompose, slice_valuation
from cakemeasure.valuation import ChainPart, IncreasingChain, chain_continuity_check, eval_set, half_open_chain


@dataclass
class Config:
    lam: Fr = Fr(1, 10)
    eps: Fr = Fr(1, 20)


def main(cfg: Config = Config()) -> None:
    F, G = fx.example_f(cfg.lam), fx.example_g(cfg.eps)
    U = IntervalSet.unit()

    d = check_divisibility(F, U, Fr(1, 5))
    print(f"content F: target 1/5 achievable={d.achievable}, gap ({d.gap_below}, {d.gap_above})")
    print(f"content F: target 1/10 as a supremum: {check_sup_target(F, U, Fr(1, 10)).achievable}")
    r = chain_continuity_check(F, half_open_chain(0, Fr(1, 2), 0, -1, start=3))
    print(f"content F: chain (0,1/2-1/n] limit {r.limit_of_values}, union value {r.value_of_union}")

    chain = IncreasingChain((ChainPart(0, 1, 1, -1, False, False),), start=3)
    g = chain_continuity_check(G, chain)
    print(f"content G: chain (1/n,1-1/n) limit {g.limit_of_values}, union value {g.value_of_union}")
    print(f"content G: fewest intervals for 99/100: {min_interval_count(G, Fr(99, 100))}")

    s = removed_middle_thirds(6)
    print(f"removed thirds through step 6: cantor {eval_set(fx.cantor(), s)}, uniform {eval_set(fx.uniform(), s)}")
    print(f"cantor slicing at 1/4: cuts {[str(c) for c in slice_valuation(fx.cantor(), Fr(1, 4)).cuts]}")
    print(f"cantor exact division at 1/4: {exact_divide(fx.cantor(), U, Fr(1, 4))}")

    mixed = fx.resolve("mix(3/10*dirac(1/4) + 1/5*dirac(3/4) + 1/2*uniform)")
    dec = decompose(mixed)
    print(f"mixed measure: atoms {[(str(x), str(m)) for x, m in dec.atoms]}, remainder mass {dec.remainder.total_mass}")

    alloc = demo_proportional([fx.uniform(), fx.square(64)])
    print(f"proportional demo: pieces {[str(p) for p in alloc.pieces]}, values {[str(v) for v in alloc.values]}")
    print(f"piece (0,1/18] of G: half its mass achievable={check_divisibility(G, P('(0,1/18]'), Fr(1, 2)).achievable}")


if __name__ == "__main__":
    main()
