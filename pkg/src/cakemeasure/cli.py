"""Command-line front end.  JSON goes to stdout, diagnostics to stderr."""

from __future__ import annotations

import argparse
import csv
import json
import sys
from fractions import Fraction
from typing import Sequence

from . import fixtures as fx
from .divisibility import (
    check_divisibility,
    check_sup_divisibility,
    check_sup_target,
    check_target,
    exact_divide,
    min_interval_count,
)
from .errors import CakeError
from .intervals import IntervalSet, parse_interval_set
from .oracle import discretize, oracle_check
from .protocol import demo_proportional
from .rational import as_fraction, fmt
from .reports import to_json
from .slicing import decompose, greedy_slicing, is_sliceable, slice_valuation, truth_table
from .valuation import eval_set, mass_report

EXIT_USAGE = 2


class UsageError(Exception):
    pass


def _registry(args) -> dict:
    return fx.load_fixture_file(args.fixtures) if getattr(args, "fixtures", None) else {}


def _fixture(args, registry=None):
    expr = args.fixture or args.fixture_pos
    if not expr:
        raise UsageError("a fixture is required (--fixture EXPR)")
    try:
        return fx.resolve(expr, registry if registry is not None else _registry(args))
    except fx.UnknownFixture as exc:
        raise UsageError(f"unknown fixture: {exc.args[0]}") from None


def _piece(args) -> IntervalSet:
    return parse_interval_set(args.piece)


def _decision(d, v, piece, extra=None) -> dict:
    out = {
        "fixture": v.name,
        "piece": piece,
        "pieceMass": eval_set(v, piece),
        "achievable": d.achievable,
        "target": d.target,
        "mode": d.mode,
        "witness": d.witness,
        "witnessMass": eval_set(v, d.witness) if d.witness is not None else None,
        "gapExplanation": {"below": d.gap_below, "above": d.gap_above},
        "anchor": d.anchor,
    }
    if d.mode == "increasingSequenceSup":
        out["sequence"] = {"description": d.description, "first": list(d.sequence), "masses": [eval_set(v, s) for s in d.sequence]}
    if extra:
        out.update(extra)
    return out


# -- subcommands ------------------------------------------------------------------


def cmd_classify(args):
    v = _fixture(args)
    cls = v.cdf.classify()
    rep = mass_report(v)
    return {
        "fixture": v.name,
        "convention": v.convention,
        "rightContinuous": cls.is_right_continuous,
        "continuous": cls.is_continuous,
        "jumps": [{"x": j.x, "leftGap": j.left_gap, "rightGap": j.right_gap} for j in cls.jumps],
        "totalMass": v.total_mass,
        "atoms": [list(a) for a in rep.atoms],
        "leftPhantoms": [list(a) for a in rep.left_phantoms],
        "rightPhantoms": [list(a) for a in rep.right_phantoms],
        "continuousMass": rep.continuous_mass,
        "anchor": "continuous cdf" if cls.is_continuous else "cdf with jumps",
    }


def cmd_eval(args):
    v = _fixture(args)
    out = {"fixture": v.name, "convention": v.convention}
    if args.x is not None:
        x = as_fraction(args.x)
        out.update({"x": x, "left": v.cdf.eval_at(x, "left"), "at": v.cdf.eval_at(x), "right": v.cdf.eval_at(x, "right")})
    piece = _piece(args)
    out.update({"piece": piece, "mass": eval_set(v, piece)})
    return out


def cmd_divide(args):
    v = _fixture(args)
    piece = _piece(args)
    alpha = as_fraction(args.alpha)
    w = exact_divide(v, piece, alpha)
    return {"fixture": v.name, "piece": piece, "alpha": alpha, "witness": w, "witnessMass": eval_set(v, w),
            "targetMass": alpha * eval_set(v, piece), "anchor": "exact division of an atom-free measure"}


def _target_or_alpha(args, v, piece):
    if args.target is not None:
        return as_fraction(args.target), None
    if args.alpha is None:
        raise UsageError("give --alpha or --target")
    alpha = as_fraction(args.alpha)
    return None, alpha


def cmd_check_d(args):
    v = _fixture(args)
    piece = _piece(args)
    target, alpha = _target_or_alpha(args, v, piece)
    d = check_target(v, piece, target) if alpha is None else check_divisibility(v, piece, alpha)
    return _decision(d, v, piece, {"alpha": alpha, "property": "D"})


def cmd_check_dd(args):
    v = _fixture(args)
    piece = _piece(args)
    target, alpha = _target_or_alpha(args, v, piece)
    d = check_sup_target(v, piece, target) if alpha is None else check_sup_divisibility(v, piece, alpha)
    return _decision(d, v, piece, {"alpha": alpha, "property": "DD"})


def cmd_min_parts(args):
    v = _fixture(args)
    target = as_fraction(args.target)
    k = min_interval_count(v, target, args.max_parts)
    return {"fixture": v.name, "target": target, "maxParts": args.max_parts, "minParts": k,
            "anchor": "fewest disjoint intervals reaching the target mass"}


def cmd_slice(args):
    v = _fixture(args)
    s = slice_valuation(v, as_fraction(args.epsilon))
    return {"fixture": v.name, "epsilon": s.epsilon, "count": len(s.pieces), "pieces": list(s.pieces),
            "masses": list(s.masses), "cuts": list(s.cuts), "sliceable": True}


def cmd_greedy(args):
    v = _fixture(args)
    tr = greedy_slicing(v, as_fraction(args.epsilon), args.max_iter)
    shown = tr.steps if args.full else tr.steps[: args.show]
    return {
        "fixture": v.name,
        "epsilon": tr.epsilon,
        "steps": len(tr.steps),
        "terminated": tr.terminated,
        "stopReason": tr.stop_reason,
        "finalRemainderMass": tr.final_remainder_mass,
        "observedRemainderMass": tr.observed_remainder_mass,
        "remainderTendsToZero": tr.remainder_tends_to_zero,
        "selectionRuleHolds": tr.rule_holds,
        "remaindersNonincreasing": tr.remainders_nonincreasing,
        "drainFromStep": tr.drain_from_step,
        "sliceable": is_sliceable(v).sliceable,
        "atomFree": mass_report(v).atom_free,
        "trace": [
            {"piece": s.piece, "pieceMass": s.piece_mass, "remainderMass": s.remainder_mass, "cOfRemainder": s.c_of_remainder}
            for s in shown
        ],
    }


def cmd_decompose(args):
    v = _fixture(args)
    d = decompose(v)
    return {"fixture": v.name, "atoms": [list(a) for a in d.atoms], "atomMass": d.atom_mass,
            "remainderMass": d.remainder.total_mass, "remainderSliceable": is_sliceable(d.remainder).sliceable,
            "conserved": d.atom_mass + d.remainder.total_mass == v.total_mass,
            "anchor": "atoms plus a sliceable remainder"}


def _table_text(rows) -> list[str]:
    head = ["fixture", "conv", "atomFree", "sliceable", "D", "DD", "consistent", "probesOK"]
    body = [[r.fixture, r.convention, r.atom_free, r.sliceable, r.d_universal, r.dd_universal, r.theorem_consistent, r.probes_consistent] for r in rows]
    body = [[str(c) if not isinstance(c, bool) else ("T" if c else "F") for c in row] for row in body]
    widths = [max(len(h), *(len(row[i]) for row in body)) for i, h in enumerate(head)]
    fmt_row = lambda row: "  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip()
    return [fmt_row(head), *(fmt_row(r) for r in body)]


def cmd_table(args):
    registry = _registry(args)
    exprs = args.fixture_list or list(fx.MEASURE_FIXTURES + fx.CONTENT_FIXTURES)
    vals = []
    for e in exprs:
        try:
            vals.append(fx.resolve(e, registry))
        except fx.UnknownFixture as exc:
            raise UsageError(f"unknown fixture: {exc.args[0]}") from None
    rows = truth_table(vals, args.samples, args.seed, args.oracle_mesh)
    text = _table_text(rows)
    if args.text:
        return "\n".join(text)
    out = []
    for r in rows:
        out.append({"fixture": r.fixture, "convention": r.convention, "atomFree": r.atom_free, "sliceable": r.sliceable,
                    "dUniversal": r.d_universal, "ddUniversal": r.dd_universal, "theoremConsistent": r.theorem_consistent,
                    "lemma3Holds": r.lemma3_holds, "probesConsistent": r.probes_consistent, "probes": len(r.probes),
                    "refutation": r.refutation, "skipped": r.skipped})
    return {"rows": out, "table": text}


def cmd_oracle(args):
    v = _fixture(args)
    model = discretize(v, as_fraction(args.mesh))
    piece = _piece(args)
    value = as_fraction(args.value) if args.value is not None else None
    res = oracle_check(model, args.query, value, piece)
    res.update({"fixture": v.name, "mesh": model.mesh, "exactModel": model.exact,
                "tokens": [{"x": t.x, "side": t.side, "mass": t.mass} for t in model.tokens]})
    return res


def plot_rows(v, mesh: Fraction):
    n = mesh.denominator if mesh.numerator == 1 else None
    if n is None:
        raise UsageError("mesh must be 1/N")
    xs = sorted({Fraction(i, n) for i in range(n + 1)} | set(v.cdf.xs))
    f = v.cdf
    return [(x, f.eval_at(x, "left"), f.eval_at(x), f.eval_at(x, "right")) for x in xs]


def cmd_plot(args):
    v = _fixture(args)
    rows = plot_rows(v, as_fraction(args.mesh))
    out = open(args.out, "w", newline="") if args.out else sys.stdout
    try:
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["x", "left", "at", "right"])
        for row in rows:
            w.writerow([fmt(c) for c in row])
    finally:
        if args.out:
            out.close()
    return None


def cmd_demo(args):
    registry = _registry(args)
    exprs = args.agent or []
    if len(exprs) < 2:
        raise UsageError("demo-proportional needs at least two --agent fixtures")
    try:
        vals = [fx.resolve(e, registry) for e in exprs]
    except fx.UnknownFixture as exc:
        raise UsageError(f"unknown fixture: {exc.args[0]}") from None
    alloc = demo_proportional(vals)
    n = len(vals)
    return {"agents": [v.name for v in vals], "pieces": list(alloc.pieces), "values": list(alloc.values),
            "share": Fraction(1, n), "proportional": all(x >= Fraction(1, n) for x in alloc.values),
            "marks": [{"agent": i, "x": x} for i, x in alloc.marks]}


# -- parser -------------------------------------------------------------------------


def _add_fixture(p):
    p.add_argument("fixture_pos", nargs="?", metavar="FIXTURE", help="fixture expression (same as --fixture)")
    p.add_argument("--fixture", help="fixture expression, e.g. 'exF(0.1)' or 'mix(1/2*dirac(1/2) + 1/2*uniform)'")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cakemeasure", description="Exact divisibility and slicing of measures and contents on [0,1].")
    parser.add_argument("--fixtures", help="fixture file with named valuations")
    parser.add_argument("--seed", type=int, default=0)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_, piece=False, fixture=True):
        p = sub.add_parser(name, help=help_)
        if fixture:
            _add_fixture(p)
        if piece:
            p.add_argument("--piece", default="[0,1]", help="piece as an interval union, e.g. '(0,1/4] u [1/2,1]'")
        p.set_defaults(func=func)
        return p

    add("classify", cmd_classify, "continuity and jumps of the cdf")
    p = add("eval", cmd_eval, "mass of a piece (and one-sided cdf values at --x)", piece=True)
    p.add_argument("--x")
    p = add("divide", cmd_divide, "exact alpha-division of a piece", piece=True)
    p.add_argument("--alpha", required=True)
    for name, func in (("check-d", cmd_check_d), ("check-dd", cmd_check_dd)):
        p = add(name, func, f"decide property {name[6:].upper()} for one piece", piece=True)
        p.add_argument("--alpha")
        p.add_argument("--target", help="absolute target mass instead of --alpha")
    p = add("min-parts", cmd_min_parts, "fewest intervals reaching a target mass")
    p.add_argument("--target", required=True)
    p.add_argument("--max-parts", type=int, default=4)
    p = add("slice", cmd_slice, "quantile slicing into pieces of mass <= epsilon")
    p.add_argument("--epsilon", required=True)
    p = add("greedy", cmd_greedy, "instrumented greedy slicing procedure")
    p.add_argument("--epsilon", required=True)
    p.add_argument("--max-iter", type=int, default=10**4)
    p.add_argument("--show", type=int, default=5, help="trace steps to print")
    p.add_argument("--full", action="store_true", help="print every trace step")
    add("decompose", cmd_decompose, "atoms plus atom-free remainder of a measure")
    p = add("table", cmd_table, "truth table over fixtures", fixture=False)
    p.add_argument("fixture_list", nargs="*", metavar="FIXTURE")
    p.add_argument("--samples", type=int, default=50)
    p.add_argument("--oracle-mesh", default=None, help="also decide each probe with the grid oracle at this mesh")
    p.add_argument("--text", action="store_true", help="print the aligned text table only")
    p = add("oracle", cmd_oracle, "brute-force grid oracle", piece=True)
    p.add_argument("--query", required=True, choices=("achievable", "sup-achievable", "quantile", "sliceable", "partition"))
    p.add_argument("--value", help="target mass, level or epsilon")
    p.add_argument("--mesh", default="1/1024")
    p = add("plot", cmd_plot, "CSV of x, F(x-), F(x), F(x+)")
    p.add_argument("--mesh", default="1/512")
    p.add_argument("--out")
    p = add("demo-proportional", cmd_demo, "proportional division among agents", fixture=False)
    p.add_argument("--agent", action="append", help="agent valuation (repeat)")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "oracle_mesh", None) is not None:
        args.oracle_mesh = as_fraction(args.oracle_mesh)
    try:
        result = args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CakeError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code
    if result is None:
        return 0
    if isinstance(result, str):
        print(result)
    else:
        print(json.dumps(to_json(result), indent=2))
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
