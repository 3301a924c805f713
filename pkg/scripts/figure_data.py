"""Write cdf plot data (x, F(x-), F(x), F(x+)) for the figure fixtures as CSV."""

import argparse
import csv
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from cakemeasure import fixtures as fx
from cakemeasure.cli import plot_rows
from cakemeasure.rational import fmt


@dataclass
class Config:
    out_dir: Path = Path("figure_data")
    mesh: Fraction = Fraction(1, 729)
    fixtures: list[str] = field(default_factory=lambda: ["cantor", "exF(1/10)", "exG(1/20)"])


def slug(expr: str) -> str:
    return "".join(c if c.isalnum() else "_" for c in expr).strip("_")


def main(cfg: Config) -> None:
    cfg.out_dir.mkdir(parents=True, exist_ok=True)
    for expr in cfg.fixtures:
        rows = plot_rows(fx.resolve(expr), cfg.mesh)
        path = cfg.out_dir / f"{slug(expr)}.csv"
        with path.open("w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["x", "left", "at", "right"])
            w.writerows([fmt(c) for c in r] for r in rows)
        print(f"{path}: {len(rows)} rows")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out-dir", type=Path, default=Config.out_dir)
    ap.add_argument("--mesh", type=Fraction, default=Config.mesh)
    ap.add_argument("fixtures", nargs="*")
    a = ap.parse_args()
    cfg = Config(a.out_dir, a.mesh)
    if a.fixtures:
        cfg.fixtures = a.fixtures
    main(cfg)
