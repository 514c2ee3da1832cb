"""Sweep N(m)/m^n for several n and write one CSV.

    python3 scripts/counting_growth.py --n 2 3 4 --m-max 4000 --step 20 --out results/counting.csv
"""

from __future__ import annotations

import argparse
import csv
import sys
from dataclasses import dataclass, field
from pathlib import Path

from kohnspec.spectrum import decimal_str, growth_report


@dataclass
class SweepConfig:
    ns: list[int] = field(default_factory=lambda: [2, 3])
    m_max: int = 2000
    step: int = 2
    out: Path | None = None


def run(cfg: SweepConfig) -> list[dict]:
    rows = []
    for n in cfg.ns:
        table = growth_report(n, cfg.m_max, cfg.step)
        for row in table.rows():
            rows.append({"n": n, **row})
        if table.ratios:
            print(
                f"n={n}: N(m)/m^n in [{decimal_str(table.ratio_min, 8)}, {decimal_str(table.ratio_max, 8)}],"
                f" upper-half max {decimal_str(table.limsup_estimate, 8)}",
                file=sys.stderr,
            )
    return rows


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, nargs="+", default=[2, 3])
    ap.add_argument("--m-max", type=int, default=2000)
    ap.add_argument("--step", type=int, default=2)
    ap.add_argument("--out", type=Path)
    a = ap.parse_args()
    cfg = SweepConfig(a.n, a.m_max, a.step, a.out)
    rows = run(cfg)
    if cfg.out:
        cfg.out.parent.mkdir(parents=True, exist_ok=True)
    fh = open(cfg.out, "w", newline="") if cfg.out else sys.stdout
    w = csv.DictWriter(fh, fieldnames=["n", "m", "N", "ratio"])
    w.writeheader()
    w.writerows(rows)
    if cfg.out:
        fh.close()


if __name__ == "__main__":
    main()
