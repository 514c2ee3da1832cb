"""Compare the exact Rossi matrices with the closed-form entries, entry by entry.

Prints, for each chain, the calibrated scale h and every entry where the
printed size-k formulas disagree with the operator.

    python3 scripts/rossi_entry_audit.py --k-max 6 --t 1/4
"""

from __future__ import annotations

import argparse
from fractions import Fraction

from kohnspec.crops import rossi_scale
from kohnspec.polyring import GaussianRational
from kohnspec.rossi import oracle_matrix, printed_entries, theorem_spec


def audit(k: int, family: str, t: Fraction) -> list[str]:
    spec = theorem_spec(k, family)
    mat = oracle_matrix(spec, t)
    h = GaussianRational(rossi_scale(t))
    d, u, lower = printed_entries(k, family, t)
    notes = []
    for name, entries, pos in (("d", d, lambda j: (j, j)), ("u", u, lambda j: (j, j + 1)), ("l", lower, lambda j: (j + 1, j))):
        for j, val in enumerate(entries):
            r, c = pos(j)
            got = mat[r][c] / h
            if got != GaussianRational.coerce(val):
                notes.append(f"{name}_{j + 1}: operator {got.to_text()} printed {GaussianRational.coerce(val).to_text()}")
    return notes


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--k-max", type=int, default=6)
    ap.add_argument("--t", type=Fraction, default=Fraction(1, 4))
    a = ap.parse_args()
    for k in range(1, a.k_max + 1):
        for fam in ("V", "W"):
            notes = audit(k, fam, a.t)
            print(f"k={k} {fam}: {'ok' if not notes else '; '.join(notes)}")


if __name__ == "__main__":
    main()
