"""Sparse Gauss-Jordan elimination over exact fields (Fraction or Q(i))."""

from __future__ import annotations

from fractions import Fraction

SparseRow = dict  # column index -> nonzero exact scalar


def rref(rows: list[SparseRow]) -> dict[int, SparseRow]:
    """Reduced row echelon form.

    Returns ``{pivot column: row}`` where each row has a 1 in its pivot column
    and zeros in every other pivot column.
    """
    pivots: dict[int, SparseRow] = {}
    for row in rows:
        r = {c: v for c, v in row.items() if v}
        hits = [c for c in r if c in pivots]
        for pc in hits:
            f = r.get(pc)
            if not f:
                continue
            for c, v in pivots[pc].items():
                nv = r.get(c, 0) - f * v
                if nv:
                    r[c] = nv
                else:
                    r.pop(c, None)
        if not r:
            continue
        pc = min(r)
        inv = 1 / r[pc] if not isinstance(r[pc], int) else Fraction(1, r[pc])
        r = {c: v * inv for c, v in r.items()}
        for other in pivots.values():
            f = other.get(pc)
            if f:
                for c, v in r.items():
                    nv = other.get(c, 0) - f * v
                    if nv:
                        other[c] = nv
                    else:
                        other.pop(c, None)
        pivots[pc] = r
    return pivots


def rank(rows: list[SparseRow]) -> int:
    return len(rref(rows))


def nullspace(rows: list[SparseRow], ncols: int) -> list[SparseRow]:
    """Kernel basis in echelon form, one vector per free column (ascending)."""
    pivots = rref(rows)
    basis = []
    for free in range(ncols):
        if free in pivots:
            continue
        vec = {free: Fraction(1)}
        for pc, r in pivots.items():
            v = r.get(free)
            if v:
                vec[pc] = -v
        basis.append(vec)
    return basis
