"""Sparse exact linear algebra over the rationals.

Vectors are dicts ``index -> Fraction`` with no zero entries.  Rows are kept in
semi-echelon form (each row is zero beyond its pivot in the elimination
order) which keeps banded systems banded; full reduction is done only when a
canonical basis is requested.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Hashable, Iterable, List

Vector = Dict[Hashable, Fraction]


def _axpy(target: Vector, c: Fraction, row: Vector) -> None:
    for j, v in row.items():
        x = target.get(j, 0) - c * v
        if x:
            target[j] = x
        else:
            target.pop(j, None)


class Echelon:
    """Incrementally maintained echelon form.

    ``pivot_order`` is ``min`` or ``max``: the pivot of a row is its smallest
    (resp. largest) column, and stored rows only have entries on the far side
    of their pivot.
    """

    def __init__(self, pivot_order=max):
        if pivot_order not in (min, max):
            raise ValueError("pivot_order must be min or max")
        self.rows: Dict[Hashable, Vector] = {}
        self.pivot_order = pivot_order

    def reduce(self, v: Vector) -> Vector:
        r = {j: Fraction(c) for j, c in v.items() if c}
        pick = self.pivot_order
        blocked = set()
        while True:
            cand = [j for j in r if j not in blocked]
            if not cand:
                return r
            p = pick(cand)
            row = self.rows.get(p)
            if row is None:
                # not a pivot column; later columns may still be
                blocked.add(p)
                continue
            _axpy(r, r[p], row)

    def add(self, v: Vector) -> Vector | None:
        """Insert ``v``; return the new normalized row, or None if dependent."""
        r = self.reduce(v)
        if not r:
            return None
        # reduce() removed every pivot column, so all of r lies beyond p
        p = self.pivot_order(r)
        inv = 1 / r[p]
        r = {j: c * inv for j, c in r.items()}
        self.rows[p] = r
        return r

    def contains(self, v: Vector) -> bool:
        return not self.reduce(v)

    @property
    def rank(self) -> int:
        return len(self.rows)

    def reduced_rows(self) -> Dict[Hashable, Vector]:
        """Fully reduced rows (each pivot column is zero in every other row)."""
        order = sorted(self.rows, reverse=self.pivot_order is min)
        done: Dict[Hashable, Vector] = {}
        for p in order:
            r = dict(self.rows[p])
            for q in list(r):
                if q != p and q in done:
                    _axpy(r, r[q], done[q])
            done[p] = r
        return done

    def basis(self) -> List[Vector]:
        red = self.reduced_rows()
        return [dict(sorted(red[p].items())) for p in sorted(red)]


def nullspace(rows: Iterable[Vector], columns: Iterable[Hashable]) -> List[Vector]:
    """Basis of ``{x : row . x = 0 for all rows}`` with x supported on ``columns``."""
    cols = list(columns)
    allowed = set(cols)
    ech = Echelon(pivot_order=min)
    for row in rows:
        extra = [j for j, c in row.items() if c and j not in allowed]
        if extra:
            raise ValueError(f"row mentions unknown columns {extra}")
        ech.add(row)
    pivots = sorted(ech.rows, reverse=True)
    out = []
    for f in cols:
        if f in ech.rows:
            continue
        x: Vector = {f: Fraction(1)}
        # back substitution from the last pivot towards the first
        for p in pivots:
            s = sum((c * x[j] for j, c in ech.rows[p].items() if j != p and j in x), Fraction(0))
            if s:
                x[p] = -s
        out.append(dict(sorted(x.items())))
    return out
