"""Sparse row reduction over the rational-function field.

Vectors are dicts ``{column key: RationalQ}``. A column order is supplied as
a sort key; pivots are taken column by column in that order, so the reduced
row-echelon basis is canonical for the row space.
"""

from __future__ import annotations

from typing import Callable, Hashable, Iterable, Mapping

from .scalars import RationalQ

Vector = dict[Hashable, RationalQ]


def _simplicity(v: RationalQ) -> tuple[int, int]:
    return (len(v.num.terms) + len(v.den.terms), len(v.den.terms))


class EchelonBasis:
    """Incrementally maintained reduced row-echelon basis of a subspace.

    ``order_key`` ranks columns: the pivot of a row is its entry with the
    smallest key. Rows are normalized to pivot coefficient 1 and kept fully
    reduced against each other.
    """

    def __init__(self, order_key: Callable[[Hashable], object]):
        self.order_key = order_key
        self.rows: dict[Hashable, Vector] = {}

    def __len__(self) -> int:
        return len(self.rows)

    def reduce(self, vec: Mapping[Hashable, RationalQ]) -> Vector:
        """Remainder of ``vec`` after eliminating every pivot column."""
        v = {c: x for c, x in vec.items() if not x.is_zero()}
        hits = [c for c in v if c in self.rows]
        while hits:
            for c in hits:
                f = v.get(c)
                if f is None:
                    continue
                for cc, x in self.rows[c].items():
                    t = v.get(cc)
                    nv = -(f * x) if t is None else t - f * x
                    if nv.is_zero():
                        v.pop(cc, None)
                    else:
                        v[cc] = nv
            hits = [c for c in v if c in self.rows]
        return v

    def contains(self, vec: Mapping[Hashable, RationalQ]) -> bool:
        return not self.reduce(vec)

    def add(self, vec: Mapping[Hashable, RationalQ]) -> bool:
        """Insert ``vec``; return ``True`` when the span grew."""
        v = self.reduce(vec)
        if not v:
            return False
        piv = min(v, key=self.order_key)
        inv = v[piv].inverse()
        v = {c: x * inv for c, x in v.items()}
        for p, row in self.rows.items():
            f = row.get(piv)
            if f is None:
                continue
            for cc, x in v.items():
                t = row.get(cc)
                nv = -(f * x) if t is None else t - f * x
                if nv.is_zero():
                    row.pop(cc, None)
                else:
                    row[cc] = nv
        self.rows[piv] = v
        return True

    def extend(self, vecs: Iterable[Mapping[Hashable, RationalQ]]) -> None:
        for v in vecs:
            self.add(v)

    def basis(self) -> list[Vector]:
        """Rows sorted by pivot order."""
        return [self.rows[p] for p in sorted(self.rows, key=self.order_key)]

    def pivots(self) -> list[Hashable]:
        return sorted(self.rows, key=self.order_key)


def rref(vectors: Iterable[Mapping[Hashable, RationalQ]], order_key: Callable[[Hashable], object]) -> list[Vector]:
    basis = EchelonBasis(order_key)
    basis.extend(vectors)
    return basis.basis()


def rank(vectors: Iterable[Mapping[Hashable, RationalQ]], order_key: Callable[[Hashable], object] | None = None) -> int:
    """Rank over ``Q(q)``.

    Uses pivoting by simplest entry (fewest terms) which keeps intermediate
    expressions small; the rank does not depend on the pivot choice.
    """
    rows = [dict((c, x) for c, x in v.items() if not x.is_zero()) for v in vectors]
    rows = [r for r in rows if r]
    r = 0
    while rows:
        best_i, best_c, best_s = None, None, None
        for i, row in enumerate(rows):
            for c, x in row.items():
                s = _simplicity(x)
                if best_s is None or s < best_s:
                    best_i, best_c, best_s = i, c, s
                    if s == (2, 1):
                        break
            if best_s == (2, 1):
                break
        pivot_row = rows.pop(best_i)
        inv = pivot_row[best_c].inverse()
        pivot_row = {c: x * inv for c, x in pivot_row.items()}
        r += 1
        survivors = []
        for row in rows:
            f = row.get(best_c)
            if f is not None:
                for cc, x in pivot_row.items():
                    t = row.get(cc)
                    nv = -(f * x) if t is None else t - f * x
                    if nv.is_zero():
                        row.pop(cc, None)
                    else:
                        row[cc] = nv
            if row:
                survivors.append(row)
        rows = survivors
    return r
