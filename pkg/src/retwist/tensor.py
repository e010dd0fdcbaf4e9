"""Sparse exact operators on tensor powers ``V^{(x)k}`` of ``V = Q(q)^n``.

Multi-indices are tuples of 0-based basis labels, one per tensor leg, and the
flattened position of a multi-index is row-major (leg 1 most significant).
Leg positions in the public API (``embed_legs``, ``partial_transpose``,
``contract_leg``) are 1-based, matching the subscript notation ``R_13``.
"""

from __future__ import annotations

import itertools
from typing import Callable, Iterable, Iterator, Mapping

from .scalars import RONE, RZERO, RationalQ, as_rational

Index = tuple[int, ...]


class SingularOperatorError(ArithmeticError):
    """Raised when Gaussian elimination meets a column with no usable pivot."""


class TensorOperator:
    """Linear operator on ``V^{(x)arity}`` with sparse exact entries.

    ``rows[r][c]`` is the coefficient of output basis vector ``r`` in the
    image of input basis vector ``c``. Zero entries are never stored.
    """

    __slots__ = ("dim", "arity", "rows")

    def __init__(self, dim: int, arity: int, entries: Mapping[tuple[Index, Index], object] | None = None):
        self.dim = dim
        self.arity = arity
        self.rows: dict[Index, dict[Index, RationalQ]] = {}
        for (r, c), v in (entries or {}).items():
            self._check_index(r)
            self._check_index(c)
            v = as_rational(v)
            if v.is_zero():
                continue
            row = self.rows.setdefault(tuple(r), {})
            if tuple(c) in row:
                v = row[tuple(c)] + v
            if v.is_zero():
                row.pop(tuple(c), None)
            else:
                row[tuple(c)] = v
        self.rows = {r: row for r, row in self.rows.items() if row}

    @classmethod
    def _from_rows(cls, dim: int, arity: int, rows: dict[Index, dict[Index, RationalQ]]) -> "TensorOperator":
        obj = cls.__new__(cls)
        obj.dim = dim
        obj.arity = arity
        obj.rows = {r: row for r, row in rows.items() if row}
        return obj

    def _check_index(self, idx: Index) -> None:
        if len(idx) != self.arity or any(not 0 <= i < self.dim for i in idx):
            raise IndexError(f"multi-index {idx} invalid for dim={self.dim}, arity={self.arity}")

    @classmethod
    def identity(cls, dim: int, arity: int) -> "TensorOperator":
        rows = {idx: {idx: RONE} for idx in itertools.product(range(dim), repeat=arity)}
        return cls._from_rows(dim, arity, rows)

    @classmethod
    def zero(cls, dim: int, arity: int) -> "TensorOperator":
        return cls._from_rows(dim, arity, {})

    @classmethod
    def from_matrix(cls, dim: int, arity: int, matrix: list[list]) -> "TensorOperator":
        """Build from a dense nested list indexed by flattened positions."""
        basis = list(itertools.product(range(dim), repeat=arity))
        if len(matrix) != len(basis) or any(len(row) != len(basis) for row in matrix):
            raise ValueError("matrix shape does not match dim**arity")
        entries = {}
        for i, row in enumerate(matrix):
            for j, v in enumerate(row):
                if v != 0:
                    entries[(basis[i], basis[j])] = v
        return cls(dim, arity, entries)

    # -- inspection ---------------------------------------------------------
    def __getitem__(self, key: tuple[Index, Index]) -> RationalQ:
        r, c = key
        return self.rows.get(tuple(r), {}).get(tuple(c), RZERO)

    def entries(self) -> Iterator[tuple[Index, Index, RationalQ]]:
        """Nonzero entries in canonical (row, column) order."""
        for r in sorted(self.rows):
            row = self.rows[r]
            for c in sorted(row):
                yield r, c, row[c]

    def nnz(self) -> int:
        return sum(len(row) for row in self.rows.values())

    def is_zero(self) -> bool:
        return not self.rows

    def is_identity(self) -> bool:
        size = self.dim**self.arity
        if len(self.rows) != size:
            return False
        return all(len(row) == 1 and row.get(r) == RONE for r, row in self.rows.items())

    def to_dense(self) -> list[list[RationalQ]]:
        basis = list(itertools.product(range(self.dim), repeat=self.arity))
        pos = {b: i for i, b in enumerate(basis)}
        out = [[RZERO] * len(basis) for _ in basis]
        for r, c, v in self.entries():
            out[pos[r]][pos[c]] = v
        return out

    def map_entries(self, f: Callable[[RationalQ], object]) -> "TensorOperator":
        entries = {(r, c): f(v) for r, c, v in self.entries()}
        return TensorOperator(self.dim, self.arity, entries)

    def _same_shape(self, other: "TensorOperator") -> None:
        if not isinstance(other, TensorOperator):
            raise TypeError("expected a TensorOperator")
        if (self.dim, self.arity) != (other.dim, other.arity):
            raise ValueError(
                f"shape mismatch: (dim={self.dim}, arity={self.arity}) vs (dim={other.dim}, arity={other.arity})"
            )

    # -- algebra ------------------------------------------------------------
    def __matmul__(self, other: "TensorOperator") -> "TensorOperator":
        """Composition ``self o other`` (apply ``other`` first)."""
        self._same_shape(other)
        out: dict[Index, dict[Index, RationalQ]] = {}
        orows = other.rows
        for r, row in self.rows.items():
            acc: dict[Index, RationalQ] = {}
            for m, a in row.items():
                brow = orows.get(m)
                if not brow:
                    continue
                for c, b in brow.items():
                    prev = acc.get(c)
                    acc[c] = a * b if prev is None else prev + a * b
            acc = {c: v for c, v in acc.items() if not v.is_zero()}
            if acc:
                out[r] = acc
        return TensorOperator._from_rows(self.dim, self.arity, out)

    def __add__(self, other: "TensorOperator") -> "TensorOperator":
        self._same_shape(other)
        out = {r: dict(row) for r, row in self.rows.items()}
        for r, row in other.rows.items():
            tgt = out.setdefault(r, {})
            for c, v in row.items():
                s = tgt[c] + v if c in tgt else v
                if s.is_zero():
                    tgt.pop(c, None)
                else:
                    tgt[c] = s
        return TensorOperator._from_rows(self.dim, self.arity, out)

    def __neg__(self) -> "TensorOperator":
        return self.scale(-RONE)

    def __sub__(self, other: "TensorOperator") -> "TensorOperator":
        return self + (-other)

    def scale(self, s) -> "TensorOperator":
        s = as_rational(s)
        if s.is_zero():
            return TensorOperator.zero(self.dim, self.arity)
        return TensorOperator._from_rows(
            self.dim, self.arity, {r: {c: v * s for c, v in row.items()} for r, row in self.rows.items()}
        )

    def apply(self, vec: Mapping[Index, RationalQ]) -> dict[Index, RationalQ]:
        """Apply to a sparse vector ``{basis multi-index: coefficient}``."""
        cols: dict[Index, list[tuple[Index, RationalQ]]] = {}
        for r, row in self.rows.items():
            for c, v in row.items():
                cols.setdefault(c, []).append((r, v))
        out: dict[Index, RationalQ] = {}
        for c, x in vec.items():
            for r, v in cols.get(c, ()):
                out[r] = out[r] + v * x if r in out else v * x
        return {r: v for r, v in out.items() if not v.is_zero()}

    def transpose(self) -> "TensorOperator":
        out: dict[Index, dict[Index, RationalQ]] = {}
        for r, row in self.rows.items():
            for c, v in row.items():
                out.setdefault(c, {})[r] = v
        return TensorOperator._from_rows(self.dim, self.arity, out)

    def __eq__(self, other) -> bool:
        if not isinstance(other, TensorOperator):
            return NotImplemented
        return (self.dim, self.arity) == (other.dim, other.arity) and self.rows == other.rows

    __hash__ = None  # mutable-looking container; compare, don't hash

    def __repr__(self) -> str:
        return f"TensorOperator(dim={self.dim}, arity={self.arity}, nnz={self.nnz()})"


def identity(dim: int, arity: int) -> TensorOperator:
    return TensorOperator.identity(dim, arity)


def kron(a: TensorOperator, b: TensorOperator) -> TensorOperator:
    """Tensor product; legs of ``a`` come first."""
    if a.dim != b.dim:
        raise ValueError(f"kron of operators on different spaces (dim {a.dim} vs {b.dim})")
    out: dict[Index, dict[Index, RationalQ]] = {}
    for ra, rowa in a.rows.items():
        for rb, rowb in b.rows.items():
            out[ra + rb] = {ca + cb: x * y for ca, x in rowa.items() for cb, y in rowb.items()}
    return TensorOperator._from_rows(a.dim, a.arity + b.arity, out)


def embed_legs(a: TensorOperator, positions: Iterable[int], k: int) -> TensorOperator:
    """Place ``a`` on the given (1-based) legs of ``V^{(x)k}``, identity elsewhere.

    ``positions[i]`` is the leg receiving the ``i``-th tensor factor of ``a``,
    so ``embed_legs(R, [3, 1], 3)`` is ``R_31``.
    """
    pos = [p - 1 for p in positions]
    if len(pos) != a.arity:
        raise ValueError(f"need {a.arity} positions, got {len(pos)}")
    if len(set(pos)) != len(pos):
        raise ValueError(f"duplicate leg in {list(positions)}")
    if any(not 0 <= p < k for p in pos):
        raise ValueError(f"leg position out of range 1..{k}: {list(positions)}")
    rest = [p for p in range(k) if p not in pos]
    out: dict[Index, dict[Index, RationalQ]] = {}
    for spectator in itertools.product(range(a.dim), repeat=len(rest)):
        for r, row in a.rows.items():
            big_r = [0] * k
            for p, v in zip(rest, spectator):
                big_r[p] = v
            for p, v in zip(pos, r):
                big_r[p] = v
            new_row = {}
            for c, val in row.items():
                big_c = list(big_r)
                for p, v in zip(pos, c):
                    big_c[p] = v
                new_row[tuple(big_c)] = val
            out[tuple(big_r)] = new_row
    return TensorOperator._from_rows(a.dim, k, out)


def permute_legs(a: TensorOperator, perm: Iterable[int]) -> TensorOperator:
    """Relabel legs: leg ``i`` of ``a`` becomes leg ``perm[i]`` (1-based)."""
    return embed_legs(a, list(perm), a.arity)


def permutation_op(n: int) -> TensorOperator:
    """The flip ``P = sum_ij e_ij (x) e_ji`` on ``V (x) V``."""
    if n < 1:
        raise ValueError("dimension must be positive")
    rows = {(i, j): {(j, i): RONE} for i in range(n) for j in range(n)}
    return TensorOperator._from_rows(n, 2, rows)


def partial_transpose(a: TensorOperator, legs: Iterable[int]) -> TensorOperator:
    """Transpose only the listed (1-based) legs."""
    ls = [leg - 1 for leg in legs]
    out: dict[Index, dict[Index, RationalQ]] = {}
    for r, row in a.rows.items():
        for c, v in row.items():
            r2, c2 = list(r), list(c)
            for leg in ls:
                r2[leg], c2[leg] = c[leg], r[leg]
            out.setdefault(tuple(r2), {})[tuple(c2)] = v
    return TensorOperator._from_rows(a.dim, a.arity, out)


def contract_leg(a: TensorOperator, leg: int, row: int, col: int) -> TensorOperator:
    """Pair one leg with the matrix-unit functional picking entry ``(row, col)``."""
    p = leg - 1
    out: dict[Index, dict[Index, RationalQ]] = {}
    for r, rrow in a.rows.items():
        if r[p] != row:
            continue
        for c, v in rrow.items():
            if c[p] != col:
                continue
            out.setdefault(r[:p] + r[p + 1:], {})[c[:p] + c[p + 1:]] = v
    return TensorOperator._from_rows(a.dim, a.arity - 1, out)


def compose(*ops: TensorOperator) -> TensorOperator:
    """``ops[0] o ops[1] o ...``; the last operator is applied first."""
    result = ops[-1]
    for op in reversed(ops[:-1]):
        result = op @ result
    return result


def invert_operator(a: TensorOperator) -> TensorOperator:
    """Exact inverse by Gauss-Jordan elimination over the fraction field.

    Pivot: for each column in order, the first row (by index) whose entry is
    structurally nonzero. The result is checked on both sides before return.
    """
    basis = list(itertools.product(range(a.dim), repeat=a.arity))
    work = {r: dict(a.rows.get(r, {})) for r in basis}
    inv = {r: {r: RONE} for r in basis}
    remaining = list(basis)
    order: dict[Index, Index] = {}
    for col in basis:
        pivot = next((r for r in remaining if col in work[r]), None)
        if pivot is None:
            raise SingularOperatorError(f"vanishing pivot in column {col}")
        remaining.remove(pivot)
        order[col] = pivot
        pinv = work[pivot][col].inverse()
        work[pivot] = {c: v * pinv for c, v in work[pivot].items()}
        inv[pivot] = {c: v * pinv for c, v in inv[pivot].items()}
        for r in basis:
            if r == pivot or col not in work[r]:
                continue
            f = work[r][col]
            _axpy(work[r], work[pivot], f)
            _axpy(inv[r], inv[pivot], f)
    result = TensorOperator._from_rows(a.dim, a.arity, {col: inv[order[col]] for col in basis})
    ident = TensorOperator.identity(a.dim, a.arity)
    if a @ result != ident or result @ a != ident:
        raise ArithmeticError("inverse failed the exact two-sided post-check")
    return result


def _axpy(target: dict, source: dict, f: RationalQ) -> None:
    """``target -= f * source`` in place on sparse rows."""
    for c, v in source.items():
        t = target.get(c)
        nv = -(f * v) if t is None else t - f * v
        if nv.is_zero():
            target.pop(c, None)
        else:
            target[c] = nv
