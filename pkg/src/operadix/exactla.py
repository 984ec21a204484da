"""Exact linear algebra over the rationals.

Matrices are stored sparsely (one ``{column: value}`` dict per row) because
the relation matrices built by :mod:`operadix.freeoperad` are thousands of
columns wide with only a handful of nonzeros per row.  Elimination clears
denominators row by row and then runs fraction-free over the integers,
keeping every row primitive (content divided out) to limit growth.
"""
from __future__ import annotations

from collections import defaultdict
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Mapping, Sequence

__all__ = [
    "DimensionError",
    "QMatrix",
    "rank",
    "nullspace",
    "row_space_basis",
    "subspace_dim_sum",
]


class DimensionError(ValueError):
    """Operands have incompatible shapes."""


def _to_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise TypeError("floating point entries are not allowed")
    return Fraction(x)


class QMatrix:
    """A rows x cols matrix of exact rationals (sparse row storage)."""

    __slots__ = ("rows", "cols", "_data")

    def __init__(self, rows: Sequence[Sequence] = (), cols: int | None = None):
        data = []
        for row in rows:
            data.append({j: _to_fraction(v) for j, v in enumerate(row) if v != 0})
        if cols is None:
            lengths = {len(r) for r in rows}
            if len(lengths) > 1:
                raise DimensionError("ragged rows")
            cols = lengths.pop() if lengths else 0
        elif any(len(r) != cols for r in rows):
            raise DimensionError("row length does not match cols")
        self.rows = len(data)
        self.cols = cols
        self._data = data

    @classmethod
    def from_sparse(cls, rows: Iterable[Mapping[int, object]], cols: int) -> "QMatrix":
        m = cls((), cols)
        data = []
        for row in rows:
            clean = {}
            for j, v in row.items():
                if not 0 <= j < cols:
                    raise DimensionError(f"column {j} out of range 0..{cols - 1}")
                if v != 0:
                    clean[j] = _to_fraction(v)
            data.append(clean)
        m._data = data
        m.rows = len(data)
        return m

    @classmethod
    def identity(cls, n: int) -> "QMatrix":
        return cls.from_sparse(({i: 1} for i in range(n)), n)

    @property
    def entries(self) -> list[Fraction]:
        """Row-major list of all rows*cols entries."""
        out = []
        for row in self._data:
            out.extend(row.get(j, Fraction(0)) for j in range(self.cols))
        return out

    def sparse_rows(self) -> list[dict[int, Fraction]]:
        return [dict(r) for r in self._data]

    def to_lists(self) -> list[list[Fraction]]:
        return [[r.get(j, Fraction(0)) for j in range(self.cols)] for r in self._data]

    def transpose(self) -> "QMatrix":
        cols: list[dict[int, Fraction]] = [dict() for _ in range(self.cols)]
        for i, row in enumerate(self._data):
            for j, v in row.items():
                cols[j][i] = v
        return QMatrix.from_sparse(cols, self.rows)

    def vstack(self, other: "QMatrix") -> "QMatrix":
        if self.cols != other.cols:
            raise DimensionError(f"column mismatch: {self.cols} vs {other.cols}")
        return QMatrix.from_sparse(self._data + other._data, self.cols)

    def apply(self, vec: Sequence) -> list[Fraction]:
        """Matrix-vector product ``self @ vec``."""
        if len(vec) != self.cols:
            raise DimensionError("vector length does not match cols")
        return [sum((v * vec[j] for j, v in row.items()), Fraction(0)) for row in self._data]

    def __matmul__(self, vec):
        return self.apply(vec)

    def __eq__(self, other):
        if not isinstance(other, QMatrix):
            return NotImplemented
        return self.rows == other.rows and self.cols == other.cols and self._data == other._data

    def __repr__(self):
        return f"QMatrix({self.rows}x{self.cols}, nnz={sum(map(len, self._data))})"


def _primitive_int_rows(m: QMatrix) -> list[dict[int, int]]:
    out = []
    for row in m._data:
        if not row:
            continue
        den = lcm(*(v.denominator for v in row.values()))
        irow = {j: int(v * den) for j, v in row.items()}
        g = gcd(*irow.values())
        if g != 1:
            irow = {j: v // g for j, v in irow.items()}
        out.append(irow)
    return out


def _eliminate(rows: list[dict[int, int]], ncols: int, jordan: bool = False):
    """Fraction-free column-by-column elimination, in place.

    Within each column the pivot is the candidate entry of smallest bit size
    (ties broken by row length).  With ``jordan`` the pivot column is also
    cleared from earlier pivot rows, leaving a reduced echelon form up to
    row scaling.  Returns the list of ``(column, row_index)`` pivots.
    """
    colidx: dict[int, set[int]] = defaultdict(set)
    for r, row in enumerate(rows):
        for j in row:
            colidx[j].add(r)
    used: set[int] = set()
    pivots: list[tuple[int, int]] = []
    for c in sorted(colidx):
        holders = colidx[c]
        cand = [r for r in holders if r not in used]
        if not cand:
            continue
        p = min(cand, key=lambda r: (abs(rows[r][c]).bit_length(), len(rows[r])))
        used.add(p)
        pivots.append((c, p))
        prow = rows[p]
        a = prow[c]
        targets = [r for r in holders if r != p and (jordan or r not in used)]
        for r in targets:
            row = rows[r]
            b = row[c]
            ga = gcd(a, b)
            fa, fb = a // ga, b // ga
            new = {j: v * fa for j, v in row.items()}
            for j, v in prow.items():
                w = new.get(j, 0) - fb * v
                if w:
                    new[j] = w
                else:
                    new.pop(j, None)
            if new:
                g = gcd(*new.values())
                if g != 1:
                    new = {j: v // g for j, v in new.items()}
            for j in row.keys() - new.keys():
                colidx[j].discard(r)
            for j in new.keys() - row.keys():
                colidx[j].add(r)
            rows[r] = new
    return pivots


def rank(m: QMatrix) -> int:
    """Rank over Q."""
    rows = _primitive_int_rows(m)
    return len(_eliminate(rows, m.cols))


def row_space_basis(m: QMatrix) -> QMatrix:
    """A basis of the row space, as primitive integer rows in echelon order."""
    rows = _primitive_int_rows(m)
    pivots = _eliminate(rows, m.cols)
    return QMatrix.from_sparse((rows[p] for _, p in pivots), m.cols)


def nullspace(m: QMatrix) -> list[list[Fraction]]:
    """Basis of ``{x : m x = 0}``; one vector per non-pivot column."""
    rows = _primitive_int_rows(m)
    pivots = _eliminate(rows, m.cols, jordan=True)
    pivot_cols = {c for c, _ in pivots}
    basis = []
    for f in range(m.cols):
        if f in pivot_cols:
            continue
        x = [Fraction(0)] * m.cols
        x[f] = Fraction(1)
        for c, p in pivots:
            v = rows[p].get(f)
            if v:
                x[c] = Fraction(-v, rows[p][c])
        basis.append(x)
    return basis


def subspace_dim_sum(a: QMatrix, b: QMatrix) -> tuple[int, int, int]:
    """``(dim A, dim B, dim(A + B))`` for the row spans of ``a`` and ``b``."""
    if a.cols != b.cols:
        raise DimensionError(f"column mismatch: {a.cols} vs {b.cols}")
    return rank(a), rank(b), rank(a.vstack(b))
