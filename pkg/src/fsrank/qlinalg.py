"""Exact linear algebra over Q.

Matrices are dense and row-major, with ``fractions.Fraction`` entries.  Ranks are
computed by fraction-free (Bareiss) elimination on rows cleared of
denominators; kernel and image bases come from a reduced row echelon form with
leftmost pivots, so the bases are deterministic.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Iterable, Sequence

Rational = Fraction
Vector = tuple[Fraction, ...]


@dataclass(frozen=True)
class QMatrix:
    rows: int
    cols: int
    entries: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.entries) != self.rows * self.cols:
            raise ValueError(
                f"{self.rows}x{self.cols} matrix needs {self.rows * self.cols} entries, "
                f"got {len(self.entries)}"
            )

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], cols: int | None = None) -> "QMatrix":
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        if any(len(r) != cols for r in rows):
            raise ValueError("ragged rows")
        flat = tuple(Fraction(x) for r in rows for x in r)
        return cls(len(rows), cols, flat)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], rows: int) -> "QMatrix":
        if any(len(c) != rows for c in columns):
            raise ValueError("column length mismatch")
        flat = tuple(Fraction(columns[j][i]) for i in range(rows) for j in range(len(columns)))
        return cls(rows, len(columns), flat)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "QMatrix":
        return cls(rows, cols, (Fraction(0),) * (rows * cols))

    @classmethod
    def identity(cls, n: int) -> "QMatrix":
        return cls(n, n, tuple(Fraction(int(i == j)) for i in range(n) for j in range(n)))

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> list[Fraction]:
        return list(self.entries[i * self.cols:(i + 1) * self.cols])

    def column(self, j: int) -> list[Fraction]:
        return [self.entries[i * self.cols + j] for i in range(self.rows)]

    def to_rows(self) -> list[list[Fraction]]:
        return [self.row(i) for i in range(self.rows)]

    def transpose(self) -> "QMatrix":
        return QMatrix.from_rows([self.column(j) for j in range(self.cols)], self.rows)

    def __matmul__(self, other: "QMatrix") -> "QMatrix":
        if self.cols != other.rows:
            raise ValueError(f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        a = self.to_rows()
        bt = [other.column(j) for j in range(other.cols)]
        out = [[sum((x * y for x, y in zip(r, c)), Fraction(0)) for c in bt] for r in a]
        return QMatrix.from_rows(out, other.cols)

    def apply(self, v: Sequence) -> Vector:
        if len(v) != self.cols:
            raise ValueError("vector length mismatch")
        return tuple(
            sum((self.entries[i * self.cols + j] * v[j] for j in range(self.cols) if v[j]), Fraction(0))
            for i in range(self.rows)
        )

    def is_zero(self) -> bool:
        return not any(self.entries)

    def hstack(self, other: "QMatrix") -> "QMatrix":
        if self.rows != other.rows:
            raise ValueError("row count mismatch")
        return QMatrix.from_rows([self.row(i) + other.row(i) for i in range(self.rows)], self.cols + other.cols)


def _integer_rows(m: QMatrix) -> list[list[int]]:
    out = []
    for r in m.to_rows():
        if not any(r):
            continue
        scale = lcm(*(x.denominator for x in r))
        out.append([int(x * scale) for x in r])
    return out


def rank(m: QMatrix) -> int:
    """Exact rank by Bareiss elimination."""
    a = _integer_rows(m)
    if not a:
        return 0
    ncols = m.cols
    r = 0
    prev = 1
    for c in range(ncols):
        pivot = next((i for i in range(r, len(a)) if a[i][c] != 0), None)
        if pivot is None:
            continue
        a[r], a[pivot] = a[pivot], a[r]
        p = a[r][c]
        for i in range(r + 1, len(a)):
            ai = a[i]
            f = ai[c]
            ar = a[r]
            # exact division is guaranteed by Sylvester's identity
            a[i] = [(p * ai[k] - f * ar[k]) // prev for k in range(ncols)]
        prev = p
        r += 1
        if r == len(a):
            break
    return r


def rref(m: QMatrix) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form and the pivot columns."""
    rows = sparse_rref(({j: x for j, x in enumerate(row) if x} for row in m.to_rows()))
    pivots = sorted(rows)
    dense = []
    for p in pivots:
        row = [Fraction(0)] * m.cols
        for j, x in rows[p].items():
            row[j] = x
        dense.append(row)
    return dense, pivots


def sparse_rref(rows) -> dict[int, dict[int, Fraction]]:
    """Row-reduce sparse rows {column: value}; returns {pivot column: reduced row}.

    Rows are inserted one at a time and the basis is kept fully reduced, so
    every stored row has a 1 at its pivot and zeros at all other pivots.
    """
    basis: dict[int, dict[int, Fraction]] = {}
    for r in rows:
        v = {j: Fraction(x) for j, x in r.items() if x}
        for p in [j for j in v if j in basis]:
            c = v.get(p)
            if not c:
                continue
            for j, x in basis[p].items():
                y = v.get(j, 0) - c * x
                if y:
                    v[j] = y
                else:
                    v.pop(j, None)
        if not v:
            continue
        q = min(v)
        inv = 1 / v[q]
        v = {j: x * inv for j, x in v.items()}
        for row in basis.values():
            c = row.get(q)
            if c:
                for j, x in v.items():
                    y = row.get(j, 0) - c * x
                    if y:
                        row[j] = y
                    else:
                        row.pop(j, None)
        basis[q] = v
    return basis


def kernel_basis(m: QMatrix) -> list[Vector]:
    """Basis of {v : m v = 0}, one vector per non-pivot column."""
    reduced, pivots = rref(m)
    pivot_set = set(pivots)
    basis = []
    for free in range(m.cols):
        if free in pivot_set:
            continue
        v = [Fraction(0)] * m.cols
        v[free] = Fraction(1)
        for row, p in zip(reduced, pivots):
            v[p] = -row[free]
        basis.append(tuple(v))
    return basis


def image_basis(m: QMatrix) -> list[Vector]:
    """The pivot columns of ``m``: a basis of its column space."""
    _, pivots = rref(m)
    return [tuple(m.column(j)) for j in pivots]


def span_rank(vectors: Iterable[Sequence], dim: int) -> int:
    vectors = list(vectors)
    if not vectors:
        return 0
    return rank(QMatrix.from_columns(vectors, dim))


def quotient_dim(space_dim: int, image_rank: int) -> int:
    if image_rank > space_dim or image_rank < 0:
        raise ValueError(
            f"inconsistent chain data: image rank {image_rank} exceeds space dimension {space_dim}"
        )
    return space_dim - image_rank


def solve(m: QMatrix, b: Sequence) -> Vector | None:
    """One solution of ``m x = b`` (free variables set to 0), or None."""
    aug = m.hstack(QMatrix.from_columns([list(b)], m.rows))
    reduced, pivots = rref(aug)
    if pivots and pivots[-1] == m.cols:
        return None
    x = [Fraction(0)] * m.cols
    for row, p in zip(reduced, pivots):
        x[p] = row[m.cols]
    return tuple(x)
