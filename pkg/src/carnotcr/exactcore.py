"""Exact rational scalars, complex rationals and dense matrices over them.

Everything here is exact. ``Rat`` is :class:`fractions.Fraction`; ``CRat``
adds an imaginary part. The row reduction routines work over any field
whose elements support ``+ - * /`` and compare equal to ``0``, so the same
code serves rational and complex-rational matrices.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

Rat = Fraction

_RAT_RE = re.compile(r"^\s*([+-]?\d+)(?:\s*/\s*(\d+))?\s*$")


class Infeasible(Exception):
    """The affine system has no solution."""


def parse_rat(text) -> Fraction:
    """Parse ``"p"`` or ``"p/q"``; ints are passed through."""
    if isinstance(text, int):
        return Fraction(text)
    if isinstance(text, Fraction):
        return text
    m = _RAT_RE.match(str(text))
    if m is None:
        raise ValueError(f"not a rational literal: {text!r}")
    num = int(m.group(1))
    den = int(m.group(2)) if m.group(2) is not None else 1
    if den == 0:
        raise ValueError(f"zero denominator in {text!r}")
    return Fraction(num, den)


def format_rat(x) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class CRat:
    """Complex number with rational real and imaginary parts."""

    re: Fraction = Fraction(0)
    im: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "re", Fraction(self.re))
        object.__setattr__(self, "im", Fraction(self.im))

    @staticmethod
    def _lift(other) -> "CRat":
        if isinstance(other, CRat):
            return other
        if isinstance(other, (int, Fraction)):
            return CRat(Fraction(other), Fraction(0))
        return NotImplemented

    def __add__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return CRat(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return CRat(-self.re, -self.im)

    def __sub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return CRat(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return CRat(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        den = o.re * o.re + o.im * o.im
        if den == 0:
            raise ZeroDivisionError("complex division by zero")
        num = self * o.conjugate()
        return CRat(num.re / den, num.im / den)

    def __rtruediv__(self, other):
        return self._lift(other) / self

    def conjugate(self) -> "CRat":
        return CRat(self.re, -self.im)

    def __eq__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return False
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __repr__(self):
        return f"CRat({format_rat(self.re)}, {format_rat(self.im)})"


I = CRat(0, 1)


def _rref_rows(rows: list[list], ncols: int) -> list[int]:
    """Reduce ``rows`` in place to reduced row echelon form; return pivots.

    Pivots are chosen leftmost-first and normalized to 1.
    """
    pivots = []
    r = 0
    nrows = len(rows)
    for c in range(ncols):
        if r == nrows:
            break
        piv = next((i for i in range(r, nrows) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        prow = rows[r]
        inv = 1 / prow[c]
        if prow[c] != 1:
            prow[:] = [v * inv for v in prow]
        # only columns from c onwards can be nonzero in the pivot row
        nz = [k for k in range(c, len(prow)) if prow[k] != 0]
        for i in range(nrows):
            if i == r:
                continue
            f = rows[i][c]
            if f != 0:
                row = rows[i]
                for k in nz:
                    row[k] = row[k] - f * prow[k]
        pivots.append(c)
        r += 1
    return pivots


class RatMatrix:
    """Immutable dense matrix with exact entries (Fraction, or CRat)."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows: int, cols: int, entries: Iterable):
        entries = tuple(e if isinstance(e, (Fraction, CRat)) else Fraction(e) for e in entries)
        if len(entries) != rows * cols:
            raise ValueError(f"expected {rows * cols} entries, got {len(entries)}")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "entries", entries)

    def __setattr__(self, name, value):
        raise AttributeError("RatMatrix is immutable")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "RatMatrix":
        rows = [list(r) for r in rows]
        ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise ValueError("ragged rows")
        return cls(len(rows), ncols, [x for r in rows for x in r])

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence]) -> "RatMatrix":
        return cls.from_rows(list(zip(*columns))) if columns else cls(0, 0, [])

    @classmethod
    def zeros(cls, rows: int, cols: int | None = None) -> "RatMatrix":
        cols = rows if cols is None else cols
        return cls(rows, cols, [Fraction(0)] * (rows * cols))

    @classmethod
    def identity(cls, n: int) -> "RatMatrix":
        return cls.diag([1] * n)

    @classmethod
    def diag(cls, values: Sequence) -> "RatMatrix":
        n = len(values)
        ent = [Fraction(0)] * (n * n)
        for i, v in enumerate(values):
            ent[i * n + i] = v
        return cls(n, n, ent)

    @classmethod
    def block_diag(cls, blocks: Sequence["RatMatrix"]) -> "RatMatrix":
        n = sum(b.rows for b in blocks)
        m = sum(b.cols for b in blocks)
        rows = [[Fraction(0)] * m for _ in range(n)]
        r0 = c0 = 0
        for b in blocks:
            for i in range(b.rows):
                for j in range(b.cols):
                    rows[r0 + i][c0 + j] = b[i, j]
            r0 += b.rows
            c0 += b.cols
        return cls(n, m, [x for r in rows for x in r])

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def __getitem__(self, idx):
        i, j = idx
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def col(self, j: int) -> tuple:
        return self.entries[j::self.cols]

    def to_rows(self) -> list[list]:
        return [list(self.row(i)) for i in range(self.rows)]

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "RatMatrix":
        return RatMatrix(len(rows), len(cols), [self[i, j] for i in rows for j in cols])

    def transpose(self) -> "RatMatrix":
        return RatMatrix(self.cols, self.rows, [self[i, j] for j in range(self.cols) for i in range(self.rows)])

    T = property(transpose)

    def __eq__(self, other):
        if not isinstance(other, RatMatrix):
            return NotImplemented
        return self.shape == other.shape and self.entries == other.entries

    def __hash__(self):
        return hash((self.rows, self.cols, self.entries))

    def __add__(self, other: "RatMatrix") -> "RatMatrix":
        self._check_same(other)
        return RatMatrix(self.rows, self.cols, [a + b for a, b in zip(self.entries, other.entries)])

    def __sub__(self, other: "RatMatrix") -> "RatMatrix":
        self._check_same(other)
        return RatMatrix(self.rows, self.cols, [a - b for a, b in zip(self.entries, other.entries)])

    def __neg__(self) -> "RatMatrix":
        return RatMatrix(self.rows, self.cols, [-a for a in self.entries])

    def scale(self, s) -> "RatMatrix":
        return RatMatrix(self.rows, self.cols, [s * a for a in self.entries])

    def __rmul__(self, s):
        if isinstance(s, (int, Fraction, CRat)):
            return self.scale(s)
        return NotImplemented

    def __matmul__(self, other):
        if isinstance(other, RatMatrix):
            if self.cols != other.rows:
                raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
            ocols = [other.col(j) for j in range(other.cols)]
            out = []
            for i in range(self.rows):
                r = self.row(i)
                nz = [(k, a) for k, a in enumerate(r) if a != 0]
                for c in ocols:
                    out.append(sum((a * c[k] for k, a in nz), Fraction(0)))
            return RatMatrix(self.rows, other.cols, out)
        vec = list(other)
        if len(vec) != self.cols:
            raise ValueError("vector length mismatch")
        return tuple(
            sum((a * v for a, v in zip(self.row(i), vec) if a != 0), Fraction(0))
            for i in range(self.rows)
        )

    def _check_same(self, other):
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")

    def is_zero(self) -> bool:
        return all(a == 0 for a in self.entries)

    def is_square(self) -> bool:
        return self.rows == self.cols

    def rank(self) -> int:
        return len(rref(self)[1])

    def inverse(self) -> "RatMatrix":
        if not self.is_square():
            raise ValueError("inverse of a non-square matrix")
        n = self.rows
        aug = [list(self.row(i)) + [Fraction(int(i == j)) for j in range(n)] for i in range(n)]
        pivots = _rref_rows(aug, n)
        if len(pivots) != n:
            raise ZeroDivisionError("matrix is singular")
        return RatMatrix(n, n, [x for r in aug for x in r[n:]])

    def det(self):
        if not self.is_square():
            raise ValueError("determinant of a non-square matrix")
        n = self.rows
        a = self.to_rows()
        d = Fraction(1)
        for c in range(n):
            piv = next((i for i in range(c, n) if a[i][c] != 0), None)
            if piv is None:
                return Fraction(0)
            if piv != c:
                a[c], a[piv] = a[piv], a[c]
                d = -d
            d *= a[c][c]
            for i in range(c + 1, n):
                f = a[i][c] / a[c][c]
                if f != 0:
                    for k in range(c, n):
                        a[i][k] -= f * a[c][k]
        return d

    def __repr__(self):
        body = "; ".join(" ".join(_fmt(x) for x in self.row(i)) for i in range(self.rows))
        return f"RatMatrix({self.rows}x{self.cols}: [{body}])"

    def to_json(self) -> list[list[str]]:
        return [[format_rat(x) for x in self.row(i)] for i in range(self.rows)]

    @classmethod
    def from_json(cls, data) -> "RatMatrix":
        return cls.from_rows([[parse_rat(x) for x in row] for row in data])


def _fmt(x) -> str:
    return format_rat(x) if isinstance(x, Fraction) else repr(x)


def rref(M: RatMatrix) -> tuple[RatMatrix, list[int]]:
    """Reduced row echelon form of ``M`` and its pivot columns (ascending)."""
    rows = M.to_rows()
    pivots = _rref_rows(rows, M.cols)
    return RatMatrix(M.rows, M.cols, [x for r in rows for x in r]), pivots


def solve_affine(A: RatMatrix, b: Sequence) -> tuple[list, list[list]]:
    """Solve ``A x = b`` exactly.

    Returns ``(particular, nullbasis)``. The particular solution has every
    free variable set to zero; nullspace vectors are the standard ones, one
    per free column in ascending order. Raises :class:`Infeasible` when the
    system is inconsistent.
    """
    b = [x if isinstance(x, (Fraction, CRat)) else Fraction(x) for x in b]
    if len(b) != A.rows:
        raise ValueError(f"A has {A.rows} rows but b has {len(b)} entries")
    n = A.cols
    aug = [list(A.row(i)) + [b[i]] for i in range(A.rows)]
    pivots = _rref_rows(aug, n + 1)
    if pivots and pivots[-1] == n:
        raise Infeasible(f"rank([A|b]) > rank(A) = {len(pivots) - 1}")
    zero = Fraction(0)
    particular = [zero] * n
    for r, c in enumerate(pivots):
        particular[c] = aug[r][n]
    pivset = set(pivots)
    nullbasis = []
    for f in range(n):
        if f in pivset:
            continue
        v = [zero] * n
        v[f] = Fraction(1)
        for r, c in enumerate(pivots):
            v[c] = -aug[r][f]
        nullbasis.append(v)
    return particular, nullbasis


def nullspace(A: RatMatrix) -> list[list]:
    return solve_affine(A, [Fraction(0)] * A.rows)[1]
