"""Square matrices over S[1/Q]: products, determinants, inverses."""
from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from numbers import Rational

from .local import LocQ, LocRing
from .poly import Poly


def bareiss_det(rows: list[list[Poly]]) -> Poly:
    """Fraction-free Gaussian elimination over Q[x]; every division is exact."""
    n = len(rows)
    if n == 0:
        raise ValueError("empty matrix")
    nvars = rows[0][0].nvars
    m = [list(r) for r in rows]
    sign = 1
    prev = Poly.one(nvars)
    for k in range(n - 1):
        if m[k][k].is_zero():
            swap = next((i for i in range(k + 1, n) if not m[i][k].is_zero()), None)
            if swap is None:
                return Poly.zero(nvars)
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        pivot = m[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                t = m[i][j] * pivot - m[i][k] * m[k][j]
                m[i][j] = t if k == 0 else t.exact_div(prev)
        prev = pivot
    return m[n - 1][n - 1] if sign > 0 else -m[n - 1][n - 1]


def laplace_det(rows: list[list[Poly]]) -> Poly:
    """Cofactor expansion along the first row, memoized by column subset.

    Division free; kept as an independent check on :func:`bareiss_det`.
    """
    n = len(rows)
    cache: dict[tuple[int, ...], Poly] = {}

    def minor(cols: tuple[int, ...]) -> Poly:
        r = n - len(cols)
        if len(cols) == 1:
            return rows[r][cols[0]]
        got = cache.get(cols)
        if got is not None:
            return got
        acc = Poly.zero(rows[0][0].nvars)
        for idx, c in enumerate(cols):
            if rows[r][c].is_zero():
                continue
            t = rows[r][c] * minor(cols[:idx] + cols[idx + 1:])
            acc = acc - t if idx % 2 else acc + t
        cache[cols] = acc
        return acc

    return minor(tuple(range(n)))


class Matrix:
    """An n x n matrix with entries in S[1/Q]; immutable."""

    __slots__ = ("rows", "ring", "n")

    def __init__(self, rows, ring: LocRing):
        rows = tuple(tuple(ring(e) for e in r) for r in rows)
        n = len(rows)
        if n == 0 or any(len(r) != n for r in rows):
            raise ValueError("matrix must be square and nonempty")
        self.rows = rows
        self.ring = ring
        self.n = n

    @classmethod
    def identity(cls, ring: LocRing, n: int) -> Matrix:
        return cls([[int(i == j) for j in range(n)] for i in range(n)], ring)

    @classmethod
    def from_columns(cls, columns, ring: LocRing) -> Matrix:
        columns = list(columns)
        return cls([[c[i] for c in columns] for i in range(len(columns))], ring)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def col(self, j: int) -> tuple[LocQ, ...]:
        return tuple(r[j] for r in self.rows)

    def columns(self) -> list[tuple[LocQ, ...]]:
        return [self.col(j) for j in range(self.n)]

    @property
    def T(self) -> Matrix:
        return Matrix(list(zip(*self.rows)), self.ring)

    def map(self, fn) -> Matrix:
        return Matrix([[fn(e) for e in r] for r in self.rows], self.ring)

    def __add__(self, other: Matrix) -> Matrix:
        return Matrix(
            [[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)], self.ring
        )

    def __sub__(self, other: Matrix) -> Matrix:
        return Matrix(
            [[a - b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)], self.ring
        )

    def __neg__(self) -> Matrix:
        return self.map(lambda e: -e)

    def __mul__(self, c) -> Matrix:
        if isinstance(c, (int, Rational, LocQ, Poly)):
            return self.map(lambda e: e * c)
        return NotImplemented

    __rmul__ = __mul__

    def __matmul__(self, other: Matrix) -> Matrix:
        if not isinstance(other, Matrix):
            return NotImplemented
        if other.n != self.n:
            raise ValueError("size mismatch")
        ring = self.ring
        cols = other.columns()
        out = []
        for r in self.rows:
            row = []
            for c in cols:
                row.append(_dot(r, c, ring))
            out.append(row)
        return Matrix(out, ring)

    def apply(self, vector) -> tuple[LocQ, ...]:
        """Matrix-vector product M v."""
        return tuple(_dot(r, vector, self.ring) for r in self.rows)

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def is_polynomial(self) -> bool:
        return all(e.qexp == 0 for r in self.rows for e in r)

    def is_zero(self) -> bool:
        return all(e.is_zero() for r in self.rows for e in r)

    def is_symmetric(self) -> bool:
        return self == self.T

    def max_qexp(self) -> int:
        return max(e.qexp for r in self.rows for e in r)

    def cleared(self) -> tuple[list[list[Poly]], int]:
        """(P, e) with self = P / Q^e and P polynomial."""
        e = self.max_qexp()
        return [[x.numerator_over(e) for x in r] for r in self.rows], e

    def det(self, method: str = "bareiss") -> LocQ:
        rows, e = self.cleared()
        d = bareiss_det(rows) if method == "bareiss" else laplace_det(rows)
        return self.ring(d, e * self.n)

    def adjugate(self) -> Matrix:
        rows, e = self.cleared()
        n = self.n
        if n == 1:
            return Matrix([[1]], self.ring)
        cof = [[None] * n for _ in range(n)]
        for i in range(n):
            for j in range(n):
                minor = [[rows[a][b] for b in range(n) if b != j] for a in range(n) if a != i]
                d = bareiss_det(minor)
                cof[j][i] = self.ring(d if (i + j) % 2 == 0 else -d, e * (n - 1))
        return Matrix(cof, self.ring)

    def inverse(self) -> Matrix:
        """Exact inverse; NotAUnit unless the determinant is a unit of S[1/Q]."""
        inv_det = self.det().inverse()
        adj = self.adjugate()
        return adj.map(lambda a: a * inv_det)

    def minors(self, size: int):
        """All size x size minors (row subset, column subset) -> LocQ."""
        rows, e = self.cleared()
        out = {}
        for rs in combinations(range(self.n), size):
            for cs in combinations(range(self.n), size):
                sub = [[rows[a][b] for b in cs] for a in rs]
                out[rs, cs] = self.ring(bareiss_det(sub), e * size)
        return out

    def to_lists(self, names=None, q_name="Q") -> list[list[str]]:
        return [[e.to_str(names, q_name) for e in r] for r in self.rows]

    def __repr__(self):
        return "Matrix(" + repr(self.to_lists()) + ")"


def _dot(row, col, ring: LocRing) -> LocQ:
    """Sum of products over a common Q-power; normalized once at the end."""
    terms = [(a, b) for a, b in zip(row, col) if not a.is_zero() and not b.is_zero()]
    if not terms:
        return ring.zero()
    e = max(a.qexp + b.qexp for a, b in terms)
    acc = None
    for a, b in terms:
        t = a.num * b.num
        pad = e - a.qexp - b.qexp
        if pad:
            t = t * ring.q_power(pad)
        acc = t if acc is None else acc + t
    return ring(acc, e)


def rational_matrix(ring: LocRing, rows) -> Matrix:
    return Matrix([[Fraction(x) for x in r] for r in rows], ring)
