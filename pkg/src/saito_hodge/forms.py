"""Rational 1-forms, derivations and 2-forms over S[1/Q], written in the dx / d/dx frames."""
from __future__ import annotations

from fractions import Fraction
from numbers import Rational

from flint import fmpq

from .kernel import LocQ, Matrix, Poly


def _rat_inverse(m) -> list[list[Fraction]]:
    """Gauss-Jordan inverse of a small rational matrix."""
    n = len(m)
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(m)]
    for c in range(n):
        p = next(r for r in range(c, n) if a[r][c] != 0)
        a[c], a[p] = a[p], a[c]
        piv = a[c][c]
        a[c] = [x / piv for x in a[c]]
        for r in range(n):
            if r != c and a[r][c] != 0:
                f = a[r][c]
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return [row[n:] for row in a]


class _Frame:
    """Common arithmetic for coefficient vectors over S[1/Q]."""

    __slots__ = ("datum", "coeffs")
    symbol = "?"

    def __init__(self, datum, coeffs):
        ring = datum.ring
        coeffs = tuple(ring(c) for c in coeffs)
        if len(coeffs) != datum.rank:
            raise ValueError(f"expected {datum.rank} coefficients, got {len(coeffs)}")
        self.datum = datum
        self.coeffs = coeffs

    @classmethod
    def zero(cls, datum):
        return cls(datum, [0] * datum.rank)

    @classmethod
    def unit(cls, datum, i: int):
        return cls(datum, [int(j == i) for j in range(datum.rank)])

    def _same(self, other) -> bool:
        return type(other) is type(self) and other.datum is self.datum

    def __add__(self, other):
        if not self._same(other):
            return NotImplemented
        return type(self)(self.datum, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other):
        if not self._same(other):
            return NotImplemented
        return type(self)(self.datum, [a - b for a, b in zip(self.coeffs, other.coeffs)])

    def __neg__(self):
        return type(self)(self.datum, [-a for a in self.coeffs])

    def __mul__(self, c):
        if isinstance(c, (int, Rational, fmpq, Poly, LocQ)):
            return type(self)(self.datum, [a * c for a in self.coeffs])
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, c):
        if isinstance(c, (int, Rational, fmpq)):
            return self * (1 / Fraction(c))
        if isinstance(c, (Poly, LocQ)):
            return self * self.datum.ring(c).inverse()
        return NotImplemented

    def __eq__(self, other):
        if not isinstance(other, _Frame):
            return NotImplemented
        return self._same(other) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((type(self).__name__, self.coeffs))

    def __iter__(self):
        return iter(self.coeffs)

    def __getitem__(self, i):
        return self.coeffs[i]

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coeffs)

    def is_regular(self) -> bool:
        return all(c.is_polynomial() for c in self.coeffs)

    def pole_order(self) -> int:
        """Largest Q-exponent among the normalized coefficients."""
        return max(c.qexp for c in self.coeffs)

    def degree(self) -> int | None:
        """Common degree d of the nonzero coefficients, or None when not homogeneous."""
        degs = set()
        for c in self.coeffs:
            if c.is_zero():
                continue
            d = c.degree()
            if d is None:
                return None
            degs.add(d)
        return degs.pop() if len(degs) == 1 else None

    def homogeneous_parts(self) -> dict[int, _Frame]:
        """Split by coefficient degree (numerator degree minus pole degree)."""
        ring = self.datum.ring
        parts: dict[int, list] = {}
        e = self.pole_order()
        shift = e * ring.q_degree
        for i, c in enumerate(self.coeffs):
            if c.is_zero():
                continue
            for deg, piece in c.numerator_over(e).homogeneous_components().items():
                vec = parts.setdefault(deg - shift, [ring.zero()] * self.datum.rank)
                vec[i] = ring(piece, e)
        return {d: type(self)(self.datum, v) for d, v in sorted(parts.items())}

    def map_coeffs(self, fn):
        return type(self)(self.datum, [fn(c) for c in self.coeffs])

    def nabla_d(self):
        """Covariant derivative along the primitive derivation D (coefficientwise)."""
        return self.map_coeffs(self.datum.family.D)

    def nabla_along(self, theta: LogDer):
        """Coefficientwise f -> theta(f)."""
        return self.map_coeffs(theta)

    def to_str(self) -> str:
        from .expr import format_value

        return format_value(self, self.datum)

    def __repr__(self):
        return f"{type(self).__name__}({self.to_str()})"


class LogForm(_Frame):
    """sum_i f_i dx_i."""

    __slots__ = ()
    symbol = "d"

    @classmethod
    def differential(cls, datum, p) -> LogForm:
        """df for a polynomial or element of S[1/Q]."""
        p = datum.ring(p)
        return cls(datum, [p.partial(i) for i in range(datum.rank)])

    def pullback(self, matrix) -> LogForm:
        """w^* omega: coefficients M^T f(Mx)."""
        f = [c.pullback(matrix) for c in self.coeffs]
        n = len(f)
        return LogForm(self.datum, [sum((f[a] * matrix[a][i] for a in range(n)), self.datum.ring.zero()) for i in range(n)])

    def pair(self, theta: LogDer) -> LocQ:
        """The contraction <theta, omega> = sum_i theta_i f_i."""
        return sum((a * b for a, b in zip(self.coeffs, theta.coeffs)), self.datum.ring.zero())

    def wedge(self, other: LogForm) -> TwoForm:
        return TwoForm.wedge(self, other)


class LogDer(_Frame):
    """sum_i g_i d/dx_i."""

    __slots__ = ()
    symbol = "∂"

    @classmethod
    def euler(cls, datum) -> LogDer:
        return cls(datum, [datum.ring.var(i) for i in range(datum.rank)])

    def __call__(self, f) -> LocQ:
        f = self.datum.ring(f)
        return sum((g * f.partial(i) for i, g in enumerate(self.coeffs) if not g.is_zero()), self.datum.ring.zero())

    def pullback(self, matrix) -> LogDer:
        """w^* theta: coefficients M^{-1} g(Mx)."""
        inv = _rat_inverse(matrix)
        g = [c.pullback(matrix) for c in self.coeffs]
        n = len(g)
        return LogDer(self.datum, [sum((g[a] * inv[i][a] for a in range(n)), self.datum.ring.zero()) for i in range(n)])


class TwoForm:
    """sum_{i<j} c_ij dx_i ^ dx_j."""

    __slots__ = ("datum", "coeffs")

    def __init__(self, datum, coeffs: dict):
        ring = datum.ring
        out = {}
        for (i, j), c in coeffs.items():
            if i == j:
                continue
            c = ring(c)
            if i > j:
                i, j, c = j, i, -c
            out[i, j] = out.get((i, j), ring.zero()) + c
        self.datum = datum
        self.coeffs = {k: v for k, v in sorted(out.items()) if not v.is_zero()}

    @classmethod
    def wedge(cls, a: LogForm, b: LogForm) -> TwoForm:
        n = a.datum.rank
        return cls(
            a.datum,
            {(i, j): a[i] * b[j] - a[j] * b[i] for i in range(n) for j in range(i + 1, n)},
        )

    def __getitem__(self, ij) -> LocQ:
        i, j = ij
        if i == j:
            return self.datum.ring.zero()
        if i > j:
            return -self.coeffs.get((j, i), self.datum.ring.zero())
        return self.coeffs.get((i, j), self.datum.ring.zero())

    def __eq__(self, other):
        return isinstance(other, TwoForm) and other.datum is self.datum and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(tuple(self.coeffs.items()))

    def is_zero(self) -> bool:
        return not self.coeffs


def frame_matrix(vectors) -> Matrix:
    """Matrix whose columns are the coefficient vectors."""
    vectors = list(vectors)
    return Matrix.from_columns([v.coeffs for v in vectors], vectors[0].datum.ring)


def forms_from_matrix(datum, m: Matrix, kind=LogForm) -> list:
    """Read the columns of m as coefficient vectors."""
    return [kind(datum, c) for c in m.columns()]


def istar(omega: LogForm) -> LogDer:
    """The derivation with coefficient vector A f."""
    return LogDer(omega.datum, omega.datum.gram_matrix.apply(omega.coeffs))


def istar_inv(theta: LogDer) -> LogForm:
    return LogForm(theta.datum, theta.datum.gram_inverse.apply(theta.coeffs))
