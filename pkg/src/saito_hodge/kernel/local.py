"""The localization S[1/Q] of the polynomial ring at a product of linear forms."""
from __future__ import annotations

from fractions import Fraction
from numbers import Rational

from flint import fmpq

from ..errors import NotAUnit
from .poly import Poly, divide_by_linear, to_fraction


class LocRing:
    """S[1/Q] where Q is the (squarefree) product of ``factors``.

    Elements are stored as num / Q^qexp with Q not dividing num unless
    qexp == 0, which makes the representation canonical.
    """

    def __init__(self, factors):
        factors = tuple(factors)
        if not factors:
            raise ValueError("Q needs at least one linear factor")
        self.factors = factors
        self.nvars = factors[0].nvars
        q = Poly.one(self.nvars)
        for a in factors:
            a.linear_coefficients()  # validates linearity
            q = q * a
        self.Q = q
        self.q_degree = len(factors)
        self._qpow = [Poly.one(self.nvars), q]
        self._q_partials = None
        self._pullback_scale: dict = {}

    def q_power(self, k: int) -> Poly:
        while len(self._qpow) <= k:
            self._qpow.append(self._qpow[-1] * self.Q)
        return self._qpow[k]

    def q_partial(self, i: int) -> Poly:
        if self._q_partials is None:
            self._q_partials = [self.Q.diff(j) for j in range(self.nvars)]
        return self._q_partials[i]

    def divide_by_q(self, num: Poly) -> Poly | None:
        """num / Q when Q divides num, else None.

        One exact division by Q: a single divisor is a Groebner basis, so the
        remainder vanishes exactly when Q divides num.
        """
        if num.is_zero():
            return num
        if num.degree() < self.Q.degree():
            return None
        q, r = divmod(num._raw, self.Q._raw)
        if not r.is_zero():
            return None
        return Poly(q, self.nvars)

    def divide_by_q_sequential(self, num: Poly) -> Poly | None:
        """Same result as :meth:`divide_by_q`, dividing by one alpha_H at a time."""
        q = num
        for a in self.factors:
            q = divide_by_linear(q, a)
            if q is None:
                return None
        return q

    def strip_q(self, num: Poly, limit: int | None = None) -> tuple[Poly, int]:
        """Divide out Q as often as possible (at most ``limit`` times)."""
        count = 0
        if num.is_zero():
            return num, 0
        while limit is None or count < limit:
            q = self.divide_by_q(num)
            if q is None:
                break
            num, count = q, count + 1
        return num, count

    def __call__(self, value, qexp: int = 0) -> LocQ:
        if isinstance(value, LocQ):
            if value.ring is not self:
                raise ValueError("element belongs to another localization")
            return value if qexp == 0 else value * self(1, qexp)
        if isinstance(value, (int, Rational, fmpq)):
            value = Poly.const(value, self.nvars)
        if not isinstance(value, Poly):
            raise TypeError(f"cannot coerce {value!r} into S[1/Q]")
        if value.nvars != self.nvars:
            raise ValueError("variable count mismatch")
        return LocQ._normalized(value, qexp, self)

    def zero(self) -> LocQ:
        return LocQ(Poly.zero(self.nvars), 0, self)

    def one(self) -> LocQ:
        return LocQ(Poly.one(self.nvars), 0, self)

    def var(self, i: int) -> LocQ:
        return LocQ(Poly.var(i, self.nvars), 0, self)

    def inverse_of_poly(self, p: Poly) -> LocQ:
        """1/p for p = c * prod(alpha_H^e_H); NotAUnit otherwise."""
        if p.is_zero():
            raise ZeroDivisionError("division by zero")
        rest = p
        exps = []
        for a in self.factors:
            e = 0
            while True:
                q = divide_by_linear(rest, a)
                if q is None:
                    break
                rest, e = q, e + 1
            exps.append(e)
        if not rest.is_constant():
            raise NotAUnit(f"{p} is not a product of hyperplane forms in S[1/Q]")
        top = max(exps)
        num = Poly.const(1 / rest.constant_value(), self.nvars)
        for a, e in zip(self.factors, exps):
            if top - e:
                num = num * a ** (top - e)
        return LocQ(num, top, self)

    def pullback_scale(self, matrix) -> Fraction:
        """The constant c with Q(Mx) = c * Q(x); NotAUnit if Q is not semi-invariant."""
        key = tuple(tuple(r) for r in matrix)
        c = self._pullback_scale.get(key)
        if c is None:
            qm = self.Q.pullback(matrix)
            lead = self.Q.terms()[0]
            c = qm.raw_terms().get(lead[0])
            c = Fraction(0) if c is None else to_fraction(c) / lead[1]
            if c == 0 or qm != self.Q.scale(c):
                raise NotAUnit("Q is not carried to a multiple of itself by this substitution")
            self._pullback_scale[key] = c
        return c


class LocQ:
    """An element num / Q^qexp of S[1/Q]; immutable and canonical."""

    __slots__ = ("num", "qexp", "ring")

    def __init__(self, num: Poly, qexp: int, ring: LocRing):
        self.num = num
        self.qexp = qexp
        self.ring = ring

    @classmethod
    def _normalized(cls, num: Poly, qexp: int, ring: LocRing) -> LocQ:
        if qexp < 0:
            num = num * ring.q_power(-qexp)
            qexp = 0
        if num.is_zero():
            return cls(num, 0, ring)
        if qexp:
            num, k = ring.strip_q(num, qexp)
            qexp -= k
        return cls(num, qexp, ring)

    def normalize(self) -> LocQ:
        return LocQ._normalized(self.num, self.qexp, self.ring)

    # -- coercion ----------------------------------------------------------
    def _coerce(self, other) -> LocQ | None:
        if isinstance(other, LocQ):
            if other.ring is not self.ring:
                raise ValueError("elements of different localizations")
            return other
        if isinstance(other, (Poly, int, Rational, fmpq)):
            return self.ring(other)
        return None

    # -- arithmetic ----------------------------------------------------------
    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if o.num.is_zero():
            return self
        if self.num.is_zero():
            return o
        e = max(self.qexp, o.qexp)
        num = self.num * self.ring.q_power(e - self.qexp) + o.num * self.ring.q_power(e - o.qexp)
        return LocQ._normalized(num, e, self.ring)

    __radd__ = __add__

    def __neg__(self):
        return LocQ(-self.num, self.qexp, self.ring)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Rational, fmpq)):
            if other == 0:
                return self.ring.zero()
            return LocQ(self.num.scale(other), self.qexp, self.ring)
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self.num.is_zero() or o.num.is_zero():
            return self.ring.zero()
        return LocQ._normalized(self.num * o.num, self.qexp + o.qexp, self.ring)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Rational, fmpq)):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return LocQ(self.num.scale(1 / to_fraction(other)), self.qexp, self.ring)
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            raise TypeError("integer powers only")
        if k < 0:
            return self.inverse() ** (-k)
        return LocQ._normalized(self.num**k, self.qexp * k, self.ring)

    def inverse(self) -> LocQ:
        """Multiplicative inverse; NotAUnit unless num = c * prod(alpha_H^e)."""
        inv = self.ring.inverse_of_poly(self.num)
        return inv * LocQ(self.ring.q_power(self.qexp), 0, self.ring)

    def unit_form(self) -> tuple[Fraction, int] | None:
        """(c, k) with self == c * Q^k, or None when self is not of that form."""
        if self.num.is_zero():
            return None
        rest, k = self.ring.strip_q(self.num)
        if not rest.is_constant():
            return None
        return rest.constant_value(), k - self.qexp

    # -- calculus ---------------------------------------------------------------
    def partial(self, i: int) -> LocQ:
        """d/dx_i by the quotient rule."""
        if self.qexp == 0:
            return LocQ(self.num.diff(i), 0, self.ring)
        num = self.num.diff(i) * self.ring.Q - self.num.scale(self.qexp) * self.ring.q_partial(i)
        return LocQ._normalized(num, self.qexp + 1, self.ring)

    def pullback(self, matrix) -> LocQ:
        """f(Mx) for a linear substitution M under which Q is semi-invariant."""
        num = self.num.pullback(matrix)
        if self.qexp:
            c = self.ring.pullback_scale(matrix)
            num = num.scale(1 / c**self.qexp)
        return LocQ(num, self.qexp, self.ring)

    # -- inspection ----------------------------------------------------------------
    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_polynomial(self) -> bool:
        return self.qexp == 0

    def is_constant(self) -> bool:
        return self.qexp == 0 and self.num.is_constant()

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return self.num.constant_value()

    def as_poly(self) -> Poly:
        if self.qexp:
            raise ValueError(f"{self} is not a polynomial")
        return self.num

    def degree(self) -> int | None:
        """Degree num - qexp*deg Q when homogeneous; None for 0 or mixed degrees."""
        if self.num.is_zero() or not self.num.is_homogeneous():
            return None
        return self.num.degree() - self.qexp * self.ring.q_degree

    def numerator_over(self, e: int) -> Poly:
        """The polynomial Q^e * self; requires e >= qexp."""
        if e < self.qexp:
            raise ValueError("exponent below the pole order")
        return self.num * self.ring.q_power(e - self.qexp)

    def __eq__(self, other):
        try:
            o = self._coerce(other)
        except ValueError:
            return False
        if o is None:
            return NotImplemented
        return self.qexp == o.qexp and self.num == o.num

    def __hash__(self):
        return hash((self.num, self.qexp))

    def __bool__(self):
        return not self.num.is_zero()

    def to_str(self, names=None, q_name: str | None = "Q") -> str:
        n = self.num.to_str(names)
        if self.qexp == 0:
            return n
        den = q_name if q_name else f"({self.ring.Q.to_str(names)})"
        if self.qexp > 1:
            den = f"{den}^{self.qexp}"
        if len(self.num.terms()) == 1:
            return f"{n}/{den}"
        return f"({n})/{den}"

    def __str__(self):
        return self.to_str()

    def __repr__(self):
        return f"LocQ({self.to_str()!r})"
