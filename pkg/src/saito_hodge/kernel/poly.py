"""Sparse multivariate polynomials with exact rational coefficients.

Storage and the raw ring operations are delegated to FLINT's ``fmpq_mpoly``
under the graded-lexicographic order (x1 > x2 > ...).  Everything above the
raw operations (linear division, substitution, graded pieces, printing) lives
here.
"""
from __future__ import annotations

from fractions import Fraction
from numbers import Rational

from flint import fmpq, fmpq_mpoly, fmpq_mpoly_ctx

_CONTEXTS: dict[int, fmpq_mpoly_ctx] = {}


def _ctx(nvars: int) -> fmpq_mpoly_ctx:
    ctx = _CONTEXTS.get(nvars)
    if ctx is None:
        if nvars < 1:
            raise ValueError("a polynomial ring needs at least one variable")
        names = tuple(f"x{i + 1}" for i in range(nvars))
        ctx = _CONTEXTS[nvars] = fmpq_mpoly_ctx.get(names, "deglex")
    return ctx


def to_fmpq(c) -> fmpq:
    if isinstance(c, fmpq):
        return c
    if isinstance(c, int):
        return fmpq(c)
    if isinstance(c, Rational):
        return fmpq(int(c.numerator), int(c.denominator))
    raise TypeError(f"not an exact rational: {c!r}")


def to_fraction(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, fmpq):
        return Fraction(int(c.p), int(c.q))
    return Fraction(c)


def format_rational(c) -> str:
    c = to_fraction(c)
    if c.denominator == 1:
        return str(c.numerator)
    return f"{c.numerator}/{c.denominator}"


def default_names(nvars: int) -> tuple[str, ...]:
    if nvars <= 3:
        return ("x", "y", "z")[:nvars]
    return tuple(f"x{i + 1}" for i in range(nvars))


class Poly:
    """An element of Q[x_1, ..., x_n]; immutable."""

    __slots__ = ("_raw", "nvars", "_hash")

    def __init__(self, raw: fmpq_mpoly, nvars: int):
        self._raw = raw
        self.nvars = nvars
        self._hash = None

    # -- construction ---------------------------------------------------
    @classmethod
    def zero(cls, nvars: int) -> Poly:
        return cls(_ctx(nvars).constant(0), nvars)

    @classmethod
    def const(cls, c, nvars: int) -> Poly:
        return cls(_ctx(nvars).constant(to_fmpq(c)), nvars)

    @classmethod
    def one(cls, nvars: int) -> Poly:
        return cls.const(1, nvars)

    @classmethod
    def var(cls, i: int, nvars: int) -> Poly:
        """The coordinate x_{i+1} (0-based index)."""
        return cls(_ctx(nvars).gen(i), nvars)

    @classmethod
    def gens(cls, nvars: int) -> list[Poly]:
        return [cls.var(i, nvars) for i in range(nvars)]

    @classmethod
    def from_terms(cls, terms, nvars: int) -> Poly:
        """Build from a mapping (or iterable of pairs) exponent-tuple -> coefficient."""
        if hasattr(terms, "items"):
            terms = terms.items()
        acc: dict[tuple, fmpq] = {}
        for exps, c in terms:
            exps = tuple(int(e) for e in exps)
            if len(exps) != nvars or min(exps, default=0) < 0:
                raise ValueError(f"bad exponent vector {exps} for {nvars} variables")
            acc[exps] = acc.get(exps, fmpq(0)) + to_fmpq(c)
        acc = {e: c for e, c in acc.items() if c != 0}
        return cls(_ctx(nvars).from_dict(acc), nvars)

    @classmethod
    def linear(cls, coeffs) -> Poly:
        n = len(coeffs)
        return cls.from_terms(
            {tuple(int(i == j) for j in range(n)): c for i, c in enumerate(coeffs)}, n
        )

    # -- coercion -------------------------------------------------------
    def _coerce(self, other) -> Poly | None:
        if isinstance(other, Poly):
            if other.nvars != self.nvars:
                raise ValueError("variable count mismatch")
            return other
        if isinstance(other, (int, Rational, fmpq)):
            return Poly.const(other, self.nvars)
        return None

    # -- ring operations -------------------------------------------------
    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Poly(self._raw + o._raw, self.nvars)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Poly(self._raw - o._raw, self.nvars)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Poly(o._raw - self._raw, self.nvars)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Poly(self._raw * o._raw, self.nvars)

    __rmul__ = __mul__

    def __neg__(self):
        return Poly(-self._raw, self.nvars)

    def __pos__(self):
        return self

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("polynomial powers must be nonnegative integers")
        return Poly(self._raw**k, self.nvars)

    def scale(self, c) -> Poly:
        return Poly(self._raw * to_fmpq(c), self.nvars)

    def exact_div(self, other: Poly) -> Poly:
        """Quotient of an exact division; ArithmeticError if a remainder is left."""
        o = self._coerce(other)
        if o.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        q, r = divmod(self._raw, o._raw)
        if not r.is_zero():
            raise ArithmeticError("polynomial division is not exact")
        return Poly(q, self.nvars)

    def __eq__(self, other):
        try:
            o = self._coerce(other)
        except ValueError:
            return False
        if o is None:
            return NotImplemented
        return self._raw == o._raw

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nvars, tuple(sorted(self._raw.to_dict().items()))))
        return self._hash

    def __bool__(self):
        return not self._raw.is_zero()

    # -- inspection -------------------------------------------------------
    def is_zero(self) -> bool:
        return self._raw.is_zero()

    def is_constant(self) -> bool:
        return self._raw.is_constant()

    def constant_value(self) -> Fraction:
        """The constant term (the whole value when ``is_constant``)."""
        return to_fraction(self._raw.to_dict().get((0,) * self.nvars, fmpq(0)))

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        if self.is_zero():
            return -1
        return int(self._raw.total_degree())

    def terms(self) -> list[tuple[tuple[int, ...], Fraction]]:
        """Terms in descending graded-lex order."""
        items = [(tuple(int(e) for e in m), to_fraction(c)) for m, c in self._raw.terms()]
        items.sort(key=lambda t: (sum(t[0]), t[0]), reverse=True)
        return items

    def raw_terms(self):
        return self._raw.to_dict()

    def __len__(self):
        return len(self._raw)

    def homogeneous_components(self) -> dict[int, Poly]:
        parts: dict[int, dict] = {}
        for m, c in self._raw.to_dict().items():
            parts.setdefault(sum(m), {})[m] = c
        ctx = _ctx(self.nvars)
        return {d: Poly(ctx.from_dict(t), self.nvars) for d, t in sorted(parts.items())}

    def is_homogeneous(self) -> bool:
        return len(self.homogeneous_components()) <= 1

    def linear_coefficients(self) -> list[Fraction]:
        """Coefficients (a_1..a_n) of a homogeneous linear form."""
        if self.is_zero() or self.degree() != 1 or not self.is_homogeneous():
            raise ValueError(f"not a homogeneous linear form: {self}")
        d = self._raw.to_dict()
        return [
            to_fraction(d.get(tuple(int(i == j) for j in range(self.nvars)), fmpq(0)))
            for i in range(self.nvars)
        ]

    # -- calculus and substitution ----------------------------------------
    def diff(self, i: int) -> Poly:
        return Poly(self._raw.derivative(i), self.nvars)

    def compose(self, images) -> Poly:
        """Substitute x_i -> images[i] (Polys in the same ring)."""
        if len(images) != self.nvars:
            raise ValueError("need one image per variable")
        if self.is_constant():
            return self
        return Poly(self._raw.compose(*[p._raw for p in images]), self.nvars)

    def pullback(self, matrix) -> Poly:
        """f(Mx): substitute x_i -> sum_j M[i][j] x_j."""
        return self.compose([Poly.linear(row) for row in matrix])

    def __call__(self, *values):
        """Evaluate at rational values."""
        if len(values) != self.nvars:
            raise ValueError("need one value per variable")
        acc = Fraction(0)
        for exps, c in self.terms():
            t = c
            for v, e in zip(values, exps):
                if e:
                    t *= Fraction(v) ** e
            acc += t
        return acc

    # -- printing -----------------------------------------------------------
    def to_str(self, names=None) -> str:
        names = names or default_names(self.nvars)
        if self.is_zero():
            return "0"
        out = []
        for exps, c in self.terms():
            mono = "*".join(
                n if e == 1 else f"{n}^{e}" for n, e in zip(names, exps) if e
            )
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if not mono:
                body = format_rational(a)
            elif a == 1:
                body = mono
            else:
                body = f"{format_rational(a)}*{mono}"
            out.append((sign, body))
        first_sign, first = out[0]
        s = ("-" if first_sign == "-" else "") + first
        for sign, body in out[1:]:
            s += f" {sign} {body}"
        return s

    def __str__(self):
        return self.to_str()

    def __repr__(self):
        return f"Poly({self.to_str()!r})"


def divide_by_linear(p: Poly, alpha: Poly) -> Poly | None:
    """Return q with p == alpha * q, or None when alpha does not divide p.

    Divisibility is decided by substituting the pivot variable of alpha
    (its first variable with a nonzero coefficient) from alpha = 0 and
    checking that the result vanishes.
    """
    coeffs = alpha.linear_coefficients()
    if p.is_zero():
        return p
    pivot = next(i for i, a in enumerate(coeffs) if a != 0)
    n = p.nvars
    solved = Poly.linear([-a / coeffs[pivot] if i != pivot else 0 for i, a in enumerate(coeffs)])
    images = [solved if i == pivot else Poly.var(i, n) for i in range(n)]
    if not p.compose(images).is_zero():
        return None
    return Poly(p._raw / alpha._raw, n)
