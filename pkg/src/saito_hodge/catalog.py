"""Coxeter data: built-in types, the datum file format, the group W and averaging over it."""
from __future__ import annotations

import hashlib
import os
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from itertools import combinations

from .errors import GroupTooLarge, ParseError, UnknownType, ValidationError
from .expr import parse, to_poly
from .kernel import LocRing, Matrix, Poly, bareiss_det, format_rational

BUILTIN_NAMES = ("A2", "B2", "G2", "A3", "B3", "B4", "D4")
GROUP_LIMIT = 10000

RatMatrix = tuple  # tuple[tuple[Fraction, ...], ...]


def _rat_matrix(rows) -> RatMatrix:
    return tuple(tuple(Fraction(x) for x in r) for r in rows)


def _matmul(a: RatMatrix, b: RatMatrix) -> RatMatrix:
    n = len(a)
    return tuple(
        tuple(sum((a[i][k] * b[k][j] for k in range(n)), Fraction(0)) for j in range(n))
        for i in range(n)
    )


def _identity(n: int) -> RatMatrix:
    return _rat_matrix([[int(i == j) for j in range(n)] for i in range(n)])


def _rat_det(m: RatMatrix) -> Fraction:
    rows = [list(r) for r in m]
    n = len(rows)
    det = Fraction(1)
    for k in range(n):
        piv = next((i for i in range(k, n) if rows[i][k] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != k:
            rows[k], rows[piv] = rows[piv], rows[k]
            det = -det
        det *= rows[k][k]
        for i in range(k + 1, n):
            f = rows[i][k] / rows[k][k]
            for j in range(k, n):
                rows[i][j] -= f * rows[k][j]
    return det


@dataclass(frozen=True, eq=False)
class CoxeterDatum:
    """One Coxeter arrangement with its invariant-theoretic data.

    ``reflections`` act on coordinates: the matrix M is the substitution
    x_i -> sum_j M[i][j] x_j, so a function f is sent to f(Mx).
    Construction validates every structural invariant.
    """

    name: str
    var_names: tuple
    gram: RatMatrix
    invariants: tuple
    hyperplanes: tuple
    reflections: tuple

    def __post_init__(self):
        object.__setattr__(self, "gram", _rat_matrix(self.gram))
        object.__setattr__(self, "reflections", tuple(_rat_matrix(m) for m in self.reflections))
        object.__setattr__(self, "var_names", tuple(self.var_names))
        object.__setattr__(self, "invariants", tuple(self.invariants))
        object.__setattr__(self, "hyperplanes", tuple(self.hyperplanes))
        validate(self)

    # -- derived data ---------------------------------------------------------
    @property
    def rank(self) -> int:
        return len(self.var_names)

    @cached_property
    def ring(self) -> LocRing:
        return LocRing(self.hyperplanes)

    @property
    def Q(self) -> Poly:
        return self.ring.Q

    @property
    def degrees(self) -> tuple[int, ...]:
        return tuple(p.degree() for p in self.invariants)

    @property
    def exponents(self) -> tuple[int, ...]:
        return tuple(d - 1 for d in self.degrees)

    @property
    def coxeter_number(self) -> int:
        return self.degrees[-1]

    @cached_property
    def gram_matrix(self) -> Matrix:
        return Matrix(self.gram, self.ring)

    @cached_property
    def gram_inverse(self) -> Matrix:
        return self.gram_matrix.inverse()

    @cached_property
    def family(self):
        """The cached matrix family (J(P), B, R_m, ...) of this datum."""
        from .matrices import MatrixFamily

        return MatrixFamily(self)

    @cached_property
    def fingerprint(self) -> str:
        return hashlib.sha256(dump_datum(self).encode()).hexdigest()

    def group(self, limit: int = GROUP_LIMIT) -> list[RatMatrix]:
        return group_elements(self, limit)

    def with_invariants(self, invariants) -> CoxeterDatum:
        return CoxeterDatum(
            self.name, self.var_names, self.gram, tuple(invariants), self.hyperplanes,
            self.reflections,
        )

    def __eq__(self, other):
        if not isinstance(other, CoxeterDatum):
            return NotImplemented
        return (
            self.var_names == other.var_names
            and self.gram == other.gram
            and self.invariants == other.invariants
            and self.hyperplanes == other.hyperplanes
            and self.reflections == other.reflections
        )

    def __hash__(self):
        return hash(self.fingerprint)

    def __repr__(self):
        return f"CoxeterDatum({self.name!r}, rank={self.rank}, degrees={self.degrees})"


def validate(datum: CoxeterDatum) -> None:
    """Raise ValidationError naming the first violated invariant."""
    n = len(datum.var_names)
    if n < 1:
        raise ValidationError("rank must be positive")
    if len(set(datum.var_names)) != n:
        raise ValidationError("variable names must be distinct")
    A = datum.gram
    if len(A) != n or any(len(r) != n for r in A):
        raise ValidationError(f"gram matrix must be {n}x{n}")
    if any(A[i][j] != A[j][i] for i in range(n) for j in range(n)):
        raise ValidationError("gram matrix is not symmetric")
    for k in range(1, n + 1):
        if _rat_det(tuple(r[:k] for r in A[:k])) <= 0:
            raise ValidationError("gram matrix is not positive definite")

    P = datum.invariants
    if len(P) != n:
        raise ValidationError(f"expected {n} basic invariants, got {len(P)}")
    for j, p in enumerate(P):
        if p.nvars != n:
            raise ValidationError(f"P{j + 1} uses the wrong number of variables")
        if p.is_zero() or p.is_constant() or not p.is_homogeneous():
            raise ValidationError(f"P{j + 1} is not a nonconstant homogeneous polynomial")
    degs = [p.degree() for p in P]
    if degs != sorted(degs):
        raise ValidationError("invariant degrees must be nondecreasing")
    if n > 1 and degs[-2] >= degs[-1]:
        raise ValidationError("the top degree must be strictly larger (primitive derivation)")

    alphas = datum.hyperplanes
    if not alphas:
        raise ValidationError("no hyperplanes")
    for a in alphas:
        try:
            a.linear_coefficients()
        except ValueError:
            raise ValidationError(f"hyperplane form {a} is not linear") from None
    for a, b in combinations(alphas, 2):
        ca, cb = a.linear_coefficients(), b.linear_coefficients()
        if all(ca[i] * cb[j] == ca[j] * cb[i] for i in range(n) for j in range(n)):
            raise ValidationError(f"hyperplanes {a} and {b} are proportional")

    refl = datum.reflections
    if len(refl) != n:
        raise ValidationError(f"expected {n} simple reflections, got {len(refl)}")
    ident = _identity(n)
    for k, m in enumerate(refl):
        if len(m) != n or any(len(r) != n for r in m):
            raise ValidationError(f"reflection {k + 1} is not {n}x{n}")
        if _matmul(m, m) != ident or _rat_det(m) != -1:
            raise ValidationError(f"reflection {k + 1} is not a reflection")
        mt = tuple(zip(*m))
        if _matmul(_matmul(m, A), mt) != A:
            raise ValidationError(f"reflection {k + 1} does not preserve the gram matrix")
        for j, p in enumerate(P):
            if p.pullback(m) != p:
                raise ValidationError(f"P{j + 1} is not invariant under reflection {k + 1}")

    ring = LocRing(alphas)
    jac = [[p.diff(i) for p in P] for i in range(n)]
    det = bareiss_det(jac)
    if det.is_zero():
        raise ValidationError("det J(P) not ≐ Q: the invariants are dependent")
    unit = ring(det).unit_form()
    if unit is None or unit[1] != 1:
        raise ValidationError("Q mismatch: det J(P) is not a constant multiple of the hyperplane product")
    if sum(d - 1 for d in degs) != len(alphas):
        raise ValidationError("Q mismatch: sum of exponents differs from the number of hyperplanes")

    for k, m in enumerate(refl):
        for a in alphas:
            image = a.pullback(m)
            if not any(_proportional(image, b) for b in alphas):
                raise ValidationError(
                    f"reflection {k + 1} does not permute the hyperplanes ({a} has no image)"
                )


def _proportional(a: Poly, b: Poly) -> bool:
    ca, cb = a.linear_coefficients(), b.linear_coefficients()
    n = len(ca)
    return all(ca[i] * cb[j] == ca[j] * cb[i] for i in range(n) for j in range(n))


# -- the group ------------------------------------------------------------------


def group_elements(datum: CoxeterDatum, limit: int = GROUP_LIMIT) -> list[RatMatrix]:
    """Enumerate W as the closure of the simple reflections (breadth first)."""
    return _closure(datum.reflections, limit)


@lru_cache(maxsize=None)
def _closure(gens, limit):
    n = len(gens[0])
    seen = {_identity(n)}
    order = [_identity(n)]
    frontier = [_identity(n)]
    while frontier:
        nxt = []
        for g in frontier:
            for s in gens:
                h = _matmul(g, s)
                if h not in seen:
                    seen.add(h)
                    order.append(h)
                    nxt.append(h)
                    if len(seen) > limit:
                        raise GroupTooLarge(f"group exceeds {limit} elements")
        frontier = nxt
    return order


def reynolds(obj, datum: CoxeterDatum, limit: int = GROUP_LIMIT):
    """Average a LocQ, LogForm or LogDer over W."""
    elems = group_elements(datum, limit)
    acc = None
    for w in elems:
        t = obj.pullback(w)
        acc = t if acc is None else acc + t
    return acc * Fraction(1, len(elems))


def is_invariant(obj, datum: CoxeterDatum) -> bool:
    """Invariance under W, tested on the simple reflections."""
    return all(obj.pullback(m) == obj for m in datum.reflections)


# -- built-in types -------------------------------------------------------------


def _names(n: int, letter: str | None = None) -> list[str]:
    if letter:
        return [f"{letter}{i + 1}" for i in range(n)]
    return ["x", "y", "z"][:n] if n <= 3 else [f"x{i + 1}" for i in range(n)]


def _swap(n, i):
    m = [[int(a == b) for b in range(n)] for a in range(n)]
    m[i][i] = m[i + 1][i + 1] = 0
    m[i][i + 1] = m[i + 1][i] = 1
    return m


def _type_b(n: int) -> CoxeterDatum:
    x = Poly.gens(n)
    P = [sum((xi ** (2 * k) for xi in x), Poly.zero(n)).scale(Fraction(1, 2 * k)) for k in range(1, n + 1)]
    alphas = list(x)
    for i, j in combinations(range(n), 2):
        alphas += [x[i] - x[j], x[i] + x[j]]
    refl = [_swap(n, i) for i in range(n - 1)]
    last = [[int(a == b) for b in range(n)] for a in range(n)]
    last[n - 1][n - 1] = -1
    refl.append(last)
    return CoxeterDatum(f"B{n}", _names(n), _identity(n), P, alphas, refl)


def _type_d(n: int) -> CoxeterDatum:
    x = Poly.gens(n)
    power_sums = [sum((xi ** (2 * k) for xi in x), Poly.zero(n)) for k in range(1, n)]
    prod = Poly.one(n)
    for xi in x:
        prod = prod * xi
    P = sorted(power_sums + [prod], key=lambda p: (p.degree(), p is prod))
    alphas = []
    for i, j in combinations(range(n), 2):
        alphas += [x[i] - x[j], x[i] + x[j]]
    refl = [_swap(n, i) for i in range(n - 1)]
    last = [[int(a == b) for b in range(n)] for a in range(n)]
    last[n - 2][n - 2] = last[n - 1][n - 1] = 0
    last[n - 2][n - 1] = last[n - 1][n - 2] = -1
    refl.append(last)
    return CoxeterDatum(f"D{n}", _names(n), _identity(n), P, alphas, refl)


def _elementary(vals, k: int, n: int) -> Poly:
    acc = Poly.zero(n)
    for sub in combinations(vals, k):
        t = Poly.one(n)
        for v in sub:
            t = t * v
        acc = acc + t
    return acc


def _type_a(n: int) -> CoxeterDatum:
    y = Poly.gens(n)
    last = -sum(y, Poly.zero(n))
    full = list(y) + [last]
    P = [_elementary(full, j + 1, n) for j in range(1, n + 1)]
    alphas = [full[i] - full[j] for i, j in combinations(range(n + 1), 2)]
    gram = [[Fraction(int(i == j)) - Fraction(1, n + 1) for j in range(n)] for i in range(n)]
    refl = [_swap(n, i) for i in range(n - 1)]
    m = [[int(a == b) for b in range(n)] for a in range(n)]
    m[n - 1] = [-1] * n
    refl.append(m)
    return CoxeterDatum(f"A{n}", _names(n, "y"), gram, P, alphas, refl)


def _type_g2() -> CoxeterDatum:
    y1, y2 = Poly.gens(2)
    P = [y1**2 + y1 * y2 + y2**2, (y1 * y2 * (y1 + y2)) ** 2]
    alphas = [y1, y2, y1 + y2, y1 - y2, 2 * y1 + y2, y1 + 2 * y2]
    gram = [[Fraction(2, 3), Fraction(-1, 3)], [Fraction(-1, 3), Fraction(2, 3)]]
    refl = [[[0, 1], [1, 0]], [[-1, 0], [1, 1]]]
    return CoxeterDatum("G2", ("y1", "y2"), gram, P, alphas, refl)


_BUILDERS = {
    "A2": lambda: _type_a(2),
    "A3": lambda: _type_a(3),
    "B2": lambda: _type_b(2),
    "B3": lambda: _type_b(3),
    "B4": lambda: _type_b(4),
    "D4": lambda: _type_d(4),
    "G2": _type_g2,
}


@lru_cache(maxsize=None)
def builtin(name: str) -> CoxeterDatum:
    try:
        build = _BUILDERS[name.upper()]
    except KeyError:
        raise UnknownType(f"unknown Coxeter type {name!r}; built-ins are {', '.join(BUILTIN_NAMES)}") from None
    return build()


def get_datum(spec: str) -> CoxeterDatum:
    """A built-in type name or a path to a datum file."""
    if spec.upper() in _BUILDERS:
        return builtin(spec)
    if re.fullmatch(r"[A-Za-z][0-9]+", spec) and not os.path.exists(spec):
        raise UnknownType(f"unknown Coxeter type {spec!r}; built-ins are {', '.join(BUILTIN_NAMES)}")
    with open(spec, encoding="utf-8") as fh:
        return load_datum(fh.read())


# -- datum file format ----------------------------------------------------------

_SECTIONS = ("name", "rank", "vars", "gram", "invariants", "hyperplanes", "reflections")
_HEADER = re.compile(r"^([a-z]+):[ \t]*(.*)$")
_RATIONAL = re.compile(r"^-?\d+(/\d+)?$")


def _rational(tok: str, line: int, column: int) -> Fraction:
    if not _RATIONAL.match(tok):
        raise ParseError(f"not a rational number: {tok!r}", line, column)
    return Fraction(tok)


def _rational_row(text: str, line: int, col0: int) -> list[Fraction]:
    out = []
    for m in re.finditer(r"\S+", text):
        out.append(_rational(m.group(), line, col0 + m.start()))
    return out


def load_datum(source: str) -> CoxeterDatum:
    """Parse and validate a datum document (see docs/formats.md)."""
    sections: dict[str, list[tuple[int, int, str]]] = {}
    current = None
    for lineno, raw in enumerate(source.splitlines(), start=1):
        text = raw.split("#", 1)[0].rstrip()
        if not text.strip():
            continue
        m = _HEADER.match(text)
        if m:
            key = m.group(1)
            if key not in _SECTIONS:
                raise ParseError(f"unknown section {key!r}", lineno, 1)
            if key in sections:
                raise ParseError(f"duplicate section {key!r}", lineno, 1)
            current = key
            sections[key] = []
            if m.group(2).strip():
                sections[key].append((lineno, m.start(2) + 1, m.group(2)))
            continue
        if current is None:
            raise ParseError("content before the first section header", lineno, 1)
        col = len(text) - len(text.lstrip()) + 1
        sections[current].append((lineno, col, text.strip()))
    for key in _SECTIONS[1:]:
        if key not in sections:
            raise ParseError(f"missing section {key!r}", None)

    name = sections.get("name", [(0, 0, "custom")])[0][2].strip()
    (ln, col, txt), *extra = sections["rank"] or [(0, 0, "")]
    if not re.fullmatch(r"\d+", txt) or extra:
        raise ParseError("rank must be a single positive integer", ln, col)
    rank = int(txt)
    vars_ = " ".join(t for _, _, t in sections["vars"]).split()
    if len(vars_) != rank:
        raise ParseError(f"expected {rank} variable names", sections["vars"][0][0] if sections["vars"] else None, 1)
    for v in vars_:
        if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", v):
            raise ParseError(f"bad variable name {v!r}", sections["vars"][0][0], 1)

    gram = [_rational_row(t, ln, col) for ln, col, t in sections["gram"]]
    if len(gram) != rank or any(len(r) != rank for r in gram):
        raise ParseError(f"gram must have {rank} rows of {rank} rationals", sections["gram"][0][0] if sections["gram"] else None, 1)

    def exprs(key):
        out = []
        for ln, col, t in sections[key]:
            try:
                out.append(to_poly(parse(t), vars_))
            except ParseError as e:
                raise ParseError(e.message, ln, col + (e.column or 1) - 1) from None
        return out

    invariants = exprs("invariants")
    hyperplanes = exprs("hyperplanes")
    reflections = []
    for ln, col, t in sections["reflections"]:
        rows = [_rational_row(r, ln, col) for r in t.split(";")]
        if len(rows) != rank or any(len(r) != rank for r in rows):
            raise ParseError(f"a reflection needs {rank} rows of {rank} entries, separated by ';'", ln, col)
        reflections.append(rows)
    return CoxeterDatum(name, vars_, gram, invariants, hyperplanes, reflections)


def dump_datum(datum: CoxeterDatum) -> str:
    """Canonical text form; ``load_datum(dump_datum(d)) == d``."""
    names = datum.var_names
    fr = format_rational
    lines = [f"name: {datum.name}", f"rank: {datum.rank}", "vars: " + " ".join(names), "gram:"]
    lines += ["  " + " ".join(fr(x) for x in r) for r in datum.gram]
    lines.append("invariants:")
    lines += ["  " + p.to_str(names) for p in datum.invariants]
    lines.append("hyperplanes:")
    lines += ["  " + a.to_str(names) for a in datum.hyperplanes]
    lines.append("reflections:")
    lines += ["  " + " ; ".join(" ".join(fr(x) for x in r) for r in m) for m in datum.reflections]
    return "\n".join(lines) + "\n"
