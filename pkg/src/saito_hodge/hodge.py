"""Decomposition of W-invariant logarithmic forms and derivations over T = ker D.

Every W-invariant element of Omega(A, infinity) is uniquely
sum_k sum_j t_{k,j} omega_j^(2k+1) with t_{k,j} in T = Q[P_1, ..., P_{l-1}];
on the derivation side the frame is eta_j^(2k-1).  The coefficients are
found by a graded linear solve over Q.
"""
from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from flint import fmpq, fmpq_mat

from .catalog import is_invariant, reynolds
from .errors import CounterexampleFound, Inconsistent, NotInvariant, NotLogarithmic
from .forms import LogDer, LogForm, istar, istar_inv
from .kernel import Poly, format_rational, to_fraction
from .logmodules import member_omega, omega_basis, saito_ziegler
from .sampling import random_combination


def weighted_monomials(weights, degree: int) -> list[tuple[int, ...]]:
    """Exponent vectors e with sum e_i w_i == degree, in lex order."""
    if degree < 0:
        return []
    if not weights:
        return [()] if degree == 0 else []
    w, rest = weights[0], weights[1:]
    out = []
    for e in range(degree // w + 1):
        out.extend((e,) + tail for tail in weighted_monomials(rest, degree - e * w))
    return out


@dataclass(frozen=True)
class TCoefficient:
    """An element of T written in P_1..P_{l-1}, with its expansion in x."""

    terms: tuple  # ((exponents, Fraction), ...) sorted
    poly: Poly

    @classmethod
    def from_terms(cls, terms: dict, datum) -> TCoefficient:
        terms = {e: Fraction(c) for e, c in terms.items() if c != 0}
        poly = Poly.zero(datum.rank)
        for e, c in terms.items():
            poly = poly + _p_monomial(datum, e).scale(c)
        return cls(tuple(sorted(terms.items(), reverse=True)), poly)

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: TCoefficient) -> TCoefficient:
        merged = dict(self.terms)
        for e, c in other.terms:
            merged[e] = merged.get(e, Fraction(0)) + c
        merged = {e: c for e, c in merged.items() if c != 0}
        return TCoefficient(tuple(sorted(merged.items(), reverse=True)), self.poly + other.poly)

    def to_str(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.terms:
            mono = "*".join(f"P{i + 1}" if k == 1 else f"P{i + 1}^{k}" for i, k in enumerate(e) if k)
            a = abs(c)
            if not mono:
                body = format_rational(a)
            elif a == 1:
                body = mono
            else:
                body = f"{format_rational(a)}*{mono}"
            parts.append(("-" if c < 0 else "+", body))
        s = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            s += f" {sign} {body}"
        return s

    def __str__(self):
        return self.to_str()


def _p_monomial(datum, exps) -> Poly:
    return _p_monomial_cached(datum, tuple(exps))


@lru_cache(maxsize=4096)
def _p_monomial_cached(datum, exps) -> Poly:
    out = Poly.one(datum.rank)
    for p, e in zip(datum.invariants, exps):
        if e:
            out = out * p**e
    return out


@dataclass
class HodgeDecomposition:
    """levels[k][j] is the T-coefficient of the j-th frame element at level k.

    For forms the level-k frame is omega^(2k+1); for derivations it is eta^(2k-1).
    """

    datum: object
    kind: str  # "form" or "derivation"
    source: object
    levels: dict = field(default_factory=dict)
    residual: object = None

    def frame(self, k: int) -> list:
        if self.kind == "form":
            return omega_basis(2 * k + 1, self.datum)
        return [istar(w) for w in omega_basis(2 * k - 1, self.datum)]

    def reconstruct(self):
        cls = LogForm if self.kind == "form" else LogDer
        acc = cls.zero(self.datum)
        for k, coeffs in self.levels.items():
            for t, b in zip(coeffs, self.frame(k)):
                if not t.is_zero():
                    acc = acc + b * t.poly
        return acc

    def nonzero_levels(self) -> list[int]:
        return sorted(k for k, cs in self.levels.items() if any(not t.is_zero() for t in cs))

    def as_strings(self) -> dict[int, list[str]]:
        return {k: [t.to_str() for t in self.levels[k]] for k in self.nonzero_levels()}

    def coefficients_in_T(self) -> bool:
        """Every coefficient killed by D and W-invariant."""
        D = self.datum.family.D
        ring = self.datum.ring
        for cs in self.levels.values():
            for t in cs:
                f = ring(t.poly)
                if not D(f).is_zero() or not is_invariant(f, self.datum):
                    return False
        return True


def _minimal_level(omega: LogForm) -> int:
    """k with omega expected in Omega(A, 2k-1)^W, read off the pole order."""
    p0 = omega.pole_order()
    if p0 == 0:
        return 0
    m = p0 if p0 % 2 else p0 + 1
    return (m + 1) // 2


def _unknowns(d: int, kmin: int, datum) -> list[tuple[int, int, tuple]]:
    """(level p, frame index j, P-exponents mu) for every T-monomial of total degree d."""
    exps = datum.exponents
    weights = datum.degrees[:-1]
    h = datum.coxeter_number
    out = []
    p = -kmin
    while min(exps) + p * h <= d:
        for j in range(datum.rank):
            for mu in weighted_monomials(weights, d - exps[j] - p * h):
                out.append((p, j, mu))
        p += 1
    return out


def _read_solution(mat: fmpq_mat, unknowns, d: int, kmin: int):
    """Solve the augmented system; None when it does not determine a unique solution."""
    n = len(unknowns)
    red, rank = mat.rref()
    pivots = []
    row = 0
    for c in range(n + 1):
        if row < rank and red[row, c] != 0:
            pivots.append(c)
            row += 1
    if n in pivots:
        raise Inconsistent(f"degree-{d} piece is not a T-combination of the frames at levels >= {-kmin}")
    if len(pivots) != n:
        return None
    out: dict[int, dict[int, dict]] = {}
    for r, c in enumerate(pivots):
        v = red[r, n]
        if v != 0:
            p, j, mu = unknowns[c]
            out.setdefault(p, {}).setdefault(j, {})[mu] = to_fraction(v)
    return out


def _solve_piece(piece: LogForm, d: int, kmin: int, datum) -> dict[int, dict[int, dict]]:
    """Solve the degree-d piece by comparing coefficients after clearing Q^N.

    Returns level -> j -> {P-exponents: coefficient}.
    """
    l = datum.rank
    N = max(2 * kmin - 1, 0)
    unknowns = _unknowns(d, kmin, datum)
    columns = []
    for p, j, mu in unknowns:
        basis = omega_basis(2 * p + 1, datum)
        mono = _p_monomial(datum, mu + (0,))
        col = {}
        for i in range(l):
            c = basis[j].coeffs[i]
            if c.is_zero():
                continue
            for m_, v in (mono * c.numerator_over(N)).raw_terms().items():
                col[i, m_] = v
        columns.append(col)
    target = {}
    for i in range(l):
        c = piece.coeffs[i]
        if c.is_zero():
            continue
        for m_, v in c.numerator_over(N).raw_terms().items():
            target[i, m_] = v
    if not unknowns:
        if target:
            raise Inconsistent(f"no frame elements of degree {d} at levels >= {-kmin}")
        return {}
    rows = sorted(set(target).union(*columns))
    index = {r: a for a, r in enumerate(rows)}
    n = len(unknowns)
    mat = fmpq_mat(len(rows), n + 1)
    for b, col in enumerate(columns):
        for r, v in col.items():
            mat[index[r], b] = v
    for r, v in target.items():
        mat[index[r], n] = v
    out = _read_solution(mat, unknowns, d, kmin)
    if out is None:
        raise Inconsistent(f"degree-{d} system is underdetermined; frames not independent")
    return out


def _sample_points(datum, count: int, salt) -> list[list[fmpq]]:
    """Deterministic rational points off every hyperplane."""
    rng = random.Random(f"points-{datum.name}-{salt}")
    Q = datum.Q._raw
    points = []
    while len(points) < count:
        pt = [fmpq(rng.randint(-40, 40), rng.randint(1, 9)) for _ in range(datum.rank)]
        if Q(*pt) != 0:
            points.append(pt)
    return points


def _solve_piece_sampled(piece: LogForm, d: int, kmin: int, datum):
    """Same system as :func:`_solve_piece`, with rows from evaluations at rational points.

    Every sampled equation is a combination of the coefficient equations, so an
    inconsistent sample proves inconsistency.  A solution is only a candidate:
    the caller checks it by exact reconstruction.  None when the sample is
    rank deficient.
    """
    l = datum.rank
    unknowns = _unknowns(d, kmin, datum)
    if not unknowns:
        return None
    n = len(unknowns)
    # one point carries fewer than l independent equations, so oversample
    points = _sample_points(datum, 2 * -(-n // l) + 4, d)
    mat = fmpq_mat(len(points) * l, n + 1)

    def value(c, pt, qv):
        if c.is_zero():
            return fmpq(0)
        return c.num._raw(*pt) / qv**c.qexp

    for a, pt in enumerate(points):
        qv = datum.Q._raw(*pt)
        pvals = [p._raw(*pt) for p in datum.invariants]
        frames = {}
        for b, (p, j, mu) in enumerate(unknowns):
            if p not in frames:
                frames[p] = [[value(c, pt, qv) for c in w.coeffs] for w in omega_basis(2 * p + 1, datum)]
            mono = fmpq(1)
            for v, e in zip(pvals, mu):
                if e:
                    mono *= v**e
            for i in range(l):
                mat[a * l + i, b] = mono * frames[p][j][i]
        for i in range(l):
            mat[a * l + i, n] = value(piece.coeffs[i], pt, qv)
    return _read_solution(mat, unknowns, d, kmin)


def _decompose(omega: LogForm, kmin: int, datum, sampled: bool) -> HodgeDecomposition:
    levels: dict[int, dict[int, dict]] = {}
    for d, piece in omega.homogeneous_parts().items():
        solved = _solve_piece_sampled(piece, d, kmin, datum) if sampled else None
        if solved is None:
            solved = _solve_piece(piece, d, kmin, datum)
        for p, byj in solved.items():
            for j, terms in byj.items():
                slot = levels.setdefault(p, {}).setdefault(j, {})
                for mu, c in terms.items():
                    slot[mu] = slot.get(mu, Fraction(0)) + c
    dec = HodgeDecomposition(datum, "form", omega)
    for p in sorted(levels):
        dec.levels[p] = tuple(TCoefficient.from_terms(levels[p].get(j, {}), datum) for j in range(datum.rank))
    dec.residual = omega - dec.reconstruct()
    return dec


def hodge_decompose(obj, datum=None, check_invariance: bool = True) -> HodgeDecomposition:
    """Decompose a W-invariant logarithmic form or derivation level by level."""
    datum = datum or obj.datum
    if isinstance(obj, LogDer):
        inner = hodge_decompose(istar_inv(obj), datum, check_invariance)
        shifted = {k + 1: v for k, v in inner.levels.items()}
        out = HodgeDecomposition(datum, "derivation", obj, shifted)
        out.residual = obj - out.reconstruct()
        return out
    omega = obj
    if check_invariance and not is_invariant(omega, datum):
        raise NotInvariant("form is not fixed by the simple reflections")
    kmin = _minimal_level(omega)
    res = member_omega(omega, 2 * kmin - 1)
    if not res:
        raise NotLogarithmic(f"not in Omega(A, {2 * kmin - 1}): {res.reason}")
    dec = _decompose(omega, kmin, datum, sampled=True)
    if not dec.residual.is_zero():
        dec = _decompose(omega, kmin, datum, sampled=False)
    if not dec.residual.is_zero():
        raise Inconsistent("reconstruction does not reproduce the input")
    return dec


def nabla_d_inverse(obj):
    """The unique invariant preimage under nabla_D: shift every level up by one."""
    dec = hodge_decompose(obj)
    cls = LogForm if dec.kind == "form" else LogDer
    acc = cls.zero(dec.datum)
    for k, coeffs in dec.levels.items():
        for t, b in zip(coeffs, dec.frame(k + 1)):
            if not t.is_zero():
                acc = acc + b * t.poly
    return acc


# -- verifications ---------------------------------------------------------------------


@dataclass
class CheckOutcome:
    """Result of one verification run."""

    check_id: str
    passed: bool
    certificate: dict
    seconds: float = 0.0


def verify_invariant_parts_equal(k: int, datum, trials: int = 25, seed: int = 0) -> CheckOutcome:
    """Symmetrized random elements of Omega(A, 2k) lie in Omega(A, 2k-1)."""
    start = time.perf_counter()
    rng = random.Random(f"parts-{datum.name}-{k}-{seed}")
    basis = omega_basis(-2 * k, datum)
    nonzero = 0
    for t in range(trials):
        w = reynolds(random_combination(rng, basis), datum)
        nonzero += not w.is_zero()
        res = member_omega(w, 2 * k - 1)
        if not res:
            raise CounterexampleFound(
                f"trial {t}: symmetrized element of Omega(A, {2 * k}) not in Omega(A, {2 * k - 1}): {res.reason}"
            )
    return CheckOutcome(
        f"invariant-parts-equal/k={k}",
        True,
        {"trials": trials, "nonzero": nonzero, "seed": seed},
        time.perf_counter() - start,
    )


def verify_free_basis_over_r(k: int, datum) -> CheckOutcome:
    """B_{-k} = {omega_j^(1-2k)} lies in Omega(A, 2k-1)^W with wedge c Q^{1-2k}; pairs with eta^(2k-1) via Y."""
    start = time.perf_counter()
    m = 2 * k - 1
    basis = omega_basis(-m, datum)
    fam = datum.family
    for j, w in enumerate(basis):
        if not is_invariant(w, datum):
            raise CounterexampleFound(f"omega_{j + 1}^({-m}) is not W-invariant")
        res = member_omega(w, m)
        if not res:
            raise CounterexampleFound(f"omega_{j + 1}^({-m}) not in Omega(A, {m}): {res.reason}")
    cert = {}
    if m >= 0:
        sz = saito_ziegler(basis, m)
        if not sz:
            raise CounterexampleFound(f"Saito-Ziegler fails: {sz.reason}")
        cert["wedge_constant"] = sz.details["constant"]
    else:
        unit = fam.R(-m).det().unit_form()
        if unit is None or unit[1] != -m:
            raise CounterexampleFound(f"wedge of B_{-k} is not a constant times Q^{-m}")
        cert["wedge_constant"] = unit[0]
    pairing = fam.R(-m).T @ fam.A @ fam.R(m)
    sign = 1 if k % 2 else -1
    expect = (fam.B.T @ fam.Bk_inv(k) @ fam.B) * sign
    if pairing != expect:
        raise CounterexampleFound(f"pairing of B_{-k} with C_{k} differs from Y_{m}")
    return CheckOutcome(f"free-basis/k={k}", True, cert, time.perf_counter() - start)


def invariant_form_suite(datum, size: int = 20, seed: int = 0) -> list[LogForm]:
    """Deterministic W-invariant logarithmic forms: T-combinations of basis frames."""
    rng = random.Random(f"suite-{datum.name}-{seed}")
    weights = datum.degrees[:-1]
    out = []
    while len(out) < size:
        k = rng.randint(-2, 1)
        j = rng.randrange(datum.rank)
        frame = omega_basis(2 * k + 1, datum)[j]
        deg = rng.randint(0, 2 * max(weights))
        monos = weighted_monomials(weights, deg)
        if not monos:
            continue
        mu = rng.choice(monos)
        c = rng.choice([-3, -2, -1, 1, 2, 3])
        w = frame * _p_monomial(datum, mu + (0,)).scale(c)
        if out and rng.random() < 0.5:
            w = w + out[-1]
        out.append(w)
    return out


__all__ = [
    "CheckOutcome",
    "HodgeDecomposition",
    "TCoefficient",
    "hodge_decompose",
    "invariant_form_suite",
    "nabla_d_inverse",
    "verify_free_basis_over_r",
    "verify_invariant_parts_equal",
    "weighted_monomials",
]
