"""Alternative bases built from J(D^k[x]) and from covariant derivatives, and their
relations to the eta / omega frames (for k >= 0)."""
from __future__ import annotations

import time
from fractions import Fraction

from .errors import IdentityViolation, NormalizationMismatch
from .forms import LogDer, LogForm, forms_from_matrix, frame_matrix, istar
from .hodge import CheckOutcome, nabla_d_inverse
from .kernel import Matrix, Poly, to_fraction


def xi_basis(m: int, datum) -> list[LogDer]:
    """Columns of A J(D^k[x])^{-1} J(P) for m = 2k+1, of A J(D^k[x])^{-1} for m = 2k."""
    if m < 0:
        raise ValueError("xi bases are defined for m >= 0")
    fam = datum.family
    k = m // 2
    mat = fam.A @ fam.JDk_inv(k) if k else fam.A
    if m % 2:
        mat = mat @ fam.J
    return forms_from_matrix(datum, mat, LogDer)


def nabla_along(theta: LogDer, obj):
    """Covariant derivative along theta: every coefficient f becomes theta(f)."""
    return obj.nabla_along(theta)


def partial_P(datum, i: int) -> LogDer:
    """The coordinate field d/dP_i in x-coordinates: column i of J(P)^{-T}."""
    return LogDer(datum, datum.family.J_inv.T.col(i))


def _compare(lhs: Matrix, rhs: Matrix, label: str) -> None:
    if lhs != rhs:
        bad = next((i, j) for i in range(lhs.n) for j in range(lhs.n) if lhs[i, j] != rhs[i, j])
        raise IdentityViolation(f"{label}: entry {bad[0] + 1},{bad[1] + 1} differs")


def _require_nonnegative(k: int) -> None:
    if k < 0:
        raise ValueError("these identities are checked for k >= 0 only")


def verify_relation1(k: int, datum) -> CheckOutcome:
    """xi^(2k+1) = (-1)^k eta^(2k+1) B^{-1} B^(k+1) and xi^(2k) = (-1)^k eta^(2k)."""
    _require_nonnegative(k)
    start = time.perf_counter()
    fam = datum.family
    sign = -1 if k % 2 else 1
    odd = (fam.A @ fam.R(2 * k + 1) @ fam.B_inv @ fam.Bk(k + 1)) * sign
    _compare(frame_matrix(xi_basis(2 * k + 1, datum)), odd, f"xi^({2 * k + 1})")
    even = (fam.A @ fam.R(2 * k)) * sign
    _compare(frame_matrix(xi_basis(2 * k, datum)), even, f"xi^({2 * k})")
    return CheckOutcome(f"relation1/k={k}", True, {"identities": 2}, time.perf_counter() - start)


def euler_preimage(k: int, datum) -> LogDer:
    """nabla_D^{-k} theta_E."""
    v = LogDer.euler(datum)
    for _ in range(k):
        v = nabla_d_inverse(v)
    return v


def verify_deri(k: int, datum) -> CheckOutcome:
    """nabla_{I*(dP_i)} nabla_D^{-k} theta_E frame = eta^(2k+1) B^{-1} B^(k+1);
    nabla_{d/dx_i} nabla_D^{-k} theta_E frame = eta^(2k) A^{-1}."""
    _require_nonnegative(k)
    start = time.perf_counter()
    fam = datum.family
    v = euler_preimage(k, datum)
    if k and v.nabla_d() != euler_preimage(k - 1, datum):
        raise IdentityViolation("nabla_D does not invert the computed preimage")
    dirs = [istar(LogForm.differential(datum, p)) for p in datum.invariants]
    lhs = frame_matrix([nabla_along(t, v) for t in dirs])
    _compare(lhs, fam.A @ fam.R(2 * k + 1) @ fam.B_inv @ fam.Bk(k + 1), f"deri odd, k={k}")
    lhs = frame_matrix([nabla_along(LogDer.unit(datum, i), v) for i in range(datum.rank)])
    _compare(lhs, fam.A @ fam.R(2 * k) @ fam.A_inv, f"deri even, k={k}")
    return CheckOutcome(f"deri/k={k}", True, {"identities": 2}, time.perf_counter() - start)


def normalize_quadratic(datum):
    """(datum', c): datum' replaces P_1 by c P_1 = (1/2) x A^{-1} x^T."""
    n = datum.rank
    x = Poly.gens(n)
    ainv = datum.gram_inverse
    target = Poly.zero(n)
    for i in range(n):
        for j in range(n):
            a = ainv[i, j].constant_value()
            if a:
                target = target + (x[i] * x[j]).scale(a / 2)
    p1 = datum.invariants[0]
    lead, c0 = p1.terms()[0]
    tl = target.raw_terms().get(lead)
    c = Fraction(0) if tl is None else to_fraction(tl) / c0
    if c == 0 or p1.scale(c) != target:
        raise NormalizationMismatch("P_1 is not proportional to (1/2) x A^{-1} x^T")
    if c == 1:
        return datum, c
    return datum.with_invariants((target,) + tuple(datum.invariants[1:])), c


def verify_commu(k: int, datum) -> CheckOutcome:
    """nabla_{d/dP_i} nabla_D^k dP_1 frame = omega^(-2k-1) B^{-1};
    nabla_{d/dx_i} nabla_D^k dP_1 frame = omega^(-2k) A^{-1}; with P_1 rescaled first."""
    _require_nonnegative(k)
    start = time.perf_counter()
    datum, c = normalize_quadratic(datum)
    fam = datum.family
    w = LogForm.differential(datum, datum.invariants[0])
    for _ in range(k):
        w = w.nabla_d()
    dirs = [partial_P(datum, i) for i in range(datum.rank)]
    first = [nabla_along(t, w) for t in dirs]
    _compare(frame_matrix(first), fam.R(-2 * k - 1) @ fam.B_inv, f"commu odd, k={k}")
    # nabla_D commutes with nabla_{d/dP_i} on this frame
    for i, t in enumerate(dirs):
        if first[i].nabla_d() != nabla_along(t, w.nabla_d()):
            raise IdentityViolation(f"nabla_D and nabla_(d/dP_{i + 1}) do not commute on nabla_D^{k} dP_1")
    second = frame_matrix([nabla_along(LogDer.unit(datum, i), w) for i in range(datum.rank)])
    _compare(second, fam.R(-2 * k) @ fam.A_inv, f"commu even, k={k}")
    return CheckOutcome(f"commu/k={k}", True, {"identities": 3, "P1_scale": c}, time.perf_counter() - start)
