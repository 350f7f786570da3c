"""Bases of Omega(A, m) and D(A, m), membership tests and the Saito-Ziegler criterion.

Index convention: the columns of R_m give the forms omega_j^(m) and the
derivations eta_j^(m) = I*(omega_j^(m)).  The eta^(m) are an S-basis of
D(A, m) while the omega^(-m) are an S-basis of Omega(A, m).
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .errors import PreconditionViolated
from .forms import LogDer, LogForm, TwoForm, forms_from_matrix, frame_matrix, istar
from .kernel import Poly, divide_by_linear


@dataclass
class Membership:
    """Outcome of a membership test; truthy iff the element belongs."""

    member: bool
    reason: str
    hyperplane: Poly | None = None
    details: dict = field(default_factory=dict)

    def __bool__(self):
        return self.member


def omega_basis(m: int, datum) -> list[LogForm]:
    """omega_j^(m): the columns of R_m as dx-coefficient vectors."""
    return forms_from_matrix(datum, datum.family.R(m), LogForm)


def eta_basis(m: int, datum) -> list[LogDer]:
    """eta_j^(m): the columns of A R_m as d/dx-coefficient vectors."""
    fam = datum.family
    return forms_from_matrix(datum, fam.A @ fam.R(m), LogDer)


def _divides_power(alpha: Poly, f: Poly, power: int) -> bool:
    for _ in range(power):
        if f.is_zero():
            return True
        f = divide_by_linear(f, alpha)
        if f is None:
            return False
    return True


def member_omega(omega: LogForm, m: int) -> Membership:
    """Decide omega in Omega(A, m).

    m >= 0: Q^m omega regular and, for every H, alpha_H^m divides each
    coefficient of Q^m (d alpha_H ^ omega).  m < 0: omega regular and
    alpha_H^(-m) divides I*(omega, d alpha_H) for every H.
    """
    datum = omega.datum
    if m >= 0:
        p = omega.pole_order()
        if p > m:
            return Membership(False, f"pole order {p} exceeds {m}")
        g = [c.numerator_over(m) for c in omega.coeffs]
        n = datum.rank
        for alpha in datum.hyperplanes:
            a = alpha.linear_coefficients()
            for i in range(n):
                for j in range(i + 1, n):
                    c = g[j].scale(a[i]) - g[i].scale(a[j])
                    if not _divides_power(alpha, c, m):
                        return Membership(
                            False,
                            f"coefficient ({i + 1},{j + 1}) of Q^{m}(dalpha ^ omega) not divisible by alpha^{m}",
                            alpha,
                        )
        return Membership(True, f"pole order {p}; all {len(datum.hyperplanes)} divisibility conditions hold")
    if not omega.is_regular():
        return Membership(False, "not regular")
    A = datum.gram
    f = [c.num for c in omega.coeffs]
    n = datum.rank
    for alpha in datum.hyperplanes:
        a = alpha.linear_coefficients()
        # I*(omega, d alpha) = f^T A a
        w = [sum(A[i][j] * a[j] for j in range(n)) for i in range(n)]
        pairing = sum((fi.scale(wi) for fi, wi in zip(f, w) if wi), Poly.zero(n))
        if not _divides_power(alpha, pairing, -m):
            return Membership(False, f"I*(omega, dalpha) not divisible by alpha^{-m}", alpha)
    return Membership(True, f"regular; I*(omega, dalpha) divisible by alpha^{-m} for every H")


def member_der(theta: LogDer, m: int) -> Membership:
    """Decide theta in D(A, m).

    m >= 0: theta regular with theta(alpha_H) in S alpha_H^m for all H.
    m < 0: the coordinates of theta in the basis eta^(m) are polynomial.
    """
    datum = theta.datum
    if m < 0:
        fam = datum.family
        return _basis_coordinates(theta.coeffs, fam.R_inv(m) @ fam.A_inv, "eta", m)
    if not theta.is_regular():
        return Membership(False, "not regular")
    n = datum.rank
    for alpha in datum.hyperplanes:
        a = alpha.linear_coefficients()
        value = sum((c.num.scale(ai) for c, ai in zip(theta.coeffs, a) if ai), Poly.zero(n))
        if not _divides_power(alpha, value, m):
            return Membership(False, f"theta(alpha) not divisible by alpha^{m}", alpha)
    return Membership(True, f"regular; theta(alpha) divisible by alpha^{m} for every H")


def _basis_coordinates(coeffs, inverse_matrix, label, m) -> Membership:
    coords = inverse_matrix.apply(coeffs)
    bad = [j for j, c in enumerate(coords) if not c.is_polynomial()]
    if bad:
        return Membership(False, f"coordinate {bad[0] + 1} in the {label}^({m}) basis is not polynomial",
                          details={"coordinates": coords})
    return Membership(True, f"polynomial coordinates in the {label}^({m}) basis", details={"coordinates": coords})


def member_omega_by_basis(omega: LogForm, m: int) -> Membership:
    """omega in Omega(A, m) iff its coordinates in omega^(-m) are polynomial."""
    fam = omega.datum.family
    return _basis_coordinates(omega.coeffs, fam.R_inv(-m), "omega", -m)


def member_der_by_istar(theta: LogDer, m: int) -> Membership:
    """theta in D(A, m) iff I*^{-1} theta in Omega(A, -m)."""
    from .forms import istar_inv

    return member_omega(istar_inv(theta), -m)


def member_omega_even(omega: LogForm, k: int) -> Membership:
    """Omega(A, 2k) = Omega(A, 2k+1) intersected with Q^{-2k} Omega_S, for k >= 0."""
    if omega.pole_order() > 2 * k:
        return Membership(False, f"pole order {omega.pole_order()} exceeds {2 * k}")
    return member_omega(omega, 2 * k + 1)


def wedge_all(forms) -> tuple:
    """omega_1 ^ ... ^ omega_l as (c, k) with c Q^k dx_1^...^dx_l, or the raw determinant."""
    d = frame_matrix(forms).det()
    return d.unit_form(), d


def saito_ziegler(forms, m: int) -> Membership:
    """True iff the forms lie in Omega(A, m) and their wedge is c Q^{-m} dx_1^...^dx_l, c != 0."""
    forms = list(forms)
    if not forms:
        raise ValueError("no forms given")
    datum = forms[0].datum
    if len(forms) != datum.rank:
        raise ValueError(f"need exactly {datum.rank} forms")
    for j, w in enumerate(forms):
        res = member_omega(w, m)
        if not res:
            raise PreconditionViolated(f"form {j + 1} is not in Omega(A, {m}): {res.reason}")
    unit, det = wedge_all(forms)
    if unit is None:
        return Membership(False, "wedge is zero" if det.is_zero() else "wedge is not a constant times a power of Q")
    c, k = unit
    if k != -m:
        return Membership(False, f"wedge is c Q^{k}, expected Q^{-m}", details={"constant": c})
    return Membership(True, f"wedge = c Q^{-m} dx_1^...^dx_l", details={"constant": c})


def compare_membership_oracles(m: int, datum, trials: int = 25, seed: int = 0) -> dict:
    """Run the defining test, the basis-coordinate test and the derivation-side test
    on seeded random forms; raise CrossCheckFailure on any disagreement."""
    import random

    from .errors import CrossCheckFailure
    from .sampling import random_combination, random_regular_form

    rng = random.Random(f"oracles-{datum.name}-{m}-{seed}")
    inside = omega_basis(-m, datum)
    nearby = omega_basis(-m - 1, datum)
    counts = {"trials": trials, "members": 0, "non_members": 0}
    for t in range(trials):
        kind = t % 4
        if kind == 0:
            w = random_combination(rng, inside)
        elif kind == 1:
            w = random_combination(rng, nearby)
        elif kind == 2:
            w = random_regular_form(rng, datum)
            if m > 0:
                w = w * datum.ring(1, m)
        else:
            # members built without the basis: regular forms, or Q^|m| times one
            w = random_regular_form(rng, datum)
            if m < 0:
                w = w * datum.Q ** (-m)
        a = bool(member_omega(w, m))
        b = bool(member_omega_by_basis(w, m))
        c = bool(member_der(istar(w), -m))
        if not a == b == c:
            raise CrossCheckFailure(
                f"trial {t}: definition says {a}, basis coordinates say {b}, derivation side says {c}"
            )
        counts["members" if a else "non_members"] += 1
    return counts


def two_form_with_hyperplane(omega: LogForm, alpha: Poly) -> TwoForm:
    return TwoForm.wedge(LogForm.differential(omega.datum, alpha), omega)


__all__ = [
    "Membership",
    "compare_membership_oracles",
    "eta_basis",
    "istar",
    "member_der",
    "member_der_by_istar",
    "member_omega",
    "member_omega_by_basis",
    "member_omega_even",
    "omega_basis",
    "saito_ziegler",
    "two_form_with_hyperplane",
    "wedge_all",
]
