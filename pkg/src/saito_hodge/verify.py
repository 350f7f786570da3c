"""The verification suite: named checks over one datum, assembled into a Report."""
from __future__ import annotations

import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable

from . import matrices as mx
from .catalog import builtin, is_invariant
from .errors import SaitoHodgeError, StructureViolation
from .expr import parse_value
from .forms import LogDer, istar
from .hodge import (
    hodge_decompose,
    invariant_form_suite,
    nabla_d_inverse,
    verify_free_basis_over_r,
    verify_invariant_parts_equal,
)
from .logmodules import (
    compare_membership_oracles,
    eta_basis,
    member_der,
    member_omega,
    omega_basis,
    saito_ziegler,
)
from .relations import verify_commu, verify_deri, verify_relation1
from .report import CheckRecord, Report

GOLDEN_FORM = "(x^4+y^4)*(dx/x + dy/y)"
GOLDEN_LEVELS = {-1: ["-8*P1^3", "8/3*P1^2"], 0: ["-4*P1", "2"]}
# positive R_m cross-checks go through J(D^k x), which grows quickly
POSITIVE_CROSSCHECK_MAX = 3


@dataclass(frozen=True)
class Check:
    check_id: str
    anchor: str
    run: Callable[[], dict]


def thread_count() -> int:
    try:
        return max(1, int(os.environ.get("SAITO_HODGE_THREADS", "1")))
    except ValueError:
        return 1


# -- individual checks -------------------------------------------------------------


def _det_R(datum, m):
    return {"c": mx.check_det_R(datum.family, m)}


def _crosscheck_R(datum, m):
    datum.family.crosscheck_R(m)
    return {"route": "recursion" if m < 0 else "closed form"}


def _dg(datum):
    mx.check_DG(datum.family)
    return {"det": mx.constant_det(datum.family.DG)}


def _bk(datum, k):
    mx.check_Bk(datum.family, k)
    return {"det": mx.constant_det(datum.family.Bk(k))}


def _inductive(datum, k):
    mx.check_inductive(datum.family, k)
    return {"identities": 5}


def _y(datum, k):
    mx.check_Y(datum.family, k)
    return {"identities": 2}


def _bases_membership(datum, m):
    for j, w in enumerate(omega_basis(m, datum)):
        res = member_omega(w, -m)
        if not res:
            raise StructureViolation(f"omega_{j + 1}^({m}) not in Omega(A, {-m}): {res.reason}")
    for j, t in enumerate(eta_basis(m, datum)):
        res = member_der(t, m)
        if not res:
            raise StructureViolation(f"eta_{j + 1}^({m}) not in D(A, {m}): {res.reason}")
    degs = [w.degree() for w in omega_basis(m, datum)]
    if m % 2:
        k = (m - 1) // 2
        expect = [e + k * datum.coxeter_number for e in datum.exponents]
        if degs != expect:
            raise StructureViolation(f"degrees of omega^({m}) are {degs}, expected {expect}")
    return {"degrees": degs}


def _saito_ziegler(datum, m):
    res = saito_ziegler(omega_basis(-m, datum), m)
    if not res:
        raise StructureViolation(res.reason)
    return {"wedge_constant": res.details["constant"]}


def _oracles(datum, m, seed):
    return compare_membership_oracles(m, datum, 25, seed)


def _parts(datum, k, seed):
    return verify_invariant_parts_equal(k, datum, 25, seed).certificate


def _free(datum, k):
    return verify_free_basis_over_r(k, datum).certificate


def _nabla_roundtrip(datum, seed):
    suite = invariant_form_suite(datum, 20, seed)
    for i, w in enumerate(suite):
        if nabla_d_inverse(w).nabla_d() != w:
            raise StructureViolation(f"suite form {i}: nabla_D(nabla_D^-1 w) != w")
        if nabla_d_inverse(w.nabla_d()) != w:
            raise StructureViolation(f"suite form {i}: nabla_D^-1(nabla_D w) != w")
    theta = LogDer.euler(datum)
    pre = nabla_d_inverse(theta)
    if pre.nabla_d() != theta:
        raise StructureViolation("nabla_D(nabla_D^-1 theta_E) != theta_E")
    return {"forms": len(suite), "derivations": 1}


def _decomposition_T(datum, seed):
    suite = invariant_form_suite(datum, 6, seed + 1)
    for i, w in enumerate(suite):
        dec = hodge_decompose(w)
        if not dec.coefficients_in_T():
            raise StructureViolation(f"suite form {i}: a coefficient is not in T")
    return {"forms": len(suite)}


def _golden(datum):
    w = parse_value(GOLDEN_FORM, datum)
    dec = hodge_decompose(w)
    got = dec.as_strings()
    if got != GOLDEN_LEVELS:
        raise StructureViolation(f"levels {got} differ from {GOLDEN_LEVELS}")
    if not dec.residual.is_zero():
        raise StructureViolation("nonzero residual")
    return {"levels": {str(k): v for k, v in got.items()}}


def _relation(fn, datum, k):
    return fn(k, datum).certificate


def _istar(datum, m):
    for w, t in zip(omega_basis(m, datum), eta_basis(m, datum)):
        if istar(w) != t:
            raise StructureViolation(f"I*(omega^({m})) != eta^({m})")
    return {}


def _invariance(datum, k):
    for j, w in enumerate(omega_basis(2 * k + 1, datum)):
        if not is_invariant(w, datum):
            raise StructureViolation(f"omega_{j + 1}^({2 * k + 1}) is not W-invariant")
    return {}


# -- suite assembly -------------------------------------------------------------------


def build_checks(datum, k_min: int, k_max: int, seed: int = 0, relations_only: bool = False) -> list[Check]:
    """All checks for the index window k in [k_min, k_max] (m in [2k_min-1, 2k_max+1])."""
    if k_min > k_max:
        raise ValueError("k_min must not exceed k_max")
    out: list[Check] = []

    def add(cid, anchor, fn):
        out.append(Check(cid, anchor, fn))

    ks = range(k_min, k_max + 1)
    rel_ks = [k for k in ks if k >= 0]
    for k in rel_ks:
        add(f"relations/relation1/k={k}", "xi frames equal signed eta frames times B^-1 B^(k+1)",
            lambda k=k: _relation(verify_relation1, datum, k))
        add(f"relations/deri/k={k}", "covariant derivatives of nabla_D^-k theta_E match eta frames",
            lambda k=k: _relation(verify_deri, datum, k))
        add(f"relations/commu/k={k}", "covariant derivatives of nabla_D^k dP_1 match omega frames",
            lambda k=k: _relation(verify_commu, datum, k))
    if relations_only:
        return out

    ms = range(2 * k_min - 1, 2 * k_max + 2)
    add("matrices/DG", "D[G] polynomial, D^2[G] = 0, det D[G] constant", lambda: _dg(datum))
    for m in ms:
        add(f"matrices/det-R/m={m}", "det R_m = c Q^m", lambda m=m: _det_R(datum, m))
        if m <= POSITIVE_CROSSCHECK_MAX:
            add(f"matrices/crosscheck-R/m={m}", "R_m agrees with the independent construction",
                lambda m=m: _crosscheck_R(datum, m))
    for k in ks:
        add(f"matrices/Bk/k={k}", "B^(k) in GL(T); B^(k+1) - B^(k) = D[G]; B^(k) = -(B^(1-k))^T",
            lambda k=k: _bk(datum, k))
        add(f"matrices/inductive/k={k}", "recursions among R_{2k-1}, R_{2k}, R_{2k+1}",
            lambda k=k: _inductive(datum, k))
        add(f"matrices/Y/k={k}", "pairing matrices Y_{2k}, Y_{2k-1}", lambda k=k: _y(datum, k))
        add(f"logmodules/invariance/k={k}", "omega^(2k+1) is W-invariant", lambda k=k: _invariance(datum, k))
        add(f"hodge/free-basis/k={k}", "B_{-k} is a basis of Omega(A, 2k-1)^W over R",
            lambda k=k: _free(datum, k))
    for m in range(2 * k_min, 2 * k_max + 1):
        add(f"logmodules/bases/m={m}", "omega^(m) in Omega(A, -m), eta^(m) in D(A, m)",
            lambda m=m: _bases_membership(datum, m))
        add(f"logmodules/istar/m={m}", "I*(omega^(m)) = eta^(m)", lambda m=m: _istar(datum, m))
    for m in range(0, 2 * k_max + 1):
        add(f"logmodules/saito-ziegler/m={m}", "omega^(-m) certified as an S-basis of Omega(A, m)",
            lambda m=m: _saito_ziegler(datum, m))
    for m in (-3, -2, -1, 1, 2, 3):
        add(f"logmodules/oracles/m={m}", "membership: definition, basis coordinates, derivation side agree",
            lambda m=m: _oracles(datum, m, seed))
    for k in (0, 1, 2):
        if k_min <= k <= k_max:
            add(f"hodge/invariant-parts/k={k}", "symmetrized Omega(A, 2k) lies in Omega(A, 2k-1)",
                lambda k=k: _parts(datum, k, seed))
    add("hodge/nabla-inverse", "nabla_D and its inverse compose to the identity", lambda: _nabla_roundtrip(datum, seed))
    add("hodge/coefficients-in-T", "decomposition coefficients are D-killed and W-invariant",
        lambda: _decomposition_T(datum, seed))
    if datum == builtin("B2"):
        add("hodge/golden-B2", "decomposition of (x^4+y^4)(dx/x+dy/y)", lambda: _golden(datum))
    return out


def _run_one(check: Check) -> CheckRecord:
    start = time.perf_counter()
    try:
        cert = check.run() or {}
        ok = True
    except (SaitoHodgeError, ArithmeticError, ValueError) as exc:
        cert = {"error": type(exc).__name__, "message": str(exc)}
        ok = False
    return CheckRecord(check.check_id, check.anchor, ok, cert, time.perf_counter() - start)


def run_checks(datum, checks: list[Check], seed: int = 0, parameters: dict | None = None,
               threads: int | None = None, progress=None) -> Report:
    threads = threads or thread_count()
    report = Report(datum.name, datum.fingerprint, seed, parameters or {})
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            for rec in pool.map(_run_one, checks):
                report.records.append(rec)
                if progress:
                    progress(rec)
    else:
        for c in checks:
            rec = _run_one(c)
            report.records.append(rec)
            if progress:
                progress(rec)
    return report


def run_suite(datum, k_min: int = -2, k_max: int = 2, seed: int = 0, threads: int | None = None,
              progress=None) -> Report:
    checks = build_checks(datum, k_min, k_max, seed)
    return run_checks(datum, checks, seed, {"k_min": k_min, "k_max": k_max}, threads, progress)
