"""The primitive derivation and the matrix family J(P), G, B, B^(k), R_m, Y_m of a datum."""
from __future__ import annotations

import os
import threading

from .errors import CrossCheckFailure, StructureViolation
from .kernel import LocQ, Matrix

# Recompute every cache hit once and compare (test mode).
VERIFY_CACHE = os.environ.get("SAITO_HODGE_VERIFY_CACHE", "") not in ("", "0")


class PrimitiveDerivation:
    """D = d/dP_l written in x-coordinates: D = sum_i D(x_i) d/dx_i.

    The values D(x_i) form the last column of J(P)^{-T}.
    """

    def __init__(self, datum, jacobian_inverse: Matrix):
        self.datum = datum
        ring = datum.ring
        self.dX = jacobian_inverse.T.col(datum.rank - 1)
        self._e = max(c.qexp for c in self.dX)
        self._nums = [c.numerator_over(self._e) for c in self.dX]
        # D(Q) * Q^(e+1), used by the quotient rule
        self._dq = sum(
            (ring.q_partial(i) * c for i, c in enumerate(self._nums)),
            ring.zero().num,
        )

    def __call__(self, f: LocQ) -> LocQ:
        ring = self.datum.ring
        if f.is_zero():
            return f
        n, e = f.num, f.qexp
        grad = sum((n.diff(i) * c for i, c in enumerate(self._nums)), ring.zero().num)
        if e == 0:
            return ring(grad, self._e)
        num = grad * ring.Q - n.scale(e) * self._dq
        return ring(num, e + 1 + self._e)

    def matrix(self, m: Matrix) -> Matrix:
        """D[M], entrywise."""
        return m.map(self)


class MatrixFamily:
    """Lazily computed, cached matrices attached to one datum.

    Production route for R_m: m < 0 odd by iterating D on J(P); m < 0 even
    as R_{m-1} D[J(P)]^{-1}; m > 0 by the recursions from R_0 = I, R_1 = J(P).
    """

    def __init__(self, datum):
        self.datum = datum
        self.ring = datum.ring
        self.l = datum.rank
        self._lock = threading.Lock()
        self._cache: dict = {}
        self._verified: set = set()

    # -- cache plumbing -------------------------------------------------------
    def _cached(self, key, compute):
        with self._lock:
            hit = key in self._cache
            value = self._cache.get(key)
        if hit:
            if VERIFY_CACHE and key not in self._verified:
                fresh = compute()
                if fresh != value:
                    raise CrossCheckFailure(f"cached {key} differs from recomputation")
                with self._lock:
                    self._verified.add(key)
            return value
        value = compute()
        with self._lock:
            # a concurrent computation of the same key yields an equal value
            return self._cache.setdefault(key, value)

    # -- basic matrices ----------------------------------------------------------
    @property
    def A(self) -> Matrix:
        return self.datum.gram_matrix

    @property
    def A_inv(self) -> Matrix:
        return self.datum.gram_inverse

    @property
    def J(self) -> Matrix:
        """J(P) = [dP_j / dx_i]."""
        def build():
            P = self.datum.invariants
            return Matrix([[p.diff(i) for p in P] for i in range(self.l)], self.ring)

        return self._cached("J", build)

    @property
    def J_inv(self) -> Matrix:
        return self._cached("J_inv", lambda: self.J.inverse())

    @property
    def D(self) -> PrimitiveDerivation:
        return self._cached("D", lambda: PrimitiveDerivation(self.datum, self.J_inv))

    @property
    def DJ(self) -> Matrix:
        """D[J(P)] = R_{-1}."""
        return self._cached("DJ", lambda: self.D.matrix(self.J))

    @property
    def G(self) -> Matrix:
        return self._cached("G", lambda: self.J.T @ self.A @ self.J)

    @property
    def DG(self) -> Matrix:
        return self._cached("DG", lambda: self.D.matrix(self.G))

    @property
    def G_inv(self) -> Matrix:
        return self._cached("G_inv", lambda: self.G.inverse())

    @property
    def B(self) -> Matrix:
        return self._cached("B", lambda: self.J.T @ self.A @ self.DJ)

    @property
    def B_inv(self) -> Matrix:
        return self._cached("B_inv", lambda: self.B.inverse())

    def Bk(self, k: int) -> Matrix:
        """B^(k) = k B + (k-1) B^T."""
        return self._cached(("Bk", k), lambda: self.B * k + self.B.T * (k - 1))

    def Bk_inv(self, k: int) -> Matrix:
        return self._cached(("Bk_inv", k), lambda: self.Bk(k).inverse())

    @property
    def DJ_inv(self) -> Matrix:
        """D[J(P)]^{-1} = B^{-1} J(P)^T A."""
        return self._cached("DJ_inv", lambda: self.B_inv @ self.J.T @ self.A)

    def Dk_x(self, k: int) -> tuple[LocQ, ...]:
        """The vector D^k[x] = (D^k x_1, ..., D^k x_l)."""
        if k == 0:
            return tuple(self.ring.var(i) for i in range(self.l))
        return self._cached(("Dkx", k), lambda: tuple(self.D(f) for f in self.Dk_x(k - 1)))

    def JDk(self, k: int) -> Matrix:
        """J(D^k[x]) = [d D^k(x_j) / dx_i]."""
        def build():
            v = self.Dk_x(k)
            return Matrix([[v[j].partial(i) for j in range(self.l)] for i in range(self.l)], self.ring)

        return self._cached(("JDk", k), build)

    def JDk_inv(self, k: int) -> Matrix:
        return self._cached(("JDk_inv", k), lambda: self.JDk(k).inverse())

    # -- R_m ------------------------------------------------------------------------
    def R(self, m: int) -> Matrix:
        return self._cached(("R", m), lambda: self._R_production(m))

    def _R_production(self, m: int) -> Matrix:
        if m == 0:
            return Matrix.identity(self.ring, self.l)
        if m == 1:
            return self.J
        if m == -1:
            return self.DJ
        if m < 0 and m % 2:
            return self.D.matrix(self.R(m + 2))
        if m % 2 == 0:
            return self.R(m - 1) @ self.DJ_inv
        k = (m - 1) // 2
        return self.R(m - 1) @ self.J @ self.Bk_inv(k + 1) @ self.B

    def R_closed(self, m: int) -> Matrix:
        """R_m from the closed-form definitions (the cross-check oracle)."""
        def build():
            if m <= 1 and m % 2:
                k = (1 - m) // 2
                out = self.J
                for _ in range(k):
                    out = self.D.matrix(out)
                return out
            if m <= 0:
                k = -m // 2
                return self.R_closed(-2 * k - 1) @ self.DJ.inverse()
            sign = -1 if (m // 2 if m % 2 == 0 else (m + 1) // 2) % 2 else 1
            if m % 2 == 0:
                return self.JDk_inv(m // 2) * sign
            return (self.JDk_inv((m + 1) // 2) @ self.DJ) * sign

        return self._cached(("R_closed", m), build)

    def R_recursive(self, m: int) -> Matrix:
        """R_m by the recursions alone, walking from R_0 = I and R_1 = J(P)."""
        def build():
            if m in (0, 1):
                return self._R_production(m)
            if m > 1:
                if m % 2 == 0:
                    return self.R_recursive(m - 1) @ self.B_inv @ self.J.T @ self.A
                k = (m - 1) // 2
                return self.R_recursive(m - 1) @ self.J @ self.Bk_inv(k + 1) @ self.B
            if m % 2:
                return self.R_recursive(m + 1) @ self.DJ
            k = m // 2
            return self.R_recursive(m + 1) @ self.B_inv @ self.Bk(k + 1) @ self.J_inv

        return self._cached(("R_rec", m), build)

    def R_inv(self, m: int) -> Matrix:
        return self._cached(("R_inv", m), lambda: self.R(m).inverse())

    def crosscheck_R(self, m: int) -> None:
        """Compare the production R_m with the independent route; raise on mismatch."""
        other = self.R_recursive(m) if m < 0 else self.R_closed(m)
        if other != self.R(m):
            raise CrossCheckFailure(f"R_{m}: closed form and recursion disagree")

    def Y(self, m: int) -> Matrix:
        """Y_m = R_{-m}^T A R_m, the pairing matrix of omega^(-m) against eta^(m)."""
        return self._cached(("Y", m), lambda: self.R(-m).T @ self.A @ self.R(m))

    def matrix_R(self, m: int, crosscheck: bool = True) -> Matrix:
        """R_m, optionally cross-checked against the second route first."""
        if crosscheck:
            self.crosscheck_R(m)
        return self.R(m)


# -- structural checks ---------------------------------------------------------------


def constant_det(m: Matrix):
    """The determinant as a nonzero rational, or None."""
    d = m.det()
    if d.is_constant() and not d.is_zero():
        return d.constant_value()
    return None


def q_power_det(m: Matrix):
    """(c, k) with det m = c Q^k, or None."""
    return m.det().unit_form()


def in_gl_T(fam: MatrixFamily, m: Matrix) -> list[str]:
    """Reasons m fails to lie in GL_l(T); empty when it does."""
    from .catalog import is_invariant

    problems = []
    if not m.is_polynomial():
        problems.append("entries are not polynomial")
    if not fam.D.matrix(m).is_zero():
        problems.append("D does not kill the entries")
    if not all(is_invariant(e, fam.datum) for r in m.rows for e in r):
        problems.append("entries are not W-invariant")
    if constant_det(m) is None:
        problems.append("determinant is not a nonzero constant")
    return problems


def check_DG(fam: MatrixFamily) -> None:
    dg = fam.DG
    if not dg.is_polynomial():
        raise StructureViolation("D[G] has non-polynomial entries")
    if not fam.D.matrix(dg).is_zero():
        raise StructureViolation("D^2[G] != 0")
    if constant_det(dg) is None:
        raise StructureViolation("det D[G] is not a nonzero constant")


def check_Bk(fam: MatrixFamily, k: int) -> None:
    problems = in_gl_T(fam, fam.Bk(k))
    if problems:
        raise StructureViolation(f"B^({k}) not in GL(T): " + "; ".join(problems))
    if fam.Bk(k + 1) - fam.Bk(k) != fam.DG:
        raise StructureViolation(f"B^({k + 1}) - B^({k}) != D[G]")
    if fam.Bk(k) != -fam.Bk(1 - k).T:
        raise StructureViolation(f"B^({k}) != -(B^({1 - k}))^T")


def check_inductive(fam: MatrixFamily, k: int) -> None:
    """The four recursive identities linking R_{2k-1}, R_{2k}, R_{2k+1}."""
    R = fam.R
    if R(2 * k) != R(2 * k - 1) @ fam.DJ.inverse():
        raise StructureViolation(f"R_{2 * k} != R_{2 * k - 1} D[J]^-1")
    if R(2 * k) != R(2 * k - 1) @ fam.B_inv @ fam.J.T @ fam.A:
        raise StructureViolation(f"R_{2 * k} != R_{2 * k - 1} B^-1 J^T A")
    if R(2 * k + 1) != R(2 * k) @ fam.J @ fam.Bk_inv(k + 1) @ fam.B:
        raise StructureViolation(f"R_{2 * k + 1} != R_{2 * k} J (B^({k + 1}))^-1 B")
    if R(2 * k + 1) != R(2 * k - 1) @ fam.B_inv @ fam.G @ fam.Bk_inv(k + 1) @ fam.B:
        raise StructureViolation(f"R_{2 * k + 1} != R_{2 * k - 1} B^-1 G (B^({k + 1}))^-1 B")
    if fam.D.matrix(R(2 * k + 1)) != R(2 * k - 1):
        raise StructureViolation(f"D[R_{2 * k + 1}] != R_{2 * k - 1}")


def check_det_R(fam: MatrixFamily, m: int):
    """Return c with det R_m = c Q^m; raise otherwise."""
    unit = q_power_det(fam.R(m))
    if unit is None or unit[1] != m:
        raise StructureViolation(f"det R_{m} is not a constant times Q^{m}")
    return unit[0]


def check_Y(fam: MatrixFamily, k: int) -> None:
    sign = -1 if k % 2 else 1
    if fam.Y(2 * k) != fam.A * sign:
        raise StructureViolation(f"Y_{2 * k} != (-1)^{k} A")
    expect = (fam.B.T @ fam.Bk_inv(k) @ fam.B) * (-sign)
    if fam.Y(2 * k - 1) != expect:
        raise StructureViolation(f"Y_{2 * k - 1} != (-1)^{k + 1} B^T (B^({k}))^-1 B")


def check_JDk(fam: MatrixFamily, k: int) -> int:
    """det J(D^k[x]) = c Q^{-2k}; also D[J(P)] = -J(D[x]) J(P) when k == 1."""
    unit = q_power_det(fam.JDk(k))
    if unit is None or unit[1] != -2 * k:
        raise StructureViolation(f"det J(D^{k}[x]) is not a constant times Q^{-2 * k}")
    if k == 1 and fam.DJ != -(fam.JDk(1) @ fam.J):
        raise StructureViolation("D[J(P)] != -J(D[x]) J(P)")
    return unit[0]
