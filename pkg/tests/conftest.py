"""Shared fixtures: sympy conversions (the independent oracle) and hypothesis strategies."""
from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from saito_hodge.catalog import builtin
from saito_hodge.kernel import LocQ, Poly

settings.register_profile(
    "default", deadline=None, suppress_health_check=[HealthCheck.too_slow], derandomize=True
)
settings.load_profile("default")


def sym_vars(n):
    return sp.symbols(f"v0:{n}")


def poly_to_sympy(p: Poly, xs):
    expr = sp.Integer(0)
    for exps, c in p.terms():
        term = sp.Rational(c.numerator, c.denominator)
        for x, e in zip(xs, exps):
            term *= x**e
        expr += term
    return expr


def sympy_to_poly(expr, xs) -> Poly:
    sp_poly = sp.Poly(sp.expand(expr), *xs)
    return Poly.from_terms(
        {m: Fraction(int(c.p), int(c.q)) for m, c in sp_poly.terms()}, len(xs)
    )


def locq_to_sympy(f: LocQ, xs):
    q = poly_to_sympy(f.ring.Q, xs)
    return poly_to_sympy(f.num, xs) / q**f.qexp


def same_rational_function(a, b) -> bool:
    return sp.cancel(sp.together(a - b)) == 0


@pytest.fixture(scope="session")
def B2():
    return builtin("B2")


@pytest.fixture(scope="session")
def A2():
    return builtin("A2")


coeffs = st.fractions(min_value=-5, max_value=5, max_denominator=4)


@st.composite
def polys(draw, nvars=2, max_degree=3, max_terms=4):
    n = draw(st.integers(0, max_terms))
    terms = {}
    for _ in range(n):
        exps = tuple(draw(st.integers(0, max_degree)) for _ in range(nvars))
        if sum(exps) <= max_degree:
            terms[exps] = draw(coeffs)
    return Poly.from_terms(terms, nvars)


@st.composite
def linear_forms(draw, nvars=2):
    c = [draw(st.integers(-3, 3)) for _ in range(nvars)]
    if not any(c):
        c[0] = 1
    return Poly.linear(c)


def pytest_terminal_summary(terminalreporter):
    import sys

    module = sys.modules.get("tests.test_acceptance")
    if module is None or not module.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n, title in module.TITLES.items():
        cases = module.RESULTS.get(n)
        if not cases:
            terminalreporter.write_line(f"criterion {n:2d}: NOT RUN  {title}")
            continue
        failed = [c for c, ok in cases if not ok]
        status = "PASS" if not failed else "FAIL"
        detail = f"({len(cases)} cases)" if not failed else f"(failed: {', '.join(failed)})"
        terminalreporter.write_line(f"criterion {n:2d}: {status}  {title}  {detail}")
