import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from saito_hodge.catalog import builtin
from saito_hodge.errors import PreconditionViolated
from saito_hodge.forms import LogDer, LogForm, istar
from saito_hodge.logmodules import (
    compare_membership_oracles,
    eta_basis,
    member_der,
    member_der_by_istar,
    member_omega,
    member_omega_by_basis,
    member_omega_even,
    omega_basis,
    saito_ziegler,
)
from tests.conftest import polys


def form(datum, *coeffs, qexp=0):
    return LogForm(datum, [datum.ring(c, qexp) for c in coeffs])


def test_logarithmic_differentials_have_simple_poles(B2):
    for alpha in B2.hyperplanes:
        w = LogForm.differential(B2, alpha) / B2.ring(alpha)
        assert member_omega(w, 1)
        assert member_omega_by_basis(w, 1)
        assert not member_omega(w, 0)


def test_regular_forms(B2):
    x, y = B2.ring.var(0), B2.ring.var(1)
    dx = LogForm(B2, [1, 0])
    assert member_omega(dx, 0)
    assert not member_omega(dx, -1)
    dP1 = LogForm.differential(B2, B2.invariants[0])
    assert member_omega(dP1, -1) and member_omega_by_basis(dP1, -1)
    assert member_omega(dx * (x * y * (x - y) * (x + y)), -1)


def test_pole_order_rejection_names_the_reason(B2):
    w = form(B2, 1, 0, qexp=2)
    res = member_omega(w, 1)
    assert not res and "pole order 2" in res.reason


def test_divisibility_failure_names_a_hyperplane(B2):
    w = form(B2, 1, 0, qexp=1)
    res = member_omega(w, 1)
    assert not res and res.hyperplane is not None


@pytest.mark.parametrize("name", ["A2", "B2", "G2"])
@pytest.mark.parametrize("m", range(-3, 4))
def test_bases_are_members(name, m):
    d = builtin(name)
    for w in omega_basis(-m, d):
        assert member_omega(w, m)
    for theta in eta_basis(m, d):
        assert member_der(theta, m)
        assert member_der_by_istar(theta, m)


@pytest.mark.parametrize("name", ["A2", "B2", "G2", "A3"])
@pytest.mark.parametrize("m", range(0, 5))
def test_saito_ziegler_certifies_bases(name, m):
    d = builtin(name)
    res = saito_ziegler(omega_basis(-m, d), m)
    assert res, res.reason
    assert res.details["constant"] != 0


def test_saito_ziegler_rejects_the_wrong_index(B2):
    res = saito_ziegler(omega_basis(-1, B2), 2)
    assert not res and "expected Q^-2" in res.reason
    with pytest.raises(PreconditionViolated):
        saito_ziegler(omega_basis(-2, B2), 1)


def test_even_index_description(B2):
    for k in range(3):
        for w in omega_basis(-2 * k, B2):
            assert member_omega_even(w, k) and member_omega(w, 2 * k)
    w = omega_basis(-3, B2)[0]
    assert not member_omega_even(w, 1)


def test_euler_derivation(B2):
    theta = LogDer.euler(B2)
    assert member_der(theta, 1)
    assert not member_der(theta, 2)


@settings(max_examples=120)
@given(polys(2, max_degree=4), polys(2, max_degree=4), st.integers(0, 3), st.integers(-3, 3))
def test_membership_routes_agree_on_arbitrary_forms(p, q, e, m):
    d = builtin("B2")
    w = form(d, p, q, qexp=e)
    a = bool(member_omega(w, m))
    assert bool(member_omega_by_basis(w, m)) == a
    assert bool(member_der(istar(w), -m)) == a


@pytest.mark.parametrize("name", ["A2", "B2"])
@pytest.mark.parametrize("m", [-2, 1, 2, 3])
def test_seeded_oracle_comparison(name, m):
    counts = compare_membership_oracles(m, builtin(name), trials=25, seed=0)
    assert counts["members"] > 0 and counts["non_members"] > 0


def test_documented_membership_examples(B2):
    from saito_hodge.expr import parse_value

    assert member_omega(parse_value("(x^4+y^4)*(dx/x + dy/y)", B2), 1)
    res = member_omega(parse_value("dx/y", B2), 1)
    assert not res and res.hyperplane == B2.hyperplanes[1]
    for p in B2.invariants:
        assert member_omega(LogForm.differential(B2, p), 0)


@pytest.mark.parametrize("name", ["A2", "B2", "G2", "A3"])
def test_small_index_bases(name):
    from saito_hodge.relations import partial_P

    d = builtin(name)
    fam = d.family
    assert omega_basis(1, d) == [LogForm.differential(d, p) for p in d.invariants]
    assert omega_basis(0, d) == [LogForm.unit(d, i) for i in range(d.rank)]
    assert eta_basis(1, d) == [istar(LogForm.differential(d, p)) for p in d.invariants]
    dP = [partial_P(d, i) for i in range(d.rank)]
    for j, eta in enumerate(eta_basis(-1, d)):
        combo = LogDer.zero(d)
        for i in range(d.rank):
            combo = combo + dP[i] * fam.B[i, j]
        assert eta == combo


def test_b2_first_eta_is_euler(B2):
    assert eta_basis(1, B2)[0] == LogDer.euler(B2)


def test_istar_mixes_coordinates_for_a2(A2):
    theta = istar(LogForm.unit(A2, 1))
    assert all(not c.is_zero() for c in theta.coeffs)
