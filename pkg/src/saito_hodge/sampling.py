"""Seeded random polynomials and forms for property checks."""
from __future__ import annotations

import random
from itertools import combinations_with_replacement

from .forms import LogForm
from .kernel import Poly

COEFF_RANGE = (-3, 3)


def monomials(nvars: int, degree: int) -> list[tuple[int, ...]]:
    """Exponent vectors of total degree ``degree``."""
    out = []
    for combo in combinations_with_replacement(range(nvars), degree):
        e = [0] * nvars
        for i in combo:
            e[i] += 1
        out.append(tuple(e))
    return out


def random_poly(rng: random.Random, nvars: int, max_degree: int = 3, support: int = 3,
                homogeneous: int | None = None) -> Poly:
    """A polynomial with at most ``support`` terms and coefficients in [-3, 3]."""
    if homogeneous is not None:
        pool = monomials(nvars, homogeneous)
    else:
        pool = [e for d in range(max_degree + 1) for e in monomials(nvars, d)]
    picks = rng.sample(pool, min(support, len(pool)))
    lo, hi = COEFF_RANGE
    return Poly.from_terms([(e, rng.randint(lo, hi)) for e in picks], nvars)


def random_combination(rng: random.Random, basis, max_degree: int = 2, support: int = 2) -> LogForm:
    """sum_j f_j b_j with random polynomial f_j."""
    basis = list(basis)
    datum = basis[0].datum
    acc = type(basis[0]).zero(datum)
    for b in basis:
        f = random_poly(rng, datum.rank, max_degree, support)
        if not f.is_zero():
            acc = acc + b * f
    return acc


def random_regular_form(rng: random.Random, datum, max_degree: int = 3, support: int = 3) -> LogForm:
    return LogForm(datum, [random_poly(rng, datum.rank, max_degree, support) for _ in range(datum.rank)])
