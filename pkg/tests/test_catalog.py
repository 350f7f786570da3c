from fractions import Fraction

import pytest

from saito_hodge.catalog import (
    BUILTIN_NAMES,
    CoxeterDatum,
    builtin,
    dump_datum,
    get_datum,
    is_invariant,
    load_datum,
    reynolds,
)
from saito_hodge.errors import ParseError, UnknownType, ValidationError
from saito_hodge.kernel import Poly

ORDERS = {"A2": 6, "B2": 8, "G2": 12, "A3": 24, "B3": 48, "B4": 384, "D4": 192}
DEGREES = {
    "A2": (2, 3), "B2": (2, 4), "G2": (2, 6), "A3": (2, 3, 4),
    "B3": (2, 4, 6), "B4": (2, 4, 6, 8), "D4": (2, 4, 4, 6),
}


@pytest.mark.parametrize("name", BUILTIN_NAMES)
def test_builtin_invariants(name):
    d = builtin(name)
    assert len(d.group()) == ORDERS[name]
    assert d.degrees == DEGREES[name]
    assert sum(d.exponents) == len(d.hyperplanes)
    assert d.coxeter_number == DEGREES[name][-1]
    for g in d.group():
        assert all(p.pullback(g) == p for p in d.invariants)


def test_b3_has_nine_hyperplanes():
    assert len(builtin("B3").hyperplanes) == 9


def test_names_are_case_insensitive_and_unknown_names_fail():
    assert builtin("b2") == builtin("B2")
    with pytest.raises(UnknownType):
        builtin("E8")


@pytest.mark.parametrize("name", BUILTIN_NAMES)
def test_file_round_trip(name):
    d = builtin(name)
    again = load_datum(dump_datum(d))
    assert again == d and again.fingerprint == d.fingerprint


def test_packaged_datum_files_match_builtins():
    from importlib.resources import files

    for name in ("A2", "B2", "G2"):
        text = files("saito_hodge").joinpath(f"data/{name.lower()}.datum").read_text()
        assert load_datum(text) == builtin(name)


def test_get_datum_reads_files(tmp_path):
    path = tmp_path / "b2.datum"
    path.write_text(dump_datum(builtin("B2")))
    assert get_datum(str(path)) == builtin("B2")


def _b2_fields(**changes):
    d = builtin("B2")
    fields = dict(
        name="B2", var_names=d.var_names, gram=d.gram, invariants=d.invariants,
        hyperplanes=d.hyperplanes, reflections=d.reflections,
    )
    fields.update(changes)
    return fields


@pytest.mark.parametrize(
    "change, message",
    [
        (lambda d, x, y: {"gram": ((1, 1), (0, 1))}, "symmetric"),
        (lambda d, x, y: {"gram": ((1, 0), (0, -1))}, "positive definite"),
        (lambda d, x, y: {"invariants": (d.invariants[0], d.invariants[0] ** 2)}, "dependent"),
        (lambda d, x, y: {"invariants": (d.invariants[0], x**4 + y)}, "homogeneous"),
        (lambda d, x, y: {"invariants": (d.invariants[0], x**4 + 2 * y**4)}, "invariant"),
        (lambda d, x, y: {"hyperplanes": d.hyperplanes[:3] + (x + 2 * y,)}, "Q mismatch"),
        (lambda d, x, y: {"hyperplanes": d.hyperplanes[:3] + (2 * d.hyperplanes[0],)}, "proportional"),
        (lambda d, x, y: {"reflections": (((1, 0), (0, 1)), d.reflections[1])}, "not a reflection"),
    ],
)
def test_validation_errors(change, message):
    d = builtin("B2")
    x, y = Poly.gens(2)
    with pytest.raises(ValidationError, match=message):
        CoxeterDatum(**_b2_fields(**change(d, x, y)))


def test_load_errors_report_positions():
    good = dump_datum(builtin("B2"))
    with pytest.raises(ParseError, match="unknown section 'gramm'"):
        load_datum(good.replace("gram:", "gramm:"))
    with pytest.raises(ParseError, match="missing section 'gram'"):
        load_datum(good.replace("gram:\n  1 0\n  0 1\n", ""))
    bad = good.replace("1/2*x^2 + 1/2*y^2", "1/2*x^2 + * y^2")
    assert bad != good
    with pytest.raises(ParseError) as err:
        load_datum(bad)
    assert (err.value.line, err.value.column) == (8, 13)
    with pytest.raises(ParseError, match="not a rational"):
        load_datum(good.replace("gram:\n  1 0", "gram:\n  1 0.5"))


def test_reynolds_projects_onto_invariants():
    d = builtin("B2")
    x, y = Poly.gens(2)
    r = reynolds(x**4 + x * y**3, d)
    assert r == x**4 * Fraction(1, 2) + y**4 * Fraction(1, 2)
    assert is_invariant(r, d)
    assert not is_invariant(x**4, d)
