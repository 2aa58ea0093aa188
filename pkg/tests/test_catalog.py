import random

import pytest

from qubitsing.catalog import (UnknownFamilyError, catalog_instantiate, draw_parameters, families,
                               family, load_catalog, parse_condition, parse_table_locus, table_loci,
                               table_rows)
from qubitsing.scalar import SQRT2, Scalar, parse_scalar
from qubitsing.states import FourQubitState, ZeroStateError


def test_catalog_completeness():
    assert len(families()) == 9
    assert len(families(2)) == 3 and len(families(3)) == 6
    assert len(table_loci(4)) == 14
    assert len(table_loci(5)) == 36
    assert load_catalog()["version"] == 1


def test_gabcd_instance():
    st = catalog_instantiate("G_abcd", (1, 2, 3, 4))
    half = lambda t: parse_scalar(t)  # noqa: E731
    assert st["0000"] == st["1111"] == half("5/2")
    assert st["0011"] == st["1100"] == half("-3/2")
    assert st["0101"] == st["1010"] == half("5/2")
    assert st["0110"] == st["1001"] == half("-1/2")


def test_l07_is_example_22():
    assert catalog_instantiate("L_0_7+1") == FourQubitState.basis("0000", "1011", "1101", "1110")
    assert family("L_0_7+1").known_singular_points == ("0111",)


def test_errors():
    with pytest.raises(UnknownFamilyError):
        catalog_instantiate("L_nope")
    with pytest.raises(ZeroStateError):
        catalog_instantiate("G_abcd", (0, 0, 0, 0))


def test_lab3_scaled_form_is_projectively_the_printed_form():
    vals = {"a": 3, "b": -5}
    scaled = catalog_instantiate("L_ab3", vals)
    printed = catalog_instantiate("L_ab3", vals, printed=True)
    assert scaled == printed.scale(SQRT2)
    assert printed["0001"] == parse_scalar("1/2*i*s")


def test_condition_parsing():
    params = ("a", "b", "c")
    loci = parse_condition("a=+-b=+-c", params)
    assert len(loci) == 4
    assert {l.describe() for l in loci} == {"a=c, b=c", "a=-c, b=-c", "a=-c, b=c", "a=c, b=-c"}
    assert [l.describe() for l in parse_condition("a=c=0 or b=c=0", params)] == ["a=0, c=0", "b=0, c=0"]
    assert parse_condition("generic", params)[0].free == params
    with pytest.raises(ValueError):
        parse_condition("a=q", params)


def test_table_locus_parsing():
    locus = parse_table_locus("{a = -c, b = c, c = c, d = -c}")
    assert locus.free == ("c",)
    vals = locus.values({"c": Scalar(2)})
    assert [vals[p] for p in "abcd"] == [Scalar(-2), Scalar(2), Scalar(2), Scalar(-2)]
    with pytest.raises(ValueError):
        parse_table_locus("{a = b, b = c, c = c, d = d}")


def test_implication():
    gen = parse_condition("generic", "abc")[0]
    a0 = parse_condition("a=0", "abc")[0]
    ab0 = parse_condition("a=b=0", "abc")[0]
    assert ab0.implies(a0) and not a0.implies(ab0)
    assert a0.implies(gen)


def test_generic_draws_avoid_every_special_locus():
    rng = random.Random(0)
    entry = family("G_abcd")
    specials = list(table_loci(4)) + list(table_loci(5))
    for _ in range(20):
        vals = draw_parameters(entry, parse_condition("generic", entry.parameters)[0], rng)
        assert not any(l.contains(vals) for l in specials)


def test_special_draws_hit_only_their_locus():
    for row in table_rows(4, draws=3, seed=1):
        for vals in row.draws:
            assert row.locus.contains(vals)
            others = [l for l in table_loci(4) + table_loci(5) if not row.locus.implies(l)]
            assert not any(l.contains(vals) for l in others)


def test_table_rows_are_deterministic():
    a = [(r.label, [sorted((k, str(v)) for k, v in d.items()) for d in r.draws]) for r in table_rows(3, seed=4)]
    b = [(r.label, [sorted((k, str(v)) for k, v in d.items()) for d in r.draws]) for r in table_rows(3, seed=4)]
    assert a == b
