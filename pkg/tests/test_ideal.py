import random
import time

import pytest
import sympy as sp

from qubitsing.ideal import (INFINITE, Ideal, eliminate, is_groebner_basis, normal_form,
                             origin_is_isolated, quotient_dimension, singular_locus_dimension,
                             standard_monomials, truncated_local_dimension)
from qubitsing.poly import GREVLEX, LEX, Polynomial, parse_poly

V = ("w", "x", "y", "z")


def ideal(*texts, vars=V):
    return Ideal([parse_poly(t, vars) for t in texts])


def sympy_gb(texts, vars, order):
    syms = sp.symbols(vars)
    exprs = [sp.sympify(t.replace("^", "**"), locals=dict(zip(vars, syms))) for t in texts]
    return sp.groebner(exprs, *syms, order=order)


CASES = [
    (("x^3 + x*y^2", "x*y"), ("x", "y")),
    (("x^2 + y*z - 2", "x*y - z", "y^2 - x*z + 1"), ("x", "y", "z")),
    (("w*x + y*z", "x", "w", "z", "y"), V),
    (("x*y*z + w*x + w*y + w*z", "x + y + z", "y*z + w", "x*z + w", "x*y + w"), V),
    (("x^2*y - 3*y + 1", "x*y^2 - x", "x^3 - y"), ("x", "y")),
]


@pytest.mark.parametrize("texts, vars", CASES)
@pytest.mark.parametrize("order, sp_order", [(GREVLEX, "grevlex"), (LEX, "lex")])
def test_reduced_basis_matches_sympy(texts, vars, order, sp_order):
    ours = Ideal([parse_poly(t, vars, order) for t in texts]).groebner(order)
    theirs = sympy_gb(texts, vars, sp_order)
    syms = sp.symbols(vars)
    ours_set = {sp.expand(sp.sympify(str(g.monic()).replace("^", "**"),
                                     locals=dict(zip(vars, syms)))) for g in ours}
    theirs_set = {sp.expand(g / sp.Poly(g, *syms).terms(order=sp_order)[0][1])
                  for g in theirs.exprs}
    assert ours_set == theirs_set
    assert is_groebner_basis(ours)


def test_contains_and_normal_form():
    i = ideal("x^2 - y", "y^2 - 1", vars=("x", "y"))
    assert i.contains(parse_poly("x^4 - 1", ("x", "y")))
    assert not i.contains(parse_poly("x - 1", ("x", "y")))
    nf = normal_form(parse_poly("x^3", ("x", "y")), i.groebner())
    assert str(nf) == "x*y"


def test_unit_ideal():
    assert ideal("x", "x - 1", vars=("x",)).is_unit()


def test_elimination_twisted_cubic():
    vars = ("t", "x", "y", "z")
    i = ideal("x - t", "y - t^2", "z - t^3", vars=vars)
    e = eliminate(i, ["t"])
    assert e.vars == ("x", "y", "z")
    for text in ("y - x^2", "z - x^3", "x*z - y^2"):
        assert e.contains(parse_poly(text, e.vars))


def test_quotient_dimension():
    d4 = ideal("3*x^2 + y^2", "2*x*y", vars=("x", "y"))
    assert quotient_dimension(d4) == 4
    assert set(standard_monomials(d4)) == {(0, 0), (0, 1), (0, 2), (1, 0)}
    assert quotient_dimension(ideal("x*y", vars=("x", "y"))) == INFINITE
    assert quotient_dimension(ideal("1", vars=("x",))) == 0


def test_truncated_local_dimension_d4():
    res = truncated_local_dimension(ideal("3*x^2 + y^2", "2*x*y", vars=("x", "y")))
    assert res.dims == (1, 3, 4, 4)
    assert res.stabilized and res.value == 4


def test_truncated_local_dimension_ignores_distant_points():
    # x^2 - x has a point at 1 as well; only the origin counts
    res = truncated_local_dimension(ideal("x^2 - x", "y^2", vars=("x", "y")))
    assert res.value == 2


def test_truncated_local_dimension_nonisolated():
    f = parse_poly("w*x*y*z", V)
    t0 = time.perf_counter()
    res = truncated_local_dimension(Ideal(f.gradient()), cutoff=6)
    assert not res.stabilized and res.value is None
    assert res.dims == tuple(sorted(res.dims)) and res.dims[-1] > res.dims[-2]
    assert time.perf_counter() - t0 < 5


def test_origin_isolation():
    f = parse_poly("w*x*y*z", V)
    assert not origin_is_isolated(Ideal(f.gradient()))
    g = parse_poly("x^3 + x*y^2 + z^2 + w^2", V)
    assert origin_is_isolated(Ideal(g.gradient()))
    # a line through the origin plus an embedded point
    assert not origin_is_isolated(ideal("x*y", "x^2", vars=("x", "y")))


def test_singular_locus_dimension():
    assert singular_locus_dimension(ideal("x*y", "x*z", vars=("x", "y", "z"))) == 2
    assert singular_locus_dimension(ideal("x", "y", vars=("x", "y", "z"))) == 1
    assert singular_locus_dimension(ideal("x", "y - 1", vars=("x", "y"))) == 0
    assert singular_locus_dimension(ideal("1", vars=("x",))) == -1


def test_random_ideals_basis_property():
    rng = random.Random(9)
    vars = ("x", "y", "z")
    for _ in range(5):
        gens = []
        for _ in range(3):
            terms = {tuple(rng.randint(0, 2) for _ in vars): rng.randint(-4, 4) for _ in range(3)}
            gens.append(Polynomial(vars, terms))
        gens = [g for g in gens if g]
        if gens:
            i = Ideal(gens)
            gb = i.groebner()
            assert is_groebner_basis(gb)
            assert all(i.contains(g) for g in gens)
