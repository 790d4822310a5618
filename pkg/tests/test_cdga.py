from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracle
from strategies import free_algebras, homogeneous, minimal_models
from fsrank.cdga import (
    AlgebraError,
    AlgebraPresentation,
    DGModel,
    DGMorphism,
    Element,
    FreeAlgebra,
    Generator,
    TableAlgebra,
    cohomology_dims,
    compose,
    identity_morphism,
    validate_morphism,
    zero_morphism,
)
from fsrank.dsl import parse_polynomial


def to_oracle_alg(alg: FreeAlgebra, diff=None) -> oracle.FreeCDGA:
    gens = [(g.name, g.degree) for g in alg.generators]
    words = {}
    for name, v in (diff or {}).items():
        words[name] = {word_of(alg, mono): c for mono, c in v.terms.items()}
    return oracle.FreeCDGA(gens, words)


def word_of(alg, mono):
    out = []
    for i, e in enumerate(mono):
        out += [alg.generators[i].name] * e
    return tuple(out)


def to_oracle_elem(alg, a: Element, o: oracle.FreeCDGA):
    return o.from_words({word_of(alg, m): c for m, c in a.terms.items()})


def test_normal_order_and_signs():
    alg = FreeAlgebra([Generator("y", 3), Generator("x", 1), Generator("a", 2)])
    assert [g.name for g in alg.generators] == ["x", "a", "y"]
    x, y, a = alg.gen("x"), alg.gen("y"), alg.gen("a")
    assert alg.multiply(y, x) == -alg.multiply(x, y)
    assert alg.multiply(a, x) == alg.multiply(x, a)
    assert not alg.multiply(x, x)
    assert alg.power(a, 3).degree == 6


def test_parse_polynomial_and_format():
    alg = FreeAlgebra([Generator("x", 1), Generator("y", 1), Generator("a", 2)])
    p = parse_polynomial("y*x + 3/2*x*y - a^0*x*y", alg)
    assert p == alg.multiply(alg.gen("x"), alg.gen("y")).scale(Fraction(-1, 2))
    assert alg.format(p) == "-1/2*x*y"
    with pytest.raises(Exception):
        parse_polynomial("x + a", alg)


def test_sphere_cohomology():
    m = DGModel.build([("a", 2), ("b", 3)], {"b": "a^2"})
    assert cohomology_dims(m, 4) == [1, 0, 1, 0, 0]
    m = DGModel.build([("a", 2), ("b", 5)], {"b": "a^3"})
    assert cohomology_dims(m, 6) == [1, 0, 1, 0, 1, 0, 0]


def test_d_squared_rejected():
    # d(a*b) = a^3, so d(c) = a*b gives d^2 != 0
    with pytest.raises(AlgebraError):
        DGModel.build([("a", 2), ("b", 3), ("c", 4)], {"b": "a^2", "c": "a*b"})


def test_degree_of_differential_checked():
    with pytest.raises(AlgebraError):
        DGModel.build([("a", 2), ("b", 3)], {"b": "a"})


def test_table_algebra_from_presentation():
    alg = FreeAlgebra([Generator("t1", 2), Generator("t2", 2)])
    rels = [parse_polynomial(r, alg) for r in ("t1^2 + t1*t2 + t2^2", "t1^2*t2 + t1*t2^2")]
    tab = TableAlgebra.from_presentation(AlgebraPresentation(alg, rels), name="flag")
    assert tab.betti() == [1, 0, 2, 0, 2, 0, 1]
    assert tab.top_degree == 6
    assert tab.validate() == []
    t1 = tab.reduce(alg.gen("t1"))
    t2 = tab.reduce(alg.gen("t2"))
    # t1^2 + t1 t2 + t2^2 = 0 in the quotient
    s = tab.multiply(t1, t1) + tab.multiply(t1, t2) + tab.multiply(t2, t2)
    assert not s
    # top class is nonzero
    assert tab.multiply(tab.multiply(t1, t1), t2)


def test_presentation_needs_even_generators():
    alg = FreeAlgebra([Generator("x", 1)])
    with pytest.raises(AlgebraError):
        AlgebraPresentation(alg, [])


def test_table_graded_commutativity():
    tab = TableAlgebra([("x", 1), ("y", 1), ("xy", 2)], {("x", "y"): Element({"xy": 1}, 2)})
    x, y = tab.elem("x"), tab.elem("y")
    assert tab.multiply(y, x) == -tab.elem("xy")
    assert tab.betti() == [1, 2, 1]


def test_morphism_validation():
    s2 = DGModel.build([("a", 2), ("b", 3)], {"b": "a^2"})
    tab = TableAlgebra([("s", 2)], {})
    good = DGMorphism(s2, tab, {"a": tab.elem("s")})
    assert validate_morphism(good).ok
    cp2 = TableAlgebra([("c", 2), ("c2", 4)], {("c", "c"): Element({"c2": 1}, 4)})
    bad = DGMorphism(s2, cp2, {"a": cp2.elem("c")})
    rep = validate_morphism(bad)
    assert not rep.ok and rep.commute_violations == ["b"]
    wrong_degree = DGMorphism(s2, cp2, {"a": cp2.elem("c2")})
    assert validate_morphism(wrong_degree).degree_violations == ["a"]
    assert validate_morphism(zero_morphism(s2, cp2)).ok


def test_compose_and_identity():
    m = DGModel.build([("x", 1), ("y", 1), ("z", 1)], {"z": "x*y"})
    i = identity_morphism(m)
    assert compose(i, i).values == i.values
    p = parse_polynomial("x*y*z", m)
    assert i.apply(p) == p


@settings(max_examples=500)
@given(st.data())
def test_koszul_commutativity_and_associativity(data):
    alg = data.draw(free_algebras())
    a = data.draw(homogeneous(alg, max_degree=4))
    b = data.draw(homogeneous(alg, max_degree=4))
    c = data.draw(homogeneous(alg, max_degree=3))
    ab, ba = alg.multiply(a, b), alg.multiply(b, a)
    if a and b:
        sign = -1 if (a.degree * b.degree) % 2 else 1
        assert ab == ba.scale(sign)
    assert alg.multiply(ab, c) == alg.multiply(a, alg.multiply(b, c))
    o = to_oracle_alg(alg)
    got = to_oracle_elem(alg, ab, o)
    want = o.mul(to_oracle_elem(alg, a, o), to_oracle_elem(alg, b, o))
    assert got == want


@settings(max_examples=200)
@given(minimal_models(), st.data())
def test_d_squared_zero_on_random_models(m, data):
    assert m.d_squared_violations() == []
    a = data.draw(homogeneous(m.algebra, max_degree=6))
    assert not m.d(m.d(a))


@settings(max_examples=200)
@given(minimal_models(), st.data())
def test_leibniz_and_oracle_differential(m, data):
    alg = m.algebra
    a = data.draw(homogeneous(alg, max_degree=5))
    b = data.draw(homogeneous(alg, max_degree=5))
    lhs = m.d(alg.multiply(a, b))
    if a:
        sign = -1 if a.degree % 2 else 1
        rhs = alg.multiply(m.d(a), b) + alg.multiply(a, m.d(b)).scale(sign)
        assert lhs == rhs
    o = to_oracle_alg(alg, m.differential)
    assert to_oracle_elem(alg, m.d(a), o) == o.d(to_oracle_elem(alg, a, o))


@settings(max_examples=40)
@given(minimal_models(max_gens=4, max_degree=4))
def test_cohomology_matches_oracle(m):
    o = to_oracle_alg(m.algebra, m.differential)
    assert cohomology_dims(m, 6) == oracle.betti(o, 6)


def test_basis_enumeration_matches_oracle():
    alg = FreeAlgebra([Generator("x", 1), Generator("y", 1), Generator("a", 2), Generator("b", 3)])
    o = to_oracle_alg(alg)
    for n in range(9):
        assert len(alg.basis(n)) == len(o.basis(n))
