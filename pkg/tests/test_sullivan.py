import pytest
from hypothesis import given, settings

from strategies import minimal_models
from fsrank.cdga import AlgebraError, AlgebraPresentation, DGModel, FreeAlgebra, Generator, TableAlgebra
from fsrank.dsl import parse_polynomial
from fsrank.sullivan import (
    betti_numbers,
    build_two_stage,
    elliptic_dimension,
    flag_presentation,
    formal_dimension,
    indecomposable_dims,
    is_f0_model,
    pure_model,
    standard_model,
    truncate,
    validate_minimal,
)


def test_sphere_models():
    s2 = standard_model("sphere", 2)
    assert betti_numbers(s2, 4) == [1, 0, 1, 0, 0]
    assert indecomposable_dims(s2).rho == {2: 1, 3: 1}
    s3 = standard_model("sphere", 3)
    assert betti_numbers(s3, 4) == [1, 0, 0, 1, 0]


def test_cp_models():
    cp3 = standard_model("complex_projective", 3)
    assert betti_numbers(cp3, 7) == [1, 0, 1, 0, 1, 0, 1, 0]
    assert elliptic_dimension(cp3) == 6


def test_minimality_report():
    rep = validate_minimal(standard_model("heisenberg"))
    assert rep.minimal
    assert rep.nilpotent_ordering == ["x", "y", "z"]
    assert rep.stage_lengths == {1: 2}


def test_linear_differential_is_not_minimal():
    m = DGModel.build([("a", 2), ("b", 3)], {"b": "a^2"})
    big = DGModel.build([("a", 2), ("u", 2), ("b", 3), ("v", 3)], {"b": "a^2", "v": "u^2 + a*u"})
    assert validate_minimal(big).minimal
    nm = DGModel.build([("u", 1), ("w", 2)], {"u": "w"})
    rep = validate_minimal(nm)
    assert not rep.minimal and rep.linear_terms == ["u"]
    assert validate_minimal(m).minimal


def test_no_nilpotent_ordering():
    # a degree-1 differential that mentions itself through a cycle of dependencies
    alg = FreeAlgebra([Generator("x", 1), Generator("y", 1), Generator("z", 1)])
    diff = {
        "x": parse_polynomial("y*z", alg),
        "y": parse_polynomial("z*x", alg),
        "z": parse_polynomial("x*y", alg),
    }
    m = DGModel(alg, diff, check=False)
    rep = validate_minimal(m)
    # this is the Lie algebra so(3): d^2 = 0 but no nilpotent ordering
    assert rep.d_squared_ok
    assert rep.nilpotent_ordering is None
    assert not rep.minimal


def test_truncate():
    y = DGModel.build([("x", 3), ("y", 3), ("z", 5)], {"z": "x*y"})
    t = truncate(y, 4)
    assert [g.name for g in t.generators] == ["x", "y"]
    assert truncate(y, 9) is y


def test_truncate_rejects_dangling_differential():
    # non-minimal: d(u) = w mentions a generator above the cutoff
    m = DGModel.build([("u", 1), ("w", 2)], {"u": "w"})
    with pytest.raises(AlgebraError):
        truncate(m, 1)


def test_two_stage_builder():
    base = standard_model("eilenberg_maclane", [3, 3], names=["x", "y"])
    y = build_two_stage(base, [("z", 5)], {"z": "x*y"}, name="Y")
    assert indecomposable_dims(y).rho == {3: 2, 5: 1}
    with pytest.raises(AlgebraError):
        build_two_stage(base, [("z", 4)], {"z": "x*y"})
    with pytest.raises(AlgebraError):
        build_two_stage(base, [("z", 2)], {"z": "x"})


def test_pure_model_of_flag_manifold():
    alg = FreeAlgebra([Generator("t1", 2), Generator("t2", 2)])
    rels = [parse_polynomial(r, alg) for r in ("t1^2 + t1*t2 + t2^2", "t1^2*t2 + t1*t2^2")]
    m = pure_model(AlgebraPresentation(alg, rels))
    assert indecomposable_dims(m).rho == {2: 2, 3: 1, 5: 1}
    assert formal_dimension(m) == 6
    assert betti_numbers(m, 7) == [1, 0, 2, 0, 2, 0, 1, 0]
    assert is_f0_model(m)


def _mahonian(n):
    # coefficients of prod_{k=1}^{n} (1 + q + ... + q^{k-1})
    poly = [1]
    for k in range(1, n + 1):
        nxt = [0] * (len(poly) + k - 1)
        for i, c in enumerate(poly):
            for j in range(k):
                nxt[i + j] += c
        poly = nxt
    return poly


@pytest.mark.parametrize("n", [2, 3, 4])
def test_flag_manifold_cohomology(n):
    ring = TableAlgebra.from_presentation(flag_presentation(n))
    assert ring.betti()[::2] == _mahonian(n)
    assert not ring.odd_cohomology()
    m = standard_model("flag", n)
    assert indecomposable_dims(m).rho == {2: n - 1, **{2 * k - 1: 1 for k in range(2, n + 1)}}
    assert formal_dimension(m) == n * (n - 1)
    assert is_f0_model(m)


def test_flag_matches_corpus_ring(corpus):
    ours = TableAlgebra.from_presentation(flag_presentation(3))
    assert ours.betti() == corpus.get("SU3T").betti()


def test_f0_detection():
    assert is_f0_model(standard_model("sphere", 2))
    assert is_f0_model(standard_model("complex_projective", 2))
    assert not is_f0_model(standard_model("sphere", 3))
    assert not is_f0_model(standard_model("heisenberg"))


def test_products_and_tori():
    t2 = standard_model("torus", 2)
    assert betti_numbers(t2, 3) == [1, 2, 1, 0]
    prod = standard_model("product", standard_model("sphere", 2), DGModel(FreeAlgebra([Generator("c", 3)])))
    assert betti_numbers(prod, 5) == [1, 0, 1, 1, 0, 1]


def test_nilmanifold_from_brackets():
    m = standard_model("nilmanifold", 4, {2: [(0, 1, 1)], 3: [(0, 2, 1)]})
    rep = validate_minimal(m)
    assert rep.minimal and rep.stage_lengths == {1: 3}


@settings(max_examples=100)
@given(minimal_models())
def test_random_models_are_minimal(m):
    rep = validate_minimal(m)
    assert rep.minimal
    # generator counts are the homotopy ranks
    ranks = indecomposable_dims(m)
    assert sum(ranks.rho.values()) + ranks.rank_pi1 == len(m.generators)
