"""Rank formulas for π_*(map(X, Y; f)) ⊗ Q.

The general route computes H_n of the derivation complex Der(M_Y, B; M_f)
with B a model of X (a free model or its cohomology table when X is
formal).  The closed forms (null component, F0-spaces, free loops) are
computed independently and serve as cross-checks.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from fsrank.cdga import (
    AlgebraError,
    DGModel,
    DGMorphism,
    TableAlgebra,
    cohomology_dims,
    validate_morphism,
    zero_morphism,
)
from fsrank.dercomplex import DerComplex, Derivation, evaluate
from fsrank.qlinalg import QMatrix, rank
from fsrank.sullivan import (
    HomotopyRanks,
    elliptic_dimension,
    is_f0_model,
    pure_model,
    require_minimal,
    truncate,
    validate_minimal,
)


@dataclass
class MapProblem:
    """Data for a component map(X, Y; f): a model of X, the minimal model of Y, and f."""

    source: DGModel | TableAlgebra
    target: DGModel
    morphism: DGMorphism
    dim: int | None = None
    name: str | None = None

    def __post_init__(self):
        if self.morphism.source_algebra != self.target.algebra:
            raise AlgebraError("morphism must start at the model of Y")
        if self.morphism.target is not self.source:
            raise AlgebraError("morphism must land in the model of X")

    @property
    def N(self) -> int:
        if self.dim is not None:
            return self.dim
        if isinstance(self.source, TableAlgebra):
            return self.source.top_degree
        fd = elliptic_dimension(self.source)
        if fd is None:
            raise AlgebraError("this free model of X needs a declared dimension")
        return fd

    def check(self) -> None:
        rep = validate_morphism(self.morphism)
        if not rep.ok:
            raise AlgebraError(
                f"invalid morphism {self.morphism.name or ''}: "
                f"degree {rep.degree_violations}, commute {rep.commute_violations}"
            )
        require_minimal(self.target)

    def betti_X(self) -> list[int]:
        return cohomology_dims(self.source, self.N)

    def with_zero(self) -> "MapProblem":
        return MapProblem(self.source, self.target, zero_morphism(self.target, self.source), self.dim, self.name)


def restrict_morphism(f: DGMorphism, sub: DGModel) -> DGMorphism:
    if sub.algebra == f.source_algebra:
        return DGMorphism(sub, f.target, f.values, name=f.name)
    return DGMorphism(sub, f.target, {g.name: f.values[g.name] for g in sub.generators}, name=f.name)


def derivation_complex(p: MapProblem, cutoff: int) -> DerComplex:
    A = truncate(p.target, cutoff)
    return DerComplex(A, p.source, restrict_morphism(p.morphism, A), check=False)


def rank_pi1(p: MapProblem) -> int:
    """dim H_1(Der(M_Y, B; M_f)) with M_Y truncated at N + 2."""
    p.check()
    return derivation_complex(p, p.N + 2).homology_dim(1)


def rank_pi_n(p: MapProblem, n: int) -> int:
    if n < 2:
        raise ValueError("rank_pi_n needs n >= 2; use rank_pi1 for n = 1")
    p.check()
    return derivation_complex(p, p.N + n + 1).homology_dim(n)


def null_terms(betti_X, ranks_Y: HomotopyRanks) -> list[tuple[int, int, int]]:
    """(n, ρ_n(Y), b_{n-1}(X)) for n = 2..N+1; N is the last index of betti_X."""
    N = len(betti_X) - 1
    return [(n, ranks_Y[n], betti_X[n - 1]) for n in range(2, N + 2)]


def rank_pi1_null(betti_X, ranks_Y: HomotopyRanks) -> int:
    if not betti_X or betti_X[0] != 1:
        raise ValueError("X must be connected (b_0 = 1)")
    return ranks_Y.rank_pi1 + sum(r * b for _, r, b in null_terms(betti_X, ranks_Y))


def rank_pi_n_null(betti_X, ranks_Y: HomotopyRanks, n: int) -> int:
    """Σ_{k=n}^{N+n} ρ_k(Y)·b_{k-n}(X)."""
    if n < 2:
        raise ValueError("n must be >= 2")
    if not betti_X or betti_X[0] != 1:
        raise ValueError("X must be connected (b_0 = 1)")
    N = len(betti_X) - 1
    return sum(ranks_Y[k] * betti_X[k - n] for k in range(n, N + n + 1))


def graded_derivation_dim(HY: TableAlgebra, HX: TableAlgebra, Hf: DGMorphism, k: int) -> int:
    """dim Der_k(H*(Y), H*(X); H(f)) for a presented H*(Y).

    Unknowns are the values on the presentation generators; each relation
    must be sent to zero.
    """
    pres = HY.presentation
    if pres is None:
        raise AlgebraError("H*(Y) must be given by a presentation")
    rep = validate_morphism(Hf)
    if not rep.ok:
        raise AlgebraError(f"H(f) does not respect the relations: {rep.commute_violations + rep.degree_violations}")
    unknowns = [(g.name, b) for g in pres.algebra.generators for b in HX.basis(g.degree - k)]
    if not unknowns:
        return 0
    rows = []
    for r in pres.relations:
        tdeg = r.degree - k
        images = []
        for g, b in unknowns:
            theta = Derivation(k, {g: HX.elem(b)})
            images.append(HX.coordinates(evaluate(theta, r, Hf), tdeg))
        for i in range(len(HX.basis(tdeg))):
            rows.append([col[i] for col in images])
    if not rows:
        return len(unknowns)
    return len(unknowns) - rank(QMatrix.from_rows(rows, len(unknowns)))


def presentation_ranks(HY: TableAlgebra) -> HomotopyRanks:
    """ρ of an F0-space from its presentation: generators give the even part, relations the odd part."""
    pres = HY.presentation
    if pres is None:
        raise AlgebraError("H*(Y) must be given by a presentation")
    if len(pres.relations) != len(pres.algebra.generators):
        raise AlgebraError(
            f"{len(pres.algebra.generators)} generators but {len(pres.relations)} relations; "
            "an F0 presentation needs equally many"
        )
    rho: dict[int, int] = {}
    for g in pres.algebra.generators:
        rho[g.degree] = rho.get(g.degree, 0) + 1
    for r in pres.relations:
        rho[r.degree - 1] = rho.get(r.degree - 1, 0) + 1
    return HomotopyRanks(0, dict(sorted(rho.items())))


@dataclass
class F0Result:
    rank: int
    d2: int
    odd_terms: list[tuple[int, int, int]]
    even_terms: list[tuple[int, int, int]]
    rho: HomotopyRanks


def f0_rank(HY: TableAlgebra, HX: TableAlgebra, Hf: DGMorphism, rho: Mapping[int, int] | None = None) -> F0Result:
    """D_2(f) + Σ_i ρ_{2i+1}(Y) b_{2i}(X) - Σ_i ρ_{2i+2}(Y) b_{2i}(X).

    Both sums run over every index where the terms can be nonzero.
    """
    for label, H in (("X", HX), ("Y", HY)):
        if H.odd_cohomology():
            raise AlgebraError(f"H*({label}) has odd-degree classes; not an F0-space")
    inferred = presentation_ranks(HY)
    if rho is not None:
        supplied = {n: v for n, v in rho.items() if v}
        if supplied != {n: v for n, v in inferred.rho.items() if v}:
            raise AlgebraError(f"supplied ranks {supplied} disagree with the presentation {dict(inferred.rho)}")
    b = HX.betti()
    d2 = graded_derivation_dim(HY, HX, Hf, 2)
    top = max(inferred.rho, default=0)
    odd = [(2 * i + 1, inferred[2 * i + 1], b[2 * i]) for i in range(1, len(b)) if 2 * i < len(b)]
    even = [(2 * i + 2, inferred[2 * i + 2], b[2 * i]) for i in range(0, len(b)) if 2 * i < len(b)]
    odd = [t for t in odd if t[0] <= top]
    even = [t for t in even if t[0] <= top]
    total = d2 + sum(r * x for _, r, x in odd) - sum(r * x for _, r, x in even)
    return F0Result(total, d2, odd, even, inferred)


def f0_problem(HY: TableAlgebra, HX, Hf: DGMorphism, name: str | None = None) -> MapProblem:
    """The map problem M_Y -> H*(X) for a presented F0-space Y.

    M_Y is the pure model; even generators go where H(f) sends them and the
    odd generators go to zero.
    """
    MY = pure_model(HY.presentation, name=HY.name)
    values = {g: v for g, v in Hf.values.items()}
    return MapProblem(HX, MY, DGMorphism(MY, HX, values, name=Hf.name), name=name)


@dataclass
class CentralizerProblem:
    model: DGModel
    alpha: str | None = None

    def __post_init__(self):
        if self.alpha is not None:
            g = self.model.algebra.generator(self.alpha)
            if g.degree != 1:
                raise AlgebraError(f"alpha must name a degree-1 generator, {self.alpha} has degree {g.degree}")


def centralizer_rank(c: CentralizerProblem) -> int:
    """Dimension of the span of degree-1 generators v with α·v absent from every differential.

    Computed as the nullity of the coefficient matrix (α·v in d(w)); this is
    the number of such generators when the basis is adapted to α.
    """
    m = truncate(c.model, 2)
    alg = m.algebra
    ones = [g.name for g in m.generators if g.degree == 1]
    if c.alpha is None:
        return len(ones)
    rows = []
    alpha = alg.gen(c.alpha)
    for w in ones:
        dw = m.differential[w]
        row = []
        for v in ones:
            prod = alg.multiply(alpha, alg.gen(v))
            if not prod:
                row.append(0)
                continue
            (key, s), = prod.terms.items()
            row.append(dw.coeff(key) * s)
        rows.append(row)
    return len(ones) - rank(QMatrix.from_rows(rows, len(ones)))


def free_loop_rank(c: CentralizerProblem) -> int:
    rho2 = sum(1 for g in c.model.generators if g.degree == 2)
    return rho2 + centralizer_rank(c)


def circle_problem(model: DGModel, alpha: str | None, circle) -> MapProblem:
    """map(S^1, Y; f) with f sending the class α to the fundamental class t."""
    t = next(iter(circle.basis(1)))
    elem = circle.elem(t) if isinstance(circle, TableAlgebra) else circle.algebra.monomial(t)
    values = {} if alpha is None else {alpha: elem}
    return MapProblem(circle, model, DGMorphism(model, circle, values, name=f"loop_{alpha or 0}"), dim=1 if isinstance(circle, DGModel) else None)


@dataclass
class InequalityReport:
    rank_f: int
    rank_null: int

    @property
    def holds(self) -> bool:
        return self.rank_f <= self.rank_null


def check_inequality(p: MapProblem) -> InequalityReport:
    return InequalityReport(rank_pi1(p), rank_pi1(p.with_zero()))


def null_bracket_matrix(X: TableAlgebra, Y: DGModel, N: int):
    """Quadratic part of the mapping-space differential on degree-1 generators.

    For the null component with X formal, π_1 ⊗ Q is dual to the span of the
    symbols v⊗β* with |v| - |β| = 1 (β running over the basis of X).  Rows are
    these symbols; columns are the products (a)(b), a < b, of two of them.
    The rank is the dimension of the commutator subalgebra.
    """
    gens = [g for g in Y.generators if g.degree <= N + 1]
    syms = [(g.name, b) for g in gens for b in X.basis(g.degree - 1)]
    pos = {s: i for i, s in enumerate(syms)}
    pairs = [(i, j) for i in range(len(syms)) for j in range(i + 1, len(syms))]
    col = {p: k for k, p in enumerate(pairs)}
    rows = []
    for v, beta in syms:
        row = [0] * len(pairs)
        for mono, c in Y.differential[v].terms.items() if v in Y.differential else ():
            if sum(mono) != 2:
                continue
            factors = [i for i, e in enumerate(mono) for _ in range(e)]
            u, w = (Y.algebra.generators[i] for i in factors)
            for b1 in X.basis(u.degree - 1):
                for b2 in X.basis(w.degree - 1):
                    m = X.multiply(X.elem(b1), X.elem(b2)).coeff(beta)
                    if not m:
                        continue
                    sign = -1 if (X.degree_of[b1] * w.degree) % 2 else 1
                    a, b = pos[(u.name, b1)], pos[(w.name, b2)]
                    if a == b:
                        continue
                    if a > b:
                        a, b, sign = b, a, -sign
                    row[col[(a, b)]] += sign * c * m
        rows.append(row)
    return syms, pairs, rows


def abelianization_rank(p: MapProblem) -> int:
    """Rank of π_1(map(X, Y; 0))_ab ⊗ Q for a cohomology table X."""
    if not isinstance(p.source, TableAlgebra):
        raise AlgebraError("abelianization needs X given by its cohomology table")
    if any(v for v in p.morphism.values.values()):
        raise AlgebraError("abelianization is only computed for the null component")
    p.check()
    syms, pairs, rows = null_bracket_matrix(p.source, p.target, p.N)
    if not pairs:
        return len(syms)
    return len(syms) - rank(QMatrix.from_rows(rows, len(pairs)))


@dataclass
class StructureReport:
    nilpotency_bound: int | None
    two_stage: tuple[list[str], list[str]] | None
    hom1_W0: int | None
    hom_W1: int | None
    two_stage_abelian: bool
    f0_abelian: bool
    notes: list[str] = field(default_factory=list)
    # null component, X a cohomology table: (rank π_1, rank of its abelianization)
    null_ranks: tuple[int, int] | None = None
    is_null: bool = False

    @property
    def null_abelian(self) -> bool:
        return self.null_ranks is not None and self.null_ranks[0] == self.null_ranks[1]

    @property
    def abelian(self) -> bool:
        return self.two_stage_abelian or self.f0_abelian or (self.is_null and self.null_abelian)


def two_stage_split(m: DGModel, betti: list[int]) -> tuple[list[str], list[str]] | None:
    """Split generators into W0 (closed) and W1 with d(W1) ⊆ Λ(W0).

    Closed generators used by no differential may sit on either side; each is
    placed where it contributes nothing to the Hom counts when possible.
    """
    alg = m.algebra
    w1 = [g.name for g in m.generators if m.differential[g.name]]
    used = set()
    for g in w1:
        used |= alg.mentions(m.differential[g])
    if used & set(w1):
        return None
    w0 = []

    def b(k):
        return betti[k] if 0 <= k < len(betti) else 0

    for g in m.generators:
        if g.name in w1:
            continue
        if g.name in used or b(g.degree - 1) == 0 or b(g.degree) != 0:
            w0.append(g.name)
        else:
            w1.append(g.name)
    order = {g.name: i for i, g in enumerate(m.generators)}
    return sorted(w0, key=order.get), sorted(w1, key=order.get)


def _x_is_f0(X) -> bool:
    if isinstance(X, TableAlgebra):
        return _table_is_f0(X)
    return is_f0_model(X)


def _table_is_f0(X: TableAlgebra) -> bool:
    """Recognise F0 cohomology tables: complete-intersection presentations or truncated polynomial rings."""
    if X.odd_cohomology():
        return False
    if X.presentation is not None:
        return len(X.presentation.relations) == len(X.presentation.algebra.generators)
    names = X.basis_names[1:]
    if not names:
        return True
    low = X.basis(min(X.degree_of[n] for n in names))
    if len(low) != 1:
        return False
    power, gen = X.one(), X.elem(low[0])
    for _ in names:
        power = X.multiply(power, gen)
        if not power:
            return False
    return not X.multiply(power, gen)


def structural_report(p: MapProblem) -> StructureReport:
    p.check()
    Y = p.target
    N = p.N
    betti = p.betti_X()
    notes = []
    rep = validate_minimal(Y)
    bound = None
    if rep.stage_lengths is not None and all(c <= 1 for c in rep.stage_lengths.values()):
        bound = N
        notes.append(f"null component: pi_1 nilpotency class <= {N}")
    split = two_stage_split(Y, betti)
    h1 = h0 = None
    two_ab = False
    if split is not None:
        w0, w1 = split
        deg = {g.name: g.degree for g in Y.generators}

        def bb(k):
            return betti[k] if 0 <= k < len(betti) else 0

        h1 = sum(bb(deg[g] - 1) for g in w0)
        h0 = sum(bb(deg[g]) for g in w1)
        two_ab = h1 == 0 and h0 == 0
        if two_ab:
            notes.append("two-stage Y with vanishing Hom counts: pi_1 abelian for every f")
    f0_ab = _x_is_f0(p.source) and is_f0_model(Y)
    if f0_ab:
        notes.append("X and Y are F0-spaces: every component has abelian pi_1")
    null_ranks = None
    if isinstance(p.source, TableAlgebra):
        z = p.with_zero()
        null_ranks = (rank_pi1(z), abelianization_rank(z))
    is_null = not any(v for v in p.morphism.values.values())
    return StructureReport(bound, split, h1, h0, two_ab, f0_ab, notes, null_ranks, is_null)
