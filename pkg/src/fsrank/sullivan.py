"""Minimal-model checks, truncation, homotopy ranks and a small model library."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

from fsrank.cdga import (
    AlgebraError,
    AlgebraPresentation,
    DGModel,
    Element,
    FreeAlgebra,
    Generator,
    TableAlgebra,
    cohomology_dims,
    sum_elements,
)


@dataclass
class MinimalityReport:
    d_squared_ok: bool
    decomposable_ok: bool
    nilpotent_ordering: list[str] | None
    stage_lengths: dict[int, int] | None
    linear_terms: list[str] = field(default_factory=list)
    d_squared_failures: list[str] = field(default_factory=list)
    stuck: list[str] = field(default_factory=list)

    @property
    def minimal(self) -> bool:
        return self.d_squared_ok and self.decomposable_ok and self.nilpotent_ordering is not None


@dataclass(frozen=True)
class HomotopyRanks:
    rank_pi1: int
    rho: Mapping[int, int]

    def __getitem__(self, n: int) -> int:
        if n == 1:
            return self.rank_pi1
        return self.rho.get(n, 0)

    def max_degree(self) -> int:
        return max([n for n, k in self.rho.items() if k] + [1 if self.rank_pi1 else 0])


def validate_minimal(m: DGModel) -> MinimalityReport:
    """Minimality and nilpotence checks.

    A generator is admitted once its differential only mentions admitted
    generators; saturation either admits everything (the admission order is
    then a nilpotent ordering) or stalls.  The stage of an admitted generator
    is one more than the largest stage among the same-degree generators in its
    differential.
    """
    alg = m.algebra
    bad_d2 = m.d_squared_violations()
    linear = [
        g.name for g in m.generators
        if any(alg.word_length(mono) == 1 for mono in m.differential[g.name].terms)
    ]
    mentions = {g.name: alg.mentions(m.differential[g.name]) for g in m.generators}
    admitted: list[str] = []
    admitted_set: set[str] = set()
    progress = True
    while progress:
        progress = False
        for g in m.generators:
            if g.name not in admitted_set and mentions[g.name] <= admitted_set:
                admitted.append(g.name)
                admitted_set.add(g.name)
                progress = True
    stuck = [g.name for g in m.generators if g.name not in admitted_set]
    ordering = stages = None
    if not stuck:
        stage: dict[str, int] = {}
        for name in admitted:
            deg = alg.generator(name).degree
            same = [stage[h] for h in mentions[name] if alg.generator(h).degree == deg]
            stage[name] = 1 + max(same, default=0)
        ordering = sorted(admitted, key=lambda n: (alg.generator(n).degree, stage[n], alg.index[n]))
        stages = {}
        for name, s in stage.items():
            deg = alg.generator(name).degree
            stages[deg] = max(stages.get(deg, 0), s)
        stages = dict(sorted(stages.items()))
    return MinimalityReport(
        d_squared_ok=not bad_d2,
        decomposable_ok=not linear,
        nilpotent_ordering=ordering,
        stage_lengths=stages,
        linear_terms=linear,
        d_squared_failures=bad_d2,
        stuck=stuck,
    )


def require_minimal(m: DGModel) -> None:
    rep = validate_minimal(m)
    if not rep.minimal:
        raise AlgebraError(f"model {m.name or ''} is not minimal: {describe(rep)}")


def describe(rep: MinimalityReport) -> str:
    parts = []
    if not rep.d_squared_ok:
        parts.append(f"d^2 != 0 on {', '.join(rep.d_squared_failures)}")
    if not rep.decomposable_ok:
        parts.append(f"linear differential on {', '.join(rep.linear_terms)}")
    if rep.nilpotent_ordering is None:
        parts.append(f"no nilpotent ordering ({', '.join(rep.stuck)} never admitted)")
    return "; ".join(parts) or "minimal"


def truncate(m: DGModel, N: int) -> DGModel:
    """Sub-model on the generators of degree <= N."""
    keep = [g for g in m.generators if g.degree <= N]
    if len(keep) == len(m.generators):
        return m
    names = {g.name for g in keep}
    sub = FreeAlgebra(keep)
    diff = {}
    for g in keep:
        v = m.differential[g.name]
        dropped = m.algebra.mentions(v) - names
        if dropped:
            raise AlgebraError(
                f"cannot truncate at {N}: d({g.name}) mentions dropped generator(s) {sorted(dropped)}"
            )
        diff[g.name] = m.algebra.transfer(v, sub)
    return DGModel(sub, diff, name=m.name, check=False)


def indecomposable_dims(m: DGModel) -> HomotopyRanks:
    counts: dict[int, int] = {}
    for g in m.generators:
        counts[g.degree] = counts.get(g.degree, 0) + 1
    rho = {n: k for n, k in sorted(counts.items()) if n >= 2}
    return HomotopyRanks(rank_pi1=counts.get(1, 0), rho=rho)


def build_two_stage(
    base: DGModel, new_gens: Sequence[tuple[str, int]], k_values: Mapping[str, Element | str],
    name: str | None = None,
) -> DGModel:
    """Adjoin generators whose differentials are decomposable cycles of ``base``."""
    from fsrank.dsl import parse_polynomial

    gens = list(base.generators) + [Generator(n, d) for n, d in new_gens]
    alg = FreeAlgebra(gens)
    diff = {g.name: base.algebra.transfer(base.differential[g.name], alg) for g in base.generators}
    for gname, deg in new_gens:
        raw = k_values.get(gname, Element())
        v = parse_polynomial(raw, base.algebra) if isinstance(raw, str) else raw
        if v and v.degree != deg + 1:
            raise AlgebraError(f"k-value for {gname} has degree {v.degree}, expected {deg + 1}")
        if base.d(v):
            raise AlgebraError(f"k-value for {gname} is not a cycle in the base")
        if any(base.algebra.word_length(mono) < 2 for mono in v.terms):
            raise AlgebraError(f"k-value for {gname} is not decomposable")
        diff[gname] = base.algebra.transfer(v, alg)
    return DGModel(alg, diff, name=name)


def tensor(m1: DGModel, m2: DGModel, name: str | None = None) -> DGModel:
    clash = {g.name for g in m1.generators} & {g.name for g in m2.generators}
    if clash:
        raise AlgebraError(f"generator names clash in product: {sorted(clash)}")
    alg = FreeAlgebra(list(m1.generators) + list(m2.generators))
    diff = {g.name: m1.algebra.transfer(m1.differential[g.name], alg) for g in m1.generators}
    diff.update({g.name: m2.algebra.transfer(m2.differential[g.name], alg) for g in m2.generators})
    return DGModel(alg, diff, name=name)


def pure_model(p: AlgebraPresentation, name: str | None = None, odd_prefix: str = "y") -> DGModel:
    """Λ(V0 ⊕ V1) with V0 the presentation generators and one odd generator per relation."""
    gens = list(p.algebra.generators)
    taken = {g.name for g in gens}
    odd = []
    for i, r in enumerate(p.relations, start=1):
        nm = f"{odd_prefix}{i}"
        while nm in taken:
            nm = "_" + nm
        taken.add(nm)
        odd.append(Generator(nm, r.degree - 1))
    alg = FreeAlgebra(gens + odd)
    diff = {g.name: p.algebra.transfer(r, alg) for g, r in zip(odd, p.relations)}
    return DGModel(alg, diff, name=name)


def _named(degrees: Sequence[int], names: Sequence[str] | None, prefix: str) -> list[Generator]:
    if names is None:
        names = [f"{prefix}{i}" for i in range(1, len(degrees) + 1)]
    if len(names) != len(degrees):
        raise AlgebraError("need one name per generator")
    return [Generator(n, d) for n, d in zip(names, degrees)]


def standard_model(kind: str, *args, name: str | None = None, **kw) -> DGModel:
    """Library of minimal models.

    ``sphere(n)``, ``complex_projective(n)``, ``eilenberg_maclane(degrees)``,
    ``torus(n)``, ``point()``, ``product(m1, m2)``, ``heisenberg()`` and
    ``nilmanifold(n, brackets)`` where ``brackets`` maps a generator index k to
    a list of ``(i, j, c)`` giving d(e_k) = sum c e_i e_j, and ``flag(n)``, the
    pure model of the complete flag manifold SU(n)/T.
    """
    kind = kind.replace("-", "_").lower()
    if kind == "sphere":
        (n,) = args
        if n < 1:
            raise AlgebraError("sphere dimension must be >= 1")
        if n % 2:
            return DGModel(FreeAlgebra([Generator("a", n)]), name=name or f"S{n}")
        alg = FreeAlgebra([Generator("a", n), Generator("b", 2 * n - 1)])
        return DGModel(alg, {"b": alg.power(alg.gen("a"), 2)}, name=name or f"S{n}")
    if kind == "complex_projective":
        (n,) = args
        if n < 1:
            raise AlgebraError("complex projective dimension must be >= 1")
        alg = FreeAlgebra([Generator("a", 2), Generator("b", 2 * n + 1)])
        return DGModel(alg, {"b": alg.power(alg.gen("a"), n + 1)}, name=name or f"CP{n}")
    if kind == "eilenberg_maclane":
        (degrees,) = args
        if isinstance(degrees, int):
            degrees = [degrees]
        return DGModel(FreeAlgebra(_named(degrees, kw.get("names"), "e")), name=name)
    if kind == "torus":
        (n,) = args
        return DGModel(FreeAlgebra(_named([1] * n, kw.get("names"), "t")), name=name or f"T{n}")
    if kind == "point":
        return DGModel(FreeAlgebra([]), name=name or "pt")
    if kind == "product":
        m1, m2 = args
        return tensor(m1, m2, name=name)
    if kind == "heisenberg":
        alg = FreeAlgebra([Generator("x", 1), Generator("y", 1), Generator("z", 1)])
        return DGModel(alg, {"z": alg.multiply(alg.gen("x"), alg.gen("y"))}, name=name or "Heis")
    if kind == "nilmanifold":
        n, brackets = args
        alg = FreeAlgebra(_named([1] * n, kw.get("names"), "e"))
        gname = [g.name for g in alg.generators]
        diff = {}
        for k, terms in brackets.items():
            v = Element()
            for i, j, c in terms:
                v = v + alg.multiply(alg.gen(gname[i]), alg.gen(gname[j])).scale(c)
            diff[gname[k]] = v
        return DGModel(alg, diff, name=name)
    if kind == "flag":
        (n,) = args
        return pure_model(flag_presentation(n), name=name or f"Fl{n}")
    raise AlgebraError(f"unknown model kind {kind!r}")


def flag_presentation(n: int) -> AlgebraPresentation:
    """H*(SU(n)/T) = Q[t_1..t_{n-1}] / (e_2, ..., e_n), with x_n = -(t_1 + ... + t_{n-1})."""
    if n < 2:
        raise AlgebraError("flag manifolds need n >= 2")
    alg = FreeAlgebra([Generator(f"t{i}", 2) for i in range(1, n)])
    xs = [alg.gen(f"t{i}") for i in range(1, n)]
    xs.append(-sum_elements(xs))
    # e_k by the recursion e_k(x_1..x_m) = e_k(x_1..x_{m-1}) + x_m e_{k-1}(x_1..x_{m-1})
    e = [alg.one()] + [Element() for _ in range(n)]
    for x in xs:
        for k in range(n, 0, -1):
            e[k] = e[k] + alg.multiply(x, e[k - 1])
    return AlgebraPresentation(alg, [e[k] for k in range(2, n + 1)])


def betti_numbers(m: DGModel, max_degree: int) -> list[int]:
    return cohomology_dims(m, max_degree)


def formal_dimension(m: DGModel) -> int | None:
    """Σ|odd| − Σ(|even| − 1) for a pure model, else None."""
    pure = pure_split(m)
    if pure is None:
        return None
    even, odd = pure
    return sum(g.degree for g in odd) - sum(g.degree - 1 for g in even)


def elliptic_dimension(m: DGModel) -> int | None:
    """Formal dimension of a minimal pure model with finite cohomology, else None."""
    split = pure_split(m)
    if split is None or not validate_minimal(m).minimal:
        return None
    even, odd = split
    base = FreeAlgebra(even)
    rels = [m.algebra.transfer(m.differential[g.name], base) for g in odd]
    try:
        TableAlgebra.from_presentation(AlgebraPresentation(base, rels))
    except AlgebraError:
        return None
    return formal_dimension(m)


def pure_split(m: DGModel) -> tuple[list[Generator], list[Generator]] | None:
    even = [g for g in m.generators if not g.odd]
    odd = [g for g in m.generators if g.odd]
    even_names = {g.name for g in even}
    if any(m.differential[g.name] for g in even):
        return None
    if any(not m.algebra.mentions(m.differential[g.name]) <= even_names for g in odd):
        return None
    return even, odd


def is_f0_model(m: DGModel) -> bool:
    """Pure, equal numbers of even and odd generators, finite cohomology with none in odd degrees.

    For such a pure model the cohomology is finite exactly when Q[V_even]/(d V_odd)
    is; it is then that quotient, so the odd part vanishes automatically.
    """
    split = pure_split(m)
    if split is None:
        return False
    even, odd = split
    if len(even) != len(odd) or any(g.degree == 1 for g in m.generators):
        return False
    base = FreeAlgebra(even)
    rels = [m.algebra.transfer(m.differential[g.name], base) for g in odd]
    try:
        TableAlgebra.from_presentation(AlgebraPresentation(base, rels))
    except AlgebraError:
        return False
    return True
