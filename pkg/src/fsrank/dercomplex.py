"""Chain complexes of φ-derivations and the relative complex of a precomposition.

For a free DG algebra A, a DG algebra B and a DG map φ: A -> B, a
φ-derivation θ of degree n lowers degree by n and satisfies

    θ(xy) = θ(x)φ(y) + (-1)^(n|x|) φ(x)θ(y).

Since A is free, θ is determined by its values on generators, so Der_n has
the basis θ_{g,b} (g a generator, b a basis element of B in degree |g|-n).
The differential is δθ = d_B∘θ - (-1)^n θ∘d_A.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from fsrank.cdga import AlgebraError, DGModel, DGMorphism, Element, compose, validate_morphism
from fsrank.qlinalg import QMatrix, kernel_basis, rank, span_rank


@dataclass
class Derivation:
    degree: int
    values: dict[str, Element] = field(default_factory=dict)

    def value(self, g: str) -> Element:
        return self.values.get(g, Element())


@dataclass(frozen=True)
class DerSlice:
    degree: int
    basis: tuple[tuple[str, object], ...]

    @property
    def dim(self) -> int:
        return len(self.basis)

    def index(self) -> dict[tuple[str, object], int]:
        return {pair: i for i, pair in enumerate(self.basis)}


def der_basis(A: DGModel, B, n: int) -> DerSlice:
    if n < 0:
        return DerSlice(n, ())
    pairs = []
    for g in A.generators:
        for b in B.basis(g.degree - n):
            pairs.append((g.name, b))
    return DerSlice(n, tuple(pairs))


def evaluate(theta: Derivation, p: Element, phi: DGMorphism) -> Element:
    """θ(p), expanding each monomial over its factors.

    θ(x1⋯xk) = Σ_i (-1)^(n(|x1|+⋯+|x_{i-1}|)) φ(x1⋯x_{i-1}) θ(x_i) φ(x_{i+1}⋯xk)
    """
    alg = phi.source_algebra
    B = phi.target
    n = theta.degree
    out = Element()
    for mono, c in p.terms.items():
        idx = alg.factors(mono)
        if not any(theta.values.get(alg.generators[i].name) for i in idx):
            continue
        k = len(idx)
        suffix = [None] * (k + 1)
        suffix[k] = B.one()
        for pos in range(k - 1, -1, -1):
            suffix[pos] = B.multiply(phi.values[alg.generators[idx[pos]].name], suffix[pos + 1])
        prefix = B.one()
        deg_before = 0
        for pos, i in enumerate(idx):
            g = alg.generators[i]
            tv = theta.values.get(g.name)
            if tv and prefix and suffix[pos + 1]:
                term = B.multiply(B.multiply(prefix, tv), suffix[pos + 1])
                if (n * deg_before) % 2:
                    term = -term
                out = out + term.scale(c)
            prefix = B.multiply(prefix, phi.values[g.name])
            deg_before += g.degree
    return out


def delta(theta: Derivation, A: DGModel, phi: DGMorphism) -> Derivation:
    B = phi.target
    n = theta.degree
    sign = -1 if n % 2 == 0 else 1
    values = {}
    for g in A.generators:
        v = B.d(theta.value(g.name))
        w = evaluate(theta, A.differential[g.name], phi)
        if w:
            v = v + w.scale(sign)
        if v:
            values[g.name] = v
    return Derivation(n - 1, values)


def derivation_from_vector(s: DerSlice, vec, B) -> Derivation:
    values: dict[str, dict] = {}
    for (g, b), c in zip(s.basis, vec):
        if c:
            values.setdefault(g, {})
            values[g][b] = values[g].get(b, 0) + c
    return Derivation(s.degree, {g: _make(B, terms) for g, terms in values.items()})


def _make(B, terms: Mapping) -> Element:
    key = next(iter(terms))
    return Element(terms, _key_degree(B, key))


def _key_degree(B, key) -> int:
    if isinstance(B, DGModel):
        return B.algebra.mono_degree(key)
    return B.degree_of[key]


def vector_of(theta: Derivation, s: DerSlice, A: DGModel, B) -> list[Fraction]:
    idx = s.index()
    v = [Fraction(0)] * s.dim
    for g, val in theta.values.items():
        for b, c in val.terms.items():
            pos = idx.get((g, b))
            if pos is None:
                raise AlgebraError(f"value of {g} outside degree-{s.degree} slice")
            v[pos] += c
    return v


class DerComplex:
    """Der_*(A, B; φ) with cached slices and differential matrices."""

    def __init__(self, A: DGModel, B, phi: DGMorphism, check: bool = True):
        if phi.source is not A and phi.source_algebra != A.algebra:
            raise AlgebraError("morphism source does not match the derivation source")
        if check:
            rep = validate_morphism(phi)
            if not rep.ok:
                raise AlgebraError(
                    f"invalid morphism: degree {rep.degree_violations}, commute {rep.commute_violations}"
                )
        self.A, self.B, self.phi = A, B, phi
        self._slices: dict[int, DerSlice] = {}
        self._delta: dict[int, QMatrix] = {}

    @property
    def top(self) -> int:
        """Above this degree every slice is empty."""
        return self.A.max_generator_degree()

    def slice(self, n: int) -> DerSlice:
        if n not in self._slices:
            self._slices[n] = der_basis(self.A, self.B, n)
        return self._slices[n]

    def basis_derivation(self, n: int, i: int) -> Derivation:
        g, b = self.slice(n).basis[i]
        return Derivation(n, {g: Element({b: 1}, _key_degree(self.B, b))})

    def delta_matrix(self, n: int) -> QMatrix:
        """δ: Der_n -> Der_{n-1}."""
        if n in self._delta:
            return self._delta[n]
        src = self.slice(n)
        tgt = self.slice(n - 1)
        if n <= 0:
            # the complex starts in degree 0
            self._delta[n] = QMatrix.zeros(0, src.dim)
            return self._delta[n]
        cols = []
        for i in range(src.dim):
            d = delta(self.basis_derivation(n, i), self.A, self.phi)
            cols.append(vector_of(d, tgt, self.A, self.B))
        m = QMatrix.from_columns(cols, tgt.dim)
        self._delta[n] = m
        return m

    def cycles(self, n: int) -> list[tuple]:
        return kernel_basis(self.delta_matrix(n))

    def boundaries(self, n: int) -> list[tuple]:
        m = self.delta_matrix(n + 1)
        return [tuple(m.column(j)) for j in range(m.cols)]

    def homology_dim(self, n: int) -> int:
        if n < 0:
            return 0
        dim = self.slice(n).dim
        return dim - rank(self.delta_matrix(n)) - rank(self.delta_matrix(n + 1))

    def table(self, lo: int, hi: int) -> list[tuple[int, int, int, int]]:
        """Rows (n, dim Der_n, rank δ_n, dim H_n)."""
        return [
            (n, self.slice(n).dim, rank(self.delta_matrix(n)), self.homology_dim(n))
            for n in range(lo, hi + 1)
        ]


def delta_matrix(A: DGModel, B, phi: DGMorphism, n: int) -> QMatrix:
    return DerComplex(A, B, phi).delta_matrix(n)


def homology_dim(A: DGModel, B, phi: DGMorphism, n: int) -> int:
    return DerComplex(A, B, phi).homology_dim(n)


def _block(rows: list[list], cols: int) -> QMatrix:
    return QMatrix.from_rows(rows, cols)


def induced_rank(f: QMatrix, src_cycles: list[tuple], tgt_boundaries: list[tuple], tgt_dim: int) -> int:
    """Rank of the map on homology induced by the chain map ``f``."""
    images = [f.apply(z) for z in src_cycles]
    b = span_rank(tgt_boundaries, tgt_dim)
    return span_rank(images + list(tgt_boundaries), tgt_dim) - b


@dataclass
class LESNode:
    label: str
    dim: int
    rank_in: int
    rank_out: int

    @property
    def exact(self) -> bool:
        return self.rank_in + self.rank_out == self.dim


class RelativeComplex:
    """Mapping cone of ψ*: Der(A, B; φ) -> Der(A', B; φ∘ψ) for ψ: A' -> A.

    Rel_n = Der_n(A') ⊕ Der_{n-1}(A) with D(θ, ϑ) = (δ'θ - ψ*ϑ, -δϑ).
    """

    def __init__(self, psi: DGMorphism, B, phi: DGMorphism, phi_prime: DGMorphism | None = None):
        A_prime, A = psi.source, psi.target
        composite = compose(phi, psi)
        if phi_prime is not None:
            mismatch = [g for g in composite.values if composite.values[g] != phi_prime.values.get(g, Element())]
            if mismatch:
                raise AlgebraError(f"φ' differs from φ∘ψ on {mismatch}")
        else:
            phi_prime = composite
        rep = validate_morphism(psi)
        if not rep.ok:
            raise AlgebraError("ψ is not a DG morphism")
        self.psi = psi
        self.big = DerComplex(A, B, phi)
        self.small = DerComplex(A_prime, B, phi_prime)
        self._D: dict[int, QMatrix] = {}
        self._psi_star: dict[int, QMatrix] = {}

    @property
    def top(self) -> int:
        return max(self.big.top, self.small.top) + 1

    def psi_star_matrix(self, n: int) -> QMatrix:
        """ψ*: Der_n(A) -> Der_n(A'), θ ↦ θ∘ψ."""
        if n in self._psi_star:
            return self._psi_star[n]
        src = self.big.slice(n)
        tgt = self.small.slice(n)
        A_prime = self.psi.source
        cols = []
        for i in range(src.dim):
            theta = self.big.basis_derivation(n, i)
            values = {}
            for g in A_prime.generators:
                v = evaluate(theta, self.psi.values[g.name], self.big.phi)
                if v:
                    values[g.name] = v
            cols.append(vector_of(Derivation(n, values), tgt, A_prime, self.small.B))
        m = QMatrix.from_columns(cols, tgt.dim)
        self._psi_star[n] = m
        return m

    def dim(self, n: int) -> int:
        return self.small.slice(n).dim + self.big.slice(n - 1).dim

    def D(self, n: int) -> QMatrix:
        if n in self._D:
            return self._D[n]
        a_src, b_src = self.small.slice(n).dim, self.big.slice(n - 1).dim
        a_tgt, b_tgt = self.small.slice(n - 1).dim, self.big.slice(n - 2).dim
        d_small = self.small.delta_matrix(n)
        d_big = self.big.delta_matrix(n - 1)
        ps = self.psi_star_matrix(n - 1)
        rows = []
        for i in range(a_tgt):
            rows.append(d_small.row(i) + [-x for x in ps.row(i)])
        for i in range(b_tgt):
            rows.append([Fraction(0)] * a_src + [-x for x in d_big.row(i)])
        m = _block(rows, a_src + b_src)
        self._D[n] = m
        return m

    def homology_dim(self, n: int) -> int:
        if n < 0:
            return 0
        return self.dim(n) - rank(self.D(n)) - rank(self.D(n + 1))

    def _cycles(self, n: int) -> list[tuple]:
        return kernel_basis(self.D(n))

    def _boundaries(self, n: int) -> list[tuple]:
        m = self.D(n + 1)
        return [tuple(m.column(j)) for j in range(m.cols)]

    def j_matrix(self, n: int) -> QMatrix:
        a, b = self.small.slice(n).dim, self.big.slice(n - 1).dim
        return QMatrix.from_rows(
            [[Fraction(int(i == j)) for j in range(a)] for i in range(a)] + [[Fraction(0)] * a for _ in range(b)], a
        )

    def p_matrix(self, n: int) -> QMatrix:
        a, b = self.small.slice(n).dim, self.big.slice(n - 1).dim
        return QMatrix.from_rows([[Fraction(0)] * a + [Fraction(int(i == j)) for j in range(b)] for i in range(b)], a + b)

    def long_exact_sequence(self) -> list[LESNode]:
        """Nodes from high degree down: H_n(A) -> H_n(A') -> H_n(Rel) -> H_{n-1}(A) -> ..."""
        big, small = self.big, self.small

        def r_psi(n):
            if n < 0:
                return 0
            return induced_rank(self.psi_star_matrix(n), big.cycles(n), small.boundaries(n), small.slice(n).dim)

        def r_j(n):
            if n < 0:
                return 0
            return induced_rank(self.j_matrix(n), small.cycles(n), self._boundaries(n), self.dim(n))

        def r_p(n):
            if n < 1:
                return 0
            return induced_rank(self.p_matrix(n), self._cycles(n), big.boundaries(n - 1), big.slice(n - 1).dim)

        nodes = []
        for n in range(self.top + 1, -1, -1):
            nodes.append(LESNode(f"H_{n}(Der A)", big.homology_dim(n), r_p(n + 1), r_psi(n)))
            nodes.append(LESNode(f"H_{n}(Der A')", small.homology_dim(n), r_psi(n), r_j(n)))
            nodes.append(LESNode(f"H_{n}(Rel)", self.homology_dim(n), r_j(n), r_p(n)))
        return nodes


def relative_homology(psi: DGMorphism, B, phi: DGMorphism, n: int, phi_prime: DGMorphism | None = None):
    """dim H_n(Rel(ψ*)) and the long exact sequence around it."""
    rel = RelativeComplex(psi, B, phi, phi_prime)
    return rel.homology_dim(n), rel.long_exact_sequence()
