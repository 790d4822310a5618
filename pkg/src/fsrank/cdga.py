"""Graded-commutative algebras over Q, differentials, morphisms and cohomology.

Two kinds of algebra share one element type:

* ``FreeAlgebra``: free graded-commutative algebra on generators.  Basis keys
  are exponent tuples indexed by generator position; generators are kept in
  normal order, sorted by (degree, declaration index).
* ``TableAlgebra``: finite-dimensional algebra given by structure constants,
  e.g. a cohomology ring.  Basis keys are basis-element names, ``"1"`` is the
  unit.  Built either from an explicit table or from a presentation
  (polynomial generators plus relations).

``DGModel`` wraps a free algebra with a differential.  Anything that can
serve as the target of a morphism or a derivation exposes ``basis(n)``,
``multiply``, ``d``, ``one`` and ``coordinates``; a table algebra acts as a DG
algebra with zero differential.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence

from fsrank.qlinalg import QMatrix, kernel_basis, rank, rref

UNIT = "1"


class AlgebraError(ValueError):
    """Inconsistent algebra data: bad degrees, non-homogeneous elements, etc."""


@dataclass(frozen=True)
class Generator:
    name: str
    degree: int
    stage: tuple[int, int] | None = None

    def __post_init__(self):
        if self.degree < 1:
            raise AlgebraError(f"generator {self.name} must have degree >= 1, got {self.degree}")

    @property
    def odd(self) -> bool:
        return self.degree % 2 == 1


class Element:
    """Homogeneous Q-linear combination of basis keys.

    The zero element has ``degree is None`` and is compatible with every
    degree.
    """

    __slots__ = ("terms", "degree")

    def __init__(self, terms: Mapping | None = None, degree: int | None = None):
        clean = {}
        for k, v in (terms or {}).items():
            v = Fraction(v)
            if v:
                clean[k] = v
        if clean and degree is None:
            raise AlgebraError("a nonzero element needs a degree")
        self.terms: dict = clean
        self.degree: int | None = degree if clean else None

    @classmethod
    def zero(cls) -> "Element":
        return cls()

    def _check(self, other: "Element") -> int | None:
        if self.degree is None:
            return other.degree
        if other.degree is None or other.degree == self.degree:
            return self.degree
        raise AlgebraError(f"cannot add elements of degrees {self.degree} and {other.degree}")

    def __add__(self, other: "Element") -> "Element":
        deg = self._check(other)
        terms = dict(self.terms)
        for k, v in other.terms.items():
            terms[k] = terms.get(k, 0) + v
        return Element(terms, deg)

    def __sub__(self, other: "Element") -> "Element":
        return self + (-other)

    def __neg__(self) -> "Element":
        return Element({k: -v for k, v in self.terms.items()}, self.degree)

    def scale(self, c) -> "Element":
        c = Fraction(c)
        if not c:
            return Element()
        return Element({k: c * v for k, v in self.terms.items()}, self.degree)

    def __rmul__(self, c) -> "Element":
        return self.scale(c)

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Element):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __iter__(self) -> Iterator:
        return iter(self.terms.items())

    def coeff(self, key) -> Fraction:
        return self.terms.get(key, Fraction(0))

    def __repr__(self) -> str:
        return f"Element({self.terms!r}, degree={self.degree})"


def _fmt_coeff(c: Fraction, body: str, first: bool) -> str:
    sign = "-" if c < 0 else "+"
    a = abs(c)
    if body == "":
        core = str(a)
    elif a == 1:
        core = body
    else:
        core = f"{a}*{body}"
    if first:
        return core if sign == "+" else f"-{core}"
    return f" {sign} {core}"


def sum_elements(items: Iterable[Element]) -> Element:
    out = Element()
    for e in items:
        out = out + e
    return out


class FreeAlgebra:
    """Free graded-commutative algebra Λ(generators) over Q."""

    def __init__(self, generators: Sequence[Generator]):
        names = [g.name for g in generators]
        if len(set(names)) != len(names):
            raise AlgebraError(f"duplicate generator names in {names}")
        order = sorted(range(len(generators)), key=lambda i: (generators[i].degree, i))
        self.generators: tuple[Generator, ...] = tuple(generators[i] for i in order)
        self.index = {g.name: i for i, g in enumerate(self.generators)}
        self._degrees = tuple(g.degree for g in self.generators)
        self._odd = tuple(g.odd for g in self.generators)
        self._basis_cache: dict[int, list[tuple]] = {}
        self._mul_cache: dict[tuple, tuple[int, tuple] | None] = {}

    def __len__(self):
        return len(self.generators)

    def __eq__(self, other):
        return isinstance(other, FreeAlgebra) and self.generators == other.generators

    def __hash__(self):
        return hash(self.generators)

    @property
    def top_degree(self) -> None:
        return None

    def generator(self, name: str) -> Generator:
        try:
            return self.generators[self.index[name]]
        except KeyError:
            raise AlgebraError(f"unknown generator {name!r}") from None

    def mono_degree(self, mono: tuple) -> int:
        return sum(e * d for e, d in zip(mono, self._degrees))

    def unit_key(self) -> tuple:
        return (0,) * len(self.generators)

    def one(self) -> Element:
        return Element({self.unit_key(): 1}, 0)

    def gen(self, name: str) -> Element:
        i = self.index.get(name)
        if i is None:
            raise AlgebraError(f"unknown generator {name!r}")
        key = tuple(int(j == i) for j in range(len(self.generators)))
        return Element({key: 1}, self._degrees[i])

    def monomial(self, mono: tuple, coeff=1) -> Element:
        return Element({mono: coeff}, self.mono_degree(mono))

    def constant(self, c) -> Element:
        return self.one().scale(c)

    def factors(self, mono: tuple) -> list[int]:
        """Generator positions of a monomial in normal order, with repetition."""
        out = []
        for i, e in enumerate(mono):
            out.extend([i] * e)
        return out

    def _mul_mono(self, m1: tuple, m2: tuple) -> tuple[int, tuple] | None:
        key = (m1, m2)
        if key in self._mul_cache:
            return self._mul_cache[key]
        sign = 1
        odd_after = 0
        result = None
        for j in range(len(m1) - 1, -1, -1):
            if self._odd[j]:
                if m1[j] and m2[j]:
                    break
                if m2[j] and odd_after % 2:
                    sign = -sign
                if m1[j]:
                    odd_after += 1
        else:
            result = (sign, tuple(a + b for a, b in zip(m1, m2)))
        self._mul_cache[key] = result
        return result

    def multiply(self, a: Element, b: Element) -> Element:
        if not a or not b:
            return Element()
        terms: dict = {}
        for m1, c1 in a.terms.items():
            for m2, c2 in b.terms.items():
                r = self._mul_mono(m1, m2)
                if r is None:
                    continue
                s, m = r
                terms[m] = terms.get(m, 0) + s * c1 * c2
        return Element(terms, a.degree + b.degree)

    def power(self, a: Element, k: int) -> Element:
        out = self.one()
        for _ in range(k):
            out = self.multiply(out, a)
        return out

    def basis(self, n: int) -> list[tuple]:
        """Normal-form monomials of degree ``n``, in descending lexicographic order."""
        if n in self._basis_cache:
            return self._basis_cache[n]
        if n < 0:
            return []
        gens = self.generators
        out: list[tuple] = []

        def rec(i: int, remaining: int, acc: list[int]):
            if i == len(gens):
                if remaining == 0:
                    out.append(tuple(acc))
                return
            d = gens[i].degree
            top = remaining // d
            if gens[i].odd:
                top = min(top, 1)
            for e in range(top, -1, -1):
                acc.append(e)
                rec(i + 1, remaining - e * d, acc)
                acc.pop()

        rec(0, n, [])
        out.sort(reverse=True)
        self._basis_cache[n] = out
        return out

    def coordinates(self, a: Element, n: int) -> list[Fraction]:
        if a and a.degree != n:
            raise AlgebraError(f"element of degree {a.degree} read in degree {n}")
        return [a.coeff(m) for m in self.basis(n)]

    def from_coordinates(self, vec: Sequence, n: int) -> Element:
        return Element(dict(zip(self.basis(n), vec)), n)

    def word_length(self, mono: tuple) -> int:
        return sum(mono)

    def format_mono(self, mono: tuple) -> str:
        parts = []
        for g, e in zip(self.generators, mono):
            if e == 1:
                parts.append(g.name)
            elif e > 1:
                parts.append(f"{g.name}^{e}")
        return "*".join(parts)

    def format(self, a: Element) -> str:
        if not a:
            return "0"
        keys = sorted(a.terms, reverse=True)
        return "".join(
            _fmt_coeff(a.terms[m], self.format_mono(m), i == 0) for i, m in enumerate(keys)
        )

    def mentions(self, a: Element) -> set[str]:
        names = set()
        for m in a.terms:
            for g, e in zip(self.generators, m):
                if e:
                    names.add(g.name)
        return names

    def restrict(self, names: Iterable[str]) -> "FreeAlgebra":
        keep = set(names)
        return FreeAlgebra([g for g in self.generators if g.name in keep])

    def transfer(self, a: Element, other: "FreeAlgebra") -> Element:
        """Re-express ``a`` in another free algebra sharing its generator names."""
        terms = {}
        for m, c in a.terms.items():
            key = [0] * len(other)
            for g, e in zip(self.generators, m):
                if e:
                    if g.name not in other.index:
                        raise AlgebraError(f"generator {g.name} is not in the target algebra")
                    key[other.index[g.name]] = e
            terms[tuple(key)] = c
        return Element(terms, a.degree)


class DGModel:
    """A free algebra with a degree +1 differential given on generators."""

    def __init__(
        self,
        algebra: FreeAlgebra,
        differential: Mapping[str, Element] | None = None,
        name: str | None = None,
        check: bool = True,
    ):
        self.algebra = algebra
        self.name = name
        diff = dict(differential or {})
        for k in diff:
            algebra.generator(k)
        self.differential: dict[str, Element] = {
            g.name: diff.get(g.name, Element()) for g in algebra.generators
        }
        for g in algebra.generators:
            v = self.differential[g.name]
            if v and v.degree != g.degree + 1:
                raise AlgebraError(
                    f"d({g.name}) has degree {v.degree}, expected {g.degree + 1}"
                )
        self._d_cache: dict[tuple, Element] = {}
        if check:
            bad = self.d_squared_violations()
            if bad:
                raise AlgebraError(f"d^2 != 0 on generator(s) {', '.join(bad)}")

    @classmethod
    def build(
        cls, gens: Sequence[tuple[str, int]], diff: Mapping[str, str] | None = None, name=None
    ) -> "DGModel":
        """Convenience constructor: ``DGModel.build([("a", 2), ("b", 3)], {"b": "a^2"})``."""
        from fsrank.dsl import parse_polynomial

        alg = FreeAlgebra([Generator(n, d) for n, d in gens])
        values = {k: parse_polynomial(v, alg) for k, v in (diff or {}).items()}
        return cls(alg, values, name=name)

    # target-algebra interface
    @property
    def generators(self) -> tuple[Generator, ...]:
        return self.algebra.generators

    @property
    def top_degree(self) -> None:
        return None

    def basis(self, n: int) -> list[tuple]:
        return self.algebra.basis(n)

    def multiply(self, a: Element, b: Element) -> Element:
        return self.algebra.multiply(a, b)

    def one(self) -> Element:
        return self.algebra.one()

    def coordinates(self, a: Element, n: int) -> list[Fraction]:
        return self.algebra.coordinates(a, n)

    def format(self, a: Element) -> str:
        return self.algebra.format(a)

    def gen(self, name: str) -> Element:
        return self.algebra.gen(name)

    def d_squared_violations(self) -> list[str]:
        return [g.name for g in self.generators if self.d(self.differential[g.name])]

    def _d_mono(self, mono: tuple) -> Element:
        if mono in self._d_cache:
            return self._d_cache[mono]
        alg = self.algebra
        i = next((j for j, e in enumerate(mono) if e), None)
        if i is None:
            out = Element()
        else:
            g = alg.generators[i]
            rest = list(mono)
            rest[i] -= 1
            rest = tuple(rest)
            rest_el = alg.monomial(rest)
            out = alg.multiply(self.differential[g.name], rest_el)
            d_rest = self._d_mono(rest)
            if d_rest:
                term = alg.multiply(alg.gen(g.name), d_rest)
                out = out + (term if g.degree % 2 == 0 else -term)
        self._d_cache[mono] = out
        return out

    def d(self, a: Element) -> Element:
        out = Element()
        for m, c in a.terms.items():
            out = out + self._d_mono(m).scale(c)
        return out

    def d_matrix(self, n: int) -> QMatrix:
        """Matrix of d: A^n -> A^{n+1} in the monomial bases."""
        src = self.basis(n)
        tgt = self.basis(n + 1)
        cols = [self.coordinates(self._d_mono(m), n + 1) if self._d_mono(m) else [0] * len(tgt)
                for m in src]
        return QMatrix.from_columns(cols, len(tgt))

    def generator_degrees(self) -> list[int]:
        return [g.degree for g in self.generators]

    def max_generator_degree(self) -> int:
        return max((g.degree for g in self.generators), default=0)

    def __eq__(self, other):
        return (
            isinstance(other, DGModel)
            and self.algebra == other.algebra
            and self.differential == other.differential
        )

    def __hash__(self):
        return hash(self.algebra)

    def __repr__(self):
        gens = ", ".join(f"{g.name}:{g.degree}" for g in self.generators)
        return f"DGModel({self.name or ''}: {gens})"


@dataclass
class AlgebraPresentation:
    """Q[generators] / (relations) with even-degree generators."""

    algebra: FreeAlgebra
    relations: list[Element]

    def __post_init__(self):
        for g in self.algebra.generators:
            if g.odd:
                raise AlgebraError(f"presentation generator {g.name} has odd degree {g.degree}")
        self.relations = [r for r in self.relations if r]


class TableAlgebra:
    """Finite-dimensional graded-commutative algebra from structure constants."""

    def __init__(
        self,
        basis: Sequence[tuple[str, int]],
        products: Mapping[tuple[str, str], Element],
        name: str | None = None,
        presentation: AlgebraPresentation | None = None,
        reducer=None,
        check: bool = True,
    ):
        names = [b for b, _ in basis]
        if UNIT in names:
            raise AlgebraError("the unit '1' is implicit and must not be listed")
        if len(set(names)) != len(names):
            raise AlgebraError(f"duplicate basis names in {names}")
        for b, d in basis:
            if d < 1:
                raise AlgebraError(f"basis element {b} must have positive degree")
        self.name = name
        self.entries: tuple[tuple[str, int], ...] = ((UNIT, 0),) + tuple(basis)
        self.degree_of = dict(self.entries)
        self.presentation = presentation
        self._reducer = reducer
        self._by_degree: dict[int, list[str]] = {}
        for b, d in self.entries:
            self._by_degree.setdefault(d, []).append(b)
        self.products: dict[tuple[str, str], Element] = {}
        for (a, b), v in products.items():
            self._set_product(a, b, v)
        if check:
            problems = self.validate()
            if problems:
                raise AlgebraError("; ".join(problems))

    def _set_product(self, a: str, b: str, v: Element):
        for x in (a, b):
            if x not in self.degree_of:
                raise AlgebraError(f"unknown basis element {x!r}")
        if UNIT in (a, b):
            other = b if a == UNIT else a
            if v != self.elem(other):
                raise AlgebraError(f"unit product 1*{other} must equal {other}")
            return
        deg = self.degree_of[a] + self.degree_of[b]
        if v and v.degree != deg:
            raise AlgebraError(f"{a}*{b} has degree {v.degree}, expected {deg}")
        sign = -1 if (self.degree_of[a] % 2 and self.degree_of[b] % 2) else 1
        existing = self.products.get((a, b))
        if existing is not None and existing != v:
            raise AlgebraError(f"conflicting entries for {a}*{b}")
        mirrored = v.scale(sign)
        existing = self.products.get((b, a))
        if existing is not None and existing != mirrored:
            raise AlgebraError(f"{a}*{b} and {b}*{a} violate graded commutativity")
        self.products[(a, b)] = v
        self.products[(b, a)] = mirrored

    @classmethod
    def from_presentation(
        cls, presentation: AlgebraPresentation, name: str | None = None, top_degree: int | None = None,
        max_search: int = 64,
    ) -> "TableAlgebra":
        """Degreewise quotient of the polynomial algebra by the ideal's span.

        The ideal in degree k is spanned by (monomial x relation) products; the
        quotient basis is the set of non-pivot monomials, so lower monomials in
        the descending order survive.  Without ``top_degree`` the quotient is
        computed until it vanishes in ``max generator degree`` consecutive
        degrees.
        """
        alg = presentation.algebra
        rels = presentation.relations
        maxgen = max((g.degree for g in alg.generators), default=1)
        reductions: dict[int, dict[tuple, list]] = {}
        basis: list[tuple[str, int]] = []
        keys: dict[int, list[tuple]] = {}
        zero_run = 0
        k = 0
        limit = top_degree if top_degree is not None else max_search
        while k <= limit:
            monos = alg.basis(k)
            vecs = []
            for r in rels:
                for m in alg.basis(k - r.degree):
                    vecs.append(alg.coordinates(alg.multiply(alg.monomial(m), r), k))
            if vecs:
                reduced, pivots = rref(QMatrix.from_rows(vecs, len(monos)))
            else:
                reduced, pivots = [], []
            pset = set(pivots)
            standard = [m for j, m in enumerate(monos) if j not in pset]
            # a pivot monomial equals minus the rest of its (sparse) row
            rows = {monos[piv]: [(monos[j], -c) for j, c in enumerate(row) if c and j != piv]
                    for row, piv in zip(reduced, pivots)}
            reductions[k] = rows
            keys[k] = standard
            if k > 0:
                basis.extend((alg.format_mono(m), k) for m in standard)
            zero_run = zero_run + 1 if not standard else 0
            if top_degree is None and k > 0 and zero_run >= maxgen:
                break
            k += 1
        else:
            if top_degree is None:
                raise AlgebraError(
                    f"quotient is not finite-dimensional below degree {max_search}"
                )
        top = max((d for _, d in basis), default=0)
        name_of = {m: alg.format_mono(m) if k else UNIT for k, ms in keys.items() for m in ms}

        def reduce(p: Element) -> Element:
            if not p:
                return Element()
            n = p.degree
            if n > top:
                return Element()
            rows = reductions[n]
            out: dict = {}
            for m, c in p.terms.items():
                for m2, c2 in rows.get(m, ((m, 1),)):
                    out[m2] = out.get(m2, 0) + c * c2
            return Element({name_of[m]: c for m, c in sorted(out.items()) if c}, n)

        products = {}
        std_items = [(m, k) for k, ms in keys.items() if k > 0 for m in ms]
        for (m1, d1), (m2, d2) in itertools.product(std_items, repeat=2):
            products[(name_of[m1], name_of[m2])] = reduce(alg.multiply(alg.monomial(m1), alg.monomial(m2)))
        # associative and commutative by construction as a quotient
        return cls(basis, products, name=name, presentation=presentation, reducer=reduce, check=False)

    @property
    def top_degree(self) -> int:
        return max(self._by_degree)

    @property
    def basis_names(self) -> list[str]:
        return [b for b, _ in self.entries]

    def basis(self, n: int) -> list[str]:
        return list(self._by_degree.get(n, []))

    def betti(self, max_degree: int | None = None) -> list[int]:
        top = self.top_degree if max_degree is None else max_degree
        return [len(self._by_degree.get(n, [])) for n in range(top + 1)]

    def one(self) -> Element:
        return Element({UNIT: 1}, 0)

    def elem(self, name: str, coeff=1) -> Element:
        if name not in self.degree_of:
            raise AlgebraError(f"unknown basis element {name!r}")
        return Element({name: coeff}, self.degree_of[name])

    def multiply(self, a: Element, b: Element) -> Element:
        if not a or not b:
            return Element()
        deg = a.degree + b.degree
        if deg > self.top_degree:
            return Element()
        terms: dict = {}
        for x, cx in a.terms.items():
            for y, cy in b.terms.items():
                if x == UNIT:
                    prod = {y: 1}
                elif y == UNIT:
                    prod = {x: 1}
                else:
                    v = self.products.get((x, y))
                    if v is None:
                        continue
                    prod = v.terms
                for k, c in prod.items():
                    terms[k] = terms.get(k, 0) + cx * cy * c
        return Element(terms, deg)

    def d(self, a: Element) -> Element:
        return Element()

    def coordinates(self, a: Element, n: int) -> list[Fraction]:
        if a and a.degree != n:
            raise AlgebraError(f"element of degree {a.degree} read in degree {n}")
        return [a.coeff(b) for b in self.basis(n)]

    def reduce(self, p: Element) -> Element:
        """Image of a presentation polynomial in the table."""
        if self._reducer is None:
            raise AlgebraError(f"table {self.name or ''} has no presentation")
        return self._reducer(p)

    def format(self, a: Element) -> str:
        if not a:
            return "0"
        order = {b: i for i, b in enumerate(self.basis_names)}
        keys = sorted(a.terms, key=order.__getitem__)
        return "".join(
            _fmt_coeff(a.terms[b], "" if b == UNIT else b, i == 0) for i, b in enumerate(keys)
        )

    def validate(self) -> list[str]:
        problems = []
        names = self.basis_names[1:]
        for x, y, z in itertools.product(names, repeat=3):
            ex, ey, ez = self.elem(x), self.elem(y), self.elem(z)
            left = self.multiply(self.multiply(ex, ey), ez)
            right = self.multiply(ex, self.multiply(ey, ez))
            if left != right:
                problems.append(f"associativity fails on ({x}, {y}, {z})")
                if len(problems) > 5:
                    break
        return problems

    def odd_cohomology(self) -> bool:
        return any(d % 2 for _, d in self.entries)


def monomial_basis(alg: FreeAlgebra, n: int) -> list[tuple]:
    return alg.basis(n)


def multiply(a: Element, b: Element, alg) -> Element:
    return alg.multiply(a, b)


def apply_differential(m: DGModel, p: Element) -> Element:
    return m.d(p)


def table_multiply(a: Element, b: Element, alg: TableAlgebra) -> Element:
    return alg.multiply(a, b)


def cohomology_dims(m, max_degree: int) -> list[int]:
    """dim H^n for n = 0..max_degree."""
    if isinstance(m, TableAlgebra):
        return m.betti(max_degree)
    dims = []
    prev_rank = 0
    for n in range(max_degree + 1):
        dn = m.d_matrix(n)
        r = rank(dn)
        dims.append(len(m.basis(n)) - r - prev_rank)
        prev_rank = r
    return dims


def cocycle_space(m: DGModel, n: int) -> list[Element]:
    """Basis of the degree-n cocycles as elements."""
    return [m.algebra.from_coordinates(v, n) for v in kernel_basis(m.d_matrix(n))]


def is_model(x) -> bool:
    return isinstance(x, DGModel)


def source_algebra(source) -> FreeAlgebra:
    if isinstance(source, DGModel):
        return source.algebra
    if isinstance(source, TableAlgebra) and source.presentation is not None:
        return source.presentation.algebra
    raise AlgebraError("morphism sources must be free models or presented tables")


class DGMorphism:
    """Degree-0 algebra map determined by its values on source generators."""

    def __init__(self, source, target, values: Mapping[str, Element] | None = None, name: str | None = None):
        self.source = source
        self.target = target
        self.name = name
        alg = source_algebra(source)
        vals = dict(values or {})
        for k in vals:
            alg.generator(k)
        self.values: dict[str, Element] = {g.name: vals.get(g.name, Element()) for g in alg.generators}
        self._cache: dict[tuple, Element] = {}

    @property
    def source_algebra(self) -> FreeAlgebra:
        return source_algebra(self.source)

    def _apply_mono(self, mono: tuple) -> Element:
        if mono in self._cache:
            return self._cache[mono]
        alg = self.source_algebra
        out = self.target.one()
        for i in alg.factors(mono):
            out = self.target.multiply(out, self.values[alg.generators[i].name])
            if not out:
                break
        self._cache[mono] = out
        return out

    def apply(self, p: Element) -> Element:
        out = Element()
        for m, c in p.terms.items():
            v = self._apply_mono(m)
            if v:
                out = out + v.scale(c)
        return out

    def __call__(self, p: Element) -> Element:
        return self.apply(p)

    def is_zero(self) -> bool:
        return not any(self.values.values())

    def __repr__(self):
        return f"DGMorphism({self.name or ''})"


def zero_morphism(source, target, name: str | None = None) -> DGMorphism:
    return DGMorphism(source, target, {}, name=name or "zero")


def identity_morphism(m: DGModel) -> DGMorphism:
    return DGMorphism(m, m, {g.name: m.gen(g.name) for g in m.generators}, name="id")


def compose(phi: DGMorphism, psi: DGMorphism) -> DGMorphism:
    """phi o psi."""
    return DGMorphism(
        psi.source, phi.target, {k: phi.apply(v) for k, v in psi.values.items()},
        name=f"{phi.name or 'phi'}.{psi.name or 'psi'}",
    )


@dataclass
class MorphismReport:
    degree_violations: list[str] = field(default_factory=list)
    commute_violations: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.degree_violations and not self.commute_violations


def validate_morphism(f: DGMorphism) -> MorphismReport:
    report = MorphismReport()
    alg = f.source_algebra
    for g in alg.generators:
        v = f.values[g.name]
        if v and v.degree != g.degree:
            report.degree_violations.append(g.name)
    if report.degree_violations:
        return report
    if isinstance(f.source, DGModel):
        for g in alg.generators:
            lhs = f.target.d(f.values[g.name])
            rhs = f.apply(f.source.differential[g.name])
            if lhs != rhs:
                report.commute_violations.append(g.name)
    else:
        for i, r in enumerate(f.source.presentation.relations):
            if f.apply(r):
                report.commute_violations.append(f"relation {i + 1}")
    return report
