"""Brute-force reference implementation used only by the tests.

Elements are dicts from sorted index tuples to Fractions.  Products are
formed by concatenating words and bubble-sorting them, picking up a sign for
every transposition of two odd letters.  Ranks come from sympy.  Nothing here
imports the package.
"""
from __future__ import annotations

from fractions import Fraction
from itertools import combinations_with_replacement

import sympy


class FreeCDGA:
    def __init__(self, gens, diffs=None):
        # gens: list of (name, degree); diffs: name -> {tuple of names: coeff}
        self.names = [g for g, _ in gens]
        self.deg = [d for _, d in gens]
        self.idx = {g: i for i, g in enumerate(self.names)}
        self.diff = {}
        for g, terms in (diffs or {}).items():
            self.diff[self.idx[g]] = self.from_words(terms)

    def from_words(self, terms):
        out = {}
        for word, c in terms.items():
            for k, v in self.word([self.idx[w] for w in word]).items():
                out[k] = out.get(k, 0) + v * Fraction(c)
        return {k: v for k, v in out.items() if v}

    def word(self, letters):
        """Normal form of a word: (sorted tuple) -> sign, or {} if it vanishes."""
        w = list(letters)
        sign = 1
        for i in range(len(w)):
            for j in range(len(w) - 1 - i):
                if w[j] > w[j + 1]:
                    if self.deg[w[j]] % 2 and self.deg[w[j + 1]] % 2:
                        sign = -sign
                    w[j], w[j + 1] = w[j + 1], w[j]
        for a, b in zip(w, w[1:]):
            if a == b and self.deg[a] % 2:
                return {}
        return {tuple(w): Fraction(sign)}

    def degree(self, mono):
        return sum(self.deg[i] for i in mono)

    def mul(self, x, y):
        out = {}
        for m1, c1 in x.items():
            for m2, c2 in y.items():
                for k, s in self.word(list(m1) + list(m2)).items():
                    out[k] = out.get(k, 0) + c1 * c2 * s
        return {k: v for k, v in out.items() if v}

    def basis(self, n):
        if n == 0:
            return [()]
        out = []
        positive = [i for i in range(len(self.deg)) if self.deg[i] > 0]
        for length in range(1, n + 1):
            for combo in combinations_with_replacement(positive, length):
                if self.degree(combo) != n:
                    continue
                if any(combo.count(i) > 1 and self.deg[i] % 2 for i in set(combo)):
                    continue
                out.append(combo)
        return sorted(out)

    def one(self):
        return {(): Fraction(1)}

    def gen(self, i):
        return {(i,): Fraction(1)}

    def d(self, x):
        out = {}
        for mono, c in x.items():
            before = 0
            for pos, i in enumerate(mono):
                di = self.diff.get(i, {})
                if di:
                    left = {tuple(mono[:pos]): Fraction(1)}
                    right = {tuple(mono[pos + 1 :]): Fraction(1)}
                    term = self.mul(self.mul(left, di), right)
                    s = -1 if before % 2 else 1
                    for k, v in term.items():
                        out[k] = out.get(k, 0) + s * c * v
                before += self.deg[i]
        return {k: v for k, v in out.items() if v}

    def coords(self, x, n):
        return [x.get(m, 0) for m in self.basis(n)]


class Table:
    """Finite-dimensional graded-commutative algebra with zero differential."""

    def __init__(self, basis, products):
        # basis: list of (name, degree) without the unit; products: (a, b) -> {name: c}
        self.deg = {"1": 0, **dict(basis)}
        self.order = ["1"] + [b for b, _ in basis]
        self.prod = {}
        for (a, b), v in products.items():
            self.prod[(a, b)] = dict(v)
            sign = -1 if self.deg[a] % 2 and self.deg[b] % 2 else 1
            self.prod[(b, a)] = {k: sign * c for k, c in v.items()}

    def basis(self, n):
        return [b for b in self.order if self.deg[b] == n]

    def one(self):
        return {"1": Fraction(1)}

    def mul(self, x, y):
        out = {}
        for a, ca in x.items():
            for b, cb in y.items():
                if a == "1":
                    p = {b: 1}
                elif b == "1":
                    p = {a: 1}
                else:
                    p = self.prod.get((a, b), {})
                for k, c in p.items():
                    out[k] = out.get(k, 0) + ca * cb * c
        return {k: v for k, v in out.items() if v}

    def d(self, x):
        return {}

    def coords(self, x, n):
        return [x.get(b, 0) for b in self.basis(n)]


def mat_rank(rows, ncols):
    if not rows or not ncols:
        return 0
    return sympy.Matrix(rows).rank()


def betti(m: FreeCDGA, top: int):
    dims = []
    for n in range(top + 1):
        b = m.basis(n)
        nxt = m.basis(n + 1)
        dn = [[m.d({mono: Fraction(1)}).get(t, 0) for mono in b] for t in nxt]
        prev = m.basis(n - 1) if n > 0 else []
        dp = [[m.d({mono: Fraction(1)}).get(t, 0) for mono in prev] for t in b]
        dims.append(len(b) - mat_rank(dn, len(b)) - mat_rank(dp, len(prev)))
    return dims


class Derivations:
    """Der_*(A, B; phi) by the recursive Leibniz rule."""

    def __init__(self, A: FreeCDGA, B, phi):
        # phi: generator index -> element of B
        self.A, self.B, self.phi = A, B, phi

    def phi_of(self, x):
        out = {}
        for mono, c in x.items():
            v = self.B.one()
            for i in mono:
                v = self.B.mul(v, self.phi.get(i, {}))
            for k, w in v.items():
                out[k] = out.get(k, 0) + c * w
        return {k: v for k, v in out.items() if v}

    def theta_mono(self, theta, n, mono):
        if not mono:
            return {}
        head, rest = mono[0], tuple(mono[1:])
        first = self.B.mul(theta.get(head, {}), self.phi_of({rest: Fraction(1)}))
        second = self.B.mul(self.phi.get(head, {}), self.theta_mono(theta, n, rest))
        s = -1 if (n * self.A.deg[head]) % 2 else 1
        out = dict(first)
        for k, v in second.items():
            out[k] = out.get(k, 0) + s * v
        return {k: v for k, v in out.items() if v}

    def apply(self, theta, n, x):
        out = {}
        for mono, c in x.items():
            for k, v in self.theta_mono(theta, n, mono).items():
                out[k] = out.get(k, 0) + c * v
        return {k: v for k, v in out.items() if v}

    def slice(self, n):
        if n < 0:
            return []
        return [(g, b) for g in range(len(self.A.deg)) for b in self.B.basis(self.A.deg[g] - n)]

    def delta(self, theta, n):
        out = {}
        s = -1 if n % 2 == 0 else 1
        for g in range(len(self.A.deg)):
            v = dict(self.B.d(theta.get(g, {})))
            for k, w in self.apply(theta, n, self.A.diff.get(g, {})).items():
                v[k] = v.get(k, 0) + s * w
            v = {k: w for k, w in v.items() if w}
            if v:
                out[g] = v
        return out

    def matrix(self, n):
        src, tgt = self.slice(n), self.slice(n - 1)
        if n <= 0:
            return [], len(src)
        pos = {p: i for i, p in enumerate(tgt)}
        cols = []
        for g, b in src:
            col = [Fraction(0)] * len(tgt)
            for h, v in self.delta({g: {b: Fraction(1)}}, n).items():
                for k, c in v.items():
                    col[pos[(h, k)]] += c
            cols.append(col)
        rows = [[cols[j][i] for j in range(len(src))] for i in range(len(tgt))]
        return rows, len(src)

    def homology(self, n):
        dim = len(self.slice(n))
        r1 = mat_rank(*self.matrix(n))
        r2 = mat_rank(*self.matrix(n + 1))
        return dim - r1 - r2


def table_from(tab) -> Table:
    """Copy a package TableAlgebra into the oracle format (data only)."""
    basis = [(b, d) for b, d in tab.entries if b != "1"]
    prods = {}
    for (a, b), v in tab.products.items():
        if (b, a) not in prods:
            prods[(a, b)] = dict(v.terms)
    return Table(basis, prods)
