"""F0 rank formula against the derivation complex for complete flag manifolds.

For each source table X and each small integral map t_i -> c_i·(degree-2
class) respecting the relations of H*(SU(n)/T), print f0_rank and dim H_1 of
the complex.

    python scripts/flag_manifolds.py --n 3 4 --coeff 1
"""
import argparse
import itertools
from dataclasses import dataclass, field

from fsrank import rankcalc as rc
from fsrank.cdga import DGMorphism, TableAlgebra, validate_morphism
from fsrank.cli import corpus_files
from fsrank.dsl import load
from fsrank.sullivan import flag_presentation


@dataclass
class Config:
    ns: list[int] = field(default_factory=lambda: [3, 4])
    sources: list[str] = field(default_factory=lambda: ["HS2", "HCP2"])
    coeff: int = 1


def maps(ring, X, bound):
    low = X.basis(2)
    if len(low) != 1:
        return
    c = low[0]
    gens = ring.presentation.algebra.generators
    for vec in itertools.product(range(-bound, bound + 1), repeat=len(gens)):
        f = DGMorphism(ring, X, {g.name: X.elem(c, k) for g, k in zip(gens, vec) if k})
        if validate_morphism(f).ok:
            yield vec, f


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, nargs="+", default=Config().ns)
    ap.add_argument("--source", nargs="+", default=Config().sources)
    ap.add_argument("--coeff", type=int, default=Config.coeff)
    a = ap.parse_args(argv)
    cfg = Config(ns=a.n, sources=a.source, coeff=a.coeff)
    corpus = load(corpus_files())
    print(f"{'Y':<5} {'X':<5} {'map':<14} {'f0':>3} {'D2':>3} {'H1':>3}")
    for n in cfg.ns:
        ring = TableAlgebra.from_presentation(flag_presentation(n), name=f"Fl{n}")
        for xname in cfg.sources:
            X = corpus.get(xname)
            for vec, f in maps(ring, X, cfg.coeff):
                r = rc.f0_rank(ring, X, f)
                h1 = rc.rank_pi1(rc.f0_problem(ring, X, f))
                flag = "" if r.rank == h1 else "  MISMATCH"
                print(f"Fl{n:<3} {xname:<5} {str(vec):<14} {r.rank:>3} {r.d2:>3} {h1:>3}{flag}")


if __name__ == "__main__":
    main()
