"""Rank table for every problem in the bundled corpus.

For each problem the derivation complex gives rank π_1 and rank π_n; the
null component is recomputed both ways (complex and closed form), and the
inequality rank(f) <= rank(0) is checked.

    python scripts/corpus_agreement.py --max-n 4
"""
import argparse
from dataclasses import dataclass

from fsrank import rankcalc as rc
from fsrank.cdga import AlgebraError, TableAlgebra
from fsrank.cli import Session, corpus_files
from fsrank.dsl import load
from fsrank.sullivan import indecomposable_dims


@dataclass
class Config:
    max_n: int = 3
    files: tuple[str, ...] = ()


def rows(cfg: Config):
    doc = load(list(cfg.files) or corpus_files())
    for name in doc.names("problem"):
        p = Session(doc, {"problem": name}).problem()
        try:
            ranks = [rc.rank_pi1(p)] + [rc.rank_pi_n(p, n) for n in range(2, cfg.max_n + 1)]
        except AlgebraError as e:
            yield name, None, str(e)
            continue
        z = p.with_zero()
        null_cx = rc.rank_pi1(z)
        closed = ""
        if isinstance(p.source, TableAlgebra) or p.dim is not None:
            closed = rc.rank_pi1_null(z.betti_X(), indecomposable_dims(z.target))
        yield name, (p.N, ranks, null_cx, closed, ranks[0] <= null_cx), ""


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-n", type=int, default=Config.max_n)
    ap.add_argument("--file", action="append", default=[])
    a = ap.parse_args(argv)
    cfg = Config(max_n=a.max_n, files=tuple(a.file))
    head = ["pi_1"] + [f"pi_{n}" for n in range(2, cfg.max_n + 1)]
    print(f"{'problem':<16} {'N':>2} " + " ".join(f"{h:>5}" for h in head) + "  null(cx) null(formula) ineq")
    for name, data, err in rows(cfg):
        if data is None:
            print(f"{name:<16} skipped: {err}")
            continue
        N, ranks, null_cx, closed, ok = data
        print(f"{name:<16} {N:>2} " + " ".join(f"{r:>5}" for r in ranks)
              + f"  {null_cx:>8} {closed!s:>13} {'ok' if ok else 'VIOLATED'}")


if __name__ == "__main__":
    main()
