"""Command-line front end.

    fsrank <command> [key=value ...] [--file PATH ...] [--problem NAME]
           [--degree-range a..b] [--max-degree K] [--machine]

Without ``--file`` the bundled corpus is loaded.  Exit codes: 0 success,
1 validation failure, 2 parse or usage error.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from fsrank import rankcalc as rc
from fsrank.cdga import AlgebraError, TableAlgebra, validate_morphism, zero_morphism
from fsrank.dsl import ModelFile, ParseError, load
from fsrank.sullivan import betti_numbers, describe, indecomposable_dims, validate_minimal

COMMANDS = (
    "validate", "betti", "rank-pi1", "rank-pin", "rank-null", "f0-rank",
    "loop-rank", "der-homology", "inequality", "structure",
)
KEYS = ("problem", "model", "X", "Y", "f", "n", "alpha", "dim")


class UsageError(Exception):
    pass


class ValidationFailure(Exception):
    pass


@dataclass
class RunReport:
    command: str
    args: dict
    values: dict = field(default_factory=dict)
    tables: dict = field(default_factory=dict)
    diagnostics: list = field(default_factory=list)
    lines: list = field(default_factory=list)
    ok: bool = True

    def to_json(self) -> str:
        obj = {
            "command": self.command,
            "args": self.args,
            "values": self.values,
            "tables": self.tables,
            "diagnostics": self.diagnostics,
            "ok": self.ok,
        }
        return json.dumps(obj, sort_keys=True, indent=2)

    def to_text(self) -> str:
        return "\n".join(self.lines)


def corpus_files() -> list[Path]:
    root = resources.files("fsrank") / "corpus"
    return sorted(Path(str(p)) for p in root.iterdir() if str(p).endswith(".fm"))


def _parse_range(text: str) -> tuple[int, int]:
    try:
        lo, hi = text.split("..")
        lo, hi = int(lo), int(hi)
    except ValueError:
        raise UsageError(f"degree range must look like a..b, got {text!r}") from None
    if lo > hi or lo < 0:
        raise UsageError(f"empty or negative degree range {text!r}")
    return lo, hi


def _fmt_list(xs) -> str:
    return "[" + ",".join(str(x) for x in xs) + "]"


class Session:
    """Resolves names from the document and the key=value arguments."""

    def __init__(self, doc: ModelFile, opts: dict):
        self.doc = doc
        self.opts = opts

    def obj(self, name: str, kinds: tuple[str, ...] | None = None):
        if name not in self.doc.objects:
            raise UsageError(f"unknown name {name!r}")
        kind = self.doc.kinds[name]
        if kinds and kind not in kinds:
            raise UsageError(f"{name!r} is a {kind}, expected {' or '.join(kinds)}")
        return self.doc.objects[name]

    def problem_fields(self) -> dict:
        fields = {}
        pname = self.opts.get("problem")
        if pname:
            blk = self.obj(pname, ("problem",))
            fields.update(dict(blk.fields))
            fields["name"] = pname
        for k in ("X", "Y", "f", "dim", "alpha"):
            if k in self.opts:
                fields[k] = self.opts[k]
        if "Y" not in fields and "model" in self.opts:
            fields["Y"] = self.opts["model"]
        return fields

    def problem(self) -> rc.MapProblem:
        fl = self.problem_fields()
        for k in ("X", "Y"):
            if k not in fl:
                raise UsageError(f"need {k}= or problem=")
        X = self.obj(fl["X"], ("model", "cdga", "table", "ring"))
        Y = self.obj(fl["Y"], ("model", "cdga", "ring"))
        dim = int(fl["dim"]) if fl.get("dim") is not None else None
        fname = fl.get("f", "zero")
        if fname == "zero":
            f = zero_morphism(Y, X, name="zero")
        else:
            f = self.obj(fname, ("map",))
            src, tgt = self.doc.sources[fname]
            if src != fl["Y"] or tgt != fl["X"]:
                raise UsageError(f"map {fname} goes {src} -> {tgt}, expected {fl['Y']} -> {fl['X']}")
        if isinstance(Y, TableAlgebra):
            if not isinstance(X, TableAlgebra):
                raise ValidationFailure("a presented Y needs X given by a table")
            rep = validate_morphism(f)
            if not rep.ok:
                raise ValidationFailure(f"map {fname} does not respect the relations of {fl['Y']}")
            return rc.f0_problem(Y, X, f, name=fl.get("name"))
        return rc.MapProblem(X, Y, f, dim=dim, name=fl.get("name"))


def _cmd_validate(s: Session, rep: RunReport, flags) -> None:
    names = [s.opts[k] for k in ("model", "problem") if k in s.opts]
    names += [s.opts[k] for k in ("X", "Y") if k in s.opts]
    if not names:
        names = s.doc.names()
    for name in names:
        _validate_one(s, name, rep, flags)


def _validate_one(s: Session, name: str, rep: RunReport, flags) -> None:
    obj = s.obj(name)
    kind = s.doc.kinds[name]
    if kind in ("model", "cdga"):
        r = validate_minimal(obj)
        top = flags.max_degree if flags.max_degree is not None else obj.max_generator_degree() + 1
        betti = betti_numbers(obj, top)
        status = "minimal" if r.minimal else "not minimal"
        rep.lines.append(f"{kind} {name}: {status}")
        if not r.minimal:
            rep.lines.append(f"  {describe(r)}")
        if r.nilpotent_ordering is not None:
            rep.lines.append(f"  nilpotent ordering: {', '.join(r.nilpotent_ordering) or '(none)'}")
            stages = ", ".join(f"{d}:{c}" for d, c in r.stage_lengths.items())
            rep.lines.append(f"  stage lengths: {stages or '(none)'}")
        rep.lines.append(f"  betti[0..{top}]: {_fmt_list(betti)}")
        rep.values[f"{name}.minimal"] = int(r.minimal)
        rep.tables[f"{name}.betti"] = betti
        if kind == "model" and not r.minimal:
            rep.ok = False
            rep.diagnostics.append(f"{name}: {describe(r)}")
    elif kind in ("table", "ring"):
        bad = obj.validate()
        betti = obj.betti()
        rep.lines.append(f"{kind} {name}: {'ok' if not bad else 'invalid'}")
        if bad:
            rep.lines.append("  " + "; ".join(bad))
            rep.ok = False
            rep.diagnostics.extend(f"{name}: {b}" for b in bad)
        rep.lines.append(f"  betti[0..{obj.top_degree}]: {_fmt_list(betti)}")
        rep.tables[f"{name}.betti"] = betti
    elif kind == "map":
        r = validate_morphism(obj)
        rep.lines.append(f"map {name}: {'ok' if r.ok else 'invalid'}")
        for v in r.degree_violations + r.commute_violations:
            rep.lines.append(f"  {v}")
        if not r.ok:
            rep.ok = False
            rep.diagnostics.append(f"{name}: does not commute with differentials or degrees")
    else:
        sub = Session(s.doc, {"problem": name})
        try:
            p = sub.problem()
            p.check()
            rep.lines.append(f"problem {name}: ok (N = {p.N})")
        except (AlgebraError, ValidationFailure, UsageError) as e:
            rep.lines.append(f"problem {name}: invalid")
            rep.lines.append(f"  {e}")
            rep.ok = False
            rep.diagnostics.append(f"{name}: {e}")


def _cmd_betti(s: Session, rep: RunReport, flags) -> None:
    name = s.opts.get("model") or s.opts.get("X") or s.opts.get("Y")
    if not name:
        p = s.problem()
        name = s.problem_fields()["X"]
        betti = p.betti_X()
    else:
        obj = s.obj(name, ("model", "cdga", "table", "ring"))
        if isinstance(obj, TableAlgebra):
            betti = obj.betti(flags.max_degree)
        else:
            top = flags.max_degree if flags.max_degree is not None else obj.max_generator_degree() + 1
            betti = betti_numbers(obj, top)
    rep.lines.append(f"betti({name}) = {_fmt_list(betti)}")
    rep.tables["betti"] = betti


def _cmd_rank_pi1(s: Session, rep: RunReport, flags) -> None:
    p = s.problem()
    r = rc.rank_pi1(p)
    rep.values["rank_pi1"] = r
    rep.values["N"] = p.N
    rep.lines.append(f"rank_pi1 = {r}")


def _degrees(s: Session, flags) -> list[int]:
    if "n" in s.opts:
        return [int(s.opts["n"])]
    if flags.degree_range:
        lo, hi = _parse_range(flags.degree_range)
        return list(range(lo, hi + 1))
    raise UsageError("rank-pin needs n= or --degree-range")


def _cmd_rank_pin(s: Session, rep: RunReport, flags) -> None:
    p = s.problem()
    for n in _degrees(s, flags):
        r = rc.rank_pi1(p) if n == 1 else rc.rank_pi_n(p, n)
        rep.values[f"rank_pi{n}"] = r
        rep.lines.append(f"rank_pi{n} = {r}")


def _cmd_rank_null(s: Session, rep: RunReport, flags) -> None:
    p = s.problem()
    betti = p.betti_X()
    ranks = indecomposable_dims(p.target)
    degrees = _degrees(s, flags) if ("n" in s.opts or flags.degree_range) else [1]
    rep.tables["betti_X"] = betti
    for n in degrees:
        if n == 1:
            total = rc.rank_pi1_null(betti, ranks)
            terms = [(r, b) for _, r, b in rc.null_terms(betti, ranks) if r * b]
            head = [str(ranks.rank_pi1)] if ranks.rank_pi1 else []
        else:
            total = rc.rank_pi_n_null(betti, ranks, n)
            N = len(betti) - 1
            terms = [(ranks[k], betti[k - n]) for k in range(n, N + n + 1) if ranks[k] * betti[k - n]]
            head = []
        parts = head + [f"{r}*{b}" for r, b in terms]
        key = "rank_pi1_null" if n == 1 else f"rank_pi{n}_null"
        rep.values[key] = total
        rep.tables[f"{key}.terms"] = [list(t) for t in terms]
        rep.lines.append(f"{key} = {total} = {' + '.join(parts) or '0'}")


def _cmd_f0(s: Session, rep: RunReport, flags) -> None:
    fl = s.problem_fields()
    HY = s.obj(fl.get("Y", ""), ("ring",)) if fl.get("Y") else None
    if HY is None:
        raise UsageError("f0-rank needs a presented Y (ring block)")
    p = s.problem()
    HX = p.source
    if not isinstance(HX, TableAlgebra):
        raise ValidationFailure("f0-rank needs X given by a table")
    res = rc.f0_rank(HY, HX, p.morphism)
    direct = rc.rank_pi1(p)
    rep.values.update({"f0_rank": res.rank, "D2": res.d2, "rank_pi1": direct})
    rep.tables["odd_terms"] = [list(t) for t in res.odd_terms]
    rep.tables["even_terms"] = [list(t) for t in res.even_terms]
    odd = " + ".join(f"{r}*{b}" for _, r, b in res.odd_terms if r * b)
    even = " + ".join(f"{r}*{b}" for _, r, b in res.even_terms if r * b)
    rep.lines.append(f"f0_rank = {res.rank}")
    rep.lines.append(f"  D2 = {res.d2}")
    rep.lines.append(f"  odd terms: {odd or '0'}")
    rep.lines.append(f"  even terms: {even or '0'}")
    rep.lines.append(f"rank_pi1 = {direct}")
    if direct != res.rank:
        rep.ok = False
        rep.diagnostics.append("f0_rank disagrees with the derivation complex")


def _circle() -> TableAlgebra:
    return TableAlgebra([("t", 1)], {}, name="S1")


def _cmd_loop(s: Session, rep: RunReport, flags) -> None:
    name = s.opts.get("model") or s.opts.get("Y") or s.problem_fields().get("Y")
    if not name:
        raise UsageError("loop-rank needs model=")
    model = s.obj(name, ("model", "cdga"))
    alpha = s.opts.get("alpha", s.problem_fields().get("alpha"))
    if alpha in (None, "0", "zero"):
        alpha = None
    c = rc.CentralizerProblem(model, alpha)
    cent = rc.centralizer_rank(c)
    loop = rc.free_loop_rank(c)
    direct = rc.rank_pi1(rc.circle_problem(model, alpha, _circle()))
    rho2 = loop - cent
    rep.values.update({"free_loop_rank": loop, "centralizer_rank": cent, "rho2": rho2, "rank_pi1": direct})
    rep.lines.append(f"free_loop_rank = {loop} = {rho2} + {cent}")
    rep.lines.append(f"rank_pi1 = {direct}")
    if direct != loop:
        rep.ok = False
        rep.diagnostics.append("free-loop formula disagrees with the derivation complex")


def _cmd_der(s: Session, rep: RunReport, flags) -> None:
    p = s.problem()
    p.check()
    lo, hi = _parse_range(flags.degree_range) if flags.degree_range else (1, 3)
    cx = rc.derivation_complex(p, p.N + max(hi, 1) + 1)
    rows = cx.table(lo, hi)
    rep.lines.append(f"{'n':>3} {'dim Der_n':>10} {'rank d_n':>9} {'dim H_n':>8}")
    for n, dim, r, h in rows:
        rep.lines.append(f"{n:>3} {dim:>10} {r:>9} {h:>8}")
    rep.tables["der_homology"] = [list(row) for row in rows]


def _cmd_inequality(s: Session, rep: RunReport, flags) -> None:
    p = s.problem()
    r = rc.check_inequality(p)
    rep.values.update({"rank_pi1": r.rank_f, "rank_pi1_zero": r.rank_null, "holds": int(r.holds)})
    rep.lines.append(f"rank_pi1 = {r.rank_f} <= {r.rank_null} = rank_pi1(null): {'holds' if r.holds else 'VIOLATED'}")
    if not r.holds:
        rep.ok = False
        rep.diagnostics.append("inequality violated")


def _cmd_structure(s: Session, rep: RunReport, flags) -> None:
    p = s.problem()
    r = rc.structural_report(p)
    rep.values["abelian"] = int(r.abelian)
    if r.nilpotency_bound is not None:
        rep.values["nilpotency_bound"] = r.nilpotency_bound
        rep.lines.append(f"nilpotency bound (null component) = {r.nilpotency_bound}")
    else:
        rep.lines.append("nilpotency bound: none (Y has a stage of length > 1)")
    if r.two_stage is not None:
        w0, w1 = r.two_stage
        rep.tables["W0"], rep.tables["W1"] = w0, w1
        rep.values["hom1_W0"], rep.values["hom_W1"] = r.hom1_W0, r.hom_W1
        rep.lines.append(f"two-stage split: W0 = {{{', '.join(w0)}}}, W1 = {{{', '.join(w1)}}}")
        rep.lines.append(f"  dim Hom_1(W0, H*(X)) = {r.hom1_W0}, dim Hom(W1, H*(X)) = {r.hom_W1}")
    else:
        rep.lines.append("two-stage split: none")
    rep.lines.append(f"F0 pair: {'yes' if r.f0_abelian else 'no'}")
    if r.null_ranks is not None:
        total, ab = r.null_ranks
        rep.values["null_rank_pi1"], rep.values["null_abelianization"] = total, ab
        rep.lines.append(f"null component: rank pi_1 = {total}, abelianization rank = {ab}")
    if r.abelian:
        verdict = "yes"
    elif r.is_null and r.null_ranks is not None:
        verdict = "no"
    else:
        verdict = "not decided"
    rep.lines.append(f"abelian: {verdict}")


HANDLERS = {
    "validate": _cmd_validate,
    "betti": _cmd_betti,
    "rank-pi1": _cmd_rank_pi1,
    "rank-pin": _cmd_rank_pin,
    "rank-null": _cmd_rank_null,
    "f0-rank": _cmd_f0,
    "loop-rank": _cmd_loop,
    "der-homology": _cmd_der,
    "inequality": _cmd_inequality,
    "structure": _cmd_structure,
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="fsrank", description="Rational homotopy ranks of function spaces.")
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("assignments", nargs="*", metavar="key=value", help=f"keys: {', '.join(KEYS)}")
    ap.add_argument("--file", action="append", default=[], help="input file (repeatable); default: bundled corpus")
    ap.add_argument("--problem", help="problem block to run")
    ap.add_argument("--degree-range", help="a..b")
    ap.add_argument("--max-degree", type=int, help="cohomology cutoff for betti/validate")
    ap.add_argument("--machine", action="store_true", help="emit one JSON object")
    return ap


def _options(args) -> dict:
    opts = {}
    for a in args.assignments:
        key, sep, val = a.partition("=")
        if not sep or key not in KEYS or not val:
            raise UsageError(f"bad argument {a!r}; expected key=value with key in {', '.join(KEYS)}")
        opts[key] = val
    if args.problem:
        opts["problem"] = args.problem
    return opts


def run(command: str, files, flags, opts: dict) -> RunReport:
    """Execute one command; raises ParseError, UsageError, ValidationFailure or AlgebraError."""
    doc = load(files or corpus_files())
    echo = dict(sorted(opts.items()))
    rep = RunReport(command, echo)
    HANDLERS[command](Session(doc, opts), rep, flags)
    return rep


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        opts = _options(args)
        rep = run(args.command, args.file, args, opts)
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except (ParseError, UsageError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except (ValidationFailure, AlgebraError) as e:
        print(f"validation failed: {e}", file=sys.stderr)
        return 1
    print(rep.to_json() if args.machine else rep.to_text())
    for d in rep.diagnostics:
        print(f"diagnostic: {d}", file=sys.stderr)
    return 0 if rep.ok else 1


if __name__ == "__main__":
    sys.exit(main())
