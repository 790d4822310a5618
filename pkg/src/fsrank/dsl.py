"""Text format for models, tables, presentations, maps and problems.

    # comment
    model S2 { gen a:2; gen b:3; d b = a^2; }
    cdga S2big { gen a:2; gen b:3; gen u:2; gen v:3; d b = a^2; d v = u; }
    table CP2 { basis a:2 a2:4; mul a*a = a2; }
    ring SU3T { gen t1:2; gen t2:2; rel t1^2 + t1*t2 + t2^2; rel t1^2*t2 + t1*t2^2; }
    map f : S2 -> CP2 { a |-> a; }
    problem p { X = CP2; Y = S2; f = zero; dim = 4; }

``model`` blocks are meant to be minimal and are checked by ``validate``;
``cdga`` blocks are free models exempt from that check.  Omitted ``d`` lines
and omitted map lines mean zero.  Polynomials are Q-linear combinations of
``*``-products of identifiers with ``^`` powers; coefficients may be written
``3/2``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from fsrank.cdga import (
    UNIT,
    AlgebraError,
    AlgebraPresentation,
    DGModel,
    DGMorphism,
    Element,
    FreeAlgebra,
    Generator,
    TableAlgebra,
)

KEYWORDS = {"model", "cdga", "table", "ring", "map", "problem"}


class ParseError(Exception):
    def __init__(self, message: str, line: int = 0, col: int = 0, source: str | None = None):
        self.message, self.line, self.col, self.source = message, line, col, source
        where = f"{source}:" if source else ""
        super().__init__(f"{where}{line}:{col}: {message}")


_TOKEN = re.compile(
    r"""
    (?P<ws>[ \t\r]+)
  | (?P<nl>\n)
  | (?P<comment>\#[^\n]*)
  | (?P<mapsto>\|->)
  | (?P<arrow>->)
  | (?P<num>\d+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_']*)
  | (?P<op>[{}();:=*^+\-/,])
    """,
    re.VERBOSE,
)


@dataclass
class Token:
    kind: str
    text: str
    line: int
    col: int


def tokenize(text: str, source: str | None = None) -> list[Token]:
    out = []
    pos, line, col = 0, 1, 1
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", line, col, source)
        kind = m.lastgroup
        s = m.group()
        if kind == "nl":
            line, col = line + 1, 1
        else:
            if kind not in ("ws", "comment"):
                out.append(Token(kind if kind != "op" else s, s, line, col))
            col += len(s)
        pos = m.end()
    out.append(Token("eof", "", line, col))
    return out


# --- polynomial expressions -------------------------------------------------

@dataclass
class Num:
    value: Fraction


@dataclass
class Var:
    name: str
    tok: Token


@dataclass
class BinOp:
    op: str
    left: object
    right: object
    tok: Token


@dataclass
class Neg:
    arg: object


@dataclass
class Pow:
    base: object
    exp: int
    tok: Token


class _Stream:
    def __init__(self, tokens: list[Token], source: str | None):
        self.toks, self.i, self.source = tokens, 0, source

    @property
    def cur(self) -> Token:
        return self.toks[self.i]

    def peek(self, k: int = 1) -> Token:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def error(self, msg: str, tok: Token | None = None) -> ParseError:
        tok = tok or self.cur
        return ParseError(msg, tok.line, tok.col, self.source)

    def take(self, kind: str | None = None) -> Token:
        t = self.cur
        if kind is not None and t.kind != kind:
            shown = t.text or "end of input"
            raise self.error(f"expected {kind!r}, found {shown!r}")
        self.i += 1
        return t

    def accept(self, kind: str) -> Token | None:
        if self.cur.kind == kind:
            return self.take()
        return None

    def ident(self) -> Token:
        return self.take("ident")

    def nat(self) -> int:
        return int(self.take("num").text)


def _parse_expr(s: _Stream):
    node = _parse_term(s)
    while s.cur.kind in ("+", "-"):
        tok = s.take()
        node = BinOp(tok.text, node, _parse_term(s), tok)
    return node


def _parse_term(s: _Stream):
    if s.cur.kind == "-":
        s.take()
        return Neg(_parse_term(s))
    if s.cur.kind == "+":
        s.take()
        return _parse_term(s)
    node = _parse_factor(s)
    while s.cur.kind == "*":
        tok = s.take()
        node = BinOp("*", node, _parse_factor(s), tok)
    return node


def _parse_factor(s: _Stream):
    node = _parse_atom(s)
    if s.cur.kind == "^":
        tok = s.take()
        node = Pow(node, s.nat(), tok)
    return node


def _parse_atom(s: _Stream):
    t = s.cur
    if t.kind == "num":
        s.take()
        value = Fraction(int(t.text))
        if s.cur.kind == "/":
            s.take()
            den = s.take("num")
            if int(den.text) == 0:
                raise s.error("division by zero", den)
            value = value / int(den.text)
        return Num(value)
    if t.kind == "ident":
        s.take()
        return Var(t.text, t)
    if t.kind == "(":
        s.take()
        node = _parse_expr(s)
        s.take(")")
        return node
    raise s.error(f"expected a polynomial term, found {t.text or 'end of input'!r}")


class _Evaluator:
    """Evaluates expression trees inside a free, table or presented algebra."""

    def __init__(self, alg, source: str | None = None):
        self.alg = alg
        self.source = source
        self.ring = isinstance(alg, TableAlgebra) and alg.presentation is not None
        self.base = alg.presentation.algebra if self.ring else alg

    def var(self, v: Var) -> Element:
        try:
            if isinstance(self.base, FreeAlgebra):
                return self.base.gen(v.name)
            return self.base.elem(v.name)
        except AlgebraError:
            raise ParseError(f"unknown name {v.name!r}", v.tok.line, v.tok.col, self.source) from None

    def mul(self, a: Element, b: Element) -> Element:
        return self.base.multiply(a, b)

    def run(self, node) -> Element:
        e = self._eval(node)
        return self.alg.reduce(e) if self.ring else e

    def _eval(self, node) -> Element:
        if isinstance(node, Num):
            return self.base.one().scale(node.value)
        if isinstance(node, Var):
            return self.var(node)
        if isinstance(node, Neg):
            return -self._eval(node.arg)
        if isinstance(node, Pow):
            b = self._eval(node.base)
            out = self.base.one()
            for _ in range(node.exp):
                out = self.mul(out, b)
            return out
        a, b = self._eval(node.left), self._eval(node.right)
        if node.op == "*":
            return self.mul(a, b)
        try:
            return a + b if node.op == "+" else a - b
        except AlgebraError:
            raise ParseError(
                f"degree mismatch: adding terms of degrees {a.degree} and {b.degree}",
                node.tok.line, node.tok.col, self.source,
            ) from None


def parse_polynomial(text: str, alg) -> Element:
    """Parse a single polynomial over ``alg`` (free algebra, model or table)."""
    if isinstance(alg, DGModel):
        alg = alg.algebra
    s = _Stream(tokenize(text), None)
    node = _parse_expr(s)
    s.take("eof")
    return _Evaluator(alg).run(node)


# --- documents -------------------------------------------------------------

@dataclass
class ModelBlock:
    name: str
    kind: str  # "model" or "cdga"
    gens: list[tuple[str, int]]
    diffs: list[tuple[str, str]]


@dataclass
class TableBlock:
    name: str
    basis: list[tuple[str, int]]
    products: list[tuple[str, str, str]]


@dataclass
class RingBlock:
    name: str
    gens: list[tuple[str, int]]
    relations: list[str]
    top: int | None = None


@dataclass
class MapBlock:
    name: str
    source: str
    target: str
    values: list[tuple[str, str]]


@dataclass
class ProblemBlock:
    name: str
    fields: list[tuple[str, str]]

    def get(self, key: str, default=None):
        return dict(self.fields).get(key, default)


@dataclass
class ModelFile:
    """A parsed document: the blocks in file order plus the built objects."""

    blocks: list = field(default_factory=list)
    objects: dict = field(default_factory=dict, compare=False, repr=False)
    kinds: dict = field(default_factory=dict, compare=False, repr=False)
    sources: dict = field(default_factory=dict, compare=False, repr=False)

    def get(self, name: str):
        if name not in self.objects:
            raise KeyError(name)
        return self.objects[name]

    def names(self, kind: str | None = None) -> list[str]:
        return [b.name for b in self.blocks if kind is None or _kind(b) == kind]

    def block(self, name: str):
        for b in self.blocks:
            if b.name == name:
                return b
        raise KeyError(name)

    def merge(self, other: "ModelFile") -> "ModelFile":
        return parse(dump(self) + "\n" + dump(other))


def _kind(b) -> str:
    if isinstance(b, ModelBlock):
        return b.kind
    return {TableBlock: "table", RingBlock: "ring", MapBlock: "map", ProblemBlock: "problem"}[type(b)]


def _gen_list(s: _Stream) -> list[tuple[str, int, Token]]:
    out = []
    while True:
        t = s.ident()
        s.take(":")
        out.append((t.text, s.nat(), t))
        if not s.accept(","):
            if s.cur.kind == "ident":
                continue
            return out


def _expr(s: _Stream) -> tuple[object, Token]:
    start = s.cur
    return _parse_expr(s), start


def _parse_block(s: _Stream):
    kw = s.take("ident")
    if kw.text not in KEYWORDS:
        raise s.error(f"expected one of {sorted(KEYWORDS)}, found {kw.text!r}", kw)
    name = s.ident().text
    if kw.text in ("model", "cdga"):
        s.take("{")
        gens, diffs = [], []
        while not s.accept("}"):
            st = s.ident()
            if st.text == "gen":
                gens.extend(_gen_list(s))
            elif st.text == "d":
                g = s.ident()
                s.take("=")
                node, tok = _expr(s)
                diffs.append((g, node, tok))
            else:
                raise s.error(f"expected 'gen' or 'd', found {st.text!r}", st)
            s.take(";")
        return ("model", kw.text, name, gens, diffs, kw)
    if kw.text == "table":
        s.take("{")
        basis, prods = [], []
        while not s.accept("}"):
            st = s.ident()
            if st.text == "basis":
                basis.extend(_gen_list(s))
            elif st.text == "mul":
                a = s.ident()
                s.take("*")
                b = s.ident()
                s.take("=")
                node, tok = _expr(s)
                prods.append((a, b, node, tok))
            else:
                raise s.error(f"expected 'basis' or 'mul', found {st.text!r}", st)
            s.take(";")
        return ("table", name, basis, prods, kw)
    if kw.text == "ring":
        s.take("{")
        gens, rels, top = [], [], None
        while not s.accept("}"):
            st = s.ident()
            if st.text == "gen":
                gens.extend(_gen_list(s))
            elif st.text == "rel":
                rels.append(_expr(s))
            elif st.text == "top":
                top = s.nat()
            else:
                raise s.error(f"expected 'gen', 'rel' or 'top', found {st.text!r}", st)
            s.take(";")
        return ("ring", name, gens, rels, top, kw)
    if kw.text == "map":
        s.take(":")
        src = s.ident()
        s.take("arrow")
        tgt = s.ident()
        s.take("{")
        vals = []
        while not s.accept("}"):
            g = s.ident()
            s.take("mapsto")
            node, tok = _expr(s)
            vals.append((g, node, tok))
            s.take(";")
        return ("map", name, src, tgt, vals, kw)
    s.take("{")
    fields = []
    while not s.accept("}"):
        key = s.ident()
        if key.text not in ("X", "Y", "f", "dim", "alpha"):
            raise s.error(f"unknown problem field {key.text!r}", key)
        s.take("=")
        at = s.cur
        if key.text == "dim":
            val = str(s.nat())
        else:
            val = s.ident().text
        fields.append((key.text, val, at))
        s.take(";")
    return ("problem", name, fields, kw)


def _err(tok: Token, msg: str, source) -> ParseError:
    return ParseError(msg, tok.line, tok.col, source)


def _read_blocks(text: str, source: str | None) -> list[tuple]:
    s = _Stream(tokenize(text, source), source)
    raw = []
    while s.cur.kind != "eof":
        raw.append((source, _parse_block(s)))
    return raw


def _build_all(raw: list[tuple]) -> ModelFile:
    doc = ModelFile()
    seen: set[str] = set()
    for source, r in raw:
        name, kw = (r[2], r[-1]) if r[0] == "model" else (r[1], r[-1])
        if name in seen:
            raise _err(kw, f"duplicate name {name!r}", source)
        seen.add(name)
    order = {"model": 0, "table": 0, "ring": 0, "map": 1, "problem": 2}
    built = {}
    for source, r in sorted(raw, key=lambda item: order[item[1][0]]):
        built[id(r)] = _build(r, doc, source)
    doc.blocks = [built[id(r)] for _, r in raw]
    return doc


def parse(text: str, source: str | None = None) -> ModelFile:
    """Parse and build every block; raises ``ParseError`` with a position on failure."""
    return _build_all(_read_blocks(text, source))


def _build(r, doc: ModelFile, source):
    kind = r[0]
    if kind == "model":
        _, sub, name, gens, diffs, kw = r
        seen = set()
        for g, _, t in gens:
            if g in seen:
                raise _err(t, f"duplicate generator {g!r}", source)
            seen.add(g)
        try:
            alg = FreeAlgebra([Generator(g, d) for g, d, _ in gens])
        except AlgebraError as e:
            raise _err(kw, str(e), source) from None
        ev = _Evaluator(alg, source)
        values = {}
        for g, node, tok in diffs:
            if g.text not in alg.index:
                raise _err(g, f"unknown generator {g.text!r}", source)
            if g.text in values:
                raise _err(g, f"second differential for {g.text!r}", source)
            v = ev.run(node)
            want = alg.generator(g.text).degree + 1
            if v and v.degree != want:
                raise _err(tok, f"degree mismatch: d {g.text} has degree {v.degree}, expected {want}", source)
            values[g.text] = v
        m = DGModel(alg, values, name=name, check=False)
        bad = m.d_squared_violations()
        if bad:
            raise _err(kw, f"d^2 != 0 in {name} on generator {bad[0]}", source)
        doc.objects[name] = m
        doc.kinds[name] = sub
        diffs_out = [(g.name, alg.format(m.differential[g.name])) for g in alg.generators if m.differential[g.name]]
        return ModelBlock(name, sub, [(g.name, g.degree) for g in alg.generators], diffs_out)
    if kind == "table":
        _, name, basis, prods, kw = r
        names = [b for b, _, _ in basis]
        for b, d, t in basis:
            if b == UNIT:
                raise _err(t, "the unit is implicit", source)
            if d < 1:
                raise _err(t, f"basis element {b} needs positive degree", source)
        if len(set(names)) != len(names):
            raise _err(kw, f"duplicate basis names in {name}", source)
        skeleton = TableAlgebra([(b, d) for b, d, _ in basis], {}, name=name, check=False)
        ev = _Evaluator(_LinearTable(skeleton), source)
        products = {}
        for a, b, node, tok in prods:
            for x in (a, b):
                if x.text not in skeleton.degree_of:
                    raise _err(x, f"unknown basis element {x.text!r}", source)
            products[(a.text, b.text)] = ev.run(node)
        try:
            tab = TableAlgebra([(b, d) for b, d, _ in basis], products, name=name)
        except AlgebraError as e:
            raise _err(kw, str(e), source) from None
        doc.objects[name] = tab
        doc.kinds[name] = "table"
        out = []
        for (a, b), v in products.items():
            out.append((a, b, tab.format(v)))
        return TableBlock(name, [(b, d) for b, d, _ in basis], out)
    if kind == "ring":
        _, name, gens, rels, top, kw = r
        try:
            alg = FreeAlgebra([Generator(g, d) for g, d, _ in gens])
        except AlgebraError as e:
            raise _err(kw, str(e), source) from None
        ev = _Evaluator(alg, source)
        relations = []
        for node, tok in rels:
            v = ev.run(node)
            relations.append(v)
        try:
            pres = AlgebraPresentation(alg, relations)
            tab = TableAlgebra.from_presentation(pres, name=name, top_degree=top)
        except AlgebraError as e:
            raise _err(kw, str(e), source) from None
        doc.objects[name] = tab
        doc.kinds[name] = "ring"
        return RingBlock(name, [(g.name, g.degree) for g in alg.generators],
                         [alg.format(v) for v in relations], top)
    if kind == "map":
        _, name, src, tgt, vals, kw = r
        for t in (src, tgt):
            if t.text not in doc.objects:
                raise _err(t, f"unresolved name {t.text!r}", source)
        S, T = doc.objects[src.text], doc.objects[tgt.text]
        if isinstance(S, TableAlgebra) and S.presentation is None:
            raise _err(src, "a map source must be a model or a ring", source)
        salg = S.algebra if isinstance(S, DGModel) else S.presentation.algebra
        ev = _Evaluator(T.algebra if isinstance(T, DGModel) else T, source)
        values = {}
        for g, node, tok in vals:
            if g.text not in salg.index:
                raise _err(g, f"{g.text!r} is not a generator of {src.text}", source)
            v = ev.run(node)
            want = salg.generator(g.text).degree
            if v and v.degree != want:
                raise _err(tok, f"degree mismatch: {g.text} |-> element of degree {v.degree}, expected {want}", source)
            values[g.text] = v
        f = DGMorphism(S, T, values, name=name)
        doc.objects[name] = f
        doc.kinds[name] = "map"
        doc.sources[name] = (src.text, tgt.text)
        fmt = T.format
        out = [(g.name, fmt(f.values[g.name])) for g in salg.generators if f.values[g.name]]
        return MapBlock(name, src.text, tgt.text, out)
    _, name, fields, kw = r
    for key, val, tok in fields:
        if key in ("X", "Y") and val not in doc.objects:
            raise _err(tok, f"unresolved name {val!r}", source)
        if key == "f" and val != "zero" and val not in doc.objects:
            raise _err(tok, f"unresolved name {val!r}", source)
    doc.objects[name] = ProblemBlock(name, [(k, v) for k, v, _ in fields])
    doc.kinds[name] = "problem"
    return doc.objects[name]


class _LinearTable:
    """Table skeleton used while reading ``mul`` lines: only linear combinations are allowed."""

    def __init__(self, tab: TableAlgebra):
        self.tab = tab

    def elem(self, name):
        return self.tab.elem(name)

    def one(self):
        return self.tab.one()

    def multiply(self, a, b):
        if a.degree == 0:
            return b.scale(a.coeff(UNIT))
        if b.degree == 0:
            return a.scale(b.coeff(UNIT))
        raise AlgebraError("products are not allowed on the right of 'mul'")


def dump(doc: ModelFile) -> str:
    """Canonical text for a document; ``parse(dump(doc)) == doc``."""
    out = []
    for b in doc.blocks:
        if isinstance(b, ModelBlock):
            lines = [f"{b.kind} {b.name} {{"]
            lines += [f"  gen {g}:{d};" for g, d in b.gens]
            lines += [f"  d {g} = {v};" for g, v in b.diffs]
        elif isinstance(b, TableBlock):
            lines = [f"table {b.name} {{"]
            if b.basis:
                lines.append("  basis " + " ".join(f"{n}:{d}" for n, d in b.basis) + ";")
            lines += [f"  mul {x}*{y} = {v};" for x, y, v in b.products]
        elif isinstance(b, RingBlock):
            lines = [f"ring {b.name} {{"]
            lines += [f"  gen {g}:{d};" for g, d in b.gens]
            lines += [f"  rel {r};" for r in b.relations]
            if b.top is not None:
                lines.append(f"  top {b.top};")
        elif isinstance(b, MapBlock):
            lines = [f"map {b.name} : {b.source} -> {b.target} {{"]
            lines += [f"  {g} |-> {v};" for g, v in b.values]
        else:
            lines = [f"problem {b.name} {{"]
            lines += [f"  {k} = {v};" for k, v in b.fields]
        lines.append("}")
        out.append("\n".join(lines))
    return "\n\n".join(out) + ("\n" if out else "")


def load(paths: Iterable[str]) -> ModelFile:
    """Parse several files as one document; names may refer across files."""
    raw = []
    for p in paths:
        with open(p, encoding="utf-8") as fh:
            raw.extend(_read_blocks(fh.read(), str(p)))
    return _build_all(raw)
