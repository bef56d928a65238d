"""Text formats for algebras (``.hk``) and modules.

Algebra files::

    algebra {
      field = Q;                     # or GF(p)
      vertices = [1, 2];
      arrow alpha : 1 -> 2 deg 0;
      arrow beta  : 1 -> 2 deg -1;
      d(h) = alpha*beta - 2*gamma*delta;
    }

Module files take one of two forms.  Explicit blocks::

    module {
      dim 1 @ 0 = 1;
      act alpha @ 0 = [[1]];
      diff 1 @ -1 = [[1]];
    }

or a builder expression, ``module = sum(proj(1), simple(2)[1]);``.  The
builders are ``simple(v)``, ``proj(v)``, ``dual_proj(v)``, ``sum(...)``,
``cone(x : proj(v)[s] -> proj(u)[t])`` (left multiplication by the path
combination ``x``) and a postfix shift ``[n]``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple, Union

import numpy as np

from .dgalgebra import Arrow, DGPathAlgebra, GradedQuiver, PathDifferential, build_algebra
from .dgmodule import DGModule, ModuleError, direct_sum, cone, shift, simple
from .exactla import Field, QQ, field_from_name
from .semifree import SemifreeModule, SemifreeMorphism, free_module, nakayama


class DSLSyntaxError(ValueError):
    def __init__(self, msg: str, line: int, col: int):
        super().__init__(f"line {line}, column {col}: {msg}")
        self.line, self.col = line, col


_TOKEN = re.compile(r"""
    (?P<ws>[ \t\r]+) | (?P<nl>\n) | (?P<comment>\#[^\n]*)
  | (?P<arrow>->)
  | (?P<num>\d+(?:/\d+)?)
  | (?P<name>[A-Za-z_][A-Za-z0-9_']*)
  | (?P<punct>[{}\[\]();:=,*+\-@])
""", re.VERBOSE)


@dataclass
class Tok:
    kind: str
    text: str
    line: int
    col: int


def tokenize(text: str) -> List[Tok]:
    toks, line, start, pos = [], 1, 0, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise DSLSyntaxError(f"unexpected character {text[pos]!r}", line, pos - start + 1)
        kind = m.lastgroup
        if kind == "nl":
            line, start = line + 1, m.end()
        elif kind not in ("ws", "comment"):
            toks.append(Tok(kind, m.group(), line, pos - start + 1))
        pos = m.end()
    toks.append(Tok("eof", "", line, pos - start + 1))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.i = 0

    @property
    def tok(self) -> Tok:
        return self.toks[self.i]

    def fail(self, msg: str, tok: Optional[Tok] = None):
        t = tok or self.tok
        raise DSLSyntaxError(msg, t.line, t.col)

    def at(self, text: str) -> bool:
        return self.tok.text == text and self.tok.kind != "eof"

    def eat(self, text: str) -> Tok:
        if not self.at(text):
            found = self.tok.text or "end of input"
            self.fail(f"expected {text!r}, found {found!r}")
        t = self.tok
        self.i += 1
        return t

    def ident(self) -> str:
        t = self.tok
        if t.kind not in ("name", "num") or "/" in t.text:
            self.fail(f"expected a name, found {t.text or 'end of input'!r}")
        self.i += 1
        return t.text

    def integer(self) -> int:
        neg = False
        if self.at("-"):
            self.i += 1
            neg = True
        t = self.tok
        if t.kind != "num" or "/" in t.text:
            self.fail(f"expected an integer, found {t.text or 'end of input'!r}")
        self.i += 1
        return -int(t.text) if neg else int(t.text)

    def number(self) -> Fraction:
        neg = False
        if self.at("-"):
            self.i += 1
            neg = True
        t = self.tok
        if t.kind != "num":
            self.fail(f"expected a number, found {t.text or 'end of input'!r}")
        self.i += 1
        x = Fraction(t.text)
        return -x if neg else x

    def end(self):
        if self.tok.kind != "eof":
            self.fail(f"trailing input {self.tok.text!r}")

    # -- path combinations ------------------------------------------------
    def combo(self) -> List[Tuple[Fraction, List[str]]]:
        terms = []
        sign = Fraction(1)
        if self.at("-"):
            self.i += 1
            sign = Fraction(-1)
        elif self.at("+"):
            self.i += 1
        while True:
            coeff = sign
            if self.tok.kind == "num" and self.toks[self.i + 1].text == "*":
                coeff *= self.number()
                self.eat("*")
            elif self.tok.kind == "num":
                self.fail("a coefficient must be followed by '*' and a path word")
            word = [self.ident()]
            while self.at("*"):
                self.i += 1
                word.append(self.ident())
            terms.append((coeff, word))
            if self.at("+"):
                sign = Fraction(1)
            elif self.at("-"):
                sign = Fraction(-1)
            else:
                return terms
            self.i += 1


# ---------------------------------------------------------------------------
# algebras


@dataclass
class AlgebraSpec:
    field: str
    vertices: List[str]
    arrows: List[Tuple[str, str, str, int]]
    diff: Dict[str, List[Tuple[Fraction, List[str]]]] = field(default_factory=dict)

    def quiver(self) -> GradedQuiver:
        return GradedQuiver(list(self.vertices), [Arrow(*a) for a in self.arrows])

    def build(self, field_name: Optional[str] = None) -> DGPathAlgebra:
        F = field_from_name(field_name or self.field)
        diff: PathDifferential = {k: [(c, w) for c, w in v] for k, v in self.diff.items()}
        return build_algebra(self.quiver(), diff, F)


def parse_algebra_spec(text: str) -> AlgebraSpec:
    P = _Parser(text)
    P.eat("algebra")
    P.eat("{")
    fld, vertices, arrows, diff = "Q", None, [], {}
    while not P.at("}"):
        t = P.tok
        if P.at("field"):
            P.i += 1
            P.eat("=")
            if P.at("Q"):
                P.i += 1
                fld = "Q"
            elif P.at("GF"):
                P.i += 1
                P.eat("(")
                p = P.integer()
                P.eat(")")
                fld = f"GF({p})"
            else:
                P.fail("field must be Q or GF(p)")
        elif P.at("vertices"):
            P.i += 1
            P.eat("=")
            P.eat("[")
            vertices = []
            while not P.at("]"):
                vertices.append(P.ident())
                if not P.at("]"):
                    P.eat(",")
            P.eat("]")
        elif P.at("arrow"):
            P.i += 1
            name = P.ident()
            P.eat(":")
            s = P.ident()
            P.eat("->")
            tgt = P.ident()
            P.eat("deg")
            arrows.append((name, s, tgt, P.integer()))
        elif P.at("d"):
            P.i += 1
            P.eat("(")
            name = P.ident()
            P.eat(")")
            P.eat("=")
            if name in diff:
                P.fail(f"second differential for {name}", t)
            diff[name] = P.combo()
        else:
            P.fail(f"unexpected {t.text or 'end of input'!r}")
        P.eat(";")
    P.eat("}")
    P.end()
    if vertices is None:
        raise DSLSyntaxError("missing 'vertices'", 1, 1)
    return AlgebraSpec(fld, vertices, arrows, diff)


def parse_algebra(text: str, field_name: Optional[str] = None) -> DGPathAlgebra:
    return parse_algebra_spec(text).build(field_name)


def _fmt_num(c) -> str:
    return str(Fraction(c)) if not isinstance(c, Fraction) else str(c)


def _fmt_combo(terms) -> str:
    out = []
    for k, (c, word) in enumerate(terms):
        c = Fraction(c)
        neg = c < 0
        c = abs(c)
        w = "*".join(word)
        body = w if c == 1 else f"{c}*{w}"
        if k == 0:
            out.append(("-" if neg else "") + body)
        else:
            out.append(("- " if neg else "+ ") + body)
    return " ".join(out)


def print_algebra(A: DGPathAlgebra) -> str:
    lines = ["algebra {", f"  field = {A.field.name};",
             f"  vertices = [{', '.join(A.vertices)}];"]
    for a in A.arrows:
        lines.append(f"  arrow {a.name} : {a.source} -> {a.target} deg {a.degree};")
    for name, terms in sorted(A.differential_terms().items(),
                              key=lambda kv: A.quiver.arrow_index(kv[0])):
        plain = [(Fraction(str(A.field.to_plain(c))), w) for c, w in terms]
        lines.append(f"  d({name}) = {_fmt_combo(plain)};")
    lines.append("}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# modules


@dataclass
class Expr:
    op: str                      # simple | proj | dual_proj | sum | cone
    args: tuple = ()
    shift: int = 0


def _parse_expr(P: _Parser) -> Expr:
    t = P.tok
    op = P.ident()
    if op in ("simple", "proj", "dual_proj"):
        P.eat("(")
        e = Expr(op, (P.ident(),))
        P.eat(")")
    elif op == "sum":
        P.eat("(")
        items = []
        while not P.at(")"):
            items.append(_parse_expr(P))
            if not P.at(")"):
                P.eat(",")
        P.eat(")")
        e = Expr("sum", tuple(items))
    elif op == "cone":
        P.eat("(")
        terms = P.combo()
        P.eat(":")
        src = _parse_expr(P)
        P.eat("->")
        tgt = _parse_expr(P)
        P.eat(")")
        for side in (src, tgt):
            if side.op != "proj":
                P.fail("cone needs proj(..) on both sides", t)
        e = Expr("cone", (tuple((c, tuple(w)) for c, w in terms), src, tgt))
    else:
        P.fail(f"unknown builder {op!r}", t)
    while P.at("["):
        P.i += 1
        e.shift += P.integer()
        P.eat("]")
    return e


def print_expr(e: Expr) -> str:
    if e.op in ("simple", "proj", "dual_proj"):
        s = f"{e.op}({e.args[0]})"
    elif e.op == "sum":
        s = f"sum({', '.join(print_expr(x) for x in e.args)})"
    else:
        terms, src, tgt = e.args
        s = f"cone({_fmt_combo([(c, list(w)) for c, w in terms])} : {print_expr(src)} -> {print_expr(tgt)})"
    return s + (f"[{e.shift}]" if e.shift else "")


def build_expr(A: DGPathAlgebra, e: Expr) -> DGModule:
    if e.op == "simple":
        _vertex(A, e.args[0])
        m = simple(A, e.args[0])
    elif e.op == "proj":
        _vertex(A, e.args[0])
        m = free_module(A, e.args[0]).realize()
    elif e.op == "dual_proj":
        _vertex(A, e.args[0])
        m = nakayama(free_module(A, e.args[0]))
    elif e.op == "sum":
        if not e.args:
            m = DGModule(A, {})
        else:
            m = direct_sum([build_expr(A, x) for x in e.args])[0]
    else:
        terms, src, tgt = e.args
        P = free_module(A, _vertex(A, src.args[0]), src.shift)
        Q = free_module(A, _vertex(A, tgt.args[0]), tgt.shift)
        x = _elem(A, terms)
        f = SemifreeMorphism(P, Q, {(0, 0): x}).realize()
        if not f.is_valid():
            raise ModuleError("cone: the map is not a chain map of degree 0")
        return shift(cone(f)[0], e.shift)
    return shift(m, e.shift) if e.shift else m


def _vertex(A: DGPathAlgebra, v: str) -> str:
    if v not in A.vindex:
        raise ModuleError(f"unknown vertex {v}")
    return v


def _elem(A: DGPathAlgebra, terms) -> dict:
    F = A.field
    out: dict = {}
    for c, word in terms:
        p = A.path_of_word(list(word))
        out[p] = F(c) + out.get(p, F(0))
        if F.p is not None:
            out[p] %= F.p
    return {k: v for k, v in out.items() if v != 0}


@dataclass
class ModuleSpec:
    dims: Dict[Tuple[str, int], int] = field(default_factory=dict)
    act: Dict[Tuple[str, int], List[List[Fraction]]] = field(default_factory=dict)
    diff: Dict[Tuple[str, int], List[List[Fraction]]] = field(default_factory=dict)
    expr: Optional[Expr] = None

    def build(self, A: DGPathAlgebra) -> DGModule:
        if self.expr is not None:
            return build_expr(A, self.expr)
        F = A.field
        for (v, _i) in self.dims:
            _vertex(A, v)
        for (a, _i) in self.act:
            if a not in A.arrow_by_name:
                raise ModuleError(f"unknown arrow {a}")
        dims = dict(self.dims)
        act, diff = {}, {}
        for (a, i), rows in self.act.items():
            ar = A.arrow_by_name[a]
            act[(a, i)] = _matrix(F, rows, dims.get((ar.target, i + ar.degree), 0),
                                  dims.get((ar.source, i), 0), f"act {a} @ {i}")
        for (v, i), rows in self.diff.items():
            diff[(v, i)] = _matrix(F, rows, dims.get((v, i + 1), 0), dims.get((v, i), 0),
                                   f"diff {v} @ {i}")
        return DGModule(A, dims, diff, act, check=True)


def _matrix(F: Field, rows, r: int, c: int, what: str) -> np.ndarray:
    if len(rows) != r or any(len(x) != c for x in rows):
        shape = f"{len(rows)}x{len(rows[0]) if rows else 0}"
        raise ModuleError(f"{what}: expected a {r}x{c} matrix, got {shape}")
    m = F.zeros(r, c)
    for a in range(r):
        for b in range(c):
            m[a, b] = F(rows[a][b])
    return m


def parse_module_spec(text: str) -> ModuleSpec:
    P = _Parser(text)
    if P.at("module") and P.toks[P.i + 1].text == "=":
        P.i += 2
        e = _parse_expr(P)
        if P.at(";"):
            P.i += 1
        P.end()
        return ModuleSpec(expr=e)
    if not P.at("module"):
        e = _parse_expr(P)
        if P.at(";"):
            P.i += 1
        P.end()
        return ModuleSpec(expr=e)
    P.eat("module")
    P.eat("{")
    spec = ModuleSpec()
    while not P.at("}"):
        t = P.tok
        kind = P.ident()
        if kind not in ("dim", "act", "diff"):
            P.fail(f"expected dim, act or diff, found {kind!r}", t)
        what = P.ident()
        P.eat("@")
        deg = P.integer()
        P.eat("=")
        key = (what, deg)
        table = {"dim": spec.dims, "act": spec.act, "diff": spec.diff}[kind]
        if key in table:
            P.fail(f"duplicate {kind} {what} @ {deg}", t)
        if kind == "dim":
            spec.dims[key] = P.integer()
        else:
            table[key] = _parse_matrix(P)
        P.eat(";")
    P.eat("}")
    P.end()
    return spec


def _parse_matrix(P: _Parser) -> List[List[Fraction]]:
    P.eat("[")
    rows = []
    while not P.at("]"):
        P.eat("[")
        row = []
        while not P.at("]"):
            row.append(P.number())
            if not P.at("]"):
                P.eat(",")
        P.eat("]")
        rows.append(row)
        if not P.at("]"):
            P.eat(",")
    P.eat("]")
    return rows


def parse_module(text: str, A: DGPathAlgebra) -> DGModule:
    return parse_module_spec(text).build(A)


def _fmt_matrix(F: Field, m: np.ndarray) -> str:
    rows = [", ".join(str(F.to_plain(x)) for x in r) for r in m]
    return "[" + ", ".join(f"[{r}]" for r in rows) + "]"


def print_module(m: DGModule) -> str:
    """Canonical explicit form; zero blocks are omitted."""
    A = m.algebra
    F = m.field
    vi = A.vindex
    ai = {a.name: k for k, a in enumerate(A.arrows)}
    lines = ["module {"]
    for v, i in sorted(m.dims, key=lambda k: (vi[k[0]], -k[1])):
        lines.append(f"  dim {v} @ {i} = {m.dims[(v, i)]};")
    for a, i in sorted(m.act, key=lambda k: (ai[k[0]], -k[1])):
        lines.append(f"  act {a} @ {i} = {_fmt_matrix(F, m.act[(a, i)])};")
    for v, i in sorted(m.diff, key=lambda k: (vi[k[0]], -k[1])):
        lines.append(f"  diff {v} @ {i} = {_fmt_matrix(F, m.diff[(v, i)])};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def print_module_spec(spec: ModuleSpec, A: Optional[DGPathAlgebra] = None) -> str:
    if spec.expr is not None:
        return f"module = {print_expr(spec.expr)};\n"
    if A is None:
        raise ValueError("an algebra is needed to print explicit blocks")
    return print_module(spec.build(A))


def same_module(x: DGModule, y: DGModule) -> bool:
    """Block-for-block equality."""
    F = x.field
    if x.dims != y.dims or set(x.act) != set(y.act) or set(x.diff) != set(y.diff):
        return False
    return all(F.is_zero(F.sub(x.act[k], y.act[k])) for k in x.act) and \
        all(F.is_zero(F.sub(x.diff[k], y.diff[k])) for k in x.diff)
