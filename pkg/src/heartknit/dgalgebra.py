"""Dg path algebras of finite acyclic graded quivers.

Paths compose left to right: ``ab`` is ``a`` followed by ``b``.  The
differential is given on arrows and extended by the Koszul-Leibniz rule
``d(pq) = d(p) q + (-1)^{|p|} p d(q)``.  Algebra elements are sparse dicts
``{path_index: coefficient}``.
"""
from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .exactla import QQ, Field, complement_basis, kernel_basis, rank, rref, solve, image_basis

Elem = Dict[int, object]


class AlgebraError(ValueError):
    pass


class CyclicQuiver(AlgebraError):
    pass


class LeibnizViolation(AlgebraError):
    pass


@dataclass(frozen=True)
class Arrow:
    name: str
    source: str
    target: str
    degree: int


@dataclass(frozen=True)
class Path:
    source: str
    target: str
    arrows: Tuple[int, ...]
    degree: int

    @property
    def length(self) -> int:
        return len(self.arrows)


@dataclass
class GradedQuiver:
    vertices: List[str]
    arrows: List[Arrow]

    def __post_init__(self):
        if len(set(self.vertices)) != len(self.vertices):
            raise AlgebraError("duplicate vertex")
        names = [a.name for a in self.arrows]
        if len(set(names)) != len(names):
            raise AlgebraError("duplicate arrow name")
        vs = set(self.vertices)
        for a in self.arrows:
            if a.source not in vs or a.target not in vs:
                raise AlgebraError(f"arrow {a.name}: unknown vertex")
            if a.degree > 0:
                raise AlgebraError(f"arrow {a.name}: degree {a.degree} > 0")

    def arrow_index(self, name: str) -> int:
        for i, a in enumerate(self.arrows):
            if a.name == name:
                return i
        raise KeyError(name)


# A differential is given per arrow name as a list of (coeff, [arrow names]).
PathDifferential = Dict[str, List[Tuple[object, List[str]]]]


def _check_acyclic(q: GradedQuiver):
    out = {v: [] for v in q.vertices}
    for a in q.arrows:
        out[a.source].append(a.target)
    state = {}

    def visit(v, stack):
        state[v] = 1
        for w in out[v]:
            if state.get(w) == 1:
                raise CyclicQuiver(f"directed cycle through {w}")
            if w not in state:
                visit(w, stack)
        state[v] = 2

    for v in q.vertices:
        if v not in state:
            visit(v, [])


class DGPathAlgebra:
    """A dg path algebra with enumerated path basis and cached tables."""

    def __init__(self, quiver: GradedQuiver, diff: Optional[PathDifferential] = None,
                 field: Field = QQ):
        self.quiver = quiver
        self.field = field
        self.vertices = list(quiver.vertices)
        self.arrows = list(quiver.arrows)
        self.vindex = {v: i for i, v in enumerate(self.vertices)}
        self.arrow_by_name = {a.name: a for a in self.arrows}
        _check_acyclic(quiver)
        self._enumerate_paths()
        self._raw_diff = {k: list(v) for k, v in (diff or {}).items()}
        self.arrow_diff: Dict[str, Elem] = {}
        for name, terms in self._raw_diff.items():
            if name not in self.arrow_by_name:
                raise AlgebraError(f"differential of unknown arrow {name}")
            self.arrow_diff[name] = self._combo(name, terms)
        self._build_diff()
        self._cohomology()

    # -- construction -----------------------------------------------------
    def _enumerate_paths(self):
        paths: List[Path] = [Path(v, v, (), 0) for v in self.vertices]
        frontier = list(paths)
        while frontier:
            nxt = []
            for p in frontier:
                for i, a in enumerate(self.arrows):
                    if a.source == p.target:
                        nxt.append(Path(p.source, a.target, p.arrows + (i,), p.degree + a.degree))
            nxt.sort(key=lambda p: p.arrows)
            paths.extend(nxt)
            frontier = nxt
        self.paths = paths
        self.index = {(p.source, p.arrows): i for i, p in enumerate(paths)}
        self.trivial = {v: self.index[(v, ())] for v in self.vertices}
        self.from_vertex = {v: [i for i, p in enumerate(paths) if p.source == v] for v in self.vertices}
        self.to_vertex = {v: [i for i, p in enumerate(paths) if p.target == v] for v in self.vertices}
        self.min_degree = min(p.degree for p in paths)

    def path_of_word(self, word: Sequence[str]) -> int:
        if not word:
            raise AlgebraError("empty path word")
        ids = []
        for w in word:
            if w not in self.arrow_by_name:
                raise AlgebraError(f"unknown arrow {w}")
            ids.append(self.quiver.arrow_index(w))
        for x, y in zip(ids, ids[1:]):
            if self.arrows[x].target != self.arrows[y].source:
                raise AlgebraError(f"path {'*'.join(word)} does not compose")
        return self.index[(self.arrows[ids[0]].source, tuple(ids))]

    def _combo(self, name, terms) -> Elem:
        a = self.arrow_by_name[name]
        F = self.field
        out: Elem = {}
        for c, word in terms:
            i = self.path_of_word(word)
            p = self.paths[i]
            if p.source != a.source or p.target != a.target:
                raise LeibnizViolation(f"d({name}) term {'*'.join(word)} has wrong endpoints")
            if p.degree != a.degree + 1:
                raise LeibnizViolation(
                    f"d({name}) term {'*'.join(word)} has degree {p.degree}, expected {a.degree + 1}")
            out[i] = F(out.get(i, 0) + F(c)) if F.p is None else (out.get(i, 0) + F(c)) % F.p
        return {k: v for k, v in out.items() if v != 0}

    def mul_paths(self, i: int, j: int) -> Optional[int]:
        p, q = self.paths[i], self.paths[j]
        if p.target != q.source:
            return None
        if not p.arrows:
            return j
        if not q.arrows:
            return i
        return self.index[(p.source, p.arrows + q.arrows)]

    def mul(self, x: Elem, y: Elem) -> Elem:
        F = self.field
        out: Elem = {}
        for i, a in x.items():
            for j, b in y.items():
                k = self.mul_paths(i, j)
                if k is not None:
                    out[k] = out.get(k, 0) + a * b
        return _clean(F, out)

    def add(self, x: Elem, y: Elem, c=1) -> Elem:
        F = self.field
        out = dict(x)
        c = F(c)
        for k, v in y.items():
            out[k] = out.get(k, 0) + c * v
        return _clean(F, out)

    def _build_diff(self):
        F = self.field
        n = len(self.paths)
        self.diff: List[Elem] = []
        for p in self.paths:
            acc: Elem = {}
            sign_deg = 0
            for pos, ai in enumerate(p.arrows):
                da = self.arrow_diff.get(self.arrows[ai].name)
                if da:
                    left = self._sub_path(p, 0, pos)
                    right = self._sub_path(p, pos + 1, len(p.arrows))
                    s = -1 if sign_deg % 2 else 1
                    term = self.mul(self.mul({left: F(s)}, da), {right: F.one})
                    acc = self.add(acc, term)
                sign_deg += self.arrows[ai].degree
            self.diff.append(acc)
        dm = F.zeros(n, n)
        for j, e in enumerate(self.diff):
            for i, c in e.items():
                dm[i, j] = c
        self.diff_matrix = dm
        if not F.is_zero(F.mul(dm, dm)):
            raise LeibnizViolation("d^2 != 0 on the path basis")

    def _sub_path(self, p: Path, a: int, b: int) -> int:
        if a == b:
            v = p.source if a == 0 else self.arrows[p.arrows[a - 1]].target
            return self.trivial[v]
        src = self.arrows[p.arrows[a]].source
        return self.index[(src, p.arrows[a:b])]

    def d(self, x: Elem) -> Elem:
        out: Elem = {}
        for i, c in x.items():
            out = self.add(out, self.diff[i], c)
        return out

    def degree(self, x: Elem) -> Optional[int]:
        ds = {self.paths[i].degree for i in x}
        if len(ds) > 1:
            raise AlgebraError("inhomogeneous element")
        return ds.pop() if ds else None

    # -- cohomology -------------------------------------------------------
    def block(self, s: str, t: str, deg: int) -> List[int]:
        return [i for i, p in enumerate(self.paths) if p.source == s and p.target == t and p.degree == deg]

    def _cohomology(self):
        F = self.field
        coh = {}
        for s in self.vertices:
            for t in self.vertices:
                for deg in range(self.min_degree, 1):
                    src = self.block(s, t, deg)
                    if not src:
                        continue
                    nxt = self.block(s, t, deg + 1)
                    prv = self.block(s, t, deg - 1)
                    z = len(src) - (rank(F, self.diff_matrix[np.ix_(nxt, src)]) if nxt else 0)
                    b = rank(F, self.diff_matrix[np.ix_(src, prv)]) if prv else 0
                    if z - b:
                        coh[(s, t, deg)] = z - b
        self.cohomology = coh
        self.total_cohomology = {}
        for (s, t, deg), n in coh.items():
            self.total_cohomology[deg] = self.total_cohomology.get(deg, 0) + n
        lo = min(self.total_cohomology) if self.total_cohomology else 0
        self.d_min = max(1, 1 - lo)

    @property
    def dim(self) -> int:
        return len(self.paths)

    def dims_by_degree(self) -> Dict[int, int]:
        out: Dict[int, int] = {}
        for p in self.paths:
            out[p.degree] = out.get(p.degree, 0) + 1
        return out

    def h0(self) -> "H0Presentation":
        if not hasattr(self, "_h0"):
            self._h0 = H0Presentation(self)
        return self._h0

    def word(self, i: int) -> str:
        p = self.paths[i]
        if not p.arrows:
            return f"e{p.source}"
        return "*".join(self.arrows[a].name for a in p.arrows)

    def format_elem(self, x: Elem) -> str:
        if not x:
            return "0"
        parts = []
        for i in sorted(x):
            c = self.field.to_plain(x[i])
            parts.append(f"{c}*{self.word(i)}" if c != 1 else self.word(i))
        return " + ".join(parts)

    # -- identity ---------------------------------------------------------
    def signature(self) -> tuple:
        arrows = tuple((a.name, a.source, a.target, a.degree) for a in self.arrows)
        diffs = tuple(sorted(
            (name, tuple(sorted((self.word(i), str(self.field.to_plain(c))) for i, c in e.items())))
            for name, e in self.arrow_diff.items() if e))
        return (self.field.name, tuple(self.vertices), arrows, diffs)

    def __eq__(self, other):
        return isinstance(other, DGPathAlgebra) and self.signature() == other.signature()

    def __hash__(self):
        return hash(self.signature())

    def hash(self) -> str:
        return hashlib.sha256(repr(self.signature()).encode()).hexdigest()[:16]

    def differential_terms(self) -> PathDifferential:
        out: PathDifferential = {}
        for name, e in self.arrow_diff.items():
            if e:
                out[name] = [(c, [self.arrows[a].name for a in self.paths[i].arrows]) for i, c in sorted(e.items())]
        return out

    def with_field(self, field: Field) -> "DGPathAlgebra":
        return DGPathAlgebra(self.quiver, self._raw_diff, field)

    def __repr__(self):
        return f"DGPathAlgebra(vertices={self.vertices}, arrows={[a.name for a in self.arrows]}, dim={self.dim})"


def _clean(F: Field, e: Elem) -> Elem:
    if F.p is not None:
        e = {k: v % F.p for k, v in e.items()}
    return {k: v for k, v in e.items() if v != 0}


def build_algebra(q: GradedQuiver, diff: Optional[PathDifferential] = None, field: Field = QQ) -> DGPathAlgebra:
    return DGPathAlgebra(q, diff, field)


def opposite_algebra(a: DGPathAlgebra) -> DGPathAlgebra:
    """Reverse every arrow; the differential picks up the Koszul reordering sign."""
    q = GradedQuiver(list(a.vertices), [Arrow(x.name, x.target, x.source, x.degree) for x in a.arrows])
    diff: PathDifferential = {}
    for name, e in a.arrow_diff.items():
        terms = []
        for i, c in e.items():
            p = a.paths[i]
            degs = [a.arrows[k].degree for k in p.arrows]
            s = sum(degs[x] * degs[y] for x in range(len(degs)) for y in range(x + 1, len(degs)))
            coeff = c if s % 2 == 0 else a.field.neg(c)
            terms.append((coeff, [a.arrows[k].name for k in reversed(p.arrows)]))
        if terms:
            diff[name] = terms
    return DGPathAlgebra(q, diff, a.field)


class H0Presentation:
    """The degree-zero cohomology algebra H^0(A) with a chosen basis.

    Basis elements are cocycle representatives (columns over the path basis),
    chosen as complements of the coboundaries by leftmost-pivot convention.
    """

    def __init__(self, a: DGPathAlgebra):
        F = a.field
        self.algebra = a
        deg0 = [i for i, p in enumerate(a.paths) if p.degree == 0]
        self.basis: List[Elem] = []
        self.labels: List[Tuple[str, str]] = []
        for s in a.vertices:
            for t in a.vertices:
                src = a.block(s, t, 0)
                if not src:
                    continue
                prv = a.block(s, t, -1)
                # degree 0 paths are all cocycles (nothing in degree 1)
                bnd = a.diff_matrix[np.ix_(src, prv)] if prv else F.zeros(len(src), 0)
                bnd = image_basis(F, bnd)
                comp = complement_basis(F, bnd, len(src))
                for j in range(comp.shape[1]):
                    self.basis.append({src[k]: comp[k, j] for k in range(len(src)) if comp[k, j] != 0})
                    self.labels.append((s, t))
        self._src_all = deg0
        self.dim = len(self.basis)
        self.idempotents = {v: next(k for k, b in enumerate(self.basis) if b == {a.trivial[v]: F.one})
                            for v in a.vertices}
        self.radical = [k for k, (s, t) in enumerate(self.labels) if s != t or k not in self.idempotents.values()]

    def coords(self, x: Elem) -> List[object]:
        """Coordinates of a degree-0 element modulo coboundaries."""
        a = self.algebra
        F = a.field
        deg0 = self._src_all
        pos = {p: i for i, p in enumerate(deg0)}
        prv = [i for i, p in enumerate(a.paths) if p.degree == -1]
        cols = [[b.get(p, 0) for p in deg0] for b in self.basis]
        m = F.zeros(len(deg0), len(self.basis) + len(prv))
        for j, b in enumerate(self.basis):
            for p, c in b.items():
                m[pos[p], j] = c
        for j, q in enumerate(prv):
            for p, c in a.diff[q].items():
                m[pos[p], len(self.basis) + j] = c
        rhs = F.zeros(len(deg0), 1)
        for p, c in x.items():
            rhs[pos[p], 0] = c
        sol = solve(F, m, rhs)
        if sol is None:
            raise AlgebraError("element is not a degree-0 cocycle")
        return [sol[j, 0] for j in range(len(self.basis))]

    def structure_constants(self) -> np.ndarray:
        a = self.algebra
        n = self.dim
        F = a.field
        out = np.empty((n, n, n), dtype=F.dtype)
        for i in range(n):
            for j in range(n):
                c = self.coords(a.mul(self.basis[i], self.basis[j]))
                out[i, j, :] = c
        return out

    def simples(self) -> List[str]:
        return list(self.algebra.vertices)

    def projective_cover_dims(self) -> Dict[str, int]:
        return {v: sum(1 for (s, t) in self.labels if s == v) for v in self.algebra.vertices}


def h0_module_category_data(a: DGPathAlgebra) -> H0Presentation:
    return a.h0()
