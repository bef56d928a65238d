"""Endomorphism rings, Krull-Schmidt decomposition, meshes and knitting."""
from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import sympy

from .dgmodule import DGMorphism, cocone, submodule, truncate_gt, truncate_gt_morphism
from .exactla import Field, image_basis, kernel_basis, rank, solve
from .heart import (Heart, HeartConflation, HeartMorphism, HeartObject, HomSpace, _post)
from .semifree import HomComplex, SemifreeMorphism


class FieldTooSmall(ArithmeticError):
    pass


class NonSplitSemisimpleQuotient(ArithmeticError):
    pass


class NotIndecomposable(ValueError):
    pass


class Projective(ValueError):
    pass


class NotProjective(ValueError):
    pass


class NotProjInj(ValueError):
    pass


class BudgetExhausted(RuntimeError):
    def __init__(self, quiver: "ARQuiver"):
        super().__init__(f"stopped after {len(quiver.vertices)} objects")
        self.quiver = quiver


# ---------------------------------------------------------------------------
# endomorphism algebras


class EndAlgebra:
    """End(x) with structure constants ``C[i, j] = coords(b_i o b_j)``."""

    def __init__(self, obj: HeartObject):
        H = obj.heart
        self.object = obj
        self.field: Field = H.field
        self.space: HomSpace = H.hom(obj, obj, 0)
        self.basis: List[HeartMorphism] = self.space.basis()
        m = len(self.basis)
        F = self.field
        C = np.empty((m, m, m), dtype=F.dtype) if m else np.empty((0, 0, 0), dtype=F.dtype)
        for j, bj in enumerate(self.basis):
            for i, bi in enumerate(self.basis):
                C[i, j, :] = self.space.coords(H.compose(bi, bj))[:, 0]
        self.structure_constants = C
        self.unit = self.space.coords(H.identity(obj))[:, 0] if m else F.zeros(0, 1)[:, 0]
        self._rad = None
        self._ssq = None

    @property
    def dim(self) -> int:
        return len(self.basis)

    def mul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        F = self.field
        m = self.dim
        if m == 0:
            return F.zeros(0, 1)[:, 0]
        ab = np.outer(a, b).reshape(1, m * m)
        return F.mul(F.reduce(ab), self.structure_constants.reshape(m * m, m))[0]

    def left_matrix(self, a: np.ndarray) -> np.ndarray:
        F = self.field
        m = self.dim
        M = F.zeros(m, m)
        for j in range(m):
            M[:, j] = self.mul(a, F.eye(m)[:, j])
        return M

    @property
    def radical_basis(self) -> np.ndarray:
        """Columns spanning the radical, from the kernel of the trace form."""
        if self._rad is None:
            F = self.field
            m = self.dim
            if F.p is not None and F.p <= m:
                raise FieldTooSmall(f"trace form needs characteristic > {m}")
            C = self.structure_constants
            tr = [sum((C[k, l, l] for l in range(m)), F.zero) for k in range(m)]
            T = F.zeros(m, m)
            for i in range(m):
                for j in range(m):
                    T[i, j] = sum((C[i, j, k] * tr[k] for k in range(m)), F.zero)
            T = F.reduce(T)
            self._rad = kernel_basis(F, T) if m else F.zeros(0, 0)
        return self._rad

    @property
    def is_local(self) -> bool:
        return self.dim > 0 and self.dim - self.radical_basis.shape[1] == 1

    def element(self, coords) -> HeartMorphism:
        return self.space.element(coords)

    @property
    def semisimple_quotient_dims(self) -> List[int]:
        """Matrix sizes of the split semisimple quotient."""
        if self._ssq is None:
            idems = primitive_idempotents(self)
            groups: List[List[np.ndarray]] = []
            for e in idems:
                for g in groups:
                    if _linked(self, g[0], e):
                        g.append(e)
                        break
                else:
                    groups.append([e])
            self._ssq = sorted(len(g) for g in groups)
        return self._ssq


def end_algebra(x: HeartObject) -> EndAlgebra:
    cache = x.__dict__.setdefault("_end", None)
    if cache is None:
        cache = x._end = EndAlgebra(x)
    return cache


def _mod_span(F: Field, base: np.ndarray, vecs: np.ndarray) -> int:
    """Rank of vecs modulo the column span of base."""
    if base.shape[1] == 0:
        return rank(F, vecs)
    return rank(F, np.concatenate([base, vecs], axis=1)) - rank(F, base)


def _corner(E: EndAlgebra, e: np.ndarray):
    F = E.field
    m = E.dim
    eye = F.eye(m)
    C = np.stack([E.mul(E.mul(e, eye[:, k]), e) for k in range(m)], axis=1)
    R = E.radical_basis
    Rc = np.stack([E.mul(E.mul(e, R[:, k]), e) for k in range(R.shape[1])], axis=1) if R.shape[1] else F.zeros(m, 0)
    return image_basis(F, C), image_basis(F, Rc) if Rc.shape[1] else Rc


def _linked(E: EndAlgebra, e: np.ndarray, f: np.ndarray) -> bool:
    """e E f not inside the radical (same block of the semisimple quotient)."""
    F = E.field
    m = E.dim
    eye = F.eye(m)
    vecs = np.stack([E.mul(E.mul(e, eye[:, k]), f) for k in range(m)], axis=1)
    return _mod_span(F, E.radical_basis, vecs) > 0


def _linear_roots(F: Field, coeffs: List) -> List:
    """Roots in the base field of sum coeffs[i] t^i."""
    t = sympy.Symbol("t")
    if F.p is None:
        cs = [sympy.Rational(int(c.numerator), int(c.denominator)) for c in map(lambda z: F(z), coeffs)]
        poly = sympy.Poly(list(reversed(cs)), t, domain="QQ")
    else:
        poly = sympy.Poly([int(c) % F.p for c in reversed(coeffs)], t, modulus=F.p)
    roots = []
    for fac, _ in poly.factor_list()[1]:
        if fac.degree() == 1:
            a, b = fac.all_coeffs()
            if F.p is None:
                r = -sympy.Rational(b) / sympy.Rational(a)
                roots.append(F(f"{r.p}/{r.q}"))
            else:
                roots.append(F(-int(b)) * F.inv(F(int(a))) % F.p)
    return sorted(roots, key=lambda z: (F.to_plain(z) if F.p else float(z)))


def _min_poly(E: EndAlgebra, y: np.ndarray, e: np.ndarray, Rc: np.ndarray):
    """Coefficients of the minimal polynomial of y in eEe/eRe (unit e)."""
    F = E.field
    powers = [e]
    while True:
        nxt = E.mul(powers[-1], y)
        mat = np.stack(powers, axis=1)
        base = np.concatenate([Rc, mat], axis=1) if Rc.shape[1] else mat
        sol = solve(F, base, nxt.reshape(-1, 1))
        if sol is not None:
            c = sol[Rc.shape[1]:, 0]
            return [F.neg(z) for z in c] + [F.one]
        powers.append(nxt)
        if len(powers) > E.dim + 1:
            raise ArithmeticError("minimal polynomial search did not terminate")


def _split_once(E: EndAlgebra, e: np.ndarray, Cb: np.ndarray, Rc: np.ndarray) -> Optional[np.ndarray]:
    F = E.field
    cands = [Cb[:, k] for k in range(Cb.shape[1])]
    n = len(cands)
    cands += [F.add(cands[a], cands[b]) for a in range(n) for b in range(a + 1, n)]
    for y in cands:
        mu = _min_poly(E, y, e, Rc)
        if len(mu) <= 2:
            continue
        for lam in _linear_roots(F, mu):
            z = F.sub(y, F.scale(lam, e))
            # find c in the corner with z c z = z modulo the corner radical
            W = np.stack([E.mul(E.mul(z, Cb[:, k]), z) for k in range(Cb.shape[1])], axis=1)
            M = np.concatenate([W, F.scale(-1, Rc)], axis=1) if Rc.shape[1] else W
            sol = solve(F, M, z.reshape(-1, 1))
            if sol is None:
                continue
            c = F.mul(Cb, sol[: Cb.shape[1]])[:, 0]
            x = E.mul(z, c)
            for _ in range(64):
                x2 = E.mul(x, x)
                if F.is_zero(F.sub(x2, x)):
                    break
                x = F.sub(F.scale(3, x2), F.scale(2, E.mul(x2, x)))
            else:
                raise ArithmeticError("idempotent lifting did not converge")
            return x
    return None


def primitive_idempotents(E: EndAlgebra) -> List[np.ndarray]:
    """A complete family of orthogonal primitive idempotents (coordinate vectors)."""
    if E.dim == 0:
        return []
    out: List[np.ndarray] = []
    stack = [E.unit]
    while stack:
        e = stack.pop()
        Cb, Rc = _corner(E, e)
        if Cb.shape[1] - Rc.shape[1] == 1:
            out.append(e)
            continue
        f = _split_once(E, e, Cb, Rc)
        if f is None:
            raise NonSplitSemisimpleQuotient("no zero divisor found in the semisimple quotient")
        g = E.field.sub(e, f)
        stack.append(g)
        stack.append(f)
    return out


# ---------------------------------------------------------------------------
# decomposition


def is_indecomposable(x: HeartObject) -> bool:
    return not x.is_zero and end_algebra(x).is_local


def summand_of_idempotent(x: HeartObject, e: HeartMorphism) -> HeartObject:
    """The direct summand cut out by an idempotent class, as a Fitting image."""
    H = x.heart
    F = H.field
    L = e.L
    t = x.tower(L)
    P = t.P
    Fv = H._lift(e, L)
    Phi = SemifreeMorphism.from_hom_vector(P, P, Fv).realize()
    T, q = truncate_gt(P.realize(), -H.d)
    PhiT = truncate_gt_morphism(Phi, -H.d, src=(T, q), tgt=(T, q))
    N = max(T.dims.values(), default=1)
    basis = {}
    for k, n in T.dims.items():
        M = PhiT.block(*k)
        power = 1
        while power < N:
            M = F.mul(M, M)
            power *= 2
        img = image_basis(F, M)
        if img.shape[1]:
            basis[k] = img
    S, _ = submodule(T, basis)
    return HeartObject(H, S)


def decompose(x: HeartObject) -> List[Tuple[HeartObject, int]]:
    """Indecomposable summands with multiplicities, in a canonical order."""
    if x.is_zero:
        return []
    E = end_algebra(x)
    if E.is_local:
        return [(x, 1)]
    parts = [summand_of_idempotent(x, E.element(e)) for e in primitive_idempotents(E)]
    groups: List[List[HeartObject]] = []
    for p in parts:
        for g in groups:
            if iso_test(g[0], p):
                g.append(p)
                break
        else:
            groups.append([p])
    out = [(g[0], len(g)) for g in groups]
    out.sort(key=lambda t: _label_key(t[0]))
    return out


def _label_key(x: HeartObject):
    vi = x.heart.algebra.vindex
    return tuple((-i, vi[v], n) for v, i, n in x.label())


def iso_test(x: HeartObject, y: HeartObject) -> bool:
    """Isomorphism test.

    For End-local x a basis morphism is invertible iff x and y are isomorphic;
    otherwise the Krull-Schmidt decompositions are matched summand by summand.
    """
    if x.label() != y.label():
        return False
    if x is y or x.is_zero:
        return True
    H = x.heart
    for f in H.hom(x, y, 0).basis():
        if H.is_iso(f):
            return True
    if is_indecomposable(x):
        return False
    rest = list(decompose(y))
    for a, k in decompose(x):
        hit = next((n for n, (b, l) in enumerate(rest) if l == k and iso_test(a, b)), None)
        if hit is None:
            return False
        rest.pop(hit)
    return not rest


# ---------------------------------------------------------------------------
# almost split conflations


def socle_class(m: HeartObject, t: HeartObject) -> HeartMorphism:
    """A nonzero xi in E(m, t) with xi o r = 0 for every radical endomorphism r of m."""
    H = m.heart
    F = H.field
    Es = H.hom(m, t, 1)
    if Es.dim == 0:
        raise ValueError("E(m, tau m) vanishes")
    End = end_algebra(m)
    R = End.radical_basis
    rows = []
    for k in range(R.shape[1]):
        r = End.element(R[:, k])
        cols = [Es.coords(H.compose(xi, r)) for xi in Es.basis()]
        rows.append(np.concatenate(cols, axis=1))
    if rows:
        K = kernel_basis(F, np.concatenate(rows, axis=0))
    else:
        K = F.eye(Es.dim)
    if K.shape[1] == 0:
        raise ArithmeticError("no socle element in E(m, tau m)")
    return Es.element(K[:, 0])


def conflation_of_class(m: HeartObject, t: HeartObject, xi: HeartMorphism) -> HeartConflation:
    """t -> E -> m realized from a class xi in E(m, t)."""
    H = m.heart
    d = H.d
    xs = xi.strict()                       # realize(P_m) -> t[1]
    K, to_x, from_y = cocone(xs)
    T, q = truncate_gt(K, -d)
    mid = HeartObject(H, T)
    # inflation: t = (t[1])[-1] -> K -> T
    incl = DGMorphism(t.module, T, {k: H.field.mul(q.block(*k), from_y.block(*k)) for k in t.module.dims})
    inflation = H.from_strict(t, mid, incl)
    # deflation: lift P_T -> T through q (length d suffices), then K -> realize(P_m) -> m
    tm = m.tower(xi.L)
    s = tm.morphism().compose(to_x)
    td = mid.tower(d)
    Hq = HomComplex(td.P, T)
    G = H.lift_vector(td.P, q, td.comparison_vector(Hq))
    if G is None:
        raise ArithmeticError("deflation lift failed")
    HK = HomComplex(td.P, K)
    Hm = H.hom_complex(mid, m, d)
    vec = _post(td.P, HK, G, s, Hm, 0)
    deflation = H.rebase(HeartMorphism(mid, m, 0, d, vec), H.length_for(0))
    return HeartConflation(t, mid, m, inflation, deflation, xi)


def almost_split_conflation(m: HeartObject, tau_m: Optional[HeartObject] = None) -> HeartConflation:
    H = m.heart
    if H.is_projective(m):
        raise Projective("projective objects end no almost split conflation")
    if not is_indecomposable(m):
        raise NotIndecomposable("almost split conflations need an indecomposable end")
    t = tau_m if tau_m is not None else H.tau(m)
    xi = socle_class(m, t)
    c = conflation_of_class(m, t, xi)
    c.almost_split = True
    return c


def sink_map_of_projective(p: HeartObject) -> Tuple[HeartObject, DGMorphism]:
    H = p.heart
    if not H.is_projective(p):
        raise NotProjective("sink map requested for a non-projective object")
    return H.rad(p)


def source_map_of_injective(i: HeartObject) -> Tuple[HeartObject, DGMorphism]:
    H = i.heart
    if not H.is_injective(i):
        raise ValueError("source map requested for a non-injective object")
    return H.quot_soc(i)


def proj_inj_mesh(p: HeartObject) -> HeartConflation:
    """rad P -> P + rad P/soc P -> P/soc P for a non-simple projective-injective P."""
    H = p.heart
    F = H.field
    if not (H.is_projective(p) and H.is_injective(p)):
        raise NotProjInj("object is not projective-injective")
    if sum(p.module.cohomology_dims().values()) <= 1:
        raise NotProjInj("object is simple")
    R, inc = H.rad(p)
    Rs = H.soc(R)[1]
    Qr, qr = _quotient_by(R, Rs)
    Qp, qp = H.quot_soc(p)
    # rad P -> P + rad P/soc P  via (inc, qr); P + radP/socP -> P/soc P via (qp, -induced)
    from .dgmodule import direct_sum
    S, incs, projs = direct_sum([p.module, Qr.module])
    left = R
    mid = HeartObject(H, S)
    right = Qp
    f = incs[0].compose(inc) + incs[1].compose(qr)
    # the induced map radP/socP -> P/socP
    ind = _induced(qp.compose(inc), qr)
    g = qp.compose(projs[0]) + ind.compose(projs[1]).scaled(-1)
    infl = H.from_strict(left, mid, f)
    defl = H.from_strict(mid, right, g)
    c = HeartConflation(left, mid, right, infl, defl, None, almost_split=True)
    return c


def _quotient_by(x: HeartObject, inc: DGMorphism):
    from .dgmodule import quotient
    H = x.heart
    basis = {k: image_basis(H.field, b) for k, b in inc.blocks.items()}
    Q, q = quotient(x.module, basis)
    return HeartObject(H, Q), q


def _induced(f: DGMorphism, q: DGMorphism) -> DGMorphism:
    """The map g with g o q = f, for q a surjective strict map."""
    F = f.source.field
    blocks = {}
    for k in q.target.dims:
        qk = q.block(*k)
        sec = solve(F, qk, F.eye(qk.shape[0]))
        blocks[k] = F.mul(f.block(*k), sec)
    return DGMorphism(q.target, f.target, blocks)


@dataclass
class AlmostSplitReport:
    nonsplit: bool
    ends_indecomposable: bool
    composite_zero: bool
    left_almost_split: bool
    right_almost_split: bool
    failures: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return (self.nonsplit and self.ends_indecomposable and self.composite_zero
                and self.left_almost_split and self.right_almost_split)


def verify_almost_split(c: HeartConflation, corpus: Sequence[HeartObject]) -> AlmostSplitReport:
    H = c.left.heart
    F = H.field
    fails: List[str] = []
    nonsplit = c.xi is None or not c.xi.is_zero()
    if c.xi is None:
        # split iff the inflation has a retraction
        nonsplit = not _has_retraction(c.inflation)
    if not nonsplit:
        fails.append("conflation splits")
    ends = is_indecomposable(c.left) and is_indecomposable(c.right)
    if not ends:
        fails.append("an end is decomposable")
    comp = H.compose(c.deflation, c.inflation).is_zero()
    if not comp:
        fails.append("deflation o inflation is nonzero")
    left_ok = right_ok = True
    for z in corpus:
        target = H.hom(c.left, z, 0)
        imgs = [target.coords(H.compose(u, c.inflation)) for u in H.hom(c.middle, z, 0).basis()]
        r = rank(F, np.concatenate(imgs, axis=1)) if imgs else 0
        want = target.dim - (1 if iso_test(c.left, z) else 0)
        if r != want:
            left_ok = False
            fails.append(f"left: image {r} vs {want} for {z!r}")
        target = H.hom(z, c.right, 0)
        imgs = [target.coords(H.compose(c.deflation, w)) for w in H.hom(z, c.middle, 0).basis()]
        r = rank(F, np.concatenate(imgs, axis=1)) if imgs else 0
        want = target.dim - (1 if iso_test(c.right, z) else 0)
        if r != want:
            right_ok = False
            fails.append(f"right: image {r} vs {want} for {z!r}")
    return AlmostSplitReport(nonsplit, ends, comp, left_ok, right_ok, fails)


def _has_retraction(f: HeartMorphism) -> bool:
    H = f.heart
    F = H.field
    ident = H.hom(f.source, f.source, 0).coords(H.identity(f.source))
    back = H.hom(f.target, f.source, 0)
    imgs = [H.hom(f.source, f.source, 0).coords(H.compose(u, f)) for u in back.basis()]
    if not imgs:
        return F.is_zero(ident)
    return solve(F, np.concatenate(imgs, axis=1), ident) is not None


# ---------------------------------------------------------------------------
# knitting


@dataclass
class QuiverVertex:
    obj: HeartObject
    order: int
    projective: bool
    injective: bool
    tau: Optional[int] = None          # registry index of tau(M)
    tau_inv: Optional[int] = None
    middle: List[Tuple[int, int]] = field(default_factory=list)   # (L, multiplicity) into M
    done: bool = False


@dataclass
class ARQuiver:
    heart: Heart
    vertices: List[QuiverVertex]
    arrows: Dict[Tuple[int, int], Tuple[int, int]]   # (L, M) -> (d, d')
    tau_edges: List[Tuple[int, int]]                 # (M, tau M)
    status: str
    meshes: Dict[int, HeartConflation] = field(default_factory=dict)

    def canonical_order(self) -> List[int]:
        return sorted(range(len(self.vertices)),
                      key=lambda i: (_label_key(self.vertices[i].obj), self.vertices[i].order))

    def ids(self) -> Dict[int, str]:
        return {i: f"v{n}" for n, i in enumerate(self.canonical_order())}

    def objects(self) -> List[HeartObject]:
        return [self.vertices[i].obj for i in self.canonical_order()]


def label_string(x: HeartObject) -> str:
    """Composition factors by degree, e.g. ``H0: 1 2 | H-1: 2``."""
    by: Dict[int, List[str]] = {}
    for v, i, n in x.label():
        by.setdefault(i, []).extend([v] * n)
    return " | ".join(f"H{i}: {' '.join(vs)}" for i, vs in sorted(by.items(), reverse=True))


class _Registry:
    def __init__(self, heart: Heart):
        self.heart = heart
        self.items: List[QuiverVertex] = []

    def find(self, x: HeartObject) -> Optional[int]:
        for i, it in enumerate(self.items):
            if iso_test(it.obj, x):
                return i
        return None

    def add(self, x: HeartObject) -> Tuple[int, bool]:
        i = self.find(x)
        if i is not None:
            return i, False
        H = self.heart
        self.items.append(QuiverVertex(x, len(self.items), H.is_projective(x), H.is_injective(x)))
        return len(self.items) - 1, True


def _mesh_work(H: Heart, v: QuiverVertex):
    """Independent computations for one vertex (safe to run in a worker)."""
    out = {}
    x = v.obj
    if v.projective:
        R, _ = H.rad(x)
        out["middle"] = decompose(R) if not R.is_zero else []
    else:
        t = H.tau(x)
        c = almost_split_conflation(x, t)
        out["tau"] = t
        out["conflation"] = c
        out["middle"] = decompose(c.middle)
    if not v.injective:
        out["tau_inv"] = H.tau_inverse(x)
    return out


def knit(algebra, d: int, max_objects: int = 200, workers: int = 1) -> ARQuiver:
    """Knit the Auslander-Reiten quiver of H^d from projectives and injectives."""
    H = Heart.of(algebra, d)
    reg = _Registry(H)
    for v in algebra.vertices:
        reg.add(H.projective(v))
    for v in algebra.vertices:
        reg.add(H.injective(v))
    arrows: Dict[Tuple[int, int], Tuple[int, int]] = {}
    tau_edges: List[Tuple[int, int]] = []
    meshes: Dict[int, HeartConflation] = {}
    status = "complete"
    pool = ThreadPoolExecutor(max_workers=workers) if workers > 1 else None
    try:
        while True:
            todo = [i for i, it in enumerate(reg.items) if not it.done]
            if not todo:
                break
            if len(reg.items) > max_objects:
                status = "budget_exhausted"
                break
            if pool is not None:
                results = list(pool.map(lambda i: _mesh_work(H, reg.items[i]), todo))
            else:
                results = [_mesh_work(H, reg.items[i]) for i in todo]
            for i, res in zip(todo, results):
                it = reg.items[i]
                it.done = True
                if "tau" in res:
                    j, _ = reg.add(res["tau"])
                    it.tau = j
                    tau_edges.append((i, j))
                    meshes[i] = res["conflation"]
                for y, k in res["middle"]:
                    j, _ = reg.add(y)
                    it.middle.append((j, k))
                    arrows[(j, i)] = (k, k)
                if "tau_inv" in res:
                    j, _ = reg.add(res["tau_inv"])
                    it.tau_inv = j
    finally:
        if pool is not None:
            pool.shutdown()
    items = reg.items
    if len(items) > max_objects:
        # keep the first max_objects discoveries and the edges among them
        status = "budget_exhausted"
        items = items[:max_objects]
        n = len(items)
        for it in items:
            it.tau = it.tau if it.tau is not None and it.tau < n else None
            it.tau_inv = it.tau_inv if it.tau_inv is not None and it.tau_inv < n else None
            it.middle = [(j, k) for j, k in it.middle if j < n]
        arrows = {(a, b): m for (a, b), m in arrows.items() if a < n and b < n}
        tau_edges = [(a, b) for a, b in tau_edges if a < n and b < n]
        meshes = {i: c for i, c in meshes.items() if i < n}
    return ARQuiver(H, items, arrows, sorted(set(tau_edges)), status, meshes)


# ---------------------------------------------------------------------------
# output


def quiver_payload(q: ARQuiver) -> dict:
    A = q.heart.algebra
    ids = q.ids()
    verts = []
    for i in q.canonical_order():
        it = q.vertices[i]
        gd = {v: {str(k): n for k, n in sorted(degs.items())} for v, degs in it.obj.graded_dims().items()}
        verts.append({"id": ids[i], "label": label_string(it.obj), "graded_dims": gd,
                      "projective": it.projective, "injective": it.injective})
    arrows = [{"from": ids[a], "to": ids[b], "d": dd, "d_prime": dp}
              for (a, b), (dd, dp) in q.arrows.items()]
    arrows.sort(key=lambda r: (int(r["from"][1:]), int(r["to"][1:])))
    taus = [{"from": ids[a], "to": ids[b]} for a, b in q.tau_edges]
    taus.sort(key=lambda r: (int(r["from"][1:]), int(r["to"][1:])))
    return {"algebra_hash": A.hash(), "d": q.heart.d, "field": q.heart.field.name,
            "status": q.status, "vertices": verts, "arrows": arrows, "tau": taus}


def emit_json(q: ARQuiver) -> bytes:
    return (json.dumps(quiver_payload(q), sort_keys=True, indent=2) + "\n").encode()


def emit_dot(q: ARQuiver) -> bytes:
    p = quiver_payload(q)
    lines = ["digraph ar {", "  rankdir=LR;", "  node [shape=box, fontname=monospace];"]
    for v in p["vertices"]:
        shape = ""
        if v["projective"] or v["injective"]:
            shape = ", style=bold"
        lines.append(f'  {v["id"]} [label="{v["label"]}"{shape}];')
    for a in p["arrows"]:
        lab = f' [label="{a["d"]}"]' if a["d"] != 1 else ""
        lines.append(f'  {a["from"]} -> {a["to"]}{lab};')
    for t in p["tau"]:
        lines.append(f'  {t["from"]} -> {t["to"]} [style=dashed, constraint=false];')
    lines.append("}")
    return ("\n".join(lines) + "\n").encode()


# ---------------------------------------------------------------------------
# invariant report


def verify_quiver(q: ARQuiver, ars: bool = True) -> Dict[str, List[str]]:
    """Mesh symmetry, middle-term counts, ARS duality and tau round trips."""
    H = q.heart
    out: Dict[str, List[str]] = {"mesh_symmetry": [], "middle_terms": [], "ars": [], "tau_roundtrip": []}
    items = q.vertices
    into: Dict[int, Dict[int, int]] = {}
    outof: Dict[int, Dict[int, int]] = {}
    for (a, b), (dd, _) in q.arrows.items():
        into.setdefault(b, {})[a] = dd
        outof.setdefault(a, {})[b] = dd
    for i, it in enumerate(items):
        if it.projective or it.tau is None:
            continue
        t = it.tau
        if set(into.get(i, {})) != set(outof.get(t, {})):
            out["mesh_symmetry"].append(f"{i}: {sorted(into.get(i, {}))} vs {sorted(outof.get(t, {}))}")
        if into.get(i, {}) != outof.get(t, {}):
            out["middle_terms"].append(f"{i}: {into.get(i, {})} vs {outof.get(t, {})}")
        back = H.tau_inverse(items[t].obj)
        if not iso_test(it.obj, back):
            out["tau_roundtrip"].append(f"tau^-1 tau at {i}")
    for i, it in enumerate(items):
        if it.injective or it.tau_inv is None:
            continue
        back = H.tau(items[it.tau_inv].obj)
        if not iso_test(it.obj, back):
            out["tau_roundtrip"].append(f"tau tau^-1 at {i}")
    if ars:
        objs = [it.obj for it in items]
        for i, x in enumerate(objs):
            if items[i].projective:
                continue
            t = items[items[i].tau].obj
            for y in objs:
                a = H.stable_hom(x, y).dim
                b = H.hom(y, t, 1).dim
                if a != b:
                    out["ars"].append(f"{label_string(x)} / {label_string(y)}: {a} vs {b}")
    return out
