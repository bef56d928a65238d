"""Semifree dg modules: free graded modules with a triangular differential.

A generator ``(v, s)`` stands for the summand ``e_v A[s]``; its generator
element has degree ``-s``.  The differential is ``d(g_i) = sum_k g_k c_ki``
with ``c_ki`` in ``e_{v_k} A e_{v_i}`` of degree ``s_k - s_i + 1``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple

import numpy as np

from .dgalgebra import DGPathAlgebra, Elem
from .dgmodule import (DGModule, DGMorphism, Key, ModuleError, cone, identity, shift)
from .exactla import Field, extend_basis, image_basis, kernel_basis, rank, solve


class NotConnective(ValueError):
    pass


class NotMinimal(ValueError):
    pass


class SemifreeModule:
    def __init__(self, algebra: DGPathAlgebra, gens: Sequence[Tuple[str, int]],
                 delta: Optional[Dict[Tuple[int, int], Elem]] = None):
        self.algebra = algebra
        self.field = algebra.field
        self.gens = [(v, int(s)) for v, s in gens]
        self.delta = {k: e for k, e in (delta or {}).items() if e}
        for (k, i), e in self.delta.items():
            vk, sk = self.gens[k]
            vi, si = self.gens[i]
            for p in e:
                path = algebra.paths[p]
                if path.source != vk or path.target != vi or path.degree != sk - si + 1:
                    raise ModuleError(f"delta entry ({k},{i}) has a path of the wrong shape")
        self._real = None

    def __len__(self):
        return len(self.gens)

    @property
    def shifts(self) -> List[int]:
        return [s for _, s in self.gens]

    def c(self, k: int, i: int) -> Elem:
        return self.delta.get((k, i), {})

    def maurer_cartan_defect(self) -> Dict[Tuple[int, int], Elem]:
        A = self.algebra
        F = self.field
        out = {}
        n = len(self.gens)
        for l in range(n):
            for i in range(n):
                acc: Elem = {}
                for k in range(n):
                    if (l, k) in self.delta and (k, i) in self.delta:
                        acc = A.add(acc, A.mul(self.delta[(l, k)], self.delta[(k, i)]))
                if (l, i) in self.delta:
                    dc = A.d(self.delta[(l, i)])
                    acc = A.add(acc, dc, -1 if self.gens[l][1] % 2 else 1)
                if acc:
                    out[(l, i)] = acc
        return out

    def is_minimal(self) -> bool:
        A = self.algebra
        triv = set(A.trivial.values())
        return not any(p in triv for e in self.delta.values() for p in e)

    # -- realization ------------------------------------------------------
    def realize(self) -> DGModule:
        if self._real is not None:
            return self._real
        A = self.algebra
        F = self.field
        pos: Dict[Tuple[int, int], Tuple[Key, int]] = {}
        dims: Dict[Key, int] = {}
        for gi, (v, s) in enumerate(self.gens):
            for p in A.from_vertex[v]:
                path = A.paths[p]
                key = (path.target, path.degree - s)
                pos[(gi, p)] = (key, dims.get(key, 0))
                dims[key] = dims.get(key, 0) + 1
        diff: Dict[Key, np.ndarray] = {}
        act: Dict[Tuple[str, int], np.ndarray] = {}

        for (gi, p), (key, col) in pos.items():
            v, s = self.gens[gi]
            tkey = (key[0], key[1] + 1)
            terms: List[Tuple[Tuple[int, int], object]] = []
            for k in range(len(self.gens)):
                c = self.delta.get((k, gi))
                if not c:
                    continue
                for q, coeff in A.mul(c, {p: F.one}).items():
                    terms.append(((k, q), coeff))
            sgn = -1 if s % 2 else 1
            for q, coeff in A.diff[p].items():
                terms.append(((gi, q), coeff if sgn == 1 else F.neg(coeff)))
            if terms:
                m = diff.get(key)
                if m is None:
                    m = diff[key] = F.zeros(dims[tkey], dims[key])
                for tgt, coeff in terms:
                    tk, row = pos[tgt]
                    assert tk == tkey
                    m[row, col] = m[row, col] + coeff
                if F.p is not None:
                    diff[key] = m % F.p
            for ai, ar in enumerate(A.arrows):
                if ar.source != key[0]:
                    continue
                path = A.paths[p]
                q = A.index[(path.source, path.arrows + (ai,))]
                tk, row = pos[(gi, q)]
                akey = (ar.name, key[1])
                m = act.get(akey)
                if m is None:
                    m = act[akey] = F.zeros(dims[tk], dims[key])
                m[row, col] = F.one
        self._pos = pos
        self._real = DGModule(A, dims, diff, act)
        return self._real

    def position(self, gi: int, p: int) -> Tuple[Key, int]:
        self.realize()
        return self._pos[(gi, p)]

    def elem_vector(self, terms: Dict[Tuple[int, int], object], key: Key) -> np.ndarray:
        """Column vector in realize() block ``key`` of sum coeff * g_k p."""
        R = self.realize()
        F = self.field
        v = F.zeros(R.dim(*key), 1)
        for (gk, p), c in terms.items():
            k, r = self._pos[(gk, p)]
            if k != key:
                raise ModuleError("element not homogeneous in the requested block")
            v[r, 0] = v[r, 0] + c
        return F.reduce(v)

    def vector_terms(self, key: Key, vec) -> Dict[int, Elem]:
        """Decompose a block vector of realize() into {generator: element of A}."""
        self.realize()
        vec = np.asarray(vec).reshape(-1)
        out: Dict[int, Elem] = {}
        inv = self._inv_pos()
        for r in range(len(vec)):
            c = vec[r]
            if c != 0:
                gk, p = inv[(key, r)]
                out.setdefault(gk, {})[p] = c
        return out

    def _inv_pos(self):
        if not hasattr(self, "_ipos"):
            self._ipos = {v: k for k, v in self._pos.items()}
        return self._ipos

    def __repr__(self):
        return f"SemifreeModule(gens={self.gens}, delta_entries={len(self.delta)})"

    def describe(self) -> str:
        A = self.algebra
        lines = [f"generators: {', '.join(f'e{v}A[{s}]' for v, s in self.gens)}"]
        for (k, i), e in sorted(self.delta.items()):
            lines.append(f"  d(g{i}) has g{k} * ({A.format_elem(e)})")
        return "\n".join(lines)


# ---------------------------------------------------------------------------
# hom complexes with semifree source


class HomComplex:
    """Hom_A(P, Y) restricted to the degrees that are needed."""

    def __init__(self, P: SemifreeModule, Y: DGModule):
        self.P = P
        self.Y = Y
        self._layout: Dict[int, Tuple[List[Tuple[int, Key, int]], int]] = {}
        self._dmat: Dict[int, np.ndarray] = {}

    def layout(self, m: int):
        """Blocks of degree m: list of (generator, Y-key, offset), total dim."""
        if m not in self._layout:
            out, off = [], 0
            for gi, (v, s) in enumerate(self.P.gens):
                key = (v, m - s)
                n = self.Y.dim(*key)
                if n:
                    out.append((gi, key, off))
                    off += n
            self._layout[m] = (out, off)
        return self._layout[m]

    def dim(self, m: int) -> int:
        return self.layout(m)[1]

    def differential(self, m: int) -> np.ndarray:
        """Matrix Hom^m -> Hom^{m+1}."""
        if m in self._dmat:
            return self._dmat[m]
        P, Y = self.P, self.Y
        A = P.algebra
        F = P.field
        src, ns = self.layout(m)
        tgt, nt = self.layout(m + 1)
        D = F.zeros(nt, ns)
        tpos = {gi: (key, off) for gi, key, off in tgt}
        sgn = -1 if m % 2 == 0 else 1  # -(-1)^m
        for gk, key, off in src:
            n = Y.dim(*key)
            # d_Y part: generator gk
            if gk in tpos:
                tkey, toff = tpos[gk]
                blk = Y.d(*key)
                D[toff:toff + blk.shape[0], off:off + n] = F.add(D[toff:toff + blk.shape[0], off:off + n], blk)
            # - (-1)^m phi(g_k) c_ki, contributes to generator i
            for (k, i), c in P.delta.items():
                if k != gk or i not in tpos:
                    continue
                tkey, toff = tpos[i]
                vk = P.gens[k][0]
                vi = P.gens[i][0]
                dc = A.degree(c)
                blk = Y.elem_action(c, vk, vi, dc, key[1])
                if sgn == -1:
                    blk = F.scale(-1, blk)
                D[toff:toff + blk.shape[0], off:off + n] = F.add(D[toff:toff + blk.shape[0], off:off + n], blk)
        self._dmat[m] = D
        return D

    def cocycles(self, m: int) -> np.ndarray:
        F = self.P.field
        n = self.dim(m)
        if n == 0:
            return F.zeros(0, 0)
        return kernel_basis(F, self.differential(m))

    def coboundaries(self, m: int) -> np.ndarray:
        F = self.P.field
        n = self.dim(m)
        if n == 0:
            return F.zeros(0, 0)
        if self.dim(m - 1) == 0:
            return F.zeros(n, 0)
        return image_basis(F, self.differential(m - 1))

    def cohomology(self, m: int):
        """(B, R): coboundary basis and class representatives in degree m."""
        B = self.coboundaries(m)
        Z = self.cocycles(m)
        if Z.shape[0] == 0:
            return B, Z
        return B, extend_basis(self.P.field, B, Z)

    def classes_coords(self, m: int, vecs: np.ndarray, BR=None) -> Optional[np.ndarray]:
        """Coordinates of cocycles in the class basis (None if not cocycles)."""
        F = self.P.field
        B, R = BR if BR is not None else self.cohomology(m)
        if R.shape[1] == 0:
            return F.zeros(0, vecs.shape[1])
        sol = solve(F, np.concatenate([B, R], axis=1), vecs)
        if sol is None:
            return None
        return sol[B.shape[1]:]

    def to_morphism(self, m: int, vec, target: Optional[DGModule] = None) -> DGMorphism:
        """The chain map realize(P) -> Y[m] of a degree-m cocycle."""
        P, Y = self.P, self.Y
        A = P.algebra
        F = P.field
        R = P.realize()
        T = target if target is not None else shift(Y, m)
        src, _ = self.layout(m)
        blocks: Dict[Key, np.ndarray] = {}
        for gi, key, off in src:
            v, s = P.gens[gi]
            n = Y.dim(*key)
            phi = np.array(vec[off:off + n], dtype=F.dtype).reshape(n, 1)
            for p in A.from_vertex[v]:
                path = A.paths[p]
                rkey, col = P.position(gi, p)
                img = F.mul(Y.path_action(p, key[1]), phi)
                tkey = rkey
                if T.dim(*tkey) == 0:
                    continue
                b = blocks.get(tkey)
                if b is None:
                    b = blocks[tkey] = F.zeros(T.dim(*tkey), R.dim(*tkey))
                b[:, col] = img[:, 0]
        return DGMorphism(R, T, blocks)

    def from_morphism_blocks(self, m: int, f: DGMorphism) -> np.ndarray:
        """Restrict a chain map realize(P) -> Y[m] to generators."""
        P = self.P
        F = P.field
        src, n = self.layout(m)
        vec = F.zeros(n, 1)
        for gi, key, off in src:
            v, s = P.gens[gi]
            rkey, col = P.position(gi, P.algebra.trivial[v])
            blk = f.block(*rkey)
            vec[off:off + blk.shape[0], 0] = blk[:, col]
        return vec


def hom_complex(P: SemifreeModule, Y: DGModule) -> HomComplex:
    return HomComplex(P, Y)


def derived_hom(P: SemifreeModule, Y: DGModule, j: int):
    """Class representatives (columns) of Hom_D(P, Y[j])."""
    H = HomComplex(P, Y)
    _, R = H.cohomology(j)
    return H, R


# ---------------------------------------------------------------------------
# resolutions


@dataclass
class ResolutionTower:
    target: DGModule
    P: SemifreeModule
    comparison: Dict[int, np.ndarray]  # generator -> vector in target block (v, -s)
    levels: List[List[int]]            # generators added at each step
    length: int

    def morphism(self) -> DGMorphism:
        """The chain map realize(P) -> target."""
        H = HomComplex(self.P, self.target)
        return H.to_morphism(0, self.comparison_vector(H), target=self.target)

    def comparison_vector(self, H: Optional[HomComplex] = None) -> np.ndarray:
        H = H or HomComplex(self.P, self.target)
        F = self.P.field
        src, n = H.layout(0)
        vec = F.zeros(n, 1)
        for gi, key, off in src:
            c = self.comparison.get(gi)
            if c is not None:
                vec[off:off + len(c), 0] = c
        return vec


def _top_reps(C: DGModule, deg: int, v: str) -> np.ndarray:
    """Cocycles of C at (v, deg) spanning top H^deg(C) e_v."""
    F = C.field
    A = C.algebra
    n = C.dim(v, deg)
    if n == 0:
        return F.zeros(0, 0)
    Z = C.cocycles(v, deg)
    if Z.shape[1] == 0:
        return Z
    parts = [C.coboundaries(v, deg)]
    for ar in A.arrows:
        if ar.target == v and ar.degree == 0 and C.dim(ar.source, deg):
            parts.append(F.mul(C.a(ar.name, deg), C.cocycles(ar.source, deg)))
    sub = np.concatenate(parts, axis=1) if parts else F.zeros(n, 0)
    return extend_basis(F, sub, Z)


def d_term_resolution(x: DGModule, n: int) -> ResolutionTower:
    """Semifree P with generator shifts in [0, n] and a comparison P -> x whose
    cone lies in D^{<= -n-1}.  Built by repeatedly covering the top cohomology
    of the cone.
    """
    A = x.algebra
    F = x.field
    if any(i > 0 for _, i in x.cohomology_dims()):
        raise NotConnective("module has cohomology in positive degree")
    gens: List[Tuple[str, int]] = []
    delta: Dict[Tuple[int, int], Elem] = {}
    comp: Dict[int, np.ndarray] = {}
    levels: List[List[int]] = []
    P = SemifreeModule(A, gens, delta)
    for k in range(n + 1):
        H = HomComplex(P, x)
        vec = F.zeros(H.dim(0), 1)
        for gi, key, off in H.layout(0)[0]:
            c = comp.get(gi)
            if c is not None:
                vec[off:off + len(c), 0] = c
        R = P.realize()
        f = H.to_morphism(0, vec, target=x)
        C, _, _ = cone(f)
        added = []
        new_gens = list(gens)
        new_delta = dict(delta)
        for v in A.vertices:
            reps = _top_reps(C, -k, v)
            nx = x.dim(v, -k)
            for j in range(reps.shape[1]):
                z = reps[:, j]
                a_part = z[:nx]
                b_part = z[nx:]
                gi = len(new_gens)
                new_gens.append((v, k))
                comp[gi] = F.reduce(np.array([F.neg(t) for t in a_part], dtype=F.dtype)) if nx else None
                if comp[gi] is None:
                    del comp[gi]
                if len(b_part):
                    for gk, e in P.vector_terms((v, -k + 1), b_part).items():
                        new_delta[(gk, gi)] = e
                added.append(gi)
        gens, delta = new_gens, new_delta
        P = SemifreeModule(A, gens, delta)
        levels.append(added)
    return ResolutionTower(x, P, comp, levels, n)


def derived_projective_cover(x: DGModule):
    """(P, p): P a sum of e_vA (shift 0) with H^0(p) a projective cover."""
    t = d_term_resolution(x, 0)
    return t.P, t.morphism()


# ---------------------------------------------------------------------------
# minimization and stripping


def minimize(P: SemifreeModule, comparison: Optional[Dict[int, np.ndarray]] = None,
             target: Optional[DGModule] = None):
    """Cancel unit entries of delta by Gaussian elimination.

    With a comparison map (generator images in ``target``) the map is
    transported to the smaller model; returns (P', comparison').
    """
    A = P.algebra
    F = P.field
    triv = {i: v for v, i in A.trivial.items()}
    gens = list(P.gens)
    delta = dict(P.delta)
    comp = dict(comparison) if comparison is not None else None
    alive = list(range(len(gens)))
    while True:
        hit = None
        for (k, i), e in sorted(delta.items()):
            for p, c in e.items():
                if p in triv:
                    hit = (k, i, c)
                    break
            if hit:
                break
        if hit is None:
            break
        k, i, lam = hit
        inv = F.inv(lam)
        col_i = {l: e for (l, j), e in delta.items() if j == i and l not in (k, i)}
        row_k = {j: e for (l, j), e in delta.items() if l == k and j not in (k, i)}
        nd = {}
        for (l, j), e in delta.items():
            if l in (k, i) or j in (k, i):
                continue
            nd[(l, j)] = e
        for l, cli in col_i.items():
            for j, ckj in row_k.items():
                prod = A.mul(cli, ckj)
                upd = A.add(nd.get((l, j), {}), prod, F.neg(inv))
                if upd:
                    nd[(l, j)] = upd
                else:
                    nd.pop((l, j), None)
        if comp is not None:
            fi = comp.get(i)
            for j, ckj in row_k.items():
                if fi is None:
                    continue
                vj, sj = gens[j]
                vi, si = gens[i]
                corr = F.mul(target.elem_action(ckj, vi, vj, A.degree(ckj), -si), fi.reshape(-1, 1))[:, 0]
                base = comp.get(j)
                if base is None:
                    base = F.zeros(target.dim(vj, -sj), 1)[:, 0]
                comp[j] = F.reduce(base - corr * inv)
            comp.pop(i, None)
            comp.pop(k, None)
        delta = nd
        alive = [g for g in alive if g not in (k, i)]
    ren = {g: n for n, g in enumerate(alive)}
    newP = SemifreeModule(A, [gens[g] for g in alive],
                          {(ren[l], ren[j]): e for (l, j), e in delta.items()})
    if comp is not None:
        return newP, {ren[g]: c for g, c in comp.items() if g in ren}
    return newP


def strip_summands(P: SemifreeModule, shifts: Iterable[int]) -> SemifreeModule:
    if not P.is_minimal():
        raise NotMinimal("strip_summands needs a minimal semifree module")
    shifts = set(shifts)
    touched = set()
    for (k, i) in P.delta:
        touched.add(k)
        touched.add(i)
    keep = [g for g, (v, s) in enumerate(P.gens) if not (s in shifts and g not in touched)]
    ren = {g: n for n, g in enumerate(keep)}
    return SemifreeModule(P.algebra, [P.gens[g] for g in keep],
                          {(ren[k], ren[i]): e for (k, i), e in P.delta.items()})


def free_module(A: DGPathAlgebra, v: str, s: int = 0) -> SemifreeModule:
    return SemifreeModule(A, [(v, s)])


# ---------------------------------------------------------------------------
# Nakayama functor


def nakayama(P: SemifreeModule) -> DGModule:
    """P tensor_A D(A): each e_vA[s] becomes D(A e_v)[s]."""
    return _nakayama_data(P)[0]


def _nakayama_data(P: SemifreeModule):
    A = P.algebra
    F = P.field
    pos: Dict[Tuple[int, int], Tuple[Key, int]] = {}
    dims: Dict[Key, int] = {}
    for gi, (v, s) in enumerate(P.gens):
        for p in A.to_vertex[v]:
            path = A.paths[p]
            key = (path.source, -s - path.degree)
            pos[(gi, p)] = (key, dims.get(key, 0))
            dims[key] = dims.get(key, 0) + 1
    # paths x with T[p, x] != 0, i.e. p occurs in d(x)
    occurs: Dict[int, List[Tuple[int, object]]] = {}
    for x, dx in enumerate(A.diff):
        for p, c in dx.items():
            occurs.setdefault(p, []).append((x, c))
    diff: Dict[Key, np.ndarray] = {}
    act: Dict[Tuple[str, int], np.ndarray] = {}

    for (gi, p), (key, col) in pos.items():
        v, s = P.gens[gi]
        path = A.paths[p]
        tkey = (key[0], key[1] + 1)
        terms = []
        # internal: d(p*) = -(-1)^{|p|} sum_x T[p,x] x*, times (-1)^s
        sgn = -((-1) ** (path.degree % 2)) * ((-1) ** (s % 2))
        for x, c in occurs.get(p, []):
            terms.append(((gi, x), c if sgn == 1 else F.neg(c)))
        # twisting: sum_k g_k (x) c_ki . p*  with c . p* = (-1)^{|c|} x* when p = x c
        for (k, i), e in P.delta.items():
            if i != gi:
                continue
            for q, c in e.items():
                qp = A.paths[q]
                if qp.length > path.length:
                    continue
                if path.arrows[len(path.arrows) - qp.length:] != qp.arrows or qp.source != _vertex_before(A, path, qp.length):
                    continue
                xi = _prefix(A, path, path.length - qp.length)
                terms.append(((k, xi), c if qp.degree % 2 == 0 else F.neg(c)))
        if terms:
            m = diff.get(key)
            if m is None:
                m = diff[key] = F.zeros(dims[tkey], dims[key])
            for tgt, c in terms:
                tk, row = pos[tgt]
                assert tk == tkey, (tk, tkey)
                m[row, col] = m[row, col] + c
        # right action: p* . a = x* when p = a x
        if path.arrows:
            a = A.arrows[path.arrows[0]]
            xi = _suffix(A, path, 1)
            tk, row = pos[(gi, xi)]
            akey = (a.name, key[1])
            m = act.get(akey)
            if m is None:
                m = act[akey] = F.zeros(dims[tk], dims[key])
            m[row, col] = F.one
    if F.p is not None:
        diff = {k: m % F.p for k, m in diff.items()}
    return DGModule(A, dims, diff, act), pos


def _vertex_before(A, path, tail_len):
    if tail_len == 0:
        return path.target
    return A.arrows[path.arrows[len(path.arrows) - tail_len]].source


def _prefix(A, path, n):
    if n == 0:
        return A.trivial[path.source]
    return A.index[(path.source, path.arrows[:n])]


def _suffix(A, path, n):
    rest = path.arrows[n:]
    if not rest:
        return A.trivial[path.target]
    return A.index[(A.arrows[rest[0]].source, rest)]


class SemifreeMorphism:
    """Degree-0 map P -> Q given by g_i -> sum_k h_k e_ki."""

    def __init__(self, P: SemifreeModule, Q: SemifreeModule, images: Dict[Tuple[int, int], Elem]):
        self.P, self.Q = P, Q
        self.images = {k: e for k, e in images.items() if e}

    @classmethod
    def from_hom_vector(cls, P: SemifreeModule, Q: SemifreeModule, vec) -> "SemifreeMorphism":
        H = HomComplex(P, Q.realize())
        images = {}
        for gi, key, off in H.layout(0)[0]:
            n = Q.realize().dim(*key)
            for gk, e in Q.vector_terms(key, vec[off:off + n]).items():
                images[(gk, gi)] = e
        return cls(P, Q, images)

    def realize(self) -> DGMorphism:
        H = HomComplex(self.P, self.Q.realize())
        F = self.P.field
        vec = F.zeros(H.dim(0), 1)
        for gi, key, off in H.layout(0)[0]:
            terms = {}
            for (k, i), e in self.images.items():
                if i == gi:
                    for p, c in e.items():
                        terms[(k, p)] = terms.get((k, p), 0) + c
            if terms:
                vec[off:off + H.Y.dim(*key), :] = self.Q.elem_vector(terms, key)
        return H.to_morphism(0, vec, target=self.Q.realize())

    def nakayama(self) -> DGMorphism:
        """nu(f): nu(P) -> nu(Q)."""
        A = self.P.algebra
        F = self.P.field
        NP, posP = _nakayama_data(self.P)
        NQ, posQ = _nakayama_data(self.Q)
        blocks: Dict[Key, np.ndarray] = {}
        for (gi, p), (key, col) in posP.items():
            path = A.paths[p]
            for (k, i), e in self.images.items():
                if i != gi:
                    continue
                for q, c in e.items():
                    qp = A.paths[q]
                    if qp.length > path.length:
                        continue
                    if path.arrows[len(path.arrows) - qp.length:] != qp.arrows or qp.source != _vertex_before(A, path, qp.length):
                        continue
                    xi = _prefix(A, path, path.length - qp.length)
                    tk, row = posQ[(k, xi)]
                    assert tk == key
                    b = blocks.get(key)
                    if b is None:
                        b = blocks[key] = F.zeros(NQ.dim(*key), NP.dim(*key))
                    b[row, col] = b[row, col] + (c if qp.degree % 2 == 0 else F.neg(c))
        return DGMorphism(NP, NQ, blocks)
