"""Finite-dimensional right dg modules over a dg path algebra.

A module is stored blockwise: one vector space per (vertex, degree), a
differential block ``(v, i) -> (v, i+1)`` and, for every arrow ``a: s -> t``
of degree ``g``, an action block ``(s, i) -> (t, i+g)``.  Matrices act on
column vectors.  Missing blocks are zero.

Sign conventions: ``m[n]`` has differential ``(-1)^n d`` and the same action;
``cone(f: X -> Y) = Y + X[1]`` with differential ``[[d_Y, f], [0, -d_X]]``.
"""
from __future__ import annotations

from typing import Dict, Iterable, List, Optional, Tuple

import numpy as np

from .dgalgebra import DGPathAlgebra, Elem, opposite_algebra
from .exactla import (Field, complement_basis, extend_basis, image_basis, kernel_basis,
                      left_inverse, rank, solve)

Key = Tuple[str, int]


class ModuleError(ValueError):
    pass


class DGModule:
    def __init__(self, algebra: DGPathAlgebra, dims: Dict[Key, int],
                 diff: Optional[Dict[Key, np.ndarray]] = None,
                 act: Optional[Dict[Tuple[str, int], np.ndarray]] = None,
                 check: bool = False):
        self.algebra = algebra
        self.field: Field = algebra.field
        self.dims = {k: int(n) for k, n in dims.items() if n}
        self.diff = {}
        for k, m in (diff or {}).items():
            if k in self.dims and (k[0], k[1] + 1) in self.dims and not self.field.is_zero(m):
                self.diff[k] = m
        self.act = {}
        for (name, i), m in (act or {}).items():
            a = algebra.arrow_by_name[name]
            if (a.source, i) in self.dims and (a.target, i + a.degree) in self.dims and not self.field.is_zero(m):
                self.act[(name, i)] = m
        if check:
            self.validate()

    # -- basic access -------------------------------------------------------
    def dim(self, v: str, i: int) -> int:
        return self.dims.get((v, i), 0)

    @property
    def total_dim(self) -> int:
        return sum(self.dims.values())

    def is_zero_module(self) -> bool:
        return not self.dims

    def degrees(self) -> List[int]:
        return sorted({i for _, i in self.dims})

    def keys(self) -> List[Key]:
        vi = self.algebra.vindex
        return sorted(self.dims, key=lambda k: (vi[k[0]], k[1]))

    def d(self, v: str, i: int) -> np.ndarray:
        m = self.diff.get((v, i))
        if m is None:
            return self.field.zeros(self.dim(v, i + 1), self.dim(v, i))
        return m

    def a(self, name: str, i: int) -> np.ndarray:
        m = self.act.get((name, i))
        if m is None:
            ar = self.algebra.arrow_by_name[name]
            return self.field.zeros(self.dim(ar.target, i + ar.degree), self.dim(ar.source, i))
        return m

    def path_action(self, p: int, i: int) -> np.ndarray:
        """Matrix of right multiplication by path ``p`` on block (source(p), i)."""
        A = self.algebra
        path = A.paths[p]
        F = self.field
        m = F.eye(self.dim(path.source, i))
        deg = i
        for ai in path.arrows:
            ar = A.arrows[ai]
            m = F.mul(self.a(ar.name, deg), m)
            deg += ar.degree
        return m

    def elem_action(self, x: Elem, s: str, t: str, deg_x: int, i: int) -> np.ndarray:
        F = self.field
        out = F.zeros(self.dim(t, i + deg_x), self.dim(s, i))
        for p, c in x.items():
            out = F.add(out, F.scale(c, self.path_action(p, i)))
        return out

    # -- validation ---------------------------------------------------------
    def validate(self):
        F = self.field
        A = self.algebra
        for (v, i), m in self.diff.items():
            nxt = self.d(v, i + 1)
            if not F.is_zero(F.mul(nxt, m)):
                raise ModuleError(f"d^2 != 0 at vertex {v}, degree {i}")
        for ar in A.arrows:
            da = A.arrow_diff.get(ar.name, {})
            for (v, i) in list(self.dims):
                if v != ar.source:
                    continue
                lhs = F.mul(self.d(ar.target, i + ar.degree), self.a(ar.name, i))
                rhs = F.mul(self.a(ar.name, i + 1), self.d(v, i))
                if da:
                    term = self.elem_action(da, ar.source, ar.target, ar.degree + 1, i)
                    rhs = F.add(rhs, term if i % 2 == 0 else F.scale(-1, term))
                if not F.is_zero(F.sub(lhs, rhs)):
                    raise ModuleError(f"Leibniz rule fails for arrow {ar.name} in degree {i}")
        for (name, i), m in self.act.items():
            ar = A.arrow_by_name[name]
            if m.shape != (self.dim(ar.target, i + ar.degree), self.dim(ar.source, i)):
                raise ModuleError(f"action block {name},{i} has wrong shape")
        return True

    def is_valid(self) -> bool:
        try:
            return self.validate()
        except ModuleError:
            return False

    # -- cohomology ---------------------------------------------------------
    def cocycles(self, v: str, i: int) -> np.ndarray:
        return kernel_basis(self.field, self.d(v, i)) if self.dim(v, i) else self.field.zeros(0, 0)

    def coboundaries(self, v: str, i: int) -> np.ndarray:
        F = self.field
        if not self.dim(v, i):
            return F.zeros(0, 0)
        return image_basis(F, self.d(v, i - 1))

    def cohomology_basis(self, v: str, i: int):
        """(B, R): coboundary basis and cocycle representatives of H^i at v."""
        B = self.coboundaries(v, i)
        Z = self.cocycles(v, i)
        return B, extend_basis(self.field, B, Z)

    def cohomology_dims(self) -> Dict[Key, int]:
        F = self.field
        out = {}
        for (v, i), n in self.dims.items():
            z = n - rank(F, self.d(v, i))
            b = rank(F, self.d(v, i - 1))
            if z - b:
                out[(v, i)] = z - b
        return out

    def graded_dims(self) -> Dict[str, Dict[int, int]]:
        out: Dict[str, Dict[int, int]] = {}
        for (v, i), n in self.cohomology_dims().items():
            out.setdefault(v, {})[i] = n
        return out

    def cohomology_degrees(self) -> List[int]:
        return sorted({i for _, i in self.cohomology_dims()})

    def label(self) -> Tuple:
        vi = self.algebra.vindex
        return tuple(sorted(((v, i, n) for (v, i), n in self.cohomology_dims().items()),
                            key=lambda t: (-t[1], vi[t[0]])))

    def is_acyclic(self) -> bool:
        return not self.cohomology_dims()

    def __repr__(self):
        return f"DGModule(dims={dict(sorted(self.dims.items()))}, H={self.cohomology_dims()})"


# ---------------------------------------------------------------------------
# morphisms


class DGMorphism:
    def __init__(self, source: DGModule, target: DGModule, blocks: Dict[Key, np.ndarray]):
        self.source = source
        self.target = target
        F = source.field
        self.blocks = {k: m for k, m in blocks.items()
                       if k in source.dims and k in target.dims and not F.is_zero(m)}

    def block(self, v: str, i: int) -> np.ndarray:
        m = self.blocks.get((v, i))
        if m is None:
            return self.source.field.zeros(self.target.dim(v, i), self.source.dim(v, i))
        return m

    def validate(self):
        F = self.source.field
        X, Y = self.source, self.target
        for (v, i) in X.dims:
            lhs = F.mul(Y.d(v, i), self.block(v, i))
            rhs = F.mul(self.block(v, i + 1), X.d(v, i))
            if not F.is_zero(F.sub(lhs, rhs)):
                raise ModuleError(f"morphism does not commute with d at {v},{i}")
        for ar in X.algebra.arrows:
            for (v, i) in X.dims:
                if v != ar.source:
                    continue
                lhs = F.mul(Y.a(ar.name, i), self.block(v, i))
                rhs = F.mul(self.block(ar.target, i + ar.degree), X.a(ar.name, i))
                if not F.is_zero(F.sub(lhs, rhs)):
                    raise ModuleError(f"morphism does not commute with arrow {ar.name} at degree {i}")
        return True

    def is_valid(self) -> bool:
        try:
            return self.validate()
        except ModuleError:
            return False

    def compose(self, g: "DGMorphism") -> "DGMorphism":
        """``self o g``."""
        F = self.source.field
        return DGMorphism(g.source, self.target,
                          {k: F.mul(self.block(*k), g.block(*k)) for k in g.source.dims})

    def __add__(self, other: "DGMorphism") -> "DGMorphism":
        F = self.source.field
        return DGMorphism(self.source, self.target,
                          {k: F.add(self.block(*k), other.block(*k)) for k in self.source.dims})

    def scaled(self, c) -> "DGMorphism":
        F = self.source.field
        return DGMorphism(self.source, self.target, {k: F.scale(c, m) for k, m in self.blocks.items()})

    def is_zero(self) -> bool:
        return not self.blocks

    def cohomology_map(self, v: str, i: int) -> np.ndarray:
        """Matrix of H^i(f) at vertex v in the chosen representative bases."""
        F = self.source.field
        X, Y = self.source, self.target
        _, RX = X.cohomology_basis(v, i) if X.dim(v, i) else (None, F.zeros(0, 0))
        BY, RY = Y.cohomology_basis(v, i) if Y.dim(v, i) else (None, F.zeros(0, 0))
        if RX.shape[1] == 0 or RY.shape[1] == 0:
            return F.zeros(RY.shape[1], RX.shape[1])
        img = F.mul(self.block(v, i), RX)
        sol = solve(F, np.concatenate([BY, RY], axis=1), img)
        return sol[BY.shape[1]:]

    def cohomology_rank(self, i: int) -> int:
        F = self.source.field
        return sum(rank(F, self.cohomology_map(v, i)) for v in self.source.algebra.vertices)

    def is_quasi_iso(self) -> bool:
        X, Y = self.source.cohomology_dims(), self.target.cohomology_dims()
        if X != Y:
            return False
        F = self.source.field
        for (v, i), n in X.items():
            if rank(F, self.cohomology_map(v, i)) != n:
                return False
        return True


def identity(m: DGModule) -> DGMorphism:
    F = m.field
    return DGMorphism(m, m, {k: F.eye(n) for k, n in m.dims.items()})


def zero_map(x: DGModule, y: DGModule) -> DGMorphism:
    return DGMorphism(x, y, {})


# ---------------------------------------------------------------------------
# constructions


def zero_module(A: DGPathAlgebra) -> DGModule:
    return DGModule(A, {})


def simple(A: DGPathAlgebra, v: str, s: int = 0) -> DGModule:
    """S_v[s]: one-dimensional in degree -s."""
    return DGModule(A, {(v, -s): 1})


def shift(m: DGModule, n: int) -> DGModule:
    F = m.field
    sgn = -1 if n % 2 else 1
    dims = {(v, i - n): k for (v, i), k in m.dims.items()}
    diff = {(v, i - n): (mat if sgn == 1 else F.scale(-1, mat)) for (v, i), mat in m.diff.items()}
    act = {(a, i - n): mat for (a, i), mat in m.act.items()}
    return DGModule(m.algebra, dims, diff, act)


def shift_morphism(f: DGMorphism, n: int) -> DGMorphism:
    return DGMorphism(shift(f.source, n), shift(f.target, n), {(v, i - n): b for (v, i), b in f.blocks.items()})


def direct_sum(mods: List[DGModule]):
    """Returns (sum, inclusions, projections)."""
    A = mods[0].algebra
    F = A.field
    dims: Dict[Key, int] = {}
    offs = []
    for m in mods:
        off = {}
        for k, n in m.dims.items():
            off[k] = dims.get(k, 0)
            dims[k] = dims.get(k, 0) + n
        offs.append(off)
    diff, act = {}, {}
    for m, off in zip(mods, offs):
        for (v, i), mat in m.diff.items():
            big = diff.setdefault((v, i), F.zeros(dims[(v, i + 1)], dims[(v, i)]))
            r, c = off[(v, i + 1)], off[(v, i)]
            big[r:r + mat.shape[0], c:c + mat.shape[1]] = mat
        for (name, i), mat in m.act.items():
            ar = A.arrow_by_name[name]
            tk = (ar.target, i + ar.degree)
            big = act.setdefault((name, i), F.zeros(dims[tk], dims[(ar.source, i)]))
            r, c = off[tk], off[(ar.source, i)]
            big[r:r + mat.shape[0], c:c + mat.shape[1]] = mat
    S = DGModule(A, dims, diff, act)
    incs, projs = [], []
    for m, off in zip(mods, offs):
        ib, pb = {}, {}
        for k, n in m.dims.items():
            e = F.zeros(dims[k], n)
            e[off[k]:off[k] + n, :] = F.eye(n)
            ib[k] = e
            pb[k] = e.T.copy()
        incs.append(DGMorphism(m, S, ib))
        projs.append(DGMorphism(S, m, pb))
    return S, incs, projs


def cone(f: DGMorphism):
    """cone(f: X -> Y) = Y + X[1]; returns (C, Y -> C, C -> X[1])."""
    X, Y = f.source, f.target
    A = X.algebra
    F = A.field
    dims: Dict[Key, int] = {}
    keys = set(Y.dims) | {(v, i - 1) for (v, i) in X.dims}
    for (v, i) in keys:
        n = Y.dim(v, i) + X.dim(v, i + 1)
        if n:
            dims[(v, i)] = n
    diff, act = {}, {}
    for (v, i) in dims:
        if (v, i + 1) not in dims:
            continue
        ny0, nx0 = Y.dim(v, i), X.dim(v, i + 1)
        ny1, nx1 = Y.dim(v, i + 1), X.dim(v, i + 2)
        m = F.zeros(ny1 + nx1, ny0 + nx0)
        m[:ny1, :ny0] = Y.d(v, i)
        m[:ny1, ny0:] = f.block(v, i + 1)
        m[ny1:, ny0:] = F.scale(-1, X.d(v, i + 1))
        diff[(v, i)] = m
    for ar in A.arrows:
        for (v, i) in dims:
            if v != ar.source:
                continue
            tk = (ar.target, i + ar.degree)
            if tk not in dims:
                continue
            ny0, nx0 = Y.dim(v, i), X.dim(v, i + 1)
            ny1 = Y.dim(*tk)
            m = F.zeros(dims[tk], ny0 + nx0)
            m[:ny1, :ny0] = Y.a(ar.name, i)
            m[ny1:, ny0:] = X.a(ar.name, i + 1)
            act[(ar.name, i)] = m
    C = DGModule(A, dims, diff, act)
    inc, proj = {}, {}
    X1 = shift(X, 1)
    for (v, i), n in dims.items():
        ny = Y.dim(v, i)
        if ny:
            e = F.zeros(n, ny)
            e[:ny, :] = F.eye(ny)
            inc[(v, i)] = e
        nx = X.dim(v, i + 1)
        if nx:
            pm = F.zeros(nx, n)
            pm[:, ny:] = F.eye(nx)
            proj[(v, i)] = pm
    return C, DGMorphism(Y, C, inc), DGMorphism(C, X1, proj)


def cocone(f: DGMorphism):
    """cocone(f) = cone(f)[-1]; returns (K, K -> X, Y[-1] -> K)."""
    C, inc, proj = cone(f)
    K = shift(C, -1)
    to_x = DGMorphism(K, f.source, {(v, i + 1): b for (v, i), b in proj.blocks.items()})
    from_y = DGMorphism(shift(f.target, -1), K, {(v, i + 1): b for (v, i), b in inc.blocks.items()})
    return K, to_x, from_y


# -- sub and quotient modules ---------------------------------------------


def submodule(m: DGModule, basis: Dict[Key, np.ndarray]):
    """Submodule spanned blockwise by the given columns (assumed closed)."""
    F = m.field
    A = m.algebra
    basis = {k: b for k, b in basis.items() if b.shape[1]}
    dims = {k: b.shape[1] for k, b in basis.items()}
    linv = {k: left_inverse(F, b) for k, b in basis.items()}
    diff, act = {}, {}
    for (v, i), b in basis.items():
        if (v, i + 1) in basis:
            diff[(v, i)] = F.mul(linv[(v, i + 1)], F.mul(m.d(v, i), b))
        for ar in A.arrows:
            if ar.source != v:
                continue
            tk = (ar.target, i + ar.degree)
            if tk in basis:
                act[(ar.name, i)] = F.mul(linv[tk], F.mul(m.a(ar.name, i), b))
    S = DGModule(A, dims, diff, act)
    return S, DGMorphism(S, m, basis)


def quotient(m: DGModule, basis: Dict[Key, np.ndarray]):
    """Quotient by a closed blockwise subspace; returns (Q, m -> Q)."""
    F = m.field
    A = m.algebra
    comp, proj = {}, {}
    for k, n in m.dims.items():
        sub = basis.get(k, F.zeros(n, 0))
        c = complement_basis(F, sub, n)
        if c.shape[1] == 0:
            continue
        full = np.concatenate([sub, c], axis=1)
        inv = solve(F, full, F.eye(n))
        comp[k] = c
        proj[k] = inv[sub.shape[1]:]
    dims = {k: c.shape[1] for k, c in comp.items()}
    diff, act = {}, {}
    for (v, i), c in comp.items():
        if (v, i + 1) in comp:
            diff[(v, i)] = F.mul(proj[(v, i + 1)], F.mul(m.d(v, i), c))
        for ar in A.arrows:
            if ar.source != v:
                continue
            tk = (ar.target, i + ar.degree)
            if tk in comp:
                act[(ar.name, i)] = F.mul(proj[tk], F.mul(m.a(ar.name, i), c))
    Q = DGModule(A, dims, diff, act)
    return Q, DGMorphism(m, Q, proj)


def _le_basis(m: DGModule, n: int) -> Dict[Key, np.ndarray]:
    F = m.field
    out = {}
    for (v, i), k in m.dims.items():
        if i < n:
            out[(v, i)] = F.eye(k)
        elif i == n:
            out[(v, i)] = m.cocycles(v, i)
    return out


def truncate_le(m: DGModule, n: int):
    """Smart truncation t^{<=n} m with its inclusion into m."""
    return submodule(m, _le_basis(m, n))


def truncate_gt(m: DGModule, n: int):
    """Smart truncation t^{>n} m = m / t^{<=n} m with the projection."""
    return quotient(m, _le_basis(m, n))


def truncate_window(m: DGModule, lo: int, hi: int) -> DGModule:
    """t^{>lo} t^{<=hi} m."""
    t, _ = truncate_le(m, hi)
    q, _ = truncate_gt(t, lo)
    return q


def truncate_le_morphism(f: DGMorphism, n: int, src=None, tgt=None) -> DGMorphism:
    """t^{<=n}(f) between the truncations (recomputed unless supplied)."""
    F = f.source.field
    S, si = src if src else truncate_le(f.source, n)
    T, ti = tgt if tgt else truncate_le(f.target, n)
    blocks = {}
    for k in S.dims:
        img = F.mul(f.block(*k), si.block(*k))
        if T.dim(*k) == 0:
            continue
        blocks[k] = solve(F, ti.block(*k), img)
    return DGMorphism(S, T, blocks)


def truncate_gt_morphism(f: DGMorphism, n: int, src=None, tgt=None) -> DGMorphism:
    F = f.source.field
    S, sp = src if src else truncate_gt(f.source, n)
    T, tp = tgt if tgt else truncate_gt(f.target, n)
    blocks = {}
    for k in S.dims:
        if T.dim(*k) == 0:
            continue
        # a section of sp on block k: complement columns
        sec = solve(F, sp.block(*k), F.eye(S.dim(*k)))
        blocks[k] = F.mul(tp.block(*k), F.mul(f.block(*k), sec))
    return DGMorphism(S, T, blocks)


# -- duality ------------------------------------------------------------------


def k_dual(m: DGModule, op: Optional[DGPathAlgebra] = None) -> DGModule:
    """D(m) = Hom_k(m, k) as a right module over the opposite algebra."""
    F = m.field
    Aop = op if op is not None else opposite_algebra(m.algebra)
    dims = {(v, -i): n for (v, i), n in m.dims.items()}
    diff = {}
    for (v, i) in dims:
        if (v, i + 1) in dims:
            blk = m.d(v, -i - 1).T
            diff[(v, i)] = blk if i % 2 else F.scale(-1, blk)
    act = {}
    for ar in m.algebra.arrows:
        g = ar.degree
        # in the opposite algebra the arrow runs target -> source
        for (v, i) in dims:
            if v != ar.target:
                continue
            blk = m.a(ar.name, -i - g).T
            act[(ar.name, i)] = blk if (g * (1 + i)) % 2 == 0 else F.scale(-1, blk)
    return DGModule(Aop, dims, diff, act)


def k_dual_morphism(f: DGMorphism, src: DGModule, tgt: DGModule) -> DGMorphism:
    """D(f): D(Y) -> D(X), given already-built duals."""
    return DGMorphism(src, tgt, {(v, -i): b.T.copy() for (v, i), b in f.blocks.items()})


# -- homomorphisms between modules (strict) ---------------------------------


def strict_hom_equations(X: DGModule, Y: DGModule):
    """Linear equations whose solutions are the closed degree-0 maps X -> Y.

    Returns (keys, offsets, total, matrix).  Unknown vector concatenates the
    blocks (row-major) in ``keys`` order.
    """
    F = X.field
    A = X.algebra
    keys = [k for k in X.keys() if k in Y.dims]
    offs, tot = {}, 0
    for k in keys:
        offs[k] = tot
        tot += X.dims[k] * Y.dims[k]
    rows = []

    def var(k, r, c):
        return offs[k] + r * X.dims[k] + c

    eqs = []
    for (v, i) in X.dims:
        # Y.d f - f X.d = 0 on block (v,i) -> (v,i+1)
        nx, ny1 = X.dim(v, i), Y.dim(v, i + 1)
        if not nx or not ny1:
            continue
        dy = Y.d(v, i)
        dx = X.d(v, i)
        for r in range(ny1):
            for c in range(nx):
                row = {}
                if (v, i) in offs:
                    for t in range(Y.dim(v, i)):
                        if dy[r, t] != 0:
                            row[var((v, i), t, c)] = row.get(var((v, i), t, c), 0) + dy[r, t]
                if (v, i + 1) in offs:
                    for t in range(X.dim(v, i + 1)):
                        if dx[t, c] != 0:
                            row[var((v, i + 1), r, t)] = row.get(var((v, i + 1), r, t), 0) - dx[t, c]
                if row:
                    eqs.append(row)
    for ar in A.arrows:
        for (v, i) in X.dims:
            if v != ar.source:
                continue
            tk = (ar.target, i + ar.degree)
            nx, nyt = X.dim(v, i), Y.dim(*tk)
            if not nx or not nyt:
                continue
            ya = Y.a(ar.name, i)
            xa = X.a(ar.name, i)
            for r in range(nyt):
                for c in range(nx):
                    row = {}
                    if (v, i) in offs:
                        for t in range(Y.dim(v, i)):
                            if ya[r, t] != 0:
                                row[var((v, i), t, c)] = row.get(var((v, i), t, c), 0) + ya[r, t]
                    if tk in offs:
                        for t in range(X.dim(*tk)):
                            if xa[t, c] != 0:
                                row[var(tk, r, t)] = row.get(var(tk, r, t), 0) - xa[t, c]
                    if row:
                        eqs.append(row)
    M = F.zeros(len(eqs), tot)
    for j, row in enumerate(eqs):
        for c, val in row.items():
            M[j, c] = F.reduce(np.array([val], dtype=F.dtype))[0] if F.p is not None else val
    return keys, offs, tot, M


def strict_homs(X: DGModule, Y: DGModule) -> List[DGMorphism]:
    """Basis of closed degree-0 A-linear maps X -> Y (no homotopy quotient)."""
    F = X.field
    keys, offs, tot, M = strict_hom_equations(X, Y)
    K = kernel_basis(F, M) if tot else F.zeros(0, 0)
    out = []
    for j in range(K.shape[1]):
        blocks = {}
        for k in keys:
            blocks[k] = K[offs[k]:offs[k] + X.dims[k] * Y.dims[k], j].reshape(Y.dims[k], X.dims[k])
        out.append(DGMorphism(X, Y, blocks))
    return out


def radical_layers(m: DGModule) -> Dict[int, List[Dict[str, int]]]:
    """Loewy layers of each H^i(m) as an H^0(A)-module: degree -> [layer -> {vertex: mult}]."""
    A = m.algebra
    F = m.field
    flat = [p for p, path in enumerate(A.paths) if path.degree == 0 and path.length > 0]
    by_len: Dict[int, List[int]] = {}
    for p in flat:
        by_len.setdefault(A.paths[p].length, []).append(p)
    out: Dict[int, List[Dict[str, int]]] = {}
    for i in m.cohomology_degrees():
        dims = []  # dims[k][v] = dim rad^k H^i at v
        k = 0
        while True:
            row = {}
            for v in A.vertices:
                if not m.dim(v, i):
                    continue
                B = m.coboundaries(v, i)
                base = rank(F, B) if B.size else 0
                if k == 0:
                    cols = [m.cocycles(v, i)]
                else:
                    cols = [F.mul(m.path_action(p, i), m.cocycles(A.paths[p].source, i))
                            for p in by_len.get(k, []) if A.paths[p].target == v
                            and m.dim(A.paths[p].source, i)]
                cols = [c for c in cols if c.size]
                if B.size:
                    cols.append(B)
                r = rank(F, np.concatenate(cols, axis=1)) if cols else 0
                if r - base:
                    row[v] = r - base
            if not row:
                break
            dims.append(row)
            k += 1
        layers = []
        for k, row in enumerate(dims):
            nxt = dims[k + 1] if k + 1 < len(dims) else {}
            layer = {v: n - nxt.get(v, 0) for v, n in row.items() if n - nxt.get(v, 0)}
            layers.append(layer)
        out[i] = layers
    return out
