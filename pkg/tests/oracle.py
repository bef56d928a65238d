"""Independent reference computations for the test-suite.

Nothing here calls the package's linear algebra: ranks are computed by a
plain Fraction / modular elimination, cohomology from raw module blocks,
and random modules are assembled from explicit chain-complex data.
"""
from __future__ import annotations

import random
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

import sympy


def plain(x, p: Optional[int]):
    if p is None:
        return Fraction(int(x.numerator), int(x.denominator)) if hasattr(x, "numerator") else Fraction(x)
    return int(x) % p


def to_rows(m, p: Optional[int]) -> List[list]:
    return [[plain(x, p) for x in row] for row in m.tolist()] if m.size else [[] for _ in range(m.shape[0])]


def rank(rows: List[list], p: Optional[int]) -> int:
    rows = [list(r) for r in rows if r]
    if not rows:
        return 0
    ncol = len(rows[0])
    r = 0
    for c in range(ncol):
        piv = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = (Fraction(1) / rows[r][c]) if p is None else pow(rows[r][c], -1, p)
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c] * inv
                rows[i] = [(a - f * b) if p is None else (a - f * b) % p for a, b in zip(rows[i], rows[r])]
        r += 1
        if r == len(rows):
            break
    return r


def matmul(a: List[list], b: List[list], p: Optional[int]) -> List[list]:
    if not a or not b:
        return [[0] * (len(b[0]) if b else 0) for _ in a]
    out = [[sum(x * y for x, y in zip(row, col)) for col in zip(*b)] for row in a]
    return out if p is None else [[x % p for x in r] for r in out]


def hcat(*ms: List[list]) -> List[list]:
    ms = [m for m in ms if m and m[0]]
    if not ms:
        return []
    return [sum((m[i] for m in ms), []) for i in range(len(ms[0]))]


def field_p(m) -> Optional[int]:
    return m.field.p


def block(m, key, p):
    """Differential (v, i) -> (v, i+1) as rows, zero if absent."""
    v, i = key
    r, c = m.dims.get((v, i + 1), 0), m.dims.get((v, i), 0)
    if (v, i) in m.diff:
        return to_rows(m.diff[(v, i)], p)
    return [[0] * c for _ in range(r)]


def cohomology_dims(m) -> Dict[Tuple[str, int], int]:
    p = field_p(m)
    out = {}
    for (v, i), n in m.dims.items():
        z = n - rank(block(m, (v, i), p), p)
        b = rank(block(m, (v, i - 1), p), p) if (v, i - 1) in m.dims else 0
        if z - b:
            out[(v, i)] = z - b
    return out


def nullspace(rows: List[list], ncol: int, p: Optional[int]) -> List[list]:
    """Basis of {x : rows x = 0} as column lists."""
    if not rows:
        return [[1 if j == k else 0 for j in range(ncol)] for k in range(ncol)]
    rows = [list(r) for r in rows]
    piv_cols, r = [], 0
    for c in range(ncol):
        piv = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = (Fraction(1) / rows[r][c]) if p is None else pow(rows[r][c], -1, p)
        rows[r] = [x * inv if p is None else x * inv % p for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [(a - f * b) if p is None else (a - f * b) % p for a, b in zip(rows[i], rows[r])]
        piv_cols.append(c)
        r += 1
    free = [c for c in range(ncol) if c not in piv_cols]
    out = []
    for fc in free:
        x = [0] * ncol
        x[fc] = 1
        for k, pc in enumerate(piv_cols):
            x[pc] = -rows[k][fc] if p is None else (-rows[k][fc]) % p
        out.append(x)
    return out


def cocycles(m, key, p) -> List[list]:
    n = m.dims.get(key, 0)
    ns = nullspace(block(m, key, p), n, p)
    return [list(col) for col in zip(*ns)] if ns else [[] for _ in range(n)]


def coboundaries(m, key, p) -> List[list]:
    v, i = key
    if (v, i - 1) not in m.dims:
        return [[] for _ in range(m.dims.get(key, 0))]
    return block(m, (v, i - 1), p)


def induced_rank(f, key) -> int:
    """Rank of H(f) at one (vertex, degree) slot."""
    p = field_p(f.source)
    X, Y = f.source, f.target
    if not X.dims.get(key) or not Y.dims.get(key):
        return 0
    F = to_rows(f.block(*key), p)
    Z = cocycles(X, key, p)
    B = coboundaries(Y, key, p)
    img = matmul(F, Z, p) if Z and Z[0] else []
    return rank(hcat(img, B), p) - rank(B, p) if B and B[0] else rank(img, p)


def is_strict_morphism(f, blocks=None) -> bool:
    """f d = d f and f a = a f on raw blocks."""
    p = field_p(f.source)
    X, Y = f.source, f.target
    A = X.algebra

    def fb(k):
        return to_rows(f.block(*k), p)
    for (v, i) in set(X.dims) | set(Y.dims):
        lhs = matmul(block(Y, (v, i), p), fb((v, i)), p)
        rhs = matmul(fb((v, i + 1)), block(X, (v, i), p), p)
        if _nonzero_diff(lhs, rhs):
            return False
    for a in A.arrows:
        for i in {k[1] for k in X.dims if k[0] == a.source} | {k[1] - a.degree for k in Y.dims if k[0] == a.target}:
            ax = to_rows(X.a(a.name, i), p)
            ay = to_rows(Y.a(a.name, i), p)
            lhs = matmul(ay, fb((a.source, i)), p)
            rhs = matmul(fb((a.target, i + a.degree)), ax, p)
            if _nonzero_diff(lhs, rhs):
                return False
    return True


def _nonzero_diff(a, b) -> bool:
    return any(x != y for ra, rb in zip(a, b) for x, y in zip(ra, rb))


# ---------------------------------------------------------------------------
# random modules over the graded Kronecker algebra (alpha deg 0, beta deg -1)


def _random_complex(rng: random.Random, lo: int, hi: int, maxdim: int):
    """dims and differentials of a random bounded complex, conjugated by random bases."""
    dims = {i: rng.randint(0, maxdim) for i in range(lo, hi + 1)}
    d = {}
    used = {i: 0 for i in dims}          # dimensions already hit by incoming d
    for i in range(lo, hi):
        free_src = dims[i] - used[i]
        r = rng.randint(0, max(0, min(free_src, dims[i + 1])))
        m = [[0] * dims[i] for _ in range(dims[i + 1])]
        for k in range(r):
            m[k][used[i] + k] = 1
        used[i + 1] = r
        d[i] = m
    return dims, d


def _rand_invertible(rng, n):
    while True:
        m = sympy.Matrix(n, n, lambda *_: rng.randint(-2, 2))
        if n == 0 or m.det() != 0:
            return m


def random_kronecker_module(A, rng: random.Random, maxdim: int = 4, lo: int = -2, hi: int = 0):
    """Random dg module: complexes at both vertices, alpha and beta random chain maps."""
    from heartknit.dgmodule import DGModule
    p = A.field.p
    data = {}
    for v in ("1", "2"):
        dims, d = _random_complex(rng, lo, hi, maxdim)
        g = {i: _rand_invertible(rng, n) for i, n in dims.items()}
        dd = {}
        for i, m in d.items():
            M = sympy.Matrix(dims[i + 1], dims[i], lambda r, c: m[r][c])
            if dims[i] and dims[i + 1]:
                dd[i] = g[i + 1] * M * g[i].inv()
        data[v] = (dims, dd)
    acts = {}
    for name, shiftdeg in (("alpha", 0), ("beta", -1)):
        # unknown blocks X_i : V1_i -> V2_{i+g}; equations d2 X_i = X_{i+1} d1
        d1, dd1 = data["1"]
        d2, dd2 = data["2"]
        slots = [(i, d2.get(i + shiftdeg, 0), d1[i]) for i in d1 if d1[i] and d2.get(i + shiftdeg, 0)]
        offs, tot = {}, 0
        for i, r, c in slots:
            offs[i] = tot
            tot += r * c
        eqs = []
        for i in d1:
            tgt_deg = i + shiftdeg
            rows_out = d2.get(tgt_deg + 1, 0)
            cols = d1[i]
            if not rows_out or not cols:
                continue
            for a in range(rows_out):
                for b in range(cols):
                    eq = [Fraction(0)] * tot
                    if i in offs and tgt_deg in dd2:
                        D = dd2[tgt_deg]
                        r_i = d2[tgt_deg]
                        for k in range(r_i):
                            eq[offs[i] + k * cols + b] += Fraction(str(D[a, k]))
                    if (i + 1) in offs and i in dd1:
                        D = dd1[i]
                        c_next = d1[i + 1]
                        for k in range(c_next):
                            eq[offs[i + 1] + a * c_next + k] -= Fraction(str(D[k, b]))
                    if any(eq):
                        eqs.append(eq)
        basis = nullspace(eqs, tot, None)
        vec = [Fraction(0)] * tot
        for b in basis:
            c = rng.randint(-2, 2)
            vec = [x + c * y for x, y in zip(vec, b)]
        for i, r, c in slots:
            acts[(name, i)] = [[vec[offs[i] + a * c + b] for b in range(c)] for a in range(r)]
    F = A.field
    dims = {(v, i): n for v in ("1", "2") for i, n in data[v][0].items() if n}
    diff = {}
    for v in ("1", "2"):
        for i, M in data[v][1].items():
            diff[(v, i)] = _fm(F, [[M[r, c] for c in range(M.cols)] for r in range(M.rows)])
    act = {k: _fm(F, rows) for k, rows in acts.items()}
    return DGModule(A, dims, diff, act, check=True)


def _fm(F, rows):
    from fractions import Fraction as Fr
    m = F.zeros(len(rows), len(rows[0]) if rows else 0)
    for a, r in enumerate(rows):
        for b, x in enumerate(r):
            m[a, b] = F(Fr(str(x)))
    return m
