"""Exact linear algebra over the rationals or a prime field.

Matrices are plain numpy arrays.  Over Q the dtype is ``object`` holding
``gmpy2.mpq`` values; over GF(p) the dtype is ``int64`` with entries in
``[0, p)`` (object dtype for large p so products never overflow).  Every
routine takes the field explicitly, so containers never mix fields.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Optional, Sequence

import numpy as np
import gmpy2
from gmpy2 import mpq

_SMALL_P = 1 << 26


def _is_prime(p: int) -> bool:
    return p >= 2 and bool(gmpy2.is_prime(p))


class Field:
    """Ground field: rationals (``p is None``) or GF(p)."""

    def __init__(self, p: Optional[int] = None):
        if p is not None:
            p = int(p)
            if not _is_prime(p):
                raise ValueError(f"GF({p}): order must be prime")
        self.p = p
        if p is None:
            self.dtype = object
            self.one = mpq(1)
            self.zero = mpq(0)
        else:
            self.dtype = np.int64 if p < _SMALL_P else object
            self.one = 1
            self.zero = 0

    # identity -----------------------------------------------------------
    @property
    def name(self) -> str:
        return "Q" if self.p is None else f"GF({self.p})"

    def __repr__(self):
        return f"Field({self.name})"

    def __eq__(self, other):
        return isinstance(other, Field) and other.p == self.p

    def __hash__(self):
        return hash(("Field", self.p))

    @property
    def characteristic(self) -> int:
        return 0 if self.p is None else self.p

    # scalars ------------------------------------------------------------
    def __call__(self, x):
        if self.p is None:
            if isinstance(x, Fraction):
                return mpq(x.numerator, x.denominator)
            if isinstance(x, str):
                return mpq(Fraction(x).numerator, Fraction(x).denominator)
            return mpq(x)
        if isinstance(x, (Fraction, type(mpq(1)))) or (isinstance(x, str) and "/" in x):
            fr = Fraction(str(x)) if not isinstance(x, Fraction) else x
            return fr.numerator * pow(fr.denominator, -1, self.p) % self.p
        return int(x) % self.p

    def inv(self, x):
        if x == 0:
            raise ZeroDivisionError("inverse of zero")
        if self.p is None:
            return 1 / mpq(x)
        return pow(int(x), -1, self.p)

    def neg(self, x):
        return -x if self.p is None else (-x) % self.p

    def to_plain(self, x):
        """JSON/printing friendly value (int or 'a/b' string)."""
        if self.p is None:
            x = mpq(x)
            return int(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
        return int(x)

    # arrays ---------------------------------------------------------------
    def zeros(self, r: int, c: int) -> np.ndarray:
        if self.dtype is object:
            a = np.empty((r, c), dtype=object)
            a.fill(self.zero)
            return a
        return np.zeros((r, c), dtype=np.int64)

    def eye(self, n: int) -> np.ndarray:
        a = self.zeros(n, n)
        for i in range(n):
            a[i, i] = self.one
        return a

    def array(self, rows) -> np.ndarray:
        rows = [list(r) for r in rows]
        r = len(rows)
        c = len(rows[0]) if r else 0
        a = self.zeros(r, c)
        for i, row in enumerate(rows):
            if len(row) != c:
                raise ValueError("ragged matrix")
            for j, x in enumerate(row):
                a[i, j] = self(x)
        return a

    def column(self, xs: Sequence) -> np.ndarray:
        return self.array([[x] for x in xs]) if len(xs) else self.zeros(0, 1)

    def reduce(self, a: np.ndarray) -> np.ndarray:
        if self.p is None:
            return a
        return a % self.p

    def mul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if a.shape[1] != b.shape[0]:
            raise ValueError(f"shape mismatch {a.shape} @ {b.shape}")
        if a.shape[1] == 0:
            return self.zeros(a.shape[0], b.shape[1])
        out = a @ b
        return out if self.p is None else out % self.p

    def add(self, a, b):
        return self.reduce(a + b)

    def sub(self, a, b):
        return self.reduce(a - b)

    def scale(self, c, a):
        return self.reduce(a * self(c))

    def is_zero(self, a: np.ndarray) -> bool:
        return a.size == 0 or not np.any(a != 0)


QQ = Field()


def GF(p: int) -> Field:
    return Field(p)


def field_from_name(name: str) -> Field:
    name = name.strip()
    if name in ("Q", "QQ"):
        return QQ
    if name.startswith("GF(") and name.endswith(")"):
        return Field(int(name[3:-1]))
    raise ValueError(f"unknown field {name!r}")


# ---------------------------------------------------------------------------
# elimination


def rref(F: Field, m: np.ndarray):
    """Reduced row echelon form with leftmost pivots.

    Returns ``(R, pivots)`` where ``pivots`` lists pivot columns.
    """
    a = np.array(m, dtype=F.dtype, copy=True)
    rows, cols = a.shape
    piv = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(a[r:, c] != 0)[0]
        if len(nz) == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            a[[r, i]] = a[[i, r]]
        a[r] = F.reduce(a[r] * F.inv(a[r, c]))
        col = a[:, c].copy()
        col[r] = F.zero
        hit = np.nonzero(col != 0)[0]
        if len(hit):
            a[hit] = F.reduce(a[hit] - np.outer(col[hit], a[r]))
        piv.append(c)
        r += 1
    return a, piv


def rank(F: Field, m: np.ndarray) -> int:
    if m.size == 0:
        return 0
    return len(rref(F, m)[1])


def kernel_basis(F: Field, m: np.ndarray) -> np.ndarray:
    """Columns spanning the right null space, one per free column."""
    rows, cols = m.shape
    if rows == 0:
        return F.eye(cols)
    r, piv = rref(F, m)
    free = [c for c in range(cols) if c not in set(piv)]
    k = F.zeros(cols, len(free))
    for j, f in enumerate(free):
        k[f, j] = F.one
        for i, p in enumerate(piv):
            k[p, j] = F.neg(r[i, f])
    return k


def solve(F: Field, m: np.ndarray, b: np.ndarray) -> Optional[np.ndarray]:
    """One solution ``x`` of ``m x = b`` (free variables zero), or None.

    ``b`` may have several columns; all must be solvable.
    """
    rows, cols = m.shape
    if b.ndim == 1:
        b = b.reshape(-1, 1)
    if rows == 0:
        return F.zeros(cols, b.shape[1])
    aug = np.concatenate([m, b], axis=1)
    r, piv = rref(F, aug)
    if piv and piv[-1] >= cols:
        return None
    x = F.zeros(cols, b.shape[1])
    for i, p in enumerate(piv):
        x[p] = r[i, cols:]
    return x


def image_basis(F: Field, m: np.ndarray) -> np.ndarray:
    """Columns of ``m`` at the pivot positions (a basis of the column space)."""
    if m.shape[1] == 0 or m.shape[0] == 0:
        return F.zeros(m.shape[0], 0)
    _, piv = rref(F, m)
    return m[:, piv]


def row_space(F: Field, m: np.ndarray) -> np.ndarray:
    """Canonical basis (nonzero RREF rows) of the row space."""
    if m.shape[0] == 0:
        return F.zeros(0, m.shape[1])
    r, piv = rref(F, m)
    return r[: len(piv)]


def complement_basis(F: Field, sub: np.ndarray, n: int) -> np.ndarray:
    """Standard basis vectors completing the columns of ``sub`` to a basis of k^n."""
    if sub.shape[1] == 0:
        return F.eye(n)
    _, piv = rref(F, sub.T)
    pset = set(piv)
    cols = [j for j in range(n) if j not in pset]
    return F.eye(n)[:, cols]


def extend_basis(F: Field, base: np.ndarray, cand: np.ndarray) -> np.ndarray:
    """Columns of ``cand`` (in order) that extend the span of ``base`` independently."""
    if cand.shape[1] == 0:
        return cand
    both = np.concatenate([base, cand], axis=1)
    _, piv = rref(F, both)
    nb = base.shape[1]
    return cand[:, [p - nb for p in piv if p >= nb]]


def inverse(F: Field, m: np.ndarray) -> np.ndarray:
    n = m.shape[0]
    if m.shape != (n, n):
        raise ValueError("not square")
    x = solve(F, m, F.eye(n))
    if x is None or rank(F, m) < n:
        raise ZeroDivisionError("singular matrix")
    return x


def left_inverse(F: Field, m: np.ndarray) -> np.ndarray:
    """A matrix L with L m = 1, for m of full column rank."""
    x = solve(F, m.T, F.eye(m.shape[1]))
    if x is None:
        raise ValueError("matrix lacks full column rank")
    return x.T


def block(F: Field, rows) -> np.ndarray:
    """Assemble a block matrix; ``None`` entries are zero blocks."""
    heights = []
    widths = []
    for row in rows:
        h = next((b.shape[0] for b in row if b is not None), None)
        heights.append(h)
    for j in range(len(rows[0])):
        w = next((row[j].shape[1] for row in rows if row[j] is not None), None)
        widths.append(w)
    if None in heights or None in widths:
        raise ValueError("cannot infer block sizes")
    out = []
    for i, row in enumerate(rows):
        out.append(np.concatenate(
            [b if b is not None else F.zeros(heights[i], widths[j]) for j, b in enumerate(row)], axis=1))
    return np.concatenate(out, axis=0)
