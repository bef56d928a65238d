"""The three-step route to tau through the modules Sigma^i.

Step one is the minimal d-term resolution: its generators of shift i are the
projectives P^i, and the twisting entries between levels encode the maps
P^i -> P^{i-1} together with their higher homotopies.  Step two applies
nu_d = [d-1] o nu levelwise, giving I^i.  Step three runs

    Sigma^1 = t^{<=0} Cocone(I^1 -> I^0),
    Sigma^i = t^{<=0} Cocone(I^i -> Sigma^{i-1}),

where each map I^i -> Sigma^{i-1} is the twisted-complex map
I^i -> I^{[0,i-1]} corestricted to Sigma^{i-1}.  That corestriction exists
whenever every I^i is concentrated in module degrees <= 0; otherwise
:class:`SigmaLiftUnavailable` is raised.
"""
from __future__ import annotations

from typing import Optional

from .dgmodule import DGModule, DGMorphism, cocone, identity, shift, truncate_le
from .exactla import solve
from .semifree import SemifreeModule, nakayama


class SigmaLiftUnavailable(ArithmeticError):
    pass


def _prefix(P: SemifreeModule, cut: int) -> SemifreeModule:
    return SemifreeModule(P.algebra, P.gens[:cut],
                          {(k, i): e for (k, i), e in P.delta.items() if k < cut and i < cut})


def _level_map(N: DGModule, low: DGModule, top: DGModule, d: int, i: int) -> DGMorphism:
    """Off-diagonal block of d_N from the level-i rows to the lower rows, shifted to I^i -> I^{[0,i-1]}."""
    s = d - 1 - i
    blocks = {}
    for (v, k), m in N.diff.items():
        nl_src = low.dim(v, k)
        nl_tgt = low.dim(v, k + 1)
        if N.dim(v, k) - nl_src == 0 or nl_tgt == 0:
            continue
        h = m[:nl_tgt, nl_src:]
        blocks[(v, k - s)] = h
    Ii = shift(top, s)
    tgt = shift(low, s + 1)
    return DGMorphism(Ii, tgt, blocks)


def sigma_modules(P: SemifreeModule, d: int, trace: Optional[list] = None) -> DGModule:
    """Sigma^d for a d-term resolution P; intermediate modules go to ``trace``."""
    F = P.field
    counts = [sum(1 for s in P.shifts if s <= i) for i in range(d + 1)]
    if any(P.shifts[j] > P.shifts[j + 1] for j in range(len(P.shifts) - 1)):
        raise ValueError("generators must be ordered by shift")
    A = P.algebra
    N_prev = nakayama(_prefix(P, counts[0]))
    sigma = shift(N_prev, d - 1)            # Sigma^0 = I^0
    emb = identity(sigma)                   # Sigma^0 -> I^{[0,0]}
    if trace is not None:
        trace.append(("I", 0, sigma))
    for i in range(1, d + 1):
        N_i = nakayama(_prefix(P, counts[i]))
        # nu of the level-i generators; shifted by d-1-i this is I^i = nu(P^i)[d-1]
        top = nakayama(SemifreeModule(A, P.gens[counts[i - 1]:counts[i]], {}))
        gamma = _level_map(N_i, N_prev, top, d, i)
        if not gamma.is_valid():
            gamma = gamma.scaled(-1)
        Ii = gamma.source
        if trace is not None:
            trace.append(("I", i, Ii))
        # corestrict gamma through Sigma^{i-1} -> I^{[0,i-1]}
        blocks = {}
        for k in Ii.dims:
            g = gamma.block(*k)
            if F.is_zero(g):
                continue
            e = emb.block(*k)
            sol = solve(F, e, g) if e.shape[1] else None
            if sol is None:
                raise SigmaLiftUnavailable(f"map I^{i} -> I^[0,{i - 1}] leaves Sigma^{i - 1} at {k}")
            blocks[k] = sol
        g_i = DGMorphism(Ii, sigma, blocks)
        K, _, _ = cocone(g_i)
        new_sigma, inc = truncate_le(K, 0)
        # embedding Sigma^i -> Cocone(gamma) -> I^{[0,i]}
        Kg, _, _ = cocone(gamma)
        big = {}
        for key in K.dims:
            v, k = key
            e = emb.block(v, k - 1)
            nI = Ii.dim(v, k)
            m = F.zeros(Kg.dim(*key), K.dim(*key))
            ns, nt = e.shape[1], e.shape[0]
            if ns and nt:
                m[:nt, :ns] = e
            if nI:
                m[nt:nt + nI, ns:ns + nI] = F.eye(nI)
            big[key] = m
        to_big = DGMorphism(K, Kg, big)
        ident = shift(N_i, d - 1 - i)
        psi = None
        for sgn in (1, -1):
            blk = {}
            for key, n in Kg.dims.items():
                nl = Kg.dim(*key) - Ii.dim(*key)
                m = F.eye(n)
                for r in range(nl, n):
                    m[r, r] = F(sgn)
                blk[key] = m
            cand = DGMorphism(Kg, ident, blk)
            if cand.is_valid():
                psi = cand
                break
        if psi is None:
            raise ArithmeticError("cocone model and Nakayama model disagree")
        emb = psi.compose(to_big.compose(inc))
        sigma = new_sigma
        N_prev = N_i
        if trace is not None:
            trace.append(("Sigma", i, sigma))
    return sigma


def sigma_route(heart, x, trace: Optional[list] = None):
    """tau(x) via Sigma^d, with injective summands removed as for tau."""
    if x.is_zero:
        return heart.zero()
    P = x.tower(heart.d).P
    if all(s == 0 for s in P.shifts):
        z = heart.zero()
        z.flags["from_projective"] = True
        return z
    S = sigma_modules(P, heart.d, trace)
    obj = heart.member(S)
    return heart._strip(obj, injective=True)


def sigma_one(heart, x):
    """Sigma^1 of the route, as a heart object (no stripping)."""
    tr: list = []
    sigma_modules(x.tower(heart.d).P, heart.d, tr)
    for kind, i, m in tr:
        if kind == "Sigma" and i == 1:
            return heart.member(m)
    raise ValueError("no Sigma^1 for this input")
