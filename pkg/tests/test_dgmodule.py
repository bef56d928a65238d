import random

import pytest

from heartknit.dgmodule import (DGMorphism, ModuleError, cocone, cone, direct_sum, identity, k_dual,
                                radical_layers, shift, simple, strict_homs, truncate_gt, truncate_le,
                                zero_map, DGModule)
from heartknit.dgalgebra import opposite_algebra
from heartknit.exactla import GF, QQ
from heartknit.semifree import derived_projective_cover, free_module

import oracle
from conftest import kronecker, module_M

N_RANDOM = 200


def dims(m):
    return oracle.cohomology_dims(m)


def test_validation_catches_non_chain_action():
    A = kronecker()
    F = A.field
    with pytest.raises(ModuleError):
        DGModule(A, {("1", 0): 1, ("1", 1): 1, ("2", 0): 1, ("2", 1): 1},
                 {("1", 0): F.array([[1]])},
                 {("alpha", 0): F.array([[1]]), ("alpha", 1): F.array([[1]])}, check=True)


def test_shift_moves_degrees_and_negates():
    A = kronecker()
    m = module_M(A)
    s = shift(m, 1)
    assert s.dims == {(v, i - 1): n for (v, i), n in m.dims.items()}
    assert dims(shift(m, 3)) == {(v, i - 3): n for (v, i), n in dims(m).items()}


def test_cone_of_zero_and_identity():
    A = kronecker()
    X, Y = module_M(A), simple(A, "2", 1)
    C, _, _ = cone(zero_map(X, Y))
    expect = dict(dims(Y))
    for (v, i), n in dims(X).items():
        expect[(v, i - 1)] = expect.get((v, i - 1), 0) + n
    assert dims(C) == expect
    assert dims(cone(identity(X))[0]) == {}


def test_cocone_of_projective_cover_of_s1():
    # the conflation S2 + S2[1] -> e1A -> S1
    A = kronecker()
    cov, f = derived_projective_cover(simple(A, "1"))[:2]
    K, _, _ = cocone(f)
    assert dims(K) == {("2", 0): 1, ("2", -1): 1}


def test_direct_sum_injections():
    A = kronecker()
    S, incs, projs = direct_sum([module_M(A), simple(A, "1")])
    for i, p in zip(incs, projs):
        assert oracle.is_strict_morphism(i) and oracle.is_strict_morphism(p)
    assert dims(S)[("1", 0)] == 2


def test_radical_layers_of_m():
    L = radical_layers(module_M(kronecker()))
    assert L == {0: [{"1": 1}, {"2": 1}], -1: [{"1": 1}, {"2": 1}]}


def test_k_dual_dims():
    A = kronecker()
    m = module_M(A)
    D = k_dual(m, opposite_algebra(A))
    assert dims(D) == {(v, -i): n for (v, i), n in dims(m).items()}


# ---------------------------------------------------------------------------
# randomized invariants


def _modules(field, seed):
    A = kronecker(field)
    rng = random.Random(seed)
    return A, rng, [oracle.random_kronecker_module(A, rng) for _ in range(N_RANDOM)]


@pytest.fixture(scope="module", params=[QQ, GF(32003)], ids=["Q", "GF32003"])
def random_modules(request):
    return _modules(request.param, 7 if request.param.p is None else 11)


def test_random_modules_bounded(random_modules):
    _, _, mods = random_modules
    assert len(mods) == N_RANDOM
    assert all(n <= 4 for m in mods for n in m.dims.values())
    assert sum(1 for m in mods if m.diff) > N_RANDOM // 4


def test_cohomology_matches_reference(random_modules):
    _, _, mods = random_modules
    for m in mods:
        assert m.cohomology_dims() == dims(m)


def test_long_exact_sequence(random_modules):
    A, rng, mods = random_modules
    F = A.field
    nontrivial = 0
    for X, Y in zip(mods, mods[1:]):
        basis = strict_homs(X, Y)
        f = zero_map(X, Y)
        for b in basis:
            f = f + b.scaled(rng.randint(-2, 2))
        assert oracle.is_strict_morphism(f)
        C, inc, proj = cone(f)
        assert oracle.is_strict_morphism(inc) and oracle.is_strict_morphism(proj)
        hc = dims(C)
        hx, hy = dims(X), dims(Y)
        keys = {k for k in hc} | {k for k in hy} | {(v, i - 1) for (v, i) in hx}
        for (v, i) in keys:
            rk_i = oracle.induced_rank(f, (v, i))
            rk_next = oracle.induced_rank(f, (v, i + 1))
            expect = hy.get((v, i), 0) - rk_i + hx.get((v, i + 1), 0) - rk_next
            assert hc.get((v, i), 0) == expect
        nontrivial += any(oracle.induced_rank(f, k) for k in hx)
    assert nontrivial > 0


@pytest.mark.parametrize("n", [-2, -1, 0])
def test_truncation(random_modules, n):
    _, _, mods = random_modules
    for m in mods:
        h = dims(m)
        lo, inc = truncate_le(m, n)
        hi, proj = truncate_gt(m, n)
        assert oracle.is_strict_morphism(inc) and oracle.is_strict_morphism(proj)
        assert dims(lo) == {k: c for k, c in h.items() if k[1] <= n}
        assert dims(hi) == {k: c for k, c in h.items() if k[1] > n}
        for k, c in h.items():
            if k[1] <= n:
                assert oracle.induced_rank(inc, k) == c
            else:
                assert oracle.induced_rank(proj, k) == c
        # the two pieces add up to m
        assert sum(lo.dims.values()) + sum(hi.dims.values()) == sum(m.dims.values())


def test_double_dual(random_modules):
    A, _, mods = random_modules
    op = opposite_algebra(A)
    F = A.field
    for m in mods:
        D = k_dual(m, op)
        assert dims(D) == {(v, -i): c for (v, i), c in dims(m).items()}
        DD = k_dual(D, A)
        assert DD.dims == m.dims
        iso = DGMorphism(m, DD, {(v, i): F.scale((-1) ** (i % 2), F.eye(n)) for (v, i), n in m.dims.items()})
        assert oracle.is_strict_morphism(iso)
