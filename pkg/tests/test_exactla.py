import random

import pytest
import sympy

from heartknit.exactla import (GF, QQ, complement_basis, extend_basis, image_basis, inverse,
                               kernel_basis, left_inverse, rank, rref, solve)

import oracle

FIELDS = [QQ, GF(2), GF(7), GF(32003)]


def rand_matrix(F, rng, r, c, density=0.6):
    return F.array([[rng.randint(-3, 3) if rng.random() < density else 0 for _ in range(c)]
                    for _ in range(r)]) if r else F.zeros(0, c)


@pytest.mark.parametrize("F", FIELDS, ids=lambda F: F.name)
def test_rank_matches_reference(F, rng):
    for _ in range(60):
        m = rand_matrix(F, rng, rng.randint(0, 6), rng.randint(0, 6))
        assert rank(F, m) == oracle.rank(oracle.to_rows(m, F.p), F.p)


def test_rank_over_q_matches_sympy(rng):
    for _ in range(30):
        r, c = rng.randint(1, 5), rng.randint(1, 5)
        rows = [[sympy.Rational(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(c)] for _ in range(r)]
        m = QQ.array([[str(x) for x in row] for row in rows])
        assert rank(QQ, m) == sympy.Matrix(rows).rank()


@pytest.mark.parametrize("F", FIELDS, ids=lambda F: F.name)
def test_kernel_is_kernel_and_full(F, rng):
    for _ in range(40):
        m = rand_matrix(F, rng, rng.randint(1, 5), rng.randint(1, 6))
        K = kernel_basis(F, m)
        assert K.shape[1] == m.shape[1] - rank(F, m)
        assert F.is_zero(F.mul(m, K))


@pytest.mark.parametrize("F", FIELDS, ids=lambda F: F.name)
def test_solve_consistent_and_inconsistent(F, rng):
    for _ in range(40):
        m = rand_matrix(F, rng, rng.randint(1, 5), rng.randint(1, 5))
        x = rand_matrix(F, rng, m.shape[1], 2)
        b = F.mul(m, x)
        y = solve(F, m, b)
        assert y is not None and F.is_zero(F.sub(F.mul(m, y), b))
    m = F.array([[1, 0], [0, 0]])
    assert solve(F, m, F.array([[0], [1]])) is None


def test_rref_is_reduced():
    F = QQ
    R, piv = rref(F, F.array([[2, 4, 2], [1, 2, 3]]))[:2]
    assert list(piv) == [0, 2]
    assert R[0, 0] == 1 and R[1, 2] == 1 and R[0, 2] == 0


@pytest.mark.parametrize("F", [QQ, GF(5)], ids=lambda F: F.name)
def test_inverse_and_left_inverse(F, rng):
    m = F.array([[1, 2], [3, 4]]) if F.p is None else F.array([[1, 2], [3, 3]])
    assert F.is_zero(F.sub(F.mul(inverse(F, m), m), F.eye(2)))
    tall = F.array([[1, 0], [0, 1], [1, 1]])
    assert F.is_zero(F.sub(F.mul(left_inverse(F, tall), tall), F.eye(2)))
    with pytest.raises(Exception):
        inverse(F, F.array([[1, 1], [1, 1]]))


def test_complement_and_extension():
    F = QQ
    sub = F.array([[1], [1], [0]])
    C = complement_basis(F, sub, 3)
    assert C.shape[1] == 2
    assert rank(F, F.array([[*a, *b] for a, b in zip(sub.tolist(), C.tolist())])) == 3
    E = extend_basis(F, sub, F.eye(3))
    assert E.shape[1] == 2
    assert image_basis(F, F.array([[1, 2], [2, 4]])).shape[1] == 1


def test_non_prime_field_rejected():
    with pytest.raises(ValueError):
        GF(32)
