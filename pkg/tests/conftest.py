import os
import random
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from heartknit import GF, QQ, Arrow, DGModule, GradedQuiver, Heart, build_algebra, knit
from heartknit.dsl import parse_algebra, parse_module

DATA = os.path.join(os.path.dirname(__file__), "data")


def data(name):
    return os.path.join(DATA, name)


def read(name):
    with open(data(name), encoding="utf-8") as fh:
        return fh.read()


def kronecker(field=QQ):
    q = GradedQuiver(["1", "2"], [Arrow("alpha", "1", "2", 0), Arrow("beta", "1", "2", -1)])
    return build_algebra(q, {}, field)


def d4(field=QQ):
    q = GradedQuiver(["1", "2", "3", "4"], [
        Arrow("alpha", "1", "2", 0), Arrow("beta", "2", "3", 0), Arrow("gamma", "3", "4", 0),
        Arrow("h1", "1", "3", -1), Arrow("h2", "2", "4", -1)])
    return build_algebra(q, {"h1": [(1, ["alpha", "beta"])], "h2": [(1, ["beta", "gamma"])]}, field)


def a2(field=QQ):
    return build_algebra(GradedQuiver(["1", "2"], [Arrow("alpha", "1", "2", 0)]), {}, field)


def module_M(A):
    F = A.field
    return DGModule(A, {("1", 0): 1, ("2", 0): 1, ("1", -1): 1, ("2", -1): 1}, {},
                    {("alpha", 0): F.array([[1]]), ("beta", 0): F.array([[1]]),
                     ("alpha", -1): F.array([[1]])}, check=True)


@pytest.fixture(scope="session")
def kron():
    return kronecker()


@pytest.fixture(scope="session")
def H2(kron):
    return Heart.of(kron, 2)


@pytest.fixture(scope="session")
def M(H2, kron):
    return H2.member(module_M(kron), "M")


@pytest.fixture(scope="session")
def quiver_h2(kron):
    return knit(kron, 2)


@pytest.fixture(scope="session")
def quiver_h3(kron):
    return knit(kron, 3)


@pytest.fixture(scope="session")
def quiver_d4():
    return knit(d4(), 2)


@pytest.fixture
def rng():
    return random.Random(20261015)
