import pytest
from fractions import Fraction

from glap.gla import GradedAlgebra, SymBilinearForm
from glap.linalg import Mat
from glap.families import build
from glap.prolongation import full_prolongation


def _key(tag, params):
    return (tag, tuple(sorted(params.items())))


@pytest.fixture(scope="session")
def get_family():
    """Memoized family builder, shared by the whole run."""
    cache = {}

    def get(tag, **params):
        k = _key(tag, params)
        if k not in cache:
            cache[k] = build(tag, **params)
        return cache[k]

    return get


@pytest.fixture(scope="session")
def get_prolongation(get_family):
    """Memoized full prolongation per family instance.

    The F4 instances take a couple of seconds each; computing them once per
    session keeps the acceptance tests honest about the runtime budget
    without paying for every re-use.
    """
    cache = {}

    def get(tag, **params):
        k = _key(tag, params)
        if k not in cache:
            fam = get_family(tag, **params)
            cache[k] = full_prolongation(fam.m, fam.g)
        return cache[k]

    return get


@pytest.fixture
def h3():
    """Heisenberg algebra: [X, Y] = Z with X, Y in degree -1."""
    return GradedAlgebra(
        "h3",
        ["X", "Y", "Z"],
        [-1, -1, -2],
        {(0, 1): {2: Fraction(1)}},
    )


@pytest.fixture
def h3_euclidean(h3):
    g = SymBilinearForm("h3", [0, 1], Mat.identity(2))
    return h3, g
