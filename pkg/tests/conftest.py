import random
from fractions import Fraction
from pathlib import Path

import pytest

from maxalg.core import Family, MaxMatrix, Permutation, permute_similarity
from maxalg.polynomial import MaxPoly

FIXTURES = Path(__file__).parent / "fixtures"


def rand_entry(rng, zero_density=0.3):
    if rng.random() < zero_density:
        return Fraction(0)
    return Fraction(rng.randint(1, 16), rng.randint(1, 4))


def rand_matrix(rng, n, cols=None, zero_density=0.3):
    cols = n if cols is None else cols
    return MaxMatrix([[rand_entry(rng, zero_density) for _ in range(cols)] for _ in range(n)])


def rand_irreducible(rng, n, zero_density=0.3):
    """Random matrix with a forced Hamiltonian cycle, hence irreducible."""
    rows = rand_matrix(rng, n, zero_density=zero_density).to_list()
    order = list(range(n))
    rng.shuffle(order)
    if n > 1:
        for k, u in enumerate(order):
            v = order[(k + 1) % n]
            if not rows[u][v]:
                rows[u][v] = Fraction(rng.randint(1, 16), rng.randint(1, 4))
    elif not rows[0][0]:
        rows[0][0] = Fraction(rng.randint(1, 16), rng.randint(1, 4))
    return MaxMatrix(rows)


def rand_family(rng, n, size, zero_density=0.3):
    return Family([rand_matrix(rng, n, zero_density=zero_density) for _ in range(size)])


def rand_poly(rng, n, m, zero_density=0.3):
    return MaxPoly([rand_matrix(rng, n, zero_density=zero_density) for _ in range(m)])


def rand_permutation(rng, n):
    image = list(range(n))
    rng.shuffle(image)
    return Permutation(tuple(image))


def rand_upper(rng, n, zero_density=0.3):
    return MaxMatrix([[rand_entry(rng, zero_density) if j >= i else 0 for j in range(n)]
                      for i in range(n)])


def rand_triangularizable(rng, n, size):
    """Upper triangular members conjugated by one hidden permutation."""
    sigma = rand_permutation(rng, n)
    mats = [permute_similarity(rand_upper(rng, n), sigma.inverse()) for _ in range(size)]
    return Family(mats)


@pytest.fixture
def rng():
    return random.Random(20240611)


@pytest.fixture
def fixtures_dir():
    return FIXTURES
