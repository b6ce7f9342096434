from fractions import Fraction

import pytest

from maxalg.core import Family, MaxMatrix, Permutation, RootValue, oplus_all, permute_similarity
from maxalg.errors import EnumerationLimitError
from maxalg.graph import (
    cycle_weight,
    enumerate_cycle_means,
    find_common_triangularizer,
    frobenius_normal_form,
    is_irreducible,
    max_cycle_mean,
    scc_decompose,
    triangularization_obstruction,
)

from conftest import rand_matrix, rand_permutation

A01 = MaxMatrix([[3, 0, 2], [0, 1, 0], [0, 2, 4]])
POOL = [A01, MaxMatrix([[2, 3, 1], [0, 2, 0], [0, 1, 3]]),
        MaxMatrix([[1, 2, 3], [0, 0, 0], [0, 1, 2]]), MaxMatrix([[4, 1, 0], [0, 1, 0], [0, 3, 2]])]


def test_scc_examples():
    assert scc_decompose(MaxMatrix([[0, 1], [1, 0]])).components == ((0, 1),)
    assert scc_decompose(MaxMatrix([[1, 1], [0, 1]])).components == ((0,), (1,))
    assert len(scc_decompose(MaxMatrix.zeros(3))) == 3


def test_irreducible_examples():
    assert is_irreducible(MaxMatrix([[0, 1], [1, 0]]))
    assert not is_irreducible(MaxMatrix([[1, 1], [0, 1]]))
    assert is_irreducible(MaxMatrix([[5]]))
    assert is_irreducible(MaxMatrix([[0]]))


def test_fnf_examples():
    f = frobenius_normal_form(MaxMatrix([[2, 5], [0, 3]]))
    assert f.permutation == Permutation.identity(2)
    assert [b.shape for b in f.blocks] == [(1, 1), (1, 1)]
    assert len(frobenius_normal_form(MaxMatrix([[0, 1], [2, 0]])).blocks) == 1
    f = frobenius_normal_form(A01)
    assert str(f.permutation) == "(2 3)"
    assert [b[0, 0] for b in f.blocks] == [3, 4, 1]


def test_fnf_properties(rng):
    for _ in range(50):
        A = rand_matrix(rng, 5, zero_density=0.6)
        f = frobenius_normal_form(A)
        assert all(is_irreducible(b) for b in f.blocks)
        P = f.permuted
        for (lo, hi) in f.boundaries:
            for i in range(hi, A.rows):
                assert all(P[i, j] == 0 for j in range(lo, hi))


def test_max_cycle_mean_examples():
    cm = max_cycle_mean(MaxMatrix([[0, 2], [8, 0]]))
    assert cm.value == 4 and cm.cycle == (0, 1)
    assert max_cycle_mean(MaxMatrix([[3]])).value == 3
    A1 = MaxMatrix([[1, "0.5", 0, 0], ["0.3", 1, 0, 0], [0, 0, "0.9", "0.7"], [0, 0, "0.5", "0.9"]])
    A2 = MaxMatrix([["0.8", 1, 0, 0], [1, "0.4", 0, 0], [0, 0, "0.8", "0.6"], [0, 0, "0.4", "0.8"]])
    assert max_cycle_mean(oplus_all([A1, A2])).value == 1
    acyclic = max_cycle_mean(MaxMatrix([[0, 5], [0, 0]]))
    assert acyclic.value == 0 and acyclic.cycle == ()


def test_witness_reproduces_value(rng):
    for _ in range(100):
        A = rand_matrix(rng, 5)
        cm = max_cycle_mean(A)
        if cm.cycle:
            assert RootValue(RootValue(cycle_weight(A, cm.cycle)), len(cm.cycle)) == cm.value


def test_enumeration_examples():
    means = enumerate_cycle_means(MaxMatrix([[2, 3], [1, 0]]))
    assert [m.value for m in means] == [RootValue(2), RootValue(3, 2)]
    assert enumerate_cycle_means(MaxMatrix([[0, 1], [0, 0]])) == []
    assert enumerate_cycle_means(oplus_all(POOL))[0].value == 4
    with pytest.raises(EnumerationLimitError):
        enumerate_cycle_means(MaxMatrix.zeros(9), max_n=8)


def test_karp_matches_enumeration(rng):
    for _ in range(150):
        n = rng.randint(1, 6)
        A = rand_matrix(rng, n, zero_density=rng.choice([0.3, 0.7]))
        means = enumerate_cycle_means(A)
        value = max_cycle_mean(A).value
        assert value == (means[0].value if means else 0)


def test_cycle_mean_permutation_invariant(rng):
    for _ in range(50):
        A = rand_matrix(rng, 5)
        assert max_cycle_mean(permute_similarity(A, rand_permutation(rng, 5))).value == max_cycle_mean(A).value


def test_triangularizer_examples():
    sigma = find_common_triangularizer(POOL)
    assert sigma is not None
    assert all(permute_similarity(A, sigma).is_upper_triangular() for A in POOL)
    assert find_common_triangularizer([MaxMatrix.identity(3)]) == Permutation.identity(3)
    swap = [MaxMatrix([[0, 1], [1, 0]])]
    assert find_common_triangularizer(swap) is None
    assert triangularization_obstruction(swap) == (0, 1)


def test_triangularizer_properties(rng):
    for _ in range(80):
        F = Family([rand_matrix(rng, 4, zero_density=0.75) for _ in range(2)])
        sigma = find_common_triangularizer(F)
        if sigma is None:
            cyc = triangularization_obstruction(F)
            S = F.sum()
            assert len(cyc) >= 2
            assert all(S[cyc[k], cyc[(k + 1) % len(cyc)]] for k in range(len(cyc)))
        else:
            assert all(permute_similarity(A, sigma).is_upper_triangular() for A in F)


def test_exact_decimal_cycle_mean():
    # 0.72 must be read as 18/25 exactly
    A = MaxMatrix([[0, "0.9"], ["0.8", 0]])
    assert max_cycle_mean(A).value == RootValue(Fraction(18, 25), 2)
