from fractions import Fraction

import pytest

from maxalg.core import Family, MaxMatrix, RootValue, mat_power, oplus, otimes, permute_similarity
from maxalg.dynamics import matrix_period
from maxalg.errors import MaxAlgebraError
from maxalg.graph import max_cycle_mean
from maxalg.spectral import (
    eigen_spectrum,
    eigenvectors_for,
    eta,
    eta_hat,
    eta_hat_estimate,
    eta_oracle,
    induced_norm,
    is_eigenpair,
    jsr,
    jsr_bracket,
)

from conftest import rand_family, rand_irreducible, rand_matrix, rand_permutation

POOL = Family({
    "A01": MaxMatrix([[3, 0, 2], [0, 1, 0], [0, 2, 4]]),
    "A11": MaxMatrix([[2, 3, 1], [0, 2, 0], [0, 1, 3]]),
    "A02": MaxMatrix([[1, 2, 3], [0, 0, 0], [0, 1, 2]]),
    "A12": MaxMatrix([[4, 1, 0], [0, 1, 0], [0, 3, 2]]),
})
SIGMA = Family({
    "1": MaxMatrix([[1, "0.5", 0, 0], ["0.3", 1, 0, 0], [0, 0, "0.9", "0.7"], [0, 0, "0.5", "0.9"]]),
    "2": MaxMatrix([["0.8", 1, 0, 0], [1, "0.4", 0, 0], [0, 0, "0.8", "0.6"], [0, 0, "0.4", "0.8"]]),
})


@pytest.mark.parametrize("norm", ["linf", "l1"])
def test_eta_examples(norm):
    A = MaxMatrix([[2, 3], [1, 0]])
    assert eta(A, norm) == 3
    assert eta(MaxMatrix.zeros(2), norm) == 0
    assert eta(MaxMatrix.identity(3), norm) == 1
    assert eta_oracle(A, norm, grid=1) == 3


def test_eta_oracle_never_exceeds_closed_form(rng):
    for _ in range(20):
        A = rand_matrix(rng, 3)
        for norm in ("linf", "l1"):
            assert eta_oracle(A, norm, grid=4) <= eta(A, norm)


def test_eta_oracle_attains_on_fine_grid():
    # the sup-norm maximizer is x = (1, 1), on every grid
    A = MaxMatrix([[2, 3], [1, 0]])
    assert eta_oracle(A, "linf", grid=64) == 3


def test_eta_versus_induced_norm(rng):
    for _ in range(20):
        A = rand_matrix(rng, 3)
        for norm in ("linf", "l1"):
            assert eta(A, norm) <= induced_norm(A, norm)


def test_seminorm_laws(rng):
    for _ in range(40):
        X, Y = rand_matrix(rng, 3), rand_matrix(rng, 3)
        s = rand_permutation(rng, 3)
        for norm in ("linf", "l1"):
            assert eta(oplus(X, Y), norm) <= eta(X, norm) + eta(Y, norm)
            assert eta(otimes(X, Y), norm) <= eta(X, norm) * eta(Y, norm)
            assert eta(permute_similarity(X, s), norm) == eta(X, norm)


def test_eta_hat_examples():
    A = MaxMatrix([[0, 2], [8, 0]])
    assert eta_hat(A) == 4
    assert eta_hat_estimate(A, 2)[1] == 4
    assert eta_hat(MaxMatrix.identity(2)) == 1
    assert eta_hat(POOL["A11"]) == 3


def test_gelfand_lower_bound_and_periodicity(rng):
    for _ in range(40):
        A = rand_irreducible(rng, rng.randint(1, 4))
        mu = max_cycle_mean(A).value
        est = eta_hat_estimate(A, 12)
        assert all(mu <= e for e in est)
        rep = matrix_period(A)
        k0, p = max(rep.transient, 1), rep.period
        for j in range(1, 3):
            lhs = RootValue(eta(mat_power(A, k0 + j * p)))
            rhs = RootValue(eta(mat_power(A, k0))) * mu ** (j * p)
            assert lhs == rhs


def test_gelfand_estimates_need_not_equal_mu_after_transient():
    # eta(A^k)^(1/k) converges to mu without reaching it
    A = MaxMatrix([[1, 2], [1, 1]])
    mu = max_cycle_mean(A).value
    assert mu == RootValue(2, 2)
    rep = matrix_period(A)
    assert (rep.period, rep.transient) == (2, 1)
    assert eta_hat_estimate(A, 3)[2] > mu


def test_eigen_spectrum_examples():
    pairs = eigen_spectrum(MaxMatrix([[2, 5], [0, 3]]))
    assert [p.value for p in pairs] == [3, 2]
    v = pairs[0].vector
    assert Fraction(5, 3) * v == MaxMatrix.vector([Fraction(5, 3), 1])
    assert pairs[1].vector == MaxMatrix.vector([1, 0])
    assert [p.value for p in eigen_spectrum(MaxMatrix([[3, 1], [0, 2]]))] == [3]
    assert [p.value for p in eigen_spectrum(MaxMatrix([[0, 2], [8, 0]]))] == [4]


def test_eigenvectors_for_examples():
    vs = eigenvectors_for(MaxMatrix([[2, 5], [0, 3]]), 3)
    assert MaxMatrix.vector([1, Fraction(3, 5)]) in vs
    ident = eigenvectors_for(MaxMatrix.identity(3), 1)
    assert set(ident) == {MaxMatrix.basis_vector(3, j) for j in range(3)}
    assert eigenvectors_for(MaxMatrix([[3, 1], [0, 2]]), 2) == []
    with pytest.raises(MaxAlgebraError):
        eigenvectors_for(MaxMatrix.identity(2), 0)


def test_irrational_eigenvector_is_exact():
    A = MaxMatrix([[0, 3], [1, 0]])
    (pair,) = eigen_spectrum(A)
    assert pair.value == RootValue(3, 2)
    assert is_eigenpair(A, pair.value, pair.vector)
    assert pair.vector[1] == 1 / RootValue(3, 2)


def test_eigen_spectrum_properties(rng):
    for _ in range(60):
        A = rand_matrix(rng, rng.randint(1, 4))
        pairs = eigen_spectrum(A)
        for p in pairs:
            for v in p.generators:
                assert is_eigenpair(A, p.value, v)
        mu = max_cycle_mean(A).value
        assert mu in [p.value for p in pairs]
    for _ in range(40):
        A = rand_irreducible(rng, rng.randint(2, 4))
        pairs = eigen_spectrum(A)
        assert len(pairs) == 1
        assert all(x > 0 for x in pairs[0].vector)


def test_jsr_examples():
    rep = jsr(POOL)
    assert rep.value == 4
    assert jsr(Family([MaxMatrix.identity(3)])).value == 1
    assert jsr(Family([MaxMatrix([[2, 0], [0, 1]]), MaxMatrix([[1, 0], [0, 3]])])).value == 3
    assert jsr(SIGMA).value == 1


def test_jsr_witness_assignment():
    rep = jsr(POOL)
    S = POOL.sum()
    c = rep.cycle
    for k, name in enumerate(rep.assignment):
        u, v = c[k], c[(k + 1) % len(c)]
        assert POOL[name][u, v] == S[u, v]


def test_jsr_bracket_examples():
    rep = jsr_bracket(POOL, 3)
    assert 4 in rep.lower
    assert rep.brackets_hold()
    A = MaxMatrix([[2, 3], [1, 0]])
    single = jsr_bracket(Family([A]), 4)
    assert all(lo == max_cycle_mean(A).value for lo in single.lower)
    assert single.upper == [RootValue(RootValue(eta(mat_power(A, k))), k) for k in range(1, 5)]
    rep = jsr_bracket(SIGMA, 4)
    assert all(up >= 1 for up in rep.upper) and all(lo <= 1 for lo in rep.lower)
    assert rep.attained_at() is not None


def test_jsr_invariances(rng):
    for _ in range(30):
        F = rand_family(rng, 3, 2)
        s = rand_permutation(rng, 3)
        rho = jsr(F).value
        assert jsr(F.map(lambda M: permute_similarity(M, s))).value == rho
        assert jsr(F.scaled(Fraction(3, 2))).value == rho * Fraction(3, 2)


def test_jsr_bracket_attained_within_n(rng):
    for _ in range(40):
        n = rng.randint(1, 3)
        F = rand_family(rng, n, rng.randint(1, 3))
        rep = jsr_bracket(F, n)
        assert rep.brackets_hold()
        assert rep.attained_at() is not None


def test_float_backend_jsr():
    F = Family({k: M.to_float() for k, M in POOL.items()})
    assert abs(float(jsr(F).value) - 4.0) < 1e-12
