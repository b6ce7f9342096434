"""Re-derive both worked examples end to end, exactly.

The first example is a pair of 3x3 polynomials whose four coefficients
share a triangularizing permutation; the second is a pair of 4x4 matrices
with common eigenvectors ``(1,1,0,0)`` and ``(0,0,1,1)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .core import Family, MaxMatrix, oplus_all, otimes, permute_similarity
from .dynamics import (
    CommonEigenSystem,
    check_poly_fixed_point,
    orbit,
    predicted_limit,
    verify_common_eigenvector,
    word_product,
)
from .graph import find_common_triangularizer, max_cycle_mean
from .polynomial import MaxPoly, coefficient_pool, triangular_jsr
from .spectral import jsr

# first example: P1 = A01 + t A11, P2 = A02 + t A12
A01 = MaxMatrix([[3, 0, 2], [0, 1, 0], [0, 2, 4]])
A11 = MaxMatrix([[2, 3, 1], [0, 2, 0], [0, 1, 3]])
A02 = MaxMatrix([[1, 2, 3], [0, 0, 0], [0, 1, 2]])
A12 = MaxMatrix([[4, 1, 0], [0, 1, 0], [0, 3, 2]])
POLYS = (MaxPoly([A01, A11]), MaxPoly([A02, A12]))
POOLS = ((3, 2, 1, 4), (4, 3, 2, 2), (1, 2, 0, 1))
SUPREMA = (4, 4, 2)
POOL_SUM = MaxMatrix([[4, 3, 3], [0, 2, 0], [0, 3, 4]])

# second example
B1 = MaxMatrix([[1, "0.5", 0, 0], ["0.3", 1, 0, 0], [0, 0, "0.9", "0.7"], [0, 0, "0.5", "0.9"]])
B2 = MaxMatrix([["0.8", 1, 0, 0], [1, "0.4", 0, 0], [0, 0, "0.8", "0.6"], [0, 0, "0.4", "0.8"]])
V1 = MaxMatrix.vector([1, 1, 0, 0])
V2 = MaxMatrix.vector([0, 0, 1, 1])
ALPHA = ((Fraction(1), Fraction(9, 10)), (Fraction(1), Fraction(4, 5)))
WORD = "12"
X0 = MaxMatrix.vector([1, 1, 1, 1])
EPSILON = Fraction(1, 10**12)


def perturbed_b1() -> MaxMatrix:
    """``B1`` with its (3,3) entry raised from 0.9 to 1.1."""
    rows = B1.to_list()
    rows[2][2] = Fraction(11, 10)
    return MaxMatrix(rows)


@dataclass(frozen=True)
class Check:
    example: str
    name: str
    passed: bool
    detail: str = ""


def _run(example: str, name: str, fn) -> Check:
    try:
        ok, detail = fn()
    except Exception as exc:  # a failing check is a report entry, not a crash
        return Check(example, name, False, f"{type(exc).__name__}: {exc}")
    return Check(example, name, bool(ok), detail)


def _first_example() -> list[Check]:
    ex = "polynomial pair"
    pool = coefficient_pool(POLYS)
    out = []

    def triangularizer():
        sigma = find_common_triangularizer(pool)
        if sigma is None:
            return False, "no common triangularizer"
        ok = all(permute_similarity(A, sigma).is_upper_triangular() for A in pool)
        return ok, f"sigma = {sigma}"

    tj = triangular_jsr(POLYS)

    def pools():
        got = tuple(tuple(int(x) if x.denominator == 1 else x for x in p) for p in tj.pools)
        return got == POOLS, f"pools = {got}"

    out.append(_run(ex, "common triangularizer", triangularizer))
    out.append(_run(ex, "diagonal pools", pools))
    out.append(_run(ex, "pool suprema", lambda: (tj.suprema == SUPREMA, f"suprema = {tuple(str(x) for x in tj.suprema)}")))
    out.append(_run(ex, "triangular jsr", lambda: (tj.value == 4, f"value = {tj.value}")))
    S = pool.sum()
    out.append(_run(ex, "max-sum matrix", lambda: (S == POOL_SUM, f"sum = {[[str(x) for x in r] for r in S.entries]}")))
    out.append(_run(ex, "cycle mean of max-sum",
                    lambda: (max_cycle_mean(S).value == 4, f"mu = {max_cycle_mean(S).value}")))
    out.append(_run(ex, "jsr", lambda: (jsr(pool).value == 4, f"jsr = {jsr(pool).value}")))
    return out


def _second_example(b1: MaxMatrix) -> list[Check]:
    ex = "common eigenvectors"
    F = Family({"1": b1, "2": B2})
    out = []

    def alpha():
        rows = [verify_common_eigenvector(F, v) for v in (V1, V2)]
        if None in rows:
            return False, "not a common eigenvector"
        table = tuple(tuple(r[i] for r in rows) for i in range(2))
        return table == ALPHA, f"alpha = {[[str(a) for a in r] for r in table]}"

    out.append(_run(ex, "eigenvalue table", alpha))
    mu = max_cycle_mean(oplus_all(F.matrices())).value
    out.append(_run(ex, "cycle mean of max-sum", lambda: (mu == 1, f"mu = {mu}")))
    Aw = word_product(F, WORD)
    image = otimes(Aw, V2)
    out.append(_run(ex, "word contraction",
                    lambda: (image == Fraction(18, 25) * V2, f"A_w v2 = {[str(x) for x in image]}")))
    rep = orbit(Aw, X0, EPSILON, 100)

    def orbit_check():
        ok = rep.mode == "converging" and rep.limit == V1 and rep.rate == Fraction(18, 25)
        return ok, f"mode = {rep.mode}, steps = {rep.steps}, rate = {rep.rate}"

    out.append(_run(ex, "orbit limit", orbit_check))

    def prediction():
        system = CommonEigenSystem.from_vectors(F, [V1, V2])
        pred = predicted_limit(X0, WORD, system, F)
        return pred.limit == rep.limit, f"predicted = {[str(x) for x in pred.limit]}"

    out.append(_run(ex, "predicted limit", prediction))
    out.append(_run(ex, "common fixed point",
                    lambda: (all(otimes(A, V1) == V1 for A in F.matrices()), "A_i v1 = v1")))

    def poly_fixed():
        polys = [MaxPoly(c) for c in ([b1], [B2], [b1, B2], [B2, b1], [B2, B2, b1])]
        return all(check_poly_fixed_point(P, V1) for P in polys), f"{len(polys)} polynomials"

    out.append(_run(ex, "P(1) fixed point", poly_fixed))
    return out


def verify_paper(b1: MaxMatrix | None = None) -> list[Check]:
    """All checks for both examples; ``b1`` replaces the first 4x4 matrix."""
    return _first_example() + _second_example(B1 if b1 is None else b1)
