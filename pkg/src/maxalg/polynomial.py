"""Max-matrix polynomials ``P(t) = A_0 + t A_1 + ... + t^(m-1) A_(m-1)``.

``m`` is the coefficient count and is part of the data: trailing zero
coefficients are kept because the spectrum ``{k : P(k) v = k^m v}`` depends
on it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .core import (
    Family,
    MaxMatrix,
    Permutation,
    RootValue,
    oplus,
    oplus_all,
    otimes,
    permute_similarity,
    scalar,
    scalar_scale,
)
from .errors import EnumerationLimitError, MaxAlgebraError, PreconditionError, ShapeError
from .graph import find_common_triangularizer
from .spectral import (
    eigen_spectrum,
    eta,
    eta_hat,
    induced_norm,
    jsr,
    normalize,
    products_by_length,
)


class MaxPoly:
    """Coefficients ``A_0 .. A_(m-1)`` in ascending degree."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence[MaxMatrix]):
        coeffs = tuple(coeffs)
        if not coeffs:
            raise MaxAlgebraError("a polynomial needs at least one coefficient")
        n = coeffs[0].rows
        for j, A in enumerate(coeffs):
            if not isinstance(A, MaxMatrix):
                raise TypeError(f"coefficient {j} is not a MaxMatrix")
            if not A.is_square or A.rows != n:
                raise ShapeError(f"coefficient {j} has shape {A.shape}, expected ({n}, {n})")
        self.coeffs = coeffs

    @classmethod
    def scalar_poly(cls, coeffs: Sequence) -> MaxPoly:
        """1x1 polynomial from scalar coefficients."""
        return cls([MaxMatrix([[c]]) for c in coeffs])

    @property
    def m(self) -> int:
        return len(self.coeffs)

    @property
    def n(self) -> int:
        return self.coeffs[0].rows

    @property
    def backend(self) -> str:
        return self.coeffs[0].backend

    def sigma(self) -> list[MaxMatrix]:
        """Distinct coefficient matrices, in order of first appearance."""
        return list(dict.fromkeys(self.coeffs))

    def __call__(self, lam) -> MaxMatrix:
        return poly_eval(self, lam)

    def __matmul__(self, other: MaxPoly) -> MaxPoly:
        return poly_multiply(self, other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, MaxPoly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"MaxPoly({list(self.coeffs)!r})"

    def similar(self, sigma: Permutation) -> MaxPoly:
        """``S^-1 P S`` coefficientwise."""
        return MaxPoly([permute_similarity(A, sigma) for A in self.coeffs])

    def rescaled(self, c) -> MaxPoly:
        """Polynomial whose spectrum is this one's multiplied by ``c``.

        Coefficient j is scaled by ``c^(m-j)``, since then
        ``P_c(c k) = c^m P(k)``.
        """
        m = self.m
        return MaxPoly([scalar_scale(RootValue(c) ** (m - j), A) for j, A in enumerate(self.coeffs)])


@dataclass(frozen=True)
class ScalarPoly:
    """Scalar max-polynomial ``a_0 + a_1 t + ... + a_(m-1) t^(m-1)``."""

    coeffs: tuple

    def __post_init__(self):
        if not self.coeffs:
            raise MaxAlgebraError("a polynomial needs at least one coefficient")
        object.__setattr__(self, "coeffs", tuple(
            c if isinstance(c, RootValue) else scalar(c) for c in self.coeffs))

    @property
    def m(self) -> int:
        return len(self.coeffs)

    def __call__(self, k):
        best, pw = self.coeffs[0], 1
        for a in self.coeffs[1:]:
            pw = pw * k
            term = a * pw
            if term > best:
                best = term
        return best


def poly_eval(P: MaxPoly, lam) -> MaxMatrix:
    """``A_0 + lam A_1 + ... + lam^(m-1) A_(m-1)`` (max-sum)."""
    if not isinstance(lam, RootValue) and P.backend != "float":
        lam = scalar(lam)
    acc, pw = P.coeffs[0], 1
    for A in P.coeffs[1:]:
        pw = pw * lam
        acc = oplus(acc, scalar_scale(pw, A))
    return acc


def poly_multiply(P: MaxPoly, Q: MaxPoly) -> MaxPoly:
    """Product with coefficients ``C_s = max_{i+j=s} A_i B_j``."""
    if P.n != Q.n:
        raise ShapeError(f"polynomials of size {P.n} and {Q.n}")
    out = []
    for s in range(P.m + Q.m - 1):
        terms = [otimes(P.coeffs[i], Q.coeffs[s - i])
                 for i in range(max(0, s - Q.m + 1), min(s, P.m - 1) + 1)]
        out.append(oplus_all(terms))
    return MaxPoly(out)


def poly_product(polys: Sequence[MaxPoly]) -> MaxPoly:
    it = iter(polys)
    acc = next(it)
    for P in it:
        acc = poly_multiply(acc, P)
    return acc


def companion(P: MaxPoly) -> MaxMatrix:
    """Block companion matrix of order ``m n``: identities on the block
    superdiagonal, ``A_0 .. A_(m-1)`` in the last block row."""
    n, m = P.n, P.m
    if m == 1:
        return P.coeffs[0]
    N = n * m
    zero, one = (0.0, 1.0) if P.backend == "float" else (Fraction(0), Fraction(1))
    rows = [[zero] * N for _ in range(N)]
    for r in range(m - 1):
        for i in range(n):
            rows[r * n + i][(r + 1) * n + i] = one
    base = (m - 1) * n
    for j, A in enumerate(P.coeffs):
        for i in range(n):
            for c in range(n):
                rows[base + i][j * n + c] = A[i, c]
    return MaxMatrix(rows, P.backend)


def is_poly_eigenpair(P: MaxPoly, k, v: MaxMatrix) -> bool:
    """Exact check of ``P(k) v = k^m v`` with ``v != 0``."""
    if v.is_zero():
        return False
    k = k if isinstance(k, RootValue) else RootValue(k)
    return otimes(poly_eval(P, k), v) == scalar_scale(k ** P.m, v)


def poly_spectrum(P: MaxPoly) -> list[tuple[RootValue, MaxMatrix]]:
    """Verified spectrum ``{k : P(k) v = k^m v}``, largest first.

    Computed on the companion matrix; each witness is the first n-block of
    a companion eigenvector.
    """
    out = []
    for pair in eigen_spectrum(companion(P)):
        v = MaxMatrix([[pair.vector[i]] for i in range(P.n)], P.backend)
        if not is_poly_eigenpair(P, pair.value, v):
            raise AssertionError(f"companion eigenvector fails for k = {pair.value}")
        out.append((pair.value, normalize(v)))
    return out


def scalar_poly_spectrum(p: ScalarPoly | Sequence, m: int | None = None) -> list[RootValue]:
    """Solutions of ``p(k) = k^m``, largest first.

    The positive one is ``max_j a_j^(1/(m-j))`` over nonzero ``a_j``; zero
    is a solution iff ``a_0 = 0``.  An exponent m above the coefficient
    count pads with zero coefficients.
    """
    if not isinstance(p, ScalarPoly):
        p = ScalarPoly(tuple(p))
    m = p.m if m is None else m
    if m < p.m:
        raise MaxAlgebraError(f"exponent {m} is below the coefficient count {p.m}")
    p = ScalarPoly(p.coeffs + (0,) * (m - p.m))
    roots = [RootValue(a, m - j) for j, a in enumerate(p.coeffs) if a]
    out = []
    if roots:
        out.append(max(roots))
    if not p.coeffs[0]:
        out.append(RootValue(0))
    for k in out:
        if p(k) != k ** m:
            raise AssertionError(f"scalar root {k} fails substitution")
    return out


def poly_eta(P: MaxPoly, norm="linf"):
    return max(eta(A, norm) for A in P.coeffs)


def poly_eta_hat(P: MaxPoly) -> RootValue:
    return max(eta_hat(A) for A in P.coeffs)


def poly_norm(P: MaxPoly, norm="linf"):
    return max(induced_norm(A, norm) for A in P.coeffs)


@dataclass
class BoundsReport:
    """Three quantities of a chain ``lower <= middle <= upper``.

    ``verdict`` is the exact chain check.  Family reports also carry one
    row per horizon step in ``trajectory``.
    """

    lower: RootValue
    middle: RootValue
    upper: RootValue
    provenance: dict[str, str]
    verdict: bool
    norm: str = "linf"
    trajectory: list[dict] = field(default_factory=list)


def check_chain_single(P: MaxPoly, norm="linf") -> BoundsReport:
    """``eta_hat(P) <= rho(Sigma_P) <= eta(P)``."""
    lo = poly_eta_hat(P)
    mid = jsr(Family(P.sigma())).value
    up = RootValue(poly_eta(P, norm))
    return BoundsReport(
        lo, mid, up,
        provenance={
            "lower": "max cycle mean over coefficients",
            "middle": "cycle mean of the max-sum of distinct coefficients",
            "upper": f"max {norm} seminorm over coefficients",
        },
        verdict=lo <= mid <= up,
        norm=str(norm),
    )


def coefficient_pool(psi: Sequence[MaxPoly]) -> Family:
    """Distinct coefficient matrices of all members, named ``"<poly>:<j>"``."""
    pool: dict[MaxMatrix, str] = {}
    for p, P in enumerate(psi, 1):
        for j, A in enumerate(P.coeffs):
            pool.setdefault(A, f"{p}:{j}")
    return Family({name: A for A, name in pool.items()})


def check_family_bounds(psi: Sequence[MaxPoly], K: int, norm="linf",
                        limit: int = 100_000) -> BoundsReport:
    """Finite-horizon check of ``rho(pool) <= set growth <= m rho(pool)``.

    For each k <= K, with ``c_k`` the largest seminorm of a length-k product
    of pool matrices and ``g_k`` the k-th root of the largest polynomial
    seminorm over ``Psi^k``, the exact per-step chain is
    ``rho <= c_k^(1/k) <= g_k <= m c_k^(1/k)``
    where m is the largest coefficient count.
    """
    psi = list(psi)
    if not psi:
        raise MaxAlgebraError("empty polynomial family")
    total = sum(len(psi) ** k for k in range(1, K + 1))
    if total > limit:
        raise EnumerationLimitError(f"{total} polynomial products exceed {limit}")
    pool = coefficient_pool(psi)
    rho = jsr(pool).value
    m = max(P.m for P in psi)
    c = {k: max(eta(W, norm) for W in prods) for k, prods in products_by_length(pool, K, limit)}
    rows, ok = [], True
    level = list(dict.fromkeys(psi))
    for k in range(1, K + 1):
        g = RootValue(RootValue(max(poly_eta(Q, norm) for Q in level)), k)
        lo = RootValue(RootValue(c[k]), k)
        up = lo * m
        row = {
            "k": k,
            "coefficient_bound": lo,
            "growth": g,
            "upper": up,
            "rho_le_bound": rho <= lo,
            "bound_le_growth": lo <= g,
            "growth_le_upper": g <= up,
        }
        ok = ok and row["rho_le_bound"] and row["bound_le_growth"] and row["growth_le_upper"]
        rows.append(row)
        if k < K:
            level = list(dict.fromkeys(poly_multiply(Q, P) for Q in level for P in psi))
    return BoundsReport(
        rho, rows[-1]["growth"], rho * m,
        provenance={
            "lower": "jsr of the coefficient pool (cycle mean of its max-sum)",
            "middle": f"growth at horizon {K}: max {norm} seminorm over Psi^{K}, {K}-th root",
            "upper": f"m * jsr with m = {m} (largest coefficient count)",
        },
        verdict=ok,
        norm=str(norm),
        trajectory=rows,
    )


@dataclass(frozen=True)
class TriangularJsr:
    value: RootValue
    permutation: Permutation
    pools: tuple[tuple, ...]
    suprema: tuple
    jsr_value: RootValue

    @property
    def agrees(self) -> bool:
        return self.value == self.jsr_value


def _pool_matrices(psi) -> list[MaxMatrix]:
    if isinstance(psi, Family):
        return psi.matrices()
    items = list(psi)
    if items and isinstance(items[0], MaxMatrix):
        return list(dict.fromkeys(items))
    return coefficient_pool(items).matrices()


def triangular_jsr(psi) -> TriangularJsr:
    """JSR of a simultaneously triangularizable pool from its diagonal pools.

    Each position i contributes the supremum of the i-th diagonal entries
    after the common triangularizing permutation; the result is the largest
    of these and is cross-checked against :func:`jsr`.
    """
    mats = _pool_matrices(psi)
    sigma = find_common_triangularizer(mats)
    if sigma is None:
        raise PreconditionError("coefficient pool is not simultaneously triangularizable")
    tri = [permute_similarity(A, sigma) for A in mats]
    n = mats[0].rows
    pools = tuple(tuple(T[i, i] for T in tri) for i in range(n))
    sups = tuple(max(pool) for pool in pools)
    return TriangularJsr(RootValue(max(sups)), sigma, pools, sups, jsr(Family(mats)).value)


def diagonal_union_spectrum(P: MaxPoly) -> tuple[list[RootValue], bool]:
    """Union of the scalar spectra of the triangularized diagonals.

    Returns the union and whether it strictly exceeds :func:`poly_spectrum`.
    """
    sigma = find_common_triangularizer(P.sigma())
    if sigma is None:
        raise PreconditionError("coefficients are not simultaneously triangularizable")
    T = P.similar(sigma)
    union: set[RootValue] = set()
    for i in range(P.n):
        union.update(scalar_poly_spectrum([A[i, i] for A in T.coeffs]))
    verified = {k for k, _ in poly_spectrum(P)}
    return sorted(union, reverse=True), bool(union - verified)
