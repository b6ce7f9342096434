"""Word products, orbits, matrix periods and common eigenvectors.

A word ``w1 w2 ... wp`` over a family acts by ``A_wp ... A_w2 A_w1``, so the
first letter is applied first.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .core import Family, MaxMatrix, RootValue, oplus_all, otimes
from .errors import MaxAlgebraError, PreconditionError, ShapeError
from .graph import is_irreducible, max_cycle_mean
from .polynomial import MaxPoly, companion, poly_eval
from .spectral import eigen_spectrum, eigenvectors_for, jsr, kleene_star, normalize

DEFAULT_EPSILON = Fraction(1, 10**12)
DEFAULT_MAX_ITER = 10_000


def parse_word(F: Family, word) -> tuple[str, ...]:
    """Resolve a word into member names.

    A string is split on commas/whitespace when it contains any, else read
    letter by letter (or taken whole if it is itself a member name).
    """
    if isinstance(word, str):
        if "," in word or any(ch.isspace() for ch in word.strip()):
            symbols = [s for s in word.replace(",", " ").split() if s]
        elif word in F and not all(len(name) == 1 for name in F.names()):
            symbols = [word]
        else:
            symbols = list(word)
    else:
        symbols = [str(s) for s in word]
    if not symbols:
        raise MaxAlgebraError("empty word")
    for s in symbols:
        if s not in F:
            raise MaxAlgebraError(f"unknown symbol {s!r} in word; family has {F.names()}")
    return tuple(symbols)


def is_complete(F: Family, word) -> bool:
    """True when every member of F occurs in the word."""
    return set(parse_word(F, word)) == set(F.names())


def word_product(F: Family, word) -> MaxMatrix:
    M = MaxMatrix.identity(F.n, F.matrices()[0].backend)
    for s in parse_word(F, word):
        M = otimes(F[s], M)
    return M


def _sup_distance(a: MaxMatrix, b: MaxMatrix):
    out = 0
    for x, y in zip(a.flat(), b.flat()):
        try:
            d = abs(x - y)
        except TypeError:
            d = abs(float(x) - float(y))
        if d > out:
            out = d
    return out


@dataclass
class OrbitReport:
    """Outcome of iterating ``y_(k+1) = T y_k``.

    ``mode`` is one of ``exact-fixpoint``, ``exact-periodic``,
    ``converging``, ``diverged`` or ``inconclusive``; ``steps`` is the index
    of the reported ``state``.
    """

    mode: str
    steps: int
    state: MaxMatrix
    period: int | None = None
    transient: int | None = None
    limit: MaxMatrix | None = None
    rate: object = None
    distance: object = None
    iterates: list[MaxMatrix] = field(default_factory=list)


def orbit(T: MaxMatrix, x: MaxMatrix, epsilon=DEFAULT_EPSILON, max_iter: int = DEFAULT_MAX_ITER,
          keep: int = 64) -> OrbitReport:
    """Iterate exactly and classify the orbit of x.

    Exact fixpoints and cycles are found by hashing states.  Otherwise the
    coordinates unchanged by the last step form a candidate limit (others
    set to 0); once that candidate is an exact fixed point of T within
    ``epsilon`` of the iterate, the orbit is reported as converging, with
    ``rate`` the largest one-step ratio among the moving coordinates.
    """
    if not T.is_square or T.cols != x.rows or x.cols != 1:
        raise ShapeError(f"cannot iterate a {T.shape} matrix on a {x.shape} vector")
    if any(v < 0 for v in x.flat()):
        raise MaxAlgebraError("initial vector must be nonnegative")
    zero = x.flat()[0] * 0
    y = x
    seen = {y: 0}
    iterates = [y]
    for k in range(max_iter):
        nxt = otimes(T, y)
        if len(iterates) < keep:
            iterates.append(nxt)
        if nxt == y:
            return OrbitReport("exact-fixpoint", k, y, period=1, transient=k, limit=y,
                               distance=zero, iterates=iterates)
        if nxt in seen:
            start = seen[nxt]
            return OrbitReport("exact-periodic", k + 1, nxt, period=k + 1 - start,
                               transient=start, iterates=iterates)
        moving = [i for i, (a, b) in enumerate(zip(y, nxt)) if a != b]
        xi = MaxMatrix._wrap(tuple((zero if i in moving else b,) for i, b in enumerate(nxt)), nxt.backend)
        dist = _sup_distance(nxt, xi)
        if dist <= epsilon and otimes(T, xi) == xi:
            rate = max((b / a for i, (a, b) in enumerate(zip(y, nxt)) if i in moving and a), default=None)
            return OrbitReport("converging", k + 1, nxt, limit=xi, rate=rate, distance=dist,
                               iterates=iterates)
        if nxt.max_entry() * epsilon > 1:
            return OrbitReport("diverged", k + 1, nxt, iterates=iterates)
        seen[nxt] = k + 1
        y = nxt
    return OrbitReport("inconclusive", max_iter, y, iterates=iterates)


@dataclass(frozen=True)
class PeriodReport:
    """``A^(k0+p) = lam^p A^k0`` with least transient ``k0`` and period ``p``.

    ``complete`` is False when the state cap was hit; period and transient
    are then None.
    """

    period: int | None
    transient: int | None
    eigenvalue: RootValue
    complete: bool
    states: int

    @property
    def robust(self) -> bool | None:
        return None if self.period is None else self.period == 1


def matrix_period(A: MaxMatrix, cap: int = 512) -> PeriodReport:
    """Period and transient of an irreducible matrix via powers of ``A/mu(A)``."""
    if not A.is_square:
        raise ShapeError("period needs a square matrix")
    if not is_irreducible(A):
        raise PreconditionError("matrix is reducible; per(A) is defined for irreducible matrices")
    lam = max_cycle_mean(A).value
    if not lam:
        # only the 1x1 zero matrix: A^(0+1) = 0 = 0^1 A^0
        return PeriodReport(1, 0, lam, True, 1)
    B = A / lam
    seen: dict[MaxMatrix, int] = {}
    P = MaxMatrix.identity(A.rows, A.backend)
    for k in range(cap + 1):
        if P in seen:
            k0 = seen[P]
            return PeriodReport(k - k0, k0, lam, True, k)
        seen[P] = k
        P = otimes(B, P)
    return PeriodReport(None, None, lam, False, cap + 1)


def _eigenvalue_at(A: MaxMatrix, v: MaxMatrix):
    Av = otimes(A, v)
    i = next(i for i, x in enumerate(v) if x)
    alpha = Av[i] / v[i]
    if isinstance(alpha, RootValue) and alpha.as_fraction() is not None:
        alpha = alpha.as_fraction()
    return alpha if Av == alpha * v else None


def verify_common_eigenvector(F: Family, v: MaxMatrix) -> list | None:
    """Eigenvalues of every member at v (member order), or None if some
    member does not have v as an eigenvector."""
    if v.rows != F.n or v.cols != 1:
        raise ShapeError(f"vector of shape {v.shape} for a family of size {F.n}")
    if v.is_zero():
        return None
    row = []
    for A in F.matrices():
        alpha = _eigenvalue_at(A, v)
        if alpha is None:
            return None
        row.append(alpha)
    return row


@dataclass(frozen=True)
class CommonEigenSystem:
    """Common eigenvectors ``v_j`` with ``alpha[i][j]`` the eigenvalue of
    member i at ``v_j``."""

    family: Family
    vectors: tuple[MaxMatrix, ...]
    alpha: tuple[tuple, ...]

    @classmethod
    def from_vectors(cls, F: Family, vectors: Sequence[MaxMatrix]) -> CommonEigenSystem:
        cols = []
        for j, v in enumerate(vectors):
            row = verify_common_eigenvector(F, v)
            if row is None:
                raise PreconditionError(f"vector {j} is not a common eigenvector of the family")
            cols.append(row)
        alpha = tuple(tuple(col[i] for col in cols) for i in range(len(F)))
        return cls(F, tuple(vectors), alpha)

    def eigenvalue(self, name: str, j: int):
        return self.alpha[self.family.names().index(name)][j]

    def __len__(self) -> int:
        return len(self.vectors)


def common_eigenvectors(F: Family) -> CommonEigenSystem:
    """Best-effort search for common eigenvectors (exactly verified).

    Candidates: eigencone generators of each member, columns of the star of
    ``max_i A_i / alpha_i`` for every combination of member eigenvalues,
    and standard basis vectors.  Verified vectors with the same eigenvalue
    row are also max-summed, which stays inside their common cone.
    """
    candidates: list[MaxMatrix] = []
    spectra = []
    for A in F.matrices():
        pairs = eigen_spectrum(A)
        spectra.append([p.value for p in pairs if p.value])
        for p in pairs:
            candidates.extend(p.generators)
    for combo in itertools.product(*spectra):
        C = oplus_all(A / lam for A, lam in zip(F.matrices(), combo))
        star = kleene_star(C)
        candidates.extend(star.column(j) for j in range(F.n))
    candidates.extend(MaxMatrix.basis_vector(F.n, j, F.matrices()[0].backend) for j in range(F.n))

    groups: dict[tuple, list[MaxMatrix]] = {}
    seen = set()
    for v in candidates:
        if v.is_zero():
            continue
        v = normalize(v)
        if v in seen:
            continue
        seen.add(v)
        row = verify_common_eigenvector(F, v)
        if row is not None:
            groups.setdefault(tuple(row), []).append(v)
    vectors = []
    for row in sorted(groups, key=lambda r: [RootValue(a) for a in r], reverse=True):
        members = groups[row]
        top = normalize(oplus_all(members))
        ordered = [top] + [v for v in members if v != top]
        vectors.extend(ordered)
    vectors = list(dict.fromkeys(vectors))
    return CommonEigenSystem.from_vectors(F, vectors)


@dataclass(frozen=True)
class ConeDecomposition:
    """``x = max_j gamma_j v_j`` when ``in_cone``; otherwise the first
    coordinate the principal solution fails to reach."""

    coefficients: tuple
    in_cone: bool
    residual_index: int | None = None


def cone_decompose(x: MaxMatrix, E: Sequence[MaxMatrix]) -> ConeDecomposition:
    """Principal solution ``gamma_j = min_{i: v_ji > 0} x_i / v_ji``."""
    E = list(E)
    if not E:
        raise MaxAlgebraError("empty generating set")
    for v in E:
        if v.shape != x.shape:
            raise ShapeError(f"generator shape {v.shape} differs from {x.shape}")
    gammas = []
    for v in E:
        ratios = [xi / vi for xi, vi in zip(x, v) if vi]
        g = min(ratios) if ratios else 0
        if isinstance(g, RootValue) and g.as_fraction() is not None:
            g = g.as_fraction()
        gammas.append(g)
    recomposed = oplus_all(g * v for g, v in zip(gammas, E))
    if recomposed == x:
        return ConeDecomposition(tuple(gammas), True)
    bad = next(i for i, (a, b) in enumerate(zip(recomposed, x)) if a != b)
    return ConeDecomposition(tuple(gammas), False, bad)


@dataclass(frozen=True)
class LimitPrediction:
    """Predicted ``lim_k A_w^k x`` from the common-eigenvector expansion of x."""

    limit: MaxMatrix
    beta: tuple
    gamma: tuple
    word: tuple[str, ...]
    fixed_by_word: bool
    fixed_by: dict
    complete: bool


def predicted_limit(x: MaxMatrix, word, system: CommonEigenSystem,
                    F: Family | None = None) -> LimitPrediction:
    """Limit of ``A_w^k x`` for x in the cone of the common eigenvectors.

    Requires ``jsr(F) <= 1``, which forces every ``beta_j = prod_t alpha_(w_t, j)``
    into [0, 1]; the limit keeps exactly the terms with ``beta_j = 1``.
    """
    F = system.family if F is None else F
    rho = jsr(F).value
    if rho > 1:
        raise PreconditionError(f"jsr(F) = {rho} > 1")
    dec = cone_decompose(x, system.vectors)
    if not dec.in_cone:
        raise PreconditionError(
            f"x is not in the cone of the common eigenvectors (coordinate {dec.residual_index})")
    symbols = parse_word(F, word)
    names = system.family.names()
    beta = []
    for j in range(len(system.vectors)):
        b = 1
        for s in symbols:
            b = b * system.alpha[names.index(s)][j]
        beta.append(b)
    if any(b > 1 for b in beta):
        raise AssertionError("beta_j > 1 despite jsr(F) <= 1")
    zero = MaxMatrix.zeros(x.rows, 1, x.backend)
    xi = oplus_all([zero] + [g * v for g, v, b in zip(dec.coefficients, system.vectors, beta) if b == 1])
    Aw = word_product(F, symbols)
    fixed_by = {name: otimes(A, xi) == xi for name, A in F.items()}
    return LimitPrediction(xi, tuple(beta), dec.coefficients, symbols,
                           otimes(Aw, xi) == xi, fixed_by, set(symbols) == set(F.names()))


def check_poly_fixed_point(P: MaxPoly, xi: MaxMatrix) -> bool:
    """Exact test of ``P(1) xi = xi``."""
    if xi.rows != P.n or xi.cols != 1:
        raise ShapeError(f"vector of shape {xi.shape} for polynomial of size {P.n}")
    return otimes(poly_eval(P, 1), xi) == xi


def rational_between(lo, hi) -> Fraction:
    """A rational q with ``lo < q < hi`` (exact, ``lo < hi`` required)."""
    lo = lo if isinstance(lo, RootValue) else RootValue(lo)
    hi = hi if isinstance(hi, RootValue) else RootValue(hi)
    if not lo < hi:
        raise MaxAlgebraError(f"empty interval ({lo}, {hi})")
    guess = Fraction((float(lo) + float(hi)) / 2).limit_denominator(1000)
    if lo < guess < hi:
        return guess
    a = Fraction(0)
    b = hi.as_fraction()
    if b is None:
        b = Fraction(math.ceil(float(hi)) + 1)
    while True:
        mid = (a + b) / 2
        if mid <= lo:
            a = mid
        elif mid >= hi:
            b = mid
        else:
            return mid


@dataclass
class DecayCertificate:
    """Exact decay bound for ``A_w^k x`` under ``jsr(F) < 1``.

    With ``rho < rate < asymptotic_rate < 1`` and ``constant`` the largest
    entry of the star of ``S/rate`` (S the max-sum of F), every length-t
    product has sup-seminorm at most ``constant * rate^t``, hence at most
    ``asymptotic_rate^t`` once ``t >= threshold``.
    """

    rho: RootValue
    rate: Fraction
    asymptotic_rate: Fraction
    constant: Fraction
    threshold: int
    word_length: int
    norms: list
    bounds: list
    holds: bool
    asymptotic_holds: bool
    periodic_orbit_found: bool


def decay_certificate(F: Family, word, x: MaxMatrix, k: int) -> DecayCertificate:
    rho = jsr(F).value
    if not rho < 1:
        raise PreconditionError(f"jsr(F) = {rho} >= 1")
    symbols = parse_word(F, word)
    p = len(symbols)
    r = rational_between(rho, 1)
    r1 = rational_between(rho, r)
    S = F.sum().to_exact() if F.matrices()[0].backend == "exact" else F.sum()
    M = kleene_star(S / r1).max_entry()
    K = 0
    while M * (r1 / r) ** K > 1:
        K += 1
    Aw = word_product(F, symbols)
    xn = max(x.flat())
    norms, bounds = [], []
    y = x
    seen = {}
    periodic = False
    for t in range(k + 1):
        norms.append(max(y.flat()))
        bounds.append(M * r1 ** (t * p) * xn)
        if not y.is_zero():
            if y in seen:
                periodic = True
            seen[y] = t
        y = otimes(Aw, y)
    holds = all(a <= b for a, b in zip(norms, bounds))
    asym = all(norms[t] <= r ** (t * p) * xn for t in range(k + 1) if t * p >= K)
    return DecayCertificate(rho, r1, r, M, K, p, norms, bounds, holds, asym, periodic)


@dataclass(frozen=True)
class UnitMuEvidence:
    """Evidence that a nonzero periodic point of ``y -> C_P y`` forces
    ``mu(C_P) = 1``."""

    companion: MaxMatrix
    period: int
    orbit_sum: MaxMatrix
    orbit_sum_fixed: bool
    companion_irreducible: bool
    mu: RootValue

    @property
    def confirmed(self) -> bool:
        return self.orbit_sum_fixed and self.mu == 1


def periodic_point_implies_unit_mu(P: MaxPoly, y: MaxMatrix, q: int) -> UnitMuEvidence:
    for j, A in enumerate(P.coeffs):
        if not is_irreducible(A):
            raise PreconditionError(f"coefficient A_{j} is reducible")
    C = companion(P)
    if y.shape != (C.rows, 1):
        raise ShapeError(f"vector of shape {y.shape} for companion of order {C.rows}")
    if y.is_zero():
        raise PreconditionError("periodic point must be nonzero")
    if q < 1:
        raise PreconditionError("period must be >= 1")
    if not is_irreducible(C):
        raise PreconditionError("companion matrix is reducible")
    iterates = [y]
    for _ in range(q):
        iterates.append(otimes(C, iterates[-1]))
    if iterates[q] != y:
        raise PreconditionError(f"C_P^{q} y != y")
    z = oplus_all(iterates[:q])
    return UnitMuEvidence(C, q, z, otimes(C, z) == z, True, max_cycle_mean(C).value)


__all__ = [
    "CommonEigenSystem",
    "ConeDecomposition",
    "DecayCertificate",
    "LimitPrediction",
    "OrbitReport",
    "PeriodReport",
    "UnitMuEvidence",
    "check_poly_fixed_point",
    "common_eigenvectors",
    "cone_decompose",
    "decay_certificate",
    "eigenvectors_for",
    "is_complete",
    "matrix_period",
    "orbit",
    "parse_word",
    "periodic_point_implies_unit_mu",
    "predicted_limit",
    "rational_between",
    "verify_common_eigenvector",
    "word_product",
]
