"""Seminorms, max-eigenpairs and the joint spectral radius of a family."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction

from .core import Family, MaxMatrix, RootValue, oplus, oplus_all, otimes
from .errors import EnumerationLimitError, MaxAlgebraError, ShapeError
from .graph import frobenius_normal_form, max_cycle_mean


class SeminormKind(str, Enum):
    """Vector norm behind the seminorm; both are monotone and permutation invariant."""

    LINF = "linf"
    L1 = "l1"


def _kind(norm) -> SeminormKind:
    try:
        return SeminormKind(norm)
    except ValueError:
        raise MaxAlgebraError(f"unknown norm {norm!r}; expected 'linf' or 'l1'") from None


def vector_norm(x: MaxMatrix, norm="linf"):
    vals = x.flat()
    if _kind(norm) is SeminormKind.LINF:
        return max(vals)
    return sum(vals)


def eta(A: MaxMatrix, norm="linf"):
    """``sup ||A x|| / ||x||`` over nonzero nonnegative x, in closed form.

    For the sup norm this is the largest entry; for the sum norm the largest
    column sum.
    """
    if _kind(norm) is SeminormKind.LINF:
        return A.max_entry()
    return max(sum(col) for col in zip(*A.entries))


def induced_norm(A: MaxMatrix, norm="linf"):
    """Classical operator norm (row-sum for linf, column-sum for l1)."""
    if _kind(norm) is SeminormKind.LINF:
        return max(sum(row) for row in A.entries)
    return max(sum(col) for col in zip(*A.entries))


def eta_oracle(A: MaxMatrix, norm="linf", grid: int = 4, limit: int = 200_000):
    """Brute-force lower estimate of :func:`eta` on the grid ``{0, 1/grid, ..., 1}^n``."""
    if grid < 1:
        raise MaxAlgebraError("grid must be >= 1")
    if (grid + 1) ** A.cols > limit:
        raise EnumerationLimitError(f"{grid + 1}^{A.cols} grid points exceed {limit}")
    best = Fraction(0)
    for coords in itertools.product(range(grid + 1), repeat=A.cols):
        if not any(coords):
            continue
        x = MaxMatrix.vector([Fraction(c, grid) for c in coords])
        ratio = vector_norm(otimes(A, x), norm) / vector_norm(x, norm)
        if ratio > best:
            best = ratio
    return best


def eta_hat(A: MaxMatrix) -> RootValue:
    """``limsup eta(A^k)^(1/k)``, which equals the maximum cycle mean."""
    return max_cycle_mean(A).value


def eta_hat_estimate(A: MaxMatrix, K: int, norm="linf") -> list[RootValue]:
    """``[eta(A^k)^(1/k) for k = 1..K]``; every term is >= ``eta_hat(A)``."""
    out, P = [], A
    for k in range(1, K + 1):
        out.append(RootValue(RootValue(eta(P, norm)), k))
        if k < K:
            P = otimes(P, A)
    return out


def kleene_star(B: MaxMatrix) -> MaxMatrix:
    """Truncated star ``I + B + ... + B^(n-1)`` (max-sum)."""
    n = B.rows
    acc = MaxMatrix.identity(n, B.backend)
    P = acc
    for _ in range(n - 1):
        P = otimes(P, B)
        acc = oplus(acc, P)
    return acc


def normalize(v: MaxMatrix) -> MaxMatrix:
    """Scale a nonzero vector so its largest coordinate is 1."""
    top = v.max_entry()
    if not top:
        raise MaxAlgebraError("cannot normalize the zero vector")
    return v / top


def is_eigenpair(A: MaxMatrix, lam, v: MaxMatrix) -> bool:
    """Exact check of ``A v = lam v`` with ``v != 0``."""
    return not v.is_zero() and otimes(A, v) == lam * v


def eigenvectors_for(A: MaxMatrix, lam) -> list[MaxMatrix]:
    """Generators of the eigencone of ``lam > 0`` (possibly empty).

    Columns of ``(A/lam)*`` are tested one by one; the verified ones,
    normalized and deduplicated, are returned.  Irrational ``lam`` yields
    vectors with exact :class:`RootValue` coordinates.
    """
    if not A.is_square:
        raise ShapeError("eigenvectors need a square matrix")
    lam = lam if isinstance(lam, RootValue) else RootValue(lam)
    if not lam:
        raise MaxAlgebraError("eigenvalue 0 is handled by eigen_spectrum, not eigenvectors_for")
    if A.backend == "float":
        lam = float(lam)
    elif lam.as_fraction() is not None:
        lam = lam.as_fraction()
    star = kleene_star(A / lam)
    out, seen = [], set()
    for j in range(A.rows):
        v = star.column(j)
        if v.is_zero() or not is_eigenpair(A, lam, v):
            continue
        v = normalize(v)
        if v not in seen:
            seen.add(v)
            out.append(v)
    return out


@dataclass(frozen=True)
class EigenPair:
    value: RootValue
    vector: MaxMatrix
    class_id: int | None = None
    generators: tuple[MaxMatrix, ...] = ()


def eigen_spectrum(A: MaxMatrix) -> list[EigenPair]:
    """All max-eigenvalues of ``A``, largest first, each with a verified eigenvector.

    Candidates are the cycle means of the Frobenius classes; a candidate is
    kept only when an eigenvector is actually constructed for it.
    """
    fnf = frobenius_normal_form(A)
    class_mu = [max_cycle_mean(block).value for block in fnf.blocks]
    pairs = []
    for lam in sorted(set(class_mu), reverse=True):
        if lam:
            gens = eigenvectors_for(A, lam)
        else:
            gens = [MaxMatrix.basis_vector(A.rows, j, A.backend)
                    for j in range(A.rows) if not any(row[j] for row in A.entries)]
        if not gens:
            continue
        support = {i for i, x in enumerate(gens[0]) if x}
        cid = next((c for c, mu in enumerate(class_mu)
                    if mu == lam and support & set(fnf.components[c])), None)
        pairs.append(EigenPair(lam, gens[0], cid, tuple(gens)))
    return pairs


@dataclass
class JsrReport:
    """Exact joint spectral radius plus optional finite-horizon brackets.

    ``lower[k-1] = max mu(W)^(1/k)`` and ``upper[k-1] = max eta(W)^(1/k)``
    over products W of length k.
    """

    value: RootValue
    cycle: tuple[int, ...]
    assignment: tuple[str, ...]
    norm: str = "linf"
    lower: list[RootValue] = field(default_factory=list)
    upper: list[RootValue] = field(default_factory=list)

    @property
    def horizon(self) -> int:
        return len(self.lower)

    def brackets_hold(self) -> bool:
        return all(lo <= self.value <= up for lo, up in zip(self.lower, self.upper))

    def attained_at(self) -> int | None:
        """Least k with ``lower_k == value`` (None if not within the horizon)."""
        for k, lo in enumerate(self.lower, 1):
            if lo == self.value:
                return k
        return None


def _family(F) -> Family:
    if isinstance(F, Family):
        return F
    return Family(list(F))


def jsr(F) -> JsrReport:
    """``rho(F) = mu(max-sum of F)``, with the witness cycle and, per edge,
    a member attaining that entry of the max-sum."""
    F = _family(F)
    S = F.sum()
    cm = max_cycle_mean(S)
    assignment = []
    c = cm.cycle
    for k, u in enumerate(c):
        v = c[(k + 1) % len(c)]
        assignment.append(next(name for name, M in F.items() if M[u, v] == S[u, v]))
    return JsrReport(cm.value, c, tuple(assignment))


def products_by_length(F, K: int, limit: int = 100_000):
    """Yield ``(k, distinct products of length k)`` for k = 1..K.

    Raises EnumerationLimitError when ``sum |F|^k`` exceeds ``limit``.
    """
    mats = F.matrices() if isinstance(F, Family) else list(F)
    total = sum(len(mats) ** k for k in range(1, K + 1))
    if total > limit:
        raise EnumerationLimitError(f"{total} products over horizon {K} exceed {limit}")
    level = list(dict.fromkeys(mats))
    for k in range(1, K + 1):
        yield k, level
        if k < K:
            level = list(dict.fromkeys(otimes(A, P) for P in level for A in mats))


def jsr_bracket(F, K: int, norm="linf", limit: int = 100_000) -> JsrReport:
    """:func:`jsr` plus lower/upper brackets from all products up to length K."""
    F = _family(F)
    report = jsr(F)
    report.norm = _kind(norm).value
    for k, prods in products_by_length(F, K, limit):
        lo = max(max_cycle_mean(P).value for P in prods)
        up = max(RootValue(eta(P, norm)) for P in prods)
        report.lower.append(RootValue(lo, k))
        report.upper.append(RootValue(up, k))
    return report


def max_sum(F) -> MaxMatrix:
    return oplus_all(_family(F).matrices())
