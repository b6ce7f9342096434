"""Exact max-times kernel: scalars, root values, matrices, permutations.

The semiring is (R+, max, *).  Matrices default to the exact backend, whose
entries are :class:`fractions.Fraction` (or :class:`RootValue` when an
irrational cycle mean has been divided out).  The float backend stores plain
``float`` entries; every operation here is written against ``max`` and ``*``
only, so both backends share one code path.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering
from typing import Iterable, Iterator, Sequence

import gmpy2

from .errors import MaxAlgebraError, ShapeError

EXACT = "exact"
FLOAT = "float"
BACKENDS = (EXACT, FLOAT)


def scalar(value) -> Fraction:
    """Parse ``value`` as an exact nonnegative rational.

    Strings may be integers, decimals or ``"p/q"``; decimals are exact, so
    ``"0.72"`` is ``18/25``.  Python floats are read through their shortest
    decimal repr for the same reason.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(value, Fraction):
        out = value
    elif isinstance(value, int):
        out = Fraction(value)
    elif isinstance(value, float):
        if not math.isfinite(value):
            raise MaxAlgebraError(f"non-finite scalar {value!r}")
        out = Fraction(repr(value))
    elif isinstance(value, str):
        try:
            out = Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise MaxAlgebraError(f"cannot parse scalar {value!r}") from exc
    elif isinstance(value, RootValue):
        out = value.as_fraction()
        if out is None:
            raise MaxAlgebraError(f"{value} is not rational")
    else:
        raise TypeError(f"unsupported scalar type {type(value).__name__}")
    if out < 0:
        raise MaxAlgebraError(f"scalars must be nonnegative, got {value!r}")
    return out


def fscalar(value) -> float:
    """Float mirror of :func:`scalar`."""
    if isinstance(value, (float, RootValue)):
        out = float(value)
    else:
        out = float(scalar(value))
    if out < 0 or math.isnan(out):
        raise MaxAlgebraError(f"scalars must be nonnegative, got {value!r}")
    return out


def format_scalar(value) -> str:
    """Canonical text: ``"4"``, ``"18/25"``; root values as ``"w^(1/l)"``."""
    if isinstance(value, RootValue):
        return str(value)
    if isinstance(value, float):
        return repr(value)
    return str(Fraction(value))


def _iroot(n: int, e: int) -> int | None:
    root, exact = gmpy2.iroot(gmpy2.mpz(n), e)
    return int(root) if exact else None


def _log(x: Fraction) -> float:
    return math.log(x.numerator) - math.log(x.denominator)


@total_ordering
class RootValue:
    """The nonnegative real ``base ** (1/degree)``.

    Exact instances keep ``(base, degree)`` canonical: the degree is the
    least one for which the value raised to it is rational, so equal values
    have identical fields and hash alike (a degree-1 value hashes like the
    corresponding Fraction).  A float base collapses to degree 1.
    """

    __slots__ = ("base", "degree")

    def __init__(self, base, degree: int = 1):
        if isinstance(degree, bool) or not isinstance(degree, int) or degree < 1:
            raise MaxAlgebraError(f"root degree must be a positive integer, got {degree!r}")
        if isinstance(base, RootValue):
            base, degree = base.base, base.degree * degree
        if isinstance(base, float):
            if not base >= 0:
                raise MaxAlgebraError(f"root base must be nonnegative, got {base!r}")
            self.base = base ** (1.0 / degree) if degree > 1 else base
            self.degree = 1
            return
        base = scalar(base)
        if base == 0 or base == 1:
            degree = 1
        elif degree > 1:
            base, degree = self._reduce(base, degree)
        self.base = base
        self.degree = degree

    @staticmethod
    def _reduce(base: Fraction, degree: int) -> tuple[Fraction, int]:
        for e in range(degree, 1, -1):
            if degree % e:
                continue
            p = _iroot(base.numerator, e)
            if p is None:
                continue
            q = _iroot(base.denominator, e)
            if q is None:
                continue
            return Fraction(p, q), degree // e
        return base, degree

    @property
    def is_float(self) -> bool:
        return isinstance(self.base, float)

    def is_rational(self) -> bool:
        return self.degree == 1 and not self.is_float

    def as_fraction(self) -> Fraction | None:
        return self.base if self.is_rational() else None

    def __float__(self) -> float:
        if self.is_float or self.degree == 1:
            return float(self.base)
        if self.base == 0:
            return 0.0
        return math.exp(_log(self.base) / self.degree)

    def __bool__(self) -> bool:
        return self.base != 0

    def __repr__(self) -> str:
        return f"RootValue({format_scalar(self.base)!r}, {self.degree})"

    def __str__(self) -> str:
        if self.degree == 1:
            return format_scalar(self.base)
        return f"{self.base}^(1/{self.degree})"

    def __hash__(self) -> int:
        if self.degree == 1:
            return hash(self.base)
        return hash((self.base, self.degree))

    @staticmethod
    def _coerce(other) -> RootValue | None:
        if isinstance(other, RootValue):
            return other
        if isinstance(other, bool):
            return None
        if isinstance(other, (int, Fraction, float)):
            if other < 0:
                return None
            return RootValue(other)
        return None

    def __eq__(self, other) -> bool:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self.is_float or o.is_float:
            return float(self) == float(o)
        return self.base == o.base and self.degree == o.degree

    def __lt__(self, other) -> bool:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return cmp_root(self, o) < 0

    def __mul__(self, other) -> RootValue:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self.is_float or o.is_float:
            return RootValue(float(self) * float(o))
        if not self or not o:
            return RootValue(0)
        L = math.lcm(self.degree, o.degree)
        return RootValue(self.base ** (L // self.degree) * o.base ** (L // o.degree), L)

    __rmul__ = __mul__

    def __truediv__(self, other) -> RootValue:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if not o:
            raise ZeroDivisionError("division by a zero root value")
        if self.is_float or o.is_float:
            return RootValue(float(self) / float(o))
        L = math.lcm(self.degree, o.degree)
        return RootValue(self.base ** (L // self.degree) / o.base ** (L // o.degree), L)

    def __rtruediv__(self, other) -> RootValue:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def __pow__(self, k: int) -> RootValue:
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return RootValue(1) / self ** (-k)
        if self.is_float:
            return RootValue(self.base ** k)
        return RootValue(self.base ** k, self.degree)

    def root(self, k: int) -> RootValue:
        """The k-th root of this value."""
        return RootValue(self, k)


def cmp_root(x, y) -> int:
    """Exact three-way comparison of ``a**(1/p)`` and ``b**(1/q)``.

    Cross-powers: ``a**(1/p) <= b**(1/q)`` iff ``a**q <= b**p``.
    Accepts RootValue, Fraction or int operands.
    """
    x = x if isinstance(x, RootValue) else RootValue(x)
    y = y if isinstance(y, RootValue) else RootValue(y)
    if x.is_float or y.is_float:
        a, b = float(x), float(y)
    elif x.degree == y.degree:
        a, b = x.base, y.base
    else:
        a, b = x.base ** y.degree, y.base ** x.degree
    return (a > b) - (a < b)


def _zero(backend: str):
    return 0.0 if backend == FLOAT else Fraction(0)


def _one(backend: str):
    return 1.0 if backend == FLOAT else Fraction(1)


def _convert(value, backend: str):
    if backend == FLOAT:
        return fscalar(value)
    if isinstance(value, RootValue):
        if value.is_float:
            raise MaxAlgebraError("float root value in an exact matrix")
        f = value.as_fraction()
        return value if f is None else f
    return scalar(value)


class MaxMatrix:
    """Dense rectangular matrix over the max-times semiring.

    Immutable.  ``A | B`` is the entrywise max, ``A @ B`` the max-times
    product, ``A ** k`` the k-th power and ``c * A`` scalar scaling.
    Vectors are n x 1 matrices (see :meth:`vector`).
    """

    __slots__ = ("_data", "rows", "cols", "backend")

    def __init__(self, data: Iterable[Iterable], backend: str = EXACT):
        if backend not in BACKENDS:
            raise MaxAlgebraError(f"unknown backend {backend!r}")
        rows = tuple(tuple(_convert(x, backend) for x in row) for row in data)
        if not rows or not rows[0]:
            raise ShapeError("a matrix needs at least one row and one column")
        width = len(rows[0])
        if any(len(r) != width for r in rows):
            raise ShapeError("ragged rows")
        self._data = rows
        self.rows = len(rows)
        self.cols = width
        self.backend = backend

    @classmethod
    def _wrap(cls, rows: tuple, backend: str) -> MaxMatrix:
        obj = cls.__new__(cls)
        obj._data = rows
        obj.rows = len(rows)
        obj.cols = len(rows[0])
        obj.backend = backend
        return obj

    @classmethod
    def zeros(cls, rows: int, cols: int | None = None, backend: str = EXACT) -> MaxMatrix:
        cols = rows if cols is None else cols
        z = _zero(backend)
        return cls._wrap(tuple((z,) * cols for _ in range(rows)), backend)

    @classmethod
    def identity(cls, n: int, backend: str = EXACT) -> MaxMatrix:
        z, o = _zero(backend), _one(backend)
        return cls._wrap(tuple(tuple(o if i == j else z for j in range(n)) for i in range(n)), backend)

    @classmethod
    def vector(cls, entries: Iterable, backend: str = EXACT) -> MaxMatrix:
        return cls([[x] for x in entries], backend)

    @classmethod
    def basis_vector(cls, n: int, i: int, backend: str = EXACT) -> MaxMatrix:
        z, o = _zero(backend), _one(backend)
        return cls._wrap(tuple((o if k == i else z,) for k in range(n)), backend)

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    @property
    def is_vector(self) -> bool:
        return self.cols == 1

    @property
    def entries(self) -> tuple[tuple, ...]:
        return self._data

    def __getitem__(self, ij):
        if isinstance(ij, tuple):
            i, j = ij
            return self._data[i][j]
        if self.cols == 1:
            return self._data[ij][0]
        return self._data[ij]

    def __iter__(self) -> Iterator:
        """Iterate coordinates of a vector, rows of a matrix."""
        if self.cols == 1:
            return (r[0] for r in self._data)
        return iter(self._data)

    def __len__(self) -> int:
        return self.rows

    def flat(self) -> list:
        return [x for row in self._data for x in row]

    def to_list(self) -> list[list]:
        return [list(r) for r in self._data]

    def column(self, j: int) -> MaxMatrix:
        return MaxMatrix._wrap(tuple((r[j],) for r in self._data), self.backend)

    def row(self, i: int) -> MaxMatrix:
        return MaxMatrix._wrap((self._data[i],), self.backend)

    def transpose(self) -> MaxMatrix:
        return MaxMatrix._wrap(tuple(zip(*self._data)), self.backend)

    def submatrix(self, idx: Sequence[int], jdx: Sequence[int] | None = None) -> MaxMatrix:
        jdx = idx if jdx is None else jdx
        return MaxMatrix._wrap(tuple(tuple(self._data[i][j] for j in jdx) for i in idx), self.backend)

    def max_entry(self):
        return max(self.flat())

    def is_zero(self) -> bool:
        return not any(self.flat())

    def is_upper_triangular(self) -> bool:
        return all(not self._data[i][j] for i in range(self.rows) for j in range(min(i, self.cols)))

    def is_diagonal(self) -> bool:
        return all(not self._data[i][j] for i in range(self.rows) for j in range(self.cols) if i != j)

    def diagonal(self) -> list:
        return [self._data[i][i] for i in range(min(self.rows, self.cols))]

    def to_float(self) -> MaxMatrix:
        return MaxMatrix._wrap(tuple(tuple(float(x) for x in r) for r in self._data), FLOAT)

    def to_exact(self) -> MaxMatrix:
        return MaxMatrix(self._data, EXACT)

    def leq(self, other: MaxMatrix) -> bool:
        """Entrywise ``self <= other``."""
        _same_shape(self, other)
        return all(a <= b for a, b in zip(self.flat(), other.flat()))

    def __eq__(self, other) -> bool:
        if not isinstance(other, MaxMatrix):
            return NotImplemented
        return self.shape == other.shape and self._data == other._data

    def __hash__(self) -> int:
        return hash(self._data)

    def __or__(self, other: MaxMatrix) -> MaxMatrix:
        return oplus(self, other)

    def __matmul__(self, other: MaxMatrix) -> MaxMatrix:
        return otimes(self, other)

    def __pow__(self, k: int) -> MaxMatrix:
        return mat_power(self, k)

    def __rmul__(self, c) -> MaxMatrix:
        return scalar_scale(c, self)

    def __truediv__(self, c) -> MaxMatrix:
        if isinstance(c, RootValue) and c.as_fraction() is None:
            inv = RootValue(1) / c
        elif self.backend == FLOAT:
            inv = 1.0 / fscalar(c)
        else:
            inv = Fraction(1) / scalar(c)
        return scalar_scale(inv, self)

    def __repr__(self) -> str:
        body = ", ".join("[" + ", ".join(format_scalar(x) for x in r) + "]" for r in self._data)
        return f"MaxMatrix([{body}])"

    def __str__(self) -> str:
        cells = [[format_scalar(x) for x in r] for r in self._data]
        width = max(len(c) for r in cells for c in r)
        return "\n".join(" ".join(c.rjust(width) for c in r) for r in cells)


def _same_shape(A: MaxMatrix, B: MaxMatrix) -> None:
    if A.shape != B.shape:
        raise ShapeError(f"shape mismatch: {A.shape} vs {B.shape}")


def _result_backend(A: MaxMatrix, B: MaxMatrix) -> str:
    return FLOAT if FLOAT in (A.backend, B.backend) else EXACT


def oplus(A: MaxMatrix, B: MaxMatrix) -> MaxMatrix:
    """Entrywise maximum."""
    _same_shape(A, B)
    return MaxMatrix._wrap(
        tuple(tuple(a if a >= b else b for a, b in zip(ra, rb)) for ra, rb in zip(A._data, B._data)),
        _result_backend(A, B),
    )


def oplus_all(matrices: Iterable[MaxMatrix]) -> MaxMatrix:
    it = iter(matrices)
    try:
        acc = next(it)
    except StopIteration:
        raise MaxAlgebraError("max-sum of an empty collection") from None
    for M in it:
        acc = oplus(acc, M)
    return acc


def otimes(A: MaxMatrix, B: MaxMatrix) -> MaxMatrix:
    """Max-times product ``(AB)_ij = max_k a_ik * b_kj``."""
    if A.cols != B.rows:
        raise ShapeError(f"cannot multiply {A.shape} by {B.shape}")
    backend = _result_backend(A, B)
    zero = _zero(backend)
    bcols = list(zip(*B._data))
    out = []
    for ra in A._data:
        nz = [(k, a) for k, a in enumerate(ra) if a]
        row = []
        for bc in bcols:
            best = zero
            for k, a in nz:
                b = bc[k]
                if b:
                    p = a * b
                    if p > best:
                        best = p
            row.append(best)
        out.append(tuple(row))
    return MaxMatrix._wrap(tuple(out), backend)


def mat_power(A: MaxMatrix, k: int) -> MaxMatrix:
    """``A ** k`` by repeated squaring; ``A ** 0`` is the identity."""
    if not A.is_square:
        raise ShapeError(f"power of a non-square {A.shape} matrix")
    if k < 0:
        raise MaxAlgebraError("negative matrix power")
    result = MaxMatrix.identity(A.rows, A.backend)
    base = A
    while k:
        if k & 1:
            result = otimes(result, base)
        k >>= 1
        if k:
            base = otimes(base, base)
    return result


def scalar_scale(c, A: MaxMatrix) -> MaxMatrix:
    """Entrywise ``c * a_ij`` for a nonnegative scalar or root value ``c``."""
    if A.backend == FLOAT:
        c = fscalar(c)
    elif not isinstance(c, RootValue):
        c = scalar(c)
    elif c.as_fraction() is not None:
        c = c.as_fraction()
    if isinstance(c, RootValue):
        rows = tuple(tuple(_settle(c * x) if x else Fraction(0) for x in r) for r in A._data)
    else:
        rows = tuple(tuple(c * x for x in r) for r in A._data)
    return MaxMatrix._wrap(rows, A.backend)


def _settle(x):
    """Demote a rational RootValue to a Fraction so hashing stays uniform."""
    if isinstance(x, RootValue):
        f = x.as_fraction()
        return x if f is None else f
    return x


@dataclass(frozen=True)
class Permutation:
    """A bijection of ``{0..n-1}`` stored as its image tuple.

    ``permute_similarity(A, sigma)[i, j] == A[sigma[i], sigma[j]]``.
    """

    image: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "image", tuple(int(i) for i in self.image))
        if sorted(self.image) != list(range(len(self.image))):
            raise MaxAlgebraError(f"not a permutation: {self.image}")

    @classmethod
    def identity(cls, n: int) -> Permutation:
        return cls(tuple(range(n)))

    @classmethod
    def transposition(cls, n: int, i: int, j: int) -> Permutation:
        img = list(range(n))
        img[i], img[j] = img[j], img[i]
        return cls(tuple(img))

    def __len__(self) -> int:
        return len(self.image)

    def __getitem__(self, i: int) -> int:
        return self.image[i]

    def inverse(self) -> Permutation:
        inv = [0] * len(self.image)
        for i, s in enumerate(self.image):
            inv[s] = i
        return Permutation(tuple(inv))

    def compose(self, other: Permutation) -> Permutation:
        """``(self o other)(i) = self(other(i))``."""
        return Permutation(tuple(self.image[j] for j in other.image))

    def matrix(self, backend: str = EXACT) -> MaxMatrix:
        """Permutation matrix P with ``P e_l = e_sigma(l)``."""
        n = len(self.image)
        z, o = _zero(backend), _one(backend)
        rows = [[z] * n for _ in range(n)]
        for col, r in enumerate(self.image):
            rows[r][col] = o
        return MaxMatrix._wrap(tuple(tuple(r) for r in rows), backend)

    def cycles(self) -> list[tuple[int, ...]]:
        seen, out = set(), []
        for start in range(len(self.image)):
            if start in seen:
                continue
            cyc, i = [], start
            while i not in seen:
                seen.add(i)
                cyc.append(i)
                i = self.image[i]
            if len(cyc) > 1:
                out.append(tuple(cyc))
        return out

    def __str__(self) -> str:
        cyc = self.cycles()
        if not cyc:
            return "()"
        return "".join("(" + " ".join(str(i + 1) for i in c) + ")" for c in cyc)


def permute_similarity(A: MaxMatrix, sigma: Permutation) -> MaxMatrix:
    """``P^-1 A P`` for the permutation matrix of ``sigma``."""
    if not A.is_square:
        raise ShapeError("similarity needs a square matrix")
    if len(sigma) != A.rows:
        raise ShapeError(f"permutation of size {len(sigma)} for a {A.shape} matrix")
    s = sigma.image
    d = A._data
    return MaxMatrix._wrap(tuple(tuple(d[si][sj] for sj in s) for si in s), A.backend)


def is_generalized_permutation(A: MaxMatrix) -> bool:
    """True iff every row and every column has exactly one positive entry."""
    if not A.is_square:
        raise ShapeError("generalized permutation test needs a square matrix")
    rows_ok = all(sum(1 for x in r if x) == 1 for r in A._data)
    cols_ok = all(sum(1 for x in c if x) == 1 for c in zip(*A._data))
    return rows_ok and cols_ok


class Family:
    """A named, ordered, finite set of equal-size square matrices."""

    def __init__(self, members, names: Sequence[str] | None = None):
        if isinstance(members, Family):
            items = list(members.items())
        elif isinstance(members, dict):
            items = list(members.items())
        else:
            mats = list(members)
            if names is None:
                names = [str(i + 1) for i in range(len(mats))]
            if len(names) != len(mats):
                raise MaxAlgebraError("names and matrices differ in length")
            items = list(zip(names, mats))
        if not items:
            raise MaxAlgebraError("empty family")
        n = items[0][1].rows
        for name, M in items:
            if not isinstance(M, MaxMatrix):
                raise TypeError(f"member {name!r} is not a MaxMatrix")
            if not M.is_square or M.rows != n:
                raise ShapeError(f"member {name!r} has shape {M.shape}, expected ({n}, {n})")
        if len({str(k) for k, _ in items}) != len(items):
            raise MaxAlgebraError("duplicate member names")
        self._items = tuple((str(k), M) for k, M in items)
        self.n = n

    def names(self) -> list[str]:
        return [k for k, _ in self._items]

    def matrices(self) -> list[MaxMatrix]:
        return [M for _, M in self._items]

    def items(self):
        return list(self._items)

    def __getitem__(self, name: str) -> MaxMatrix:
        for k, M in self._items:
            if k == name:
                return M
        raise KeyError(name)

    def __contains__(self, name) -> bool:
        return any(k == name for k, _ in self._items)

    def __len__(self) -> int:
        return len(self._items)

    def __iter__(self):
        return iter(self.matrices())

    def __eq__(self, other) -> bool:
        if not isinstance(other, Family):
            return NotImplemented
        return self._items == other._items

    def __repr__(self) -> str:
        return f"Family({dict(self._items)!r})"

    def sum(self) -> MaxMatrix:
        """``S(F)``, the max-sum of all members."""
        return oplus_all(self.matrices())

    def map(self, fn) -> Family:
        return Family({k: fn(M) for k, M in self._items})

    def scaled(self, c) -> Family:
        return self.map(lambda M: scalar_scale(c, M))
