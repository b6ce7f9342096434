"""Digraph view of a max-times matrix.

Vertex ``i`` has an edge to ``j`` iff ``a_ij > 0``.  Strong components and
topological orders come from networkx; the maximum cycle mean is a
multiplicative Karp recurrence compared exactly through :class:`RootValue`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import networkx as nx

from .core import Family, MaxMatrix, Permutation, RootValue, oplus_all, permute_similarity
from .errors import EnumerationLimitError, ShapeError


def _require_square(A: MaxMatrix) -> None:
    if not A.is_square:
        raise ShapeError(f"expected a square matrix, got {A.shape}")


def support_graph(A: MaxMatrix, *, loops: bool = True) -> nx.DiGraph:
    """Weighted digraph ``G_A``; ``loops=False`` drops the diagonal."""
    _require_square(A)
    G = nx.DiGraph()
    G.add_nodes_from(range(A.rows))
    for i, row in enumerate(A.entries):
        for j, a in enumerate(row):
            if a and (loops or i != j):
                G.add_edge(i, j, weight=a)
    return G


@dataclass(frozen=True)
class SccDecomposition:
    """Strong components listed so condensation edges point forward."""

    components: tuple[tuple[int, ...], ...]
    component_of: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.components)


def scc_decompose(A: MaxMatrix) -> SccDecomposition:
    G = support_graph(A)
    C = nx.condensation(G)
    members = {c: tuple(sorted(C.nodes[c]["members"])) for c in C.nodes}
    order = list(nx.lexicographical_topological_sort(C, key=lambda c: members[c][0]))
    comps = tuple(members[c] for c in order)
    comp_of = [0] * A.rows
    for k, comp in enumerate(comps):
        for v in comp:
            comp_of[v] = k
    return SccDecomposition(comps, tuple(comp_of))


def is_irreducible(A: MaxMatrix) -> bool:
    """Strong connectivity of ``G_A``; a 1x1 matrix counts as irreducible."""
    _require_square(A)
    if A.rows == 1:
        return True
    return len(scc_decompose(A)) == 1


@dataclass(frozen=True)
class FnfForm:
    """Frobenius normal form ``P^-1 A P`` with irreducible diagonal blocks.

    ``access`` holds class pairs ``(i, j)`` such that class i reaches class j
    (reflexive).
    """

    permutation: Permutation
    permuted: MaxMatrix
    components: tuple[tuple[int, ...], ...]
    boundaries: tuple[tuple[int, int], ...]
    blocks: tuple[MaxMatrix, ...]
    access: frozenset

    def accesses(self, i: int, j: int) -> bool:
        return (i, j) in self.access


def frobenius_normal_form(A: MaxMatrix) -> FnfForm:
    scc = scc_decompose(A)
    order = [v for comp in scc.components for v in comp]
    sigma = Permutation(tuple(order))
    bounds, start = [], 0
    for comp in scc.components:
        bounds.append((start, start + len(comp)))
        start += len(comp)
    blocks = tuple(A.submatrix(comp) for comp in scc.components)

    cond = nx.DiGraph()
    cond.add_nodes_from(range(len(scc)))
    for i, row in enumerate(A.entries):
        for j, a in enumerate(row):
            ci, cj = scc.component_of[i], scc.component_of[j]
            if a and ci != cj:
                cond.add_edge(ci, cj)
    access = {(c, c) for c in cond.nodes}
    for c in cond.nodes:
        access.update((c, d) for d in nx.descendants(cond, c))
    return FnfForm(
        permutation=sigma,
        permuted=permute_similarity(A, sigma),
        components=scc.components,
        boundaries=tuple(bounds),
        blocks=blocks,
        access=frozenset(access),
    )


@dataclass(frozen=True)
class CycleMean:
    """``mu(C) = w(C) ** (1/|C|)`` with an optional witness cycle.

    ``cycle`` lists vertices ``c0 -> c1 -> ... -> c0`` (empty when the
    digraph is acyclic and the value is 0).
    """

    value: RootValue
    cycle: tuple[int, ...] = ()

    @property
    def length(self) -> int:
        return len(self.cycle)

    def __float__(self) -> float:
        return float(self.value)


def cycle_weight(A: MaxMatrix, cycle: Iterable[int]):
    cyc = list(cycle)
    w = 1
    for k, u in enumerate(cyc):
        w = w * A[u, cyc[(k + 1) % len(cyc)]]
    return w


def _rotate(cycle: list[int]) -> tuple[int, ...]:
    k = cycle.index(min(cycle))
    return tuple(cycle[k:] + cycle[:k])


def _split_cycles(walk: list[int]) -> list[list[int]]:
    """Cut a closed-or-open walk into the simple cycles it traverses."""
    stack: list[int] = []
    pos: dict[int, int] = {}
    out = []
    for v in walk:
        if v in pos:
            k = pos[v]
            cyc = stack[k:]
            out.append(cyc)
            for u in cyc[1:]:
                del pos[u]
            del stack[k + 1:]
        else:
            pos[v] = len(stack)
            stack.append(v)
    return out


def _karp_component(A: MaxMatrix, comp: tuple[int, ...]) -> CycleMean | None:
    N = len(comp)
    if N == 1:
        v = comp[0]
        a = A[v, v]
        return CycleMean(RootValue(a), (v,)) if a else None
    sub = A.submatrix(comp)
    d = sub.entries
    zero = 0
    # D[k][v]: heaviest k-edge walk from local vertex 0 to v (0 = no walk)
    D = [[zero] * N for _ in range(N + 1)]
    pred = [[-1] * N for _ in range(N + 1)]
    D[0][0] = 1
    for k in range(1, N + 1):
        prev, cur, pk = D[k - 1], D[k], pred[k]
        for u in range(N):
            du = prev[u]
            if not du:
                continue
            for v in range(N):
                a = d[u][v]
                if a:
                    p = du * a
                    if p > cur[v]:
                        cur[v] = p
                        pk[v] = u
    best, best_v = None, -1
    for v in range(N):
        dn = D[N][v]
        if not dn:
            continue
        worst = None
        for k in range(N):
            dk = D[k][v]
            if not dk:
                continue
            r = RootValue(RootValue(dn) / dk, N - k)
            if worst is None or r < worst:
                worst = r
        if worst is not None and (best is None or worst > best):
            best, best_v = worst, v
    if best is None:
        return None
    walk = [best_v]
    for k in range(N, 0, -1):
        walk.append(pred[k][walk[-1]])
    walk.reverse()
    cycles = [[comp[u] for u in c] for c in _split_cycles(walk)]
    witness = max(cycles, key=lambda c: RootValue(RootValue(cycle_weight(A, c)), len(c)))
    value = RootValue(RootValue(cycle_weight(A, witness)), len(witness))
    if value != best:
        raise AssertionError(f"Karp witness mismatch: {value} != {best}")
    return CycleMean(best, _rotate(witness))


def max_cycle_mean(A: MaxMatrix) -> CycleMean:
    """Exact maximum cycle mean ``mu(A)`` with a witness cycle."""
    best = None
    for comp in scc_decompose(A).components:
        cm = _karp_component(A, comp)
        if cm is not None and (best is None or cm.value > best.value):
            best = cm
    if best is None:
        zero = 0.0 if A.backend == "float" else 0
        return CycleMean(RootValue(zero), ())
    return best


def enumerate_cycle_means(A: MaxMatrix, max_n: int = 8) -> list[CycleMean]:
    """Every simple cycle of ``G_A`` with its exact mean, largest first.

    Brute force (Johnson's algorithm); intended as an oracle for
    :func:`max_cycle_mean`.
    """
    _require_square(A)
    if A.rows > max_n:
        raise EnumerationLimitError(f"dimension {A.rows} exceeds max_n={max_n}")
    G = support_graph(A)
    out = []
    for cyc in nx.simple_cycles(G):
        c = _rotate(list(cyc))
        out.append(CycleMean(RootValue(RootValue(cycle_weight(A, c)), len(c)), c))
    out.sort(key=lambda cm: cm.cycle)
    out.sort(key=lambda cm: cm.value, reverse=True)
    return out


def _as_matrices(F) -> list[MaxMatrix]:
    if isinstance(F, Family):
        return F.matrices()
    if isinstance(F, MaxMatrix):
        return [F]
    return list(F)


def find_common_triangularizer(F) -> Permutation | None:
    """A permutation making every member upper triangular, or None.

    Works on the off-diagonal support of the max-sum; the answer is its
    lexicographically smallest topological order.
    """
    mats = _as_matrices(F)
    for M in mats:
        _require_square(M)
    G = support_graph(oplus_all(mats), loops=False)
    if not nx.is_directed_acyclic_graph(G):
        return None
    return Permutation(tuple(nx.lexicographical_topological_sort(G)))


def triangularization_obstruction(F) -> tuple[int, ...] | None:
    """A cycle of length >= 2 in the off-diagonal support, if one exists."""
    G = support_graph(oplus_all(_as_matrices(F)), loops=False)
    try:
        edges = nx.find_cycle(G)
    except nx.NetworkXNoCycle:
        return None
    return _rotate([u for u, _ in edges])
