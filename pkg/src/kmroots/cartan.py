"""Generalized Cartan matrices: validation, symmetrizers, type, submatrices."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import reduce
from math import gcd
from typing import Iterable, Sequence

from .errors import EmptySubset, MatrixTooLarge, NotGCM, NotSymmetrizable

DEFAULT_MAX_SIZE = 16


@dataclass(frozen=True)
class CartanMatrix:
    """A validated generalized Cartan matrix over the index set ``0..n-1``.

    Build instances with :func:`validate`; the constructor does not check
    the defining conditions.
    """

    entries: tuple[tuple[int, ...], ...]
    name: str = ""
    adjacency: tuple[frozenset[int], ...] = field(default=(), compare=False, repr=False)

    def __post_init__(self):
        if not self.adjacency:
            adj = tuple(
                frozenset(j for j in range(len(self.entries)) if j != i and self.entries[i][j] != 0)
                for i in range(len(self.entries))
            )
            object.__setattr__(self, "adjacency", adj)

    @property
    def size(self) -> int:
        return len(self.entries)

    @property
    def index_set(self) -> range:
        return range(len(self.entries))

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def rows(self) -> list[list[int]]:
        return [list(r) for r in self.entries]

    def components(self) -> list[tuple[int, ...]]:
        """Connected components of the Dynkin diagram, each sorted, ordered by first index."""
        seen: set[int] = set()
        comps = []
        for start in self.index_set:
            if start in seen:
                continue
            comp = {start}
            queue = deque([start])
            while queue:
                i = queue.popleft()
                for j in self.adjacency[i]:
                    if j not in comp:
                        comp.add(j)
                        queue.append(j)
            seen |= comp
            comps.append(tuple(sorted(comp)))
        return comps

    def is_connected(self) -> bool:
        return len(self.components()) == 1

    def rank(self) -> int:
        return matrix_rank(self.entries)


def validate(raw: Sequence[Sequence[int]], name: str = "", max_size: int = DEFAULT_MAX_SIZE) -> CartanMatrix:
    """Check the defining conditions of a generalized Cartan matrix.

    Raises :class:`NotGCM` naming the first violated condition.
    """
    n = len(raw)
    if n == 0 or any(len(row) != n for row in raw):
        raise NotGCM(NotGCM.NOT_SQUARE)
    for row in raw:
        for a in row:
            if isinstance(a, bool) or int(a) != a:
                raise NotGCM(NotGCM.NOT_SQUARE)
    if n > max_size:
        raise MatrixTooLarge(f"matrix has {n} rows; the configured cap is {max_size}")
    entries = tuple(tuple(int(a) for a in row) for row in raw)
    for i in range(n):
        if entries[i][i] != 2:
            raise NotGCM(NotGCM.DIAGONAL, (i, i))
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            if entries[i][j] > 0:
                raise NotGCM(NotGCM.POSITIVE_OFF_DIAGONAL, (i, j))
            if (entries[i][j] == 0) != (entries[j][i] == 0):
                raise NotGCM(NotGCM.ZERO_SYMMETRY, (i, j))
    return CartanMatrix(entries, name)


@dataclass(frozen=True)
class Symmetrizer:
    """Positive integers ``q`` with ``q[i]*A[i][j] == q[j]*A[j][i]``.

    Normalized to be coprime on each connected component.
    """

    q: tuple[int, ...]

    def __iter__(self):
        return iter(self.q)

    def __getitem__(self, i):
        return self.q[i]

    def __len__(self):
        return len(self.q)


def _tree_path(parent: dict[int, int | None], i: int) -> list[int]:
    path = [i]
    while parent[path[-1]] is not None:
        path.append(parent[path[-1]])
    return path


def symmetrize(A: CartanMatrix) -> Symmetrizer:
    """Propagate ``q_j = q_i A_ij / A_ji`` along a BFS spanning tree, then check every edge.

    An edge that disagrees closes a cycle whose forward and backward entry
    products differ; that cycle is reported in :class:`NotSymmetrizable`.
    """
    q: dict[int, Fraction] = {}
    out = [0] * A.size
    for comp in A.components():
        root = comp[0]
        q[root] = Fraction(1)
        parent: dict[int, int | None] = {root: None}
        queue = deque([root])
        while queue:
            i = queue.popleft()
            for j in sorted(A.adjacency[i]):
                if j not in q:
                    q[j] = q[i] * A[i, j] / A[j, i]
                    parent[j] = i
                    queue.append(j)
        for i in comp:
            for j in sorted(A.adjacency[i]):
                if j > i and q[i] * A[i, j] != q[j] * A[j, i]:
                    pi, pj = _tree_path(parent, i), _tree_path(parent, j)
                    common = next(v for v in pi if v in pj)
                    cycle = pi[: pi.index(common) + 1] + list(reversed(pj[: pj.index(common)]))
                    fwd = bwd = 1
                    for a, b in zip(cycle, cycle[1:] + cycle[:1]):
                        fwd *= A[a, b]
                        bwd *= A[b, a]
                    raise NotSymmetrizable(cycle, fwd, bwd)
        denom = reduce(lambda x, y: x * y // gcd(x, y), (q[i].denominator for i in comp), 1)
        ints = [int(q[i] * denom) for i in comp]
        g = reduce(gcd, ints)
        for i, v in zip(comp, ints):
            out[i] = v // g
    return Symmetrizer(tuple(out))


def gram_matrix(A: CartanMatrix, q: Symmetrizer) -> tuple[tuple[int, ...], ...]:
    return tuple(tuple(q[i] * A[i, j] for j in A.index_set) for i in A.index_set)


# -- exact linear algebra -------------------------------------------------


def leading_minors(M: Sequence[Sequence[int]]) -> list[int]:
    """All leading principal minors of an integer matrix (fraction-free Bareiss).

    Bareiss without pivoting stalls on a zero pivot; minors from that point on
    are recomputed directly.
    """
    n = len(M)
    a = [list(map(int, row)) for row in M]
    minors = []
    prev = 1
    for k in range(n):
        pivot = a[k][k]
        minors.append(pivot)
        if pivot == 0:
            minors.extend(determinant([row[: m + 1] for row in M[: m + 1]]) for m in range(k + 1, n))
            return minors
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * pivot - a[i][k] * a[k][j]) // prev
        prev = pivot
    return minors


def determinant(M: Sequence[Sequence[int]]) -> int:
    n = len(M)
    if n == 0:
        return 1
    a = [[Fraction(x) for x in row] for row in M]
    det = Fraction(1)
    for k in range(n):
        p = next((i for i in range(k, n) if a[i][k] != 0), None)
        if p is None:
            return 0
        if p != k:
            a[k], a[p] = a[p], a[k]
            det = -det
        det *= a[k][k]
        for i in range(k + 1, n):
            f = a[i][k] / a[k][k]
            if f:
                for j in range(k, n):
                    a[i][j] -= f * a[k][j]
    return int(det)


def matrix_rank(M: Sequence[Sequence[int]]) -> int:
    a = [[Fraction(x) for x in row] for row in M]
    rows, cols = len(a), len(a[0]) if a else 0
    rank = 0
    for c in range(cols):
        p = next((i for i in range(rank, rows) if a[i][c] != 0), None)
        if p is None:
            continue
        a[rank], a[p] = a[p], a[rank]
        for i in range(rows):
            if i != rank and a[i][c] != 0:
                f = a[i][c] / a[rank][c]
                for j in range(c, cols):
                    a[i][j] -= f * a[rank][j]
        rank += 1
    return rank


def is_positive_definite(M: Sequence[Sequence[int]]) -> bool:
    return all(m > 0 for m in leading_minors(M))


def _kernel_vector(M: Sequence[Sequence[int]], drop: int) -> list[Fraction]:
    """Kernel generator of a corank-one matrix whose ``drop``-th principal complement is invertible."""
    n = len(M)
    keep = [i for i in range(n) if i != drop]
    # Solve P x = -b where P = M[keep, keep], b = M[keep, drop]; then set x_drop = 1.
    aug = [[Fraction(M[i][j]) for j in keep] + [Fraction(-M[i][drop])] for i in keep]
    m = len(keep)
    for c in range(m):
        p = next(i for i in range(c, m) if aug[i][c] != 0)
        aug[c], aug[p] = aug[p], aug[c]
        piv = aug[c][c]
        aug[c] = [x / piv for x in aug[c]]
        for i in range(m):
            if i != c and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[c])]
    x = [Fraction(0)] * n
    x[drop] = Fraction(1)
    for r, i in enumerate(keep):
        x[i] = aug[r][m]
    return x


# -- type classification --------------------------------------------------


class TypeTag(str, Enum):
    FINITE = "finite"
    AFFINE = "affine"
    INDEFINITE = "indefinite"


@dataclass(frozen=True)
class MatrixType:
    """Type of one connected component.

    ``null_root`` is indexed by the full index set and supported on
    ``component``; it is ``None`` unless the tag is affine.
    """

    tag: TypeTag
    component: tuple[int, ...]
    null_root: tuple[int, ...] | None = None


def classify_type(A: CartanMatrix, q: Symmetrizer | None = None) -> list[MatrixType]:
    """Finite/affine/indefinite tag per connected component, in exact arithmetic.

    Finite when every leading principal minor of the symmetrized matrix is
    positive. Affine when the determinant vanishes and the principal
    submatrix with one vertex removed is positive definite (so the form is
    semidefinite of corank one). Indefinite otherwise.
    """
    if q is None:
        q = symmetrize(A)
    B = gram_matrix(A, q)
    result = []
    for comp in A.components():
        sub = [[B[i][j] for j in comp] for i in comp]
        if is_positive_definite(sub):
            result.append(MatrixType(TypeTag.FINITE, comp))
            continue
        affine_root = None
        if determinant(sub) == 0:
            # Any vertex can be dropped for an affine diagram; try each so the
            # fallback never depends on the ordering of the component.
            for drop in range(len(comp)):
                rest = [[sub[i][j] for j in range(len(comp)) if j != drop] for i in range(len(comp)) if i != drop]
                if is_positive_definite(rest):
                    affine_root = _kernel_vector(sub, drop)
                    break
        if affine_root is None:
            result.append(MatrixType(TypeTag.INDEFINITE, comp))
            continue
        den = reduce(lambda x, y: x * y // gcd(x, y), (v.denominator for v in affine_root), 1)
        ints = [int(v * den) for v in affine_root]
        g = reduce(gcd, (abs(v) for v in ints))
        ints = [v // g for v in ints]
        if ints[0] < 0:
            ints = [-v for v in ints]
        full = [0] * A.size
        for i, v in zip(comp, ints):
            full[i] = v
        result.append(MatrixType(TypeTag.AFFINE, comp, tuple(full)))
    return result


def submatrix(A: CartanMatrix, J: Iterable[int]) -> CartanMatrix:
    """Principal submatrix on the indices ``J`` (kept in increasing order)."""
    idx = sorted(set(J))
    if not idx:
        raise EmptySubset("submatrix needs a nonempty index subset")
    for i in idx:
        if i not in A.index_set:
            raise IndexError(f"index {i} outside 0..{A.size - 1}")
    entries = tuple(tuple(A[i, j] for j in idx) for i in idx)
    return CartanMatrix(entries, A.name)
