"""Root lattice vectors, the invariant form, connectivity and the K-set test."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import Iterable, Sequence

from .cartan import CartanMatrix, Symmetrizer, gram_matrix, symmetrize
from .errors import DimensionMismatch, ZeroVector


class Sign(str, Enum):
    POSITIVE = "positive"
    NEGATIVE = "negative"
    ZERO = "zero"
    MIXED = "mixed"


def sign_of(coeffs: Sequence[int]) -> Sign:
    pos = any(c > 0 for c in coeffs)
    neg = any(c < 0 for c in coeffs)
    if pos and neg:
        return Sign.MIXED
    if pos:
        return Sign.POSITIVE
    if neg:
        return Sign.NEGATIVE
    return Sign.ZERO


class RootVector(tuple):
    """Integer coefficients over the simple roots, as an immutable tuple.

    Supports ``+``, ``-``, unary minus and integer scaling; derived
    quantities are computed once per instance.
    """

    def __new__(cls, coeffs: Iterable[int] = ()):
        return super().__new__(cls, (int(c) for c in coeffs))

    @classmethod
    def simple(cls, i: int, n: int) -> "RootVector":
        return cls(1 if j == i else 0 for j in range(n))

    @classmethod
    def zero(cls, n: int) -> "RootVector":
        return cls([0] * n)

    @cached_property
    def height(self) -> int:
        return sum(self)

    @cached_property
    def support(self) -> frozenset[int]:
        return frozenset(i for i, c in enumerate(self) if c)

    @cached_property
    def sign(self) -> Sign:
        return sign_of(self)

    def is_zero(self) -> bool:
        return not any(self)

    def _check(self, other):
        if len(other) != len(self):
            raise DimensionMismatch(f"vectors of length {len(self)} and {len(other)}")

    def __add__(self, other):
        self._check(other)
        return RootVector(a + b for a, b in zip(self, other))

    def __sub__(self, other):
        self._check(other)
        return RootVector(a - b for a, b in zip(self, other))

    def __neg__(self):
        return RootVector(-a for a in self)

    def __mul__(self, k):
        if isinstance(k, int):
            return RootVector(k * a for a in self)
        return NotImplemented

    __rmul__ = __mul__

    def __repr__(self):
        return f"RootVector({list(self)})"


@dataclass(frozen=True)
class GramTable:
    """Exact Gram matrix ``B[i][j] = q_i A_ij`` of the invariant form on the root lattice."""

    matrix: tuple[tuple[int, ...], ...]

    @classmethod
    def from_cartan(cls, A: CartanMatrix, q: Symmetrizer | None = None) -> "GramTable":
        return cls(gram_matrix(A, q if q is not None else symmetrize(A)))

    @property
    def size(self) -> int:
        return len(self.matrix)

    def apply(self, x: Sequence[int]) -> tuple[int, ...]:
        """``B x`` as an integer tuple."""
        return tuple(sum(b * c for b, c in zip(row, x)) for row in self.matrix)


def form(B: GramTable, x: Sequence[int], y: Sequence[int]) -> int:
    """The invariant form ``x^T B y``."""
    n = B.size
    if len(x) != n or len(y) != n:
        raise DimensionMismatch(f"expected vectors of length {n}, got {len(x)} and {len(y)}")
    return sum(xi * bij * yj for xi, row in zip(x, B.matrix) if xi for bij, yj in zip(row, y) if yj)


def norm(B: GramTable, x: Sequence[int]) -> int:
    return form(B, x, x)


def pairing(A: CartanMatrix, x: Sequence[int], i: int) -> int:
    """``<x, alpha_i^vee> = sum_j x_j A_ij``."""
    return sum(a * c for a, c in zip(A.entries[i], x))


def pairings(A: CartanMatrix, x: Sequence[int]) -> tuple[int, ...]:
    return tuple(pairing(A, x, i) for i in A.index_set)


def _connected(A: CartanMatrix, support: frozenset[int] | set[int]) -> bool:
    if not support:
        return False
    start = min(support)
    seen = {start}
    stack = [start]
    while stack:
        i = stack.pop()
        for j in A.adjacency[i]:
            if j in support and j not in seen:
                seen.add(j)
                stack.append(j)
    return len(seen) == len(support)


def is_connected(A: CartanMatrix, x: Sequence[int]) -> bool:
    """Whether the Dynkin subdiagram on ``supp(x)`` is connected."""
    supp = frozenset(i for i, c in enumerate(x) if c)
    if not supp:
        raise ZeroVector("connectivity is undefined for the zero vector")
    return _connected(A, supp)


def in_K(A: CartanMatrix, x: Sequence[int]) -> bool:
    """Positive, connected, and non-positive against every simple coroot."""
    if sign_of(x) is not Sign.POSITIVE:
        return False
    return all(p <= 0 for p in pairings(A, x)) and is_connected(A, x)
