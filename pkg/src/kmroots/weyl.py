"""Simple reflections and reduction of lattice vectors to the fundamental region.

Reduction is exact: a positive root that is not simple always has a positive
pairing with some simple coroot unless it lies in ``-C``, and reflecting it
there yields a positive root of smaller height. So a positive vector is a
real root iff reduction reaches a simple root, an imaginary root iff it
stops inside ``K``, and not a root otherwise.
"""

from __future__ import annotations

from enum import Enum
from typing import Sequence

from .cartan import CartanMatrix
from .errors import NotARoot, NotPositive, ZeroVector
from .lattice import GramTable, RootVector, Sign, is_connected, norm, pairing, sign_of

WeylWord = tuple[int, ...]


class RootKind(str, Enum):
    REAL = "real"
    IMAGINARY = "imaginary"
    NOT_A_ROOT = "not-a-root"


def reflect(A: CartanMatrix, i: int, x: Sequence[int]) -> RootVector:
    """``x - <x, alpha_i^vee> alpha_i``."""
    p = pairing(A, x, i)
    out = list(x)
    out[i] -= p
    return RootVector(out)


def apply_word(A: CartanMatrix, word: Sequence[int], x: Sequence[int]) -> RootVector:
    """Apply the letters of ``word`` to ``x`` in order (first letter first)."""
    v = RootVector(x)
    for i in word:
        v = reflect(A, i, v)
    return v


def _is_simple(x: Sequence[int]) -> bool:
    return sum(x) == 1 and all(c in (0, 1) for c in x)


def reduce(A: CartanMatrix, x: Sequence[int]) -> tuple[RootVector, WeylWord]:
    """Lower the height of a positive vector by simple reflections.

    At each step the smallest index with positive pairing is used. Stops at
    a simple root, at a vector with all pairings non-positive, or right
    after a reflection that leaves the positive cone; in the last case the
    returned vector is the non-positive one, so replaying the word on ``x``
    always reproduces the result.
    """
    v = list(x)
    if sign_of(v) is not Sign.POSITIVE:
        raise NotPositive(f"{list(x)} is not a positive vector")
    word = []
    rows = A.entries
    n = len(v)
    while not _is_simple(v):
        for i in range(n):
            p = sum(a * c for a, c in zip(rows[i], v))
            if p > 0:
                break
        else:
            break
        v[i] -= p
        word.append(i)
        if v[i] < 0:
            break
    return RootVector(v), tuple(word)


def classify_root(A: CartanMatrix, B: GramTable, x: Sequence[int]) -> RootKind:
    """Real, imaginary or not a root, decided by Weyl reduction.

    The result is cross-checked against the sign of the norm; a mismatch is
    an internal error.
    """
    x = RootVector(x)
    s = x.sign
    if s is Sign.ZERO:
        raise ZeroVector("the zero vector is not classified")
    if s is Sign.MIXED:
        return RootKind.NOT_A_ROOT
    if s is Sign.NEGATIVE:
        x = -x
    end, _ = reduce(A, x)
    if _is_simple(end):
        kind = RootKind.REAL
    elif end.sign is Sign.POSITIVE and is_connected(A, end):
        kind = RootKind.IMAGINARY
    else:
        return RootKind.NOT_A_ROOT
    nx = norm(B, x)
    if (kind is RootKind.REAL) != (nx > 0):
        raise AssertionError(f"{list(x)} classified {kind.value} but has norm {nx}")
    return kind


def is_root(A: CartanMatrix, B: GramTable, x: Sequence[int]) -> bool:
    return any(x) and classify_root(A, B, x) is not RootKind.NOT_A_ROOT


def orbit_reduce_pair(
    A: CartanMatrix, B: GramTable, alpha: Sequence[int], beta: Sequence[int]
) -> tuple[RootVector, RootVector, WeylWord]:
    """Move ``beta`` to its reduced representative and carry ``alpha`` along.

    For positive imaginary ``beta`` the image lies in ``K``; for a negative
    one it is minus an element of ``K``; real roots land on ``±`` a simple
    root. The same word is applied to ``alpha``, so the form is preserved.
    """
    beta = RootVector(beta)
    if not any(beta) or classify_root(A, B, beta) is RootKind.NOT_A_ROOT:
        raise NotARoot(beta)
    positive = beta.sign is Sign.POSITIVE
    _, word = reduce(A, beta if positive else -beta)
    return apply_word(A, word, alpha), apply_word(A, word, beta), word
