"""Möbius function, Witt dimensions of free Lie algebras, partitions.

Each closed formula here has an enumeration oracle next to it
(:func:`lyndon_count`, :func:`partition_bruteforce`) that shares no code
with it.
"""

from __future__ import annotations

import math
import threading
from fractions import Fraction
from functools import lru_cache

from .errors import NonPositive, OracleBoundExceeded, SearchBoundExceeded

LYNDON_MAX_LETTERS = 4
LYNDON_MAX_LENGTH = 12
PARTITION_ORACLE_MAX = 60
THRESHOLD_WINDOW = 32


def mobius(d: int) -> int:
    if d < 1:
        raise NonPositive(f"Möbius function needs d >= 1, got {d}")
    result = 1
    p = 2
    while p * p <= d:
        if d % p == 0:
            d //= p
            if d % p == 0:
                return 0
            result = -result
        p += 1
    if d > 1:
        result = -result
    return result


def divisors(n: int) -> list[int]:
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def witt_dim(m: int, n: int) -> int:
    """Dimension of the degree-``n`` part of the free Lie algebra on ``m`` generators."""
    if m < 1 or n < 1:
        raise NonPositive(f"witt_dim needs m, n >= 1, got ({m}, {n})")
    total = sum(mobius(d) * m ** (n // d) for d in divisors(n))
    q, r = divmod(total, n)
    assert r == 0, f"Witt sum {total} not divisible by {n}"
    return q


@lru_cache(maxsize=None)
def _lyndon_counts(m: int, n: int) -> tuple[int, ...]:
    # Duval's generation of all Lyndon words of length <= n in lex order. At
    # full length the successors only bump the last letter, so that run of
    # words is counted in one step.
    counts = [0] * (n + 1)
    last = m - 1
    w = [-1]
    while w:
        k = len(w)
        if k == n:
            counts[n] += last - w[-1]
            w.pop()
        else:
            w[-1] += 1
            counts[k] += 1
            w = (w * (n // k + 1))[:n]
            if w[-1] != last:
                continue
        while w and w[-1] == last:
            w.pop()
    return tuple(counts)


def lyndon_count(m: int, n: int, *, max_letters: int = LYNDON_MAX_LETTERS, max_length: int = LYNDON_MAX_LENGTH) -> int:
    """Number of Lyndon words of length ``n`` over ``m`` letters, by generating them."""
    if m < 1 or n < 1:
        raise NonPositive(f"lyndon_count needs m, n >= 1, got ({m}, {n})")
    if m > max_letters or n > max_length:
        raise OracleBoundExceeded(f"({m}, {n}) exceeds the oracle bound ({max_letters}, {max_length})")
    if m == 1:
        return 1 if n == 1 else 0
    return _lyndon_counts(m, max_length)[n]


def _exceeds(w: int, m: int, exponent: Fraction) -> bool:
    """Exactly decide ``w > m ** exponent`` for a nonnegative rational exponent."""
    a, b = exponent.numerator, exponent.denominator
    return w**b > m**a


def witt_exponential_threshold(
    m: int, epsilon, *, window: int = THRESHOLD_WINDOW, search_limit: int = 4096
) -> int:
    """Smallest ``N`` with ``witt_dim(m, n) > m**((1 - epsilon) n)`` for every ``n`` in ``(N, N + window]``.

    The comparison is exact for rational ``epsilon``. The bound is only
    checked on the window, not beyond it.
    """
    eps = Fraction(epsilon)
    if m < 2 or not 0 < eps < 1:
        raise ValueError("need m >= 2 and 0 < epsilon < 1")
    good = {}

    def holds(n):
        if n not in good:
            good[n] = _exceeds(witt_dim(m, n), m, (1 - eps) * n)
        return good[n]

    for N in range(search_limit):
        if all(holds(n) for n in range(N + 1, N + window + 1)):
            return N
    raise SearchBoundExceeded(f"no threshold below {search_limit} for m={m}, epsilon={eps}")


class _Partitions:
    """Pentagonal-number recurrence with a growing memo list."""

    def __init__(self):
        self.values = [1]
        self._lock = threading.Lock()

    def __call__(self, n: int) -> int:
        if n < 0:
            raise NonPositive(f"partition needs n >= 0, got {n}")
        if n < len(self.values):
            return self.values[n]
        with self._lock:
            return self._extend(n)

    def _extend(self, n: int) -> int:
        vals = self.values
        for k in range(len(vals), n + 1):
            total = 0
            j = 1
            while True:
                g1 = j * (3 * j - 1) // 2
                if g1 > k:
                    break
                sign = 1 if j % 2 else -1
                total += sign * vals[k - g1]
                g2 = g1 + j
                if g2 <= k:
                    total += sign * vals[k - g2]
                j += 1
            vals.append(total)
        return vals[n]


partition = _Partitions()
partition.__doc__ = "Number of integer partitions of ``n`` (Euler's pentagonal recurrence)."


@lru_cache(maxsize=None)
def _bruteforce_counts(limit: int) -> tuple[int, ...]:
    """Count every non-increasing positive sequence with sum <= ``limit`` by depth-first generation.

    Sequences ending in a run of 1s are not expanded node by node: a node
    whose next part is forced to be 1 contributes one sequence to every
    larger sum, which is recorded in a difference array.
    """
    diff = [0] * (limit + 2)
    direct = [0] * (limit + 1)
    # stack entries: (current sum, largest allowed next part)
    stack = [(0, limit)]
    while stack:
        s, cap = stack.pop()
        if cap == 1 or s == limit:
            diff[s] += 1
            diff[limit + 1] -= 1
            continue
        direct[s] += 1
        stack.append((s + 1, 1))
        for part in range(2, min(cap, limit - s) + 1):
            stack.append((s + part, part))
    counts = []
    run = 0
    for t in range(limit + 1):
        run += diff[t]
        counts.append(direct[t] + run)
    return tuple(counts)


def partition_bruteforce(n: int, *, limit: int = PARTITION_ORACLE_MAX) -> int:
    """Number of partitions of ``n`` by exhaustive generation."""
    if n < 0:
        raise NonPositive(f"partition needs n >= 0, got {n}")
    if n > limit:
        raise OracleBoundExceeded(f"n={n} exceeds the enumeration bound {limit}")
    return _bruteforce_counts(max(n, min(limit, PARTITION_ORACLE_MAX)))[n]


def hardy_ramanujan(n: int) -> float:
    """Asymptotic ``exp(pi sqrt(2n/3)) / (4 n sqrt 3)``; neither an upper nor a lower bound."""
    if n < 1:
        raise NonPositive(f"hardy_ramanujan needs n >= 1, got {n}")
    return math.exp(math.pi * math.sqrt(2 * n / 3)) / (4 * n * math.sqrt(3))
