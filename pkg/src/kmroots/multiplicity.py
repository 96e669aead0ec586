"""Exact root multiplicities by Peterson's recurrence.

For ``beta`` in ``Q+`` let ``c_beta = sum_{k | beta} mult(beta/k) / k``.
Then

    ((beta, beta) - 2 (rho, beta)) c_beta = sum_{beta' + beta'' = beta} (beta', beta'') c_beta' c_beta''

with ``(rho, alpha_i) = q_i`` and ``c_{alpha_i} = 1``. Multiplicities are
recovered from ``c`` by subtracting the proper-divisor terms.

The table is filled one height at a time; each level reads only lower
levels. Internally every ``c_beta`` is stored multiplied by
``L = lcm(1..max_height)``, which clears all denominators, so the whole
computation runs on Python integers.
"""

from __future__ import annotations

import hashlib
import json
import logging
from fractions import Fraction
from functools import reduce as _fold
from itertools import combinations, islice, product
from math import gcd
from operator import mul, sub
from pathlib import Path
from typing import Iterator, Sequence

from .cartan import CartanMatrix, Symmetrizer, symmetrize
from .errors import (
    CorruptCache,
    DimensionMismatch,
    HeightBoundExceeded,
    NonIntegerMultiplicity,
    ZeroDenominator,
    ZeroVector,
)
from .lattice import GramTable, RootVector, _connected
from .weyl import RootKind, classify_root

log = logging.getLogger(__name__)

CACHE_FORMAT = 1
CACHE_SUFFIX = ".kmt"


def _lcm_upto(h: int) -> int:
    return _fold(lambda a, b: a * b // gcd(a, b), range(1, h + 1), 1)


def compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    """Nonnegative integer vectors of length ``parts`` summing to ``total``, in descending lex order."""
    for bars in combinations(range(total + parts - 1), parts - 1):
        prev = -1
        out = []
        for b in bars:
            out.append(b - prev - 1)
            prev = b
        out.append(total + parts - 2 - prev)
        yield tuple(out)


def matrix_id(A: CartanMatrix, q: Symmetrizer) -> str:
    """Content hash of the matrix rows and the symmetrizer."""
    payload = json.dumps({"rows": A.rows(), "q": list(q)}, separators=(",", ":"))
    return hashlib.sha256(payload.encode()).hexdigest()


class MultiplicityTable:
    """Memoized ``beta -> (mult, c_beta)`` for positive ``beta`` up to ``max_height``.

    Only vectors with ``c_beta != 0`` are stored; every other positive vector
    in range has multiplicity 0.
    """

    def __init__(self, A: CartanMatrix, max_height: int = 0, q: Symmetrizer | None = None):
        self.cartan = A
        self.symmetrizer = q if q is not None else symmetrize(A)
        self.gram = GramTable.from_cartan(A, self.symmetrizer)
        self.matrix_id = matrix_id(A, self.symmetrizer)
        self.max_height = 0
        self.degenerate: list[RootVector] = []
        self._scale = 1
        self._c: dict[tuple[int, ...], int] = {}
        self._mult: dict[tuple[int, ...], int] = {}
        self._norm: dict[tuple[int, ...], int] = {}
        if max_height > 0:
            self.extend(max_height)

    @property
    def rank(self) -> int:
        return self.cartan.size

    # -- queries -------------------------------------------------------

    def _positive_key(self, x: Sequence[int]) -> tuple[int, ...] | None:
        if len(x) != self.rank:
            raise DimensionMismatch(f"expected a vector of length {self.rank}, got {len(x)}")
        pos = any(c > 0 for c in x)
        neg = any(c < 0 for c in x)
        if pos and neg:
            return None
        if not pos and not neg:
            raise ZeroVector("the zero vector has no multiplicity")
        key = tuple(x) if pos else tuple(-c for c in x)
        if sum(key) > self.max_height:
            raise HeightBoundExceeded(
                f"{list(x)} has height {sum(key)}, table only reaches {self.max_height}"
            )
        return key

    def in_range(self, x: Sequence[int]) -> bool:
        """Whether :meth:`mult` can answer for ``x`` without extending."""
        return abs(sum(x)) <= self.max_height or (any(c > 0 for c in x) and any(c < 0 for c in x))

    def mult(self, x: Sequence[int]) -> int:
        """Root multiplicity; 0 for non-roots, including mixed-sign vectors."""
        key = self._positive_key(x)
        if key is None:
            return 0
        return self._mult.get(key, 0)

    def c(self, x: Sequence[int]) -> Fraction:
        """``c_beta`` for a positive vector ``beta``."""
        key = self._positive_key(x)
        if key is None or key != tuple(x):
            raise ValueError("c_beta is defined for positive vectors only")
        return Fraction(self._c.get(key, 0), self._scale)

    def ensure_height(self, h: int) -> "MultiplicityTable":
        if h > self.max_height:
            self.extend(h)
        return self

    def entries(self) -> list[tuple[RootVector, int, Fraction]]:
        """Stored ``(beta, mult, c_beta)`` sorted by height then lexicographically."""
        keys = sorted(self._c, key=lambda k: (sum(k), k))
        return [(RootVector(k), self._mult.get(k, 0), Fraction(self._c[k], self._scale)) for k in keys]

    def positive_roots(self, max_height: int | None = None) -> list[tuple[RootVector, int]]:
        h = self.max_height if max_height is None else max_height
        self.ensure_height(h)
        keys = sorted((k for k, m in self._mult.items() if m > 0 and sum(k) <= h), key=lambda k: (sum(k), k))
        return [(RootVector(k), self._mult[k]) for k in keys]

    # -- computation ---------------------------------------------------

    def _rescale(self, new_scale: int) -> None:
        f = new_scale // self._scale
        if f != 1:
            self._c = {k: v * f for k, v in self._c.items()}
        self._scale = new_scale

    def extend(self, max_height: int) -> None:
        """Compute every level up to ``max_height``."""
        if max_height <= self.max_height:
            return
        self._rescale(_lcm_upto(max_height))
        for h in range(self.max_height + 1, max_height + 1):
            level = self._compute_level(h)
            # Level barrier: publish only after the whole level is done.
            for key, (cval, mval) in level.items():
                self._c[key] = cval
                if mval:
                    self._mult[key] = mval
                self._norm[key] = self._form(key, key)
            self.max_height = h
        log.debug("table %s extended to height %d (%d entries)", self.matrix_id[:12], max_height, len(self._c))

    def _form(self, x, y) -> int:
        return sum(xi * bij * yj for xi, row in zip(x, self.gram.matrix) if xi for bij, yj in zip(row, y) if yj)

    def _compute_level(self, h: int) -> dict[tuple[int, ...], tuple[int, int]]:
        A = self.cartan
        level = {}
        for beta in sorted(compositions(h, self.rank)):
            supp = frozenset(i for i, b in enumerate(beta) if b)
            if not _connected(A, supp):
                continue
            cval, mval = self._compute_one(beta)
            if cval:
                level[beta] = (cval, mval)
        return level

    def _divisor_terms(self, beta: tuple[int, ...]) -> int:
        """``L * sum_{k >= 2, k | beta} mult(beta/k) / k``."""
        g = _fold(gcd, beta)
        total = 0
        for k in range(2, g + 1):
            if g % k == 0:
                m = self._mult.get(tuple(b // k for b in beta), 0)
                if m:
                    total += m * (self._scale // k)
        return total

    def _rhs(self, beta: tuple[int, ...]) -> int:
        """``L^2`` times the right-hand side of the recurrence, summed over a canonical half."""
        c = self._c
        nrm = self._norm
        Bb = tuple(sum(b * x for b, x in zip(row, beta)) for row in self.gram.matrix)
        size = 1
        for b in beta:
            size *= b + 1
        half = size // 2
        total = 0
        # product() enumerates the box lexicographically and beta' -> beta - beta'
        # reverses that order, so the first half holds exactly the pairs with
        # beta' < beta''; the middle element (odd size) is beta' = beta''.
        it = product(*(range(b + 1) for b in beta))
        for bp in islice(it, half):
            cp = c.get(bp)
            if cp is None:
                continue
            bpp = tuple(map(sub, beta, bp))
            cpp = c.get(bpp)
            if cpp is None:
                continue
            # (beta', beta'') = (beta', beta) - (beta', beta'); the pair is counted twice.
            w = sum(map(mul, bp, Bb)) - nrm[bp]
            if w:
                total += 2 * w * cp * cpp
        if size % 2:
            mid = tuple(b // 2 for b in beta)
            cm = c.get(mid)
            if cm is not None:
                total += nrm[mid] * cm * cm
        return total

    def _compute_one(self, beta: tuple[int, ...]) -> tuple[int, int]:
        L = self._scale
        q = self.symmetrizer.q
        factor = self._form(beta, beta) - 2 * sum(qi * b for qi, b in zip(q, beta))
        rhs = self._rhs(beta) if sum(beta) > 1 else 0
        divisor = self._divisor_terms(beta)
        if factor == 0:
            if rhs != 0:
                raise ZeroDenominator(beta, Fraction(rhs, L * L))
            # A vanishing factor forces (beta, beta) = 2 (rho, beta) > 0, so beta
            # is either a real root or not a root; Weyl reduction decides which.
            if sum(beta) == 1:
                m = 1
            else:
                kind = classify_root(self.cartan, self.gram, beta)
                if kind is RootKind.IMAGINARY:
                    raise AssertionError(f"imaginary root {list(beta)} with positive norm")
                m = 1 if kind is RootKind.REAL else 0
                self.degenerate.append(RootVector(beta))
            return m * L + divisor, m
        num, den = rhs, L * factor
        if num % den:
            raise NonIntegerMultiplicity(
                f"c at {list(beta)} = {Fraction(num, den * L)} has a denominator not dividing lcm(1..{self.max_height + 1})"
            )
        cval = num // den
        mL = cval - divisor
        if mL % L or mL < 0:
            raise NonIntegerMultiplicity(f"multiplicity at {list(beta)} would be {Fraction(mL, L)}")
        return cval, mL // L

    # -- persistence ---------------------------------------------------

    def header(self) -> dict:
        return {
            "format": CACHE_FORMAT,
            "matrix_hash": self.matrix_id,
            "name": self.cartan.name,
            "rows": self.cartan.rows(),
            "q": list(self.symmetrizer.q),
            "max_height": self.max_height,
        }

    def dumps(self) -> str:
        lines = [json.dumps(self.header(), sort_keys=True)]
        for beta, m, cval in self.entries():
            lines.append(" ".join(map(str, (*beta, m, cval.numerator, cval.denominator))))
        return "\n".join(lines) + "\n"


def cache_path(cache_dir: str | Path, mid: str) -> Path:
    return Path(cache_dir) / f"{mid}{CACHE_SUFFIX}"


def cache_store(table: MultiplicityTable, cache_dir: str | Path) -> Path:
    """Write ``table`` to ``cache_dir`` atomically and return the file path."""
    cache_dir = Path(cache_dir)
    cache_dir.mkdir(parents=True, exist_ok=True)
    path = cache_path(cache_dir, table.matrix_id)
    tmp = path.with_suffix(path.suffix + ".tmp")
    tmp.write_text(table.dumps())
    tmp.replace(path)
    return path


def cache_load(mid: str, cache_dir: str | Path) -> MultiplicityTable:
    """Load the table stored under ``mid``; every invariant is re-checked."""
    path = cache_path(cache_dir, mid)
    try:
        text = path.read_text()
    except FileNotFoundError:
        raise
    except OSError as exc:
        raise CorruptCache(f"cannot read {path}: {exc}") from exc
    return loads(text, expected_id=mid, source=str(path))


def loads(text: str, expected_id: str | None = None, source: str = "<cache>") -> MultiplicityTable:
    from .cartan import validate

    lines = text.splitlines()
    try:
        header = json.loads(lines[0])
        if header["format"] != CACHE_FORMAT:
            raise CorruptCache(f"{source}: unsupported format {header['format']}")
        A = validate(header["rows"], header.get("name", ""))
        q = Symmetrizer(tuple(int(v) for v in header["q"]))
        H = int(header["max_height"])
    except CorruptCache:
        raise
    except Exception as exc:
        raise CorruptCache(f"{source}: unreadable header ({exc})") from exc
    if symmetrize(A) != q:
        raise CorruptCache(f"{source}: stored symmetrizer does not match the matrix")
    mid = matrix_id(A, q)
    if header.get("matrix_hash") != mid:
        raise CorruptCache(f"{source}: header hash does not match the stored matrix")
    if expected_id is not None and expected_id != mid:
        raise CorruptCache(f"{source}: requested matrix id {expected_id} but file holds {mid}")

    table = MultiplicityTable(A, 0, q)
    n = A.size
    L = _lcm_upto(H)
    prev = None
    try:
        for lineno, line in enumerate(lines[1:], start=2):
            parts = [int(t) for t in line.split()]
            if len(parts) != n + 3:
                raise CorruptCache(f"{source}:{lineno}: expected {n + 3} integers")
            beta = tuple(parts[:n])
            m, num, den = parts[n:]
            order = (sum(beta), beta)
            if any(b < 0 for b in beta) or not any(beta) or sum(beta) > H:
                raise CorruptCache(f"{source}:{lineno}: vector {list(beta)} out of range")
            if prev is not None and order <= prev:
                raise CorruptCache(f"{source}:{lineno}: entries out of order")
            prev = order
            if den <= 0 or L % den:
                raise CorruptCache(f"{source}:{lineno}: bad denominator {den}")
            table._c[beta] = num * (L // den)
            if m:
                table._mult[beta] = m
            table._norm[beta] = table._form(beta, beta)
    except ValueError as exc:
        raise CorruptCache(f"{source}: {exc}") from exc
    table._scale = L
    table.max_height = H
    _recheck(table, source)
    return table


def _recheck(table: MultiplicityTable, source: str) -> None:
    A = table.cartan
    n = table.rank
    for i in range(n):
        e = tuple(1 if j == i else 0 for j in range(n))
        if table.max_height >= 1 and (table._mult.get(e) != 1 or table._c.get(e) != table._scale):
            raise CorruptCache(f"{source}: simple root {list(e)} does not have mult 1 and c 1")
    for beta, cval in table._c.items():
        m = table._mult.get(beta, 0)
        if m < 0:
            raise CorruptCache(f"{source}: negative multiplicity at {list(beta)}")
        if not _connected(A, frozenset(i for i, b in enumerate(beta) if b)):
            raise CorruptCache(f"{source}: disconnected vector {list(beta)} stored")
        if cval != m * table._scale + table._divisor_terms(beta):
            raise CorruptCache(f"{source}: c and multiplicities disagree at {list(beta)}")


def load_or_build(
    A: CartanMatrix, max_height: int, cache_dir: str | Path | None = None
) -> MultiplicityTable:
    """Load the cached table for ``A`` if present, extend it as needed, and store it back."""
    q = symmetrize(A)
    if cache_dir is None:
        return MultiplicityTable(A, max_height, q)
    mid = matrix_id(A, q)
    path = cache_path(cache_dir, mid)
    if path.exists():
        table = cache_load(mid, cache_dir)
        table.cartan = A
        if table.max_height < max_height:
            table.extend(max_height)
            cache_store(table, cache_dir)
        return table
    table = MultiplicityTable(A, max_height, q)
    cache_store(table, cache_dir)
    return table


def enumerate_roots(table: MultiplicityTable, max_height: int) -> list[tuple[RootVector, int]]:
    """Positive roots of height at most ``max_height`` with their multiplicities."""
    if max_height < 1:
        raise ValueError("height bound must be at least 1")
    return table.positive_roots(max_height)
