"""Structural claims about roots, checked against computed tables.

Every check walks a corpus of matrices, counts the instances it tested and
records each failure with the vectors needed to rerun it in isolation.
Asymptotic claims are never asserted; only the finite inequalities behind
them are.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from itertools import product
from pathlib import Path
from typing import Callable, Sequence

from .cartan import CartanMatrix, TypeTag, classify_type, validate
from .combinatorics import partition
from .errors import CertificateViolated
from .lattice import RootVector, in_K, norm, form
from .multiplicity import MultiplicityTable, load_or_build
from .strings import (
    GrowthTag,
    StringTag,
    analyze,
    small_multiple_witness,
    witt_samples,
    _period,
)
from .weyl import RootKind, classify_root

DEFAULT_HEIGHT = 12
TABLE_HEIGHT = 30
AFFINE_K_MAX = 10
PARTITION_K_MAX = 8
STRING_WINDOW = (-12, 12)
STRING_ALPHA_HEIGHT = 4
STRING_BETA_HEIGHT = 3

DEFAULT_CORPUS: list[tuple[str, list[list[int]]]] = [
    ("A2", [[2, -1], [-1, 2]]),
    ("A1^(1)", [[2, -2], [-2, 2]]),
    ("A2^(1)", [[2, -1, -1], [-1, 2, -1], [-1, -1, 2]]),
    ("twisted-affine-rank3", [[2, -2, 0], [-1, 2, -1], [0, -2, 2]]),
    ("hyperbolic-rank2", [[2, -3], [-3, 2]]),
    ("rank3-affine-subdiagram", [[2, -2, 0], [-2, 2, -1], [0, -1, 2]]),
]


def default_corpus() -> list[CartanMatrix]:
    return [validate(rows, name) for name, rows in DEFAULT_CORPUS]


@dataclass
class CheckResult:
    name: str
    anchor: str
    instances: int = 0
    failures: list[dict] = field(default_factory=list)
    runtime: float = 0.0

    @property
    def passed(self) -> bool:
        return not self.failures

    def fail(self, matrix: str, **witness) -> None:
        self.failures.append({"matrix": matrix, **witness})

    def to_dict(self) -> dict:
        # runtime stays out so that reports are byte-identical across runs
        return {
            "name": self.name,
            "anchor": self.anchor,
            "instances": self.instances,
            "passed": self.passed,
            "failures": self.failures,
        }


@dataclass
class VerificationReport:
    matrices: list[dict]
    height: int
    checks: list[CheckResult]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def check(self, name: str) -> CheckResult:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_dict(self) -> dict:
        return {
            "matrices": self.matrices,
            "height": self.height,
            "passed": self.passed,
            "checks": [c.to_dict() for c in self.checks],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"

    def to_table(self) -> str:
        rows = [("check", "instances", "failures", "seconds", "status")]
        for c in self.checks:
            rows.append((c.name, str(c.instances), str(len(c.failures)), f"{c.runtime:.2f}", "pass" if c.passed else "FAIL"))
        widths = [max(len(r[i]) for r in rows) for i in range(5)]
        lines = ["  ".join(cell.ljust(w) for cell, w in zip(r, widths)).rstrip() for r in rows]
        for c in self.checks:
            for f in c.failures[:5]:
                lines.append(f"  {c.name}: {json.dumps(f, sort_keys=True)}")
        lines.append("all checks passed" if self.passed else "verification FAILED")
        return "\n".join(lines) + "\n"


@dataclass
class Entry:
    """One corpus matrix with its table and cached root lists."""

    name: str
    table: MultiplicityTable

    @property
    def cartan(self) -> CartanMatrix:
        return self.table.cartan

    def roots(self, h: int) -> list[tuple[RootVector, int]]:
        return self.table.positive_roots(min(h, self.table.max_height))

    def signed_roots(self, h: int) -> list[tuple[RootVector, int]]:
        pos = self.roots(h)
        return pos + [(-v, m) for v, m in pos]

    def affine_null_root(self) -> RootVector | None:
        types = classify_type(self.cartan, self.table.symmetrizer)
        if len(types) == 1 and types[0].tag is TypeTag.AFFINE:
            return RootVector(types[0].null_root)
        return None


# -- checks ---------------------------------------------------------------


def check_real_mult_one(corpus: Sequence[Entry], H: int) -> CheckResult:
    res = CheckResult("real_mult_one", "real roots have multiplicity one")
    for e in corpus:
        for v, m in e.roots(H):
            if norm(e.table.gram, v) > 0:
                res.instances += 1
                if m != 1:
                    res.fail(e.name, root=list(v), mult=m)
    return res


def check_root_kind_agreement(corpus: Sequence[Entry], H: int) -> CheckResult:
    """Recurrence multiplicities vs Weyl reduction on every positive vector up to ``H``."""
    res = CheckResult("root_kind_agreement", "a positive vector is a root iff Weyl reduction says so")
    for e in corpus:
        A, B, n = e.cartan, e.table.gram, e.table.rank
        h = min(H, e.table.max_height)
        for v in product(range(h + 1), repeat=n):
            if not 0 < sum(v) <= h:
                continue
            res.instances += 1
            m = e.table.mult(v)
            kind = classify_root(A, B, v)
            if (m > 0) != (kind is not RootKind.NOT_A_ROOT):
                res.fail(e.name, vector=list(v), mult=m, kind=kind.value)
    return res


def check_sum_bound(corpus: Sequence[Entry], H: int) -> CheckResult:
    res = CheckResult("sum_bound", "mult(x+y) >= mult(x) + mult(y) - 1 for distinct roots with (x,y) < 0")
    for e in corpus:
        B = e.table.gram
        roots = e.signed_roots(H)
        for i, (x, mx) in enumerate(roots):
            for y, my in roots[i + 1 :]:
                s = x + y
                if s.is_zero() or abs(s.height) > H or form(B, x, y) >= 0:
                    continue
                res.instances += 1
                ms = e.table.mult(s)
                if ms < mx + my - 1:
                    res.fail(e.name, x=list(x), y=list(y), mults=[mx, my, ms])
    return res


def _non_isotropic_in_K(e: Entry, H: int) -> list[RootVector]:
    return [v for v, _ in e.roots(H) if norm(e.table.gram, v) < 0 and in_K(e.cartan, v)]


def check_small_multiple_witness(corpus: Sequence[Entry], H: int) -> CheckResult:
    res = CheckResult("small_multiple_witness", "some s <= 5 has mult(s beta) >= 2 for non-isotropic beta in K")
    for e in corpus:
        for beta in _non_isotropic_in_K(e, e.table.max_height // 5):
            res.instances += 1
            s, mults = small_multiple_witness(e.table, beta)
            if s is None:
                res.fail(e.name, beta=list(beta), mults=mults)
    return res


def check_witt_bound(corpus: Sequence[Entry], H: int) -> CheckResult:
    res = CheckResult("witt_bound", "mult(n s beta) >= witt_dim(mult(s beta), n)")
    for e in corpus:
        for beta in _non_isotropic_in_K(e, e.table.max_height // 5):
            s, _ = small_multiple_witness(e.table, beta)
            if s is None:
                continue
            for n, lower, actual in witt_samples(e.table, beta, s):
                res.instances += 1
                if lower > actual:
                    res.fail(e.name, beta=list(beta), s=s, n=n, bound=lower, mult=actual)
    return res


def check_affine_periodicity(corpus: Sequence[Entry], k_max: int = AFFINE_K_MAX) -> CheckResult:
    res = CheckResult(
        "affine_periodicity", "mult(k delta) takes at most two values, periodically, on affine matrices"
    )
    for e in corpus:
        delta = e.affine_null_root()
        if delta is None:
            continue
        res.instances += 1
        ks = [k for k in range(1, k_max + 1) if e.table.in_range(delta * k)]
        seq = [e.table.mult(delta * k) for k in ks]
        values = sorted(set(seq))
        period = _period(seq)
        if len(ks) < k_max:
            res.fail(e.name, delta=list(delta), reason=f"table reaches only k <= {len(ks)}")
        elif len(values) > 2 or period is None or period > 3 or 0 in values:
            res.fail(e.name, delta=list(delta), mults=seq, period=period)
    return res


def _shift(e: Entry, alpha: RootVector, beta: RootVector) -> int | None:
    """Largest ``N`` with ``alpha - N beta`` a root (or zero), ``None`` past the table."""
    N = 0
    while True:
        v = alpha - beta * (N + 1)
        if not e.table.in_range(v):
            return None
        if not v.is_zero() and e.table.mult(v) == 0:
            return N
        N += 1


def check_partition_bound(corpus: Sequence[Entry], H: int, k_max: int = PARTITION_K_MAX) -> CheckResult:
    res = CheckResult(
        "partition_bound", "mult(alpha + (N + k) beta) >= p(k) for isotropic beta in K, (alpha, beta) < 0"
    )
    for e in corpus:
        B = e.table.gram
        isotropic = [v for v, _ in e.roots(H) if norm(B, v) == 0 and in_K(e.cartan, v)]
        for beta in isotropic:
            for alpha, _ in e.signed_roots(H):
                if form(B, alpha, beta) >= 0:
                    continue
                N = _shift(e, alpha, beta)
                if N is None:
                    continue
                base = alpha - beta * N
                for k in range(k_max + 1):
                    v = base + beta * k
                    if not e.table.in_range(v):
                        break
                    res.instances += 1
                    m = e.table.mult(v)
                    if m < partition(k):
                        res.fail(e.name, alpha=list(alpha), beta=list(beta), shift=N, k=k, bound=partition(k), mult=m)
    return res


def check_linear_increments(corpus: Sequence[Entry], H: int) -> CheckResult:
    res = CheckResult(
        "linear_increments",
        "mult(alpha + (j+1) beta) - mult(alpha + j beta) >= mult(beta) - 1 for imaginary beta, (alpha, beta) < 0",
    )
    for e in corpus:
        B = e.table.gram
        imaginary = [(v, m) for v, m in e.roots(H) if norm(B, v) <= 0]
        roots = e.signed_roots(H)
        for beta, mb in imaginary:
            for alpha, _ in roots:
                if form(B, alpha, beta) >= 0:
                    continue
                j = 0
                while True:
                    cur, nxt = alpha + beta * j, alpha + beta * (j + 1)
                    if not (e.table.in_range(nxt) and abs(nxt.height) <= H):
                        break
                    j += 1
                    if cur.is_zero() or nxt.is_zero() or cur == beta:
                        continue
                    res.instances += 1
                    mc, mn = e.table.mult(cur), e.table.mult(nxt)
                    if mn - mc < mb - 1:
                        res.fail(e.name, alpha=list(alpha), beta=list(beta), n=j - 1, m=j, mults=[mc, mn, mb])
    return res


def _string_problems(e: Entry, s) -> list[str]:
    """Ways in which window data contradicts the tag of an analysed string."""
    out = []
    lo, hi = s.window
    # Along a real root the roots on the line form one unbroken string; along
    # an imaginary one they need not (long roots of twisted affine matrices).
    if norm(e.table.gram, s.beta) > 0:
        outside = [n for n in range(lo, hi + 1) if not s.run[0] <= n <= s.run[1] and s.dim(n) > 0]
        if outside:
            out.append(f"roots beyond the string ends at n={outside}")
    tag = s.classification.tag
    if tag is StringTag.TRIVIAL and not s.is_trivial():
        out.append("trivial tag on a nontrivial run")
    if tag is StringTag.FINITE:
        if s.run[0] == lo and s.run[1] == hi and not s.clipped:
            out.append("finite string fills the window")
        B = e.table.gram
        nb = norm(B, s.beta)
        proportional = s.origin_index is not None or any(
            s.vector(n) == s.beta or s.vector(n) == -s.beta for n in s.members()
        )
        ends_seen = s.lower_endpoint_seen() and s.upper_endpoint_seen()
        if not proportional and ends_seen:
            for end in (s.run[0], s.run[1]):
                coroot = abs(2 * form(B, s.vector(end), s.beta)) // nb
                if coroot + 1 != s.run[1] - s.run[0] + 1:
                    out.append(f"length {s.run[1] - s.run[0] + 1} but endpoint pairing {coroot}")
    if tag is StringTag.BI_INFINITE and (s.lower_endpoint_seen() or s.upper_endpoint_seen()):
        out.append("bi-infinite string has an endpoint inside the window")
    if tag is StringTag.SEMI_INFINITE_PLUS and (s.upper_endpoint_seen() or not s.lower_endpoint_seen()):
        out.append("semi-infinite(+) string does not end only on the minus side")
    if tag is StringTag.SEMI_INFINITE_MINUS and (s.lower_endpoint_seen() or not s.upper_endpoint_seen()):
        out.append("semi-infinite(-) string does not end only on the plus side")
    if tag is StringTag.INFINITE_AT_LEAST_ONE_DIRECTION:
        for d in s.classification.directions:
            if (d > 0 and s.upper_endpoint_seen()) or (d < 0 and s.lower_endpoint_seen()):
                out.append(f"certified direction {d} ends inside the window")
    if s.growth.tag is GrowthTag.MULTIPLICITY_ONE and any(s.dim(n) != 1 for n in s.root_members()):
        out.append("multiplicity-one growth with a larger multiplicity")
    return out


def check_string_classification(
    corpus: Sequence[Entry],
    H: int,
    window: tuple[int, int] = STRING_WINDOW,
    alpha_height: int = STRING_ALPHA_HEIGHT,
    beta_height: int = STRING_BETA_HEIGHT,
) -> CheckResult:
    res = CheckResult("string_classification", "tags and certificates of nontrivial root strings match window data")
    for e in corpus:
        n = e.table.rank
        alphas = [RootVector.zero(n)] + [v for v, _ in e.signed_roots(alpha_height)]
        betas = [v for v, _ in e.roots(beta_height)]
        for beta in betas:
            for alpha in alphas:
                res.instances += 1
                try:
                    s = analyze(e.table, alpha, beta, window)
                except CertificateViolated as exc:
                    res.fail(e.name, alpha=list(alpha), beta=list(beta), problem=str(exc))
                    continue
                for problem in _string_problems(e, s):
                    res.fail(e.name, alpha=list(alpha), beta=list(beta), problem=problem)
    return res


CHECKS: list[tuple[str, Callable]] = [
    ("real_mult_one", lambda c, H: check_real_mult_one(c, H)),
    ("root_kind_agreement", lambda c, H: check_root_kind_agreement(c, H)),
    ("sum_bound", lambda c, H: check_sum_bound(c, H)),
    ("small_multiple_witness", lambda c, H: check_small_multiple_witness(c, H)),
    ("witt_bound", lambda c, H: check_witt_bound(c, H)),
    ("affine_periodicity", lambda c, H: check_affine_periodicity(c)),
    ("partition_bound", lambda c, H: check_partition_bound(c, H)),
    ("linear_increments", lambda c, H: check_linear_increments(c, H)),
    ("string_classification", lambda c, H: check_string_classification(c, H)),
]


def build_entries(
    matrices: Sequence[CartanMatrix],
    table_height: int = TABLE_HEIGHT,
    cache_dir: str | Path | None = None,
) -> list[Entry]:
    return [Entry(A.name or f"matrix-{i}", load_or_build(A, table_height, cache_dir)) for i, A in enumerate(matrices)]


def run_verify(
    matrices: Sequence[CartanMatrix] | None = None,
    H: int = DEFAULT_HEIGHT,
    *,
    table_height: int | None = None,
    cache_dir: str | Path | None = None,
    only: Sequence[str] | None = None,
) -> VerificationReport:
    """Run every check (or those named in ``only``) over ``matrices``.

    Tables are built to ``max(H, table_height)``, which defaults to 30 so
    that the affine and string checks can reach ten multiples of a null root.
    """
    if matrices is None:
        matrices = default_corpus()
    th = max(H, TABLE_HEIGHT if table_height is None else table_height)
    entries = build_entries(matrices, th, cache_dir)
    checks = []
    for name, fn in CHECKS:
        if only is not None and name not in only:
            continue
        t0 = time.perf_counter()
        res = fn(entries, H)
        res.runtime = time.perf_counter() - t0
        checks.append(res)
    info = [{"name": e.name, "matrix_id": e.table.matrix_id, "table_height": e.table.max_height} for e in entries]
    return VerificationReport(info, H, checks)
