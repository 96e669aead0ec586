"""Root strings ``{alpha + n beta}``: extraction, classification, growth certificates.

Classification follows the known structure theorems rather than the
window data, which can never prove a string infinite. The window is used
only to decide whether the string is trivial, to find endpoints, and to
certify directions from the sign of ``(alpha + n beta, beta)`` on members.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence

from .combinatorics import partition, witt_dim
from .errors import CertificateViolated, HeightBoundExceeded, NotARoot, PreconditionViolated
from .lattice import GramTable, RootVector, form, norm
from .multiplicity import MultiplicityTable
from .weyl import RootKind, classify_root, is_root

DEFAULT_WINDOW = (-12, 12)
MAX_WITNESS_MULTIPLE = 5


class StringTag(str, Enum):
    TRIVIAL = "trivial"
    FINITE = "finite"
    SEMI_INFINITE_PLUS = "semi-infinite-plus"
    SEMI_INFINITE_MINUS = "semi-infinite-minus"
    BI_INFINITE = "bi-infinite"
    INFINITE_AT_LEAST_ONE_DIRECTION = "infinite-at-least-one-direction"


class GrowthTag(str, Enum):
    MULTIPLICITY_ONE = "multiplicity-one"
    BOUNDED = "bounded"
    SUPERPOLYNOMIAL_LB = "superpolynomial-lower-bound"
    EXPONENTIAL_LB = "exponential-lower-bound"


class CertificateKind(str, Enum):
    WITT_EXPONENTIAL = "witt-exponential"
    PARTITION_LB = "partition-lower-bound"
    LINEAR_INCREMENT = "linear-increment"
    AFFINE_PERIODICITY = "affine-periodicity"


@dataclass
class Classification:
    tag: StringTag
    evidence: str
    directions: tuple[int, ...] = ()
    unknown_at_bound: bool = False

    def to_dict(self):
        return {
            "tag": self.tag.value,
            "evidence": self.evidence,
            "directions": list(self.directions),
            "unknown_at_bound": self.unknown_at_bound,
        }


@dataclass
class GrowthClass:
    tag: GrowthTag
    params: dict = field(default_factory=dict)

    def to_dict(self):
        return {"tag": self.tag.value, "params": dict(self.params)}


@dataclass
class Certificate:
    """Sample points ``(n, lower_bound, actual)``; ``lower_bound <= actual`` everywhere."""

    kind: CertificateKind
    samples: list[tuple[int, int, int]]
    params: dict = field(default_factory=dict)

    def violations(self) -> list[tuple[int, int, int]]:
        return [s for s in self.samples if s[1] > s[2]]

    def to_dict(self):
        return {"kind": self.kind.value, "params": dict(self.params), "samples": [list(s) for s in self.samples]}


@dataclass
class RootString:
    alpha: RootVector
    beta: RootVector
    window: tuple[int, int]
    dims: list[int]
    origin_index: int | None
    run: tuple[int, int]
    clipped: bool = False
    classification: Classification | None = None
    growth: GrowthClass | None = None
    certificates: list[Certificate] = field(default_factory=list)

    def dim(self, n: int) -> int:
        return self.dims[n - self.window[0]]

    def vector(self, n: int) -> RootVector:
        return self.alpha + self.beta * n

    def members(self) -> range:
        """In-window indices of the string (the consecutive run through 0)."""
        return range(self.run[0], self.run[1] + 1)

    def root_members(self) -> list[int]:
        return [n for n in self.members() if n != self.origin_index]

    def is_trivial(self) -> bool:
        return self.run == (0, 0)

    def lower_endpoint_seen(self) -> bool:
        return self.run[0] > self.window[0]

    def upper_endpoint_seen(self) -> bool:
        return self.run[1] < self.window[1]

    def to_dict(self):
        return {
            "alpha": list(self.alpha),
            "beta": list(self.beta),
            "window": list(self.window),
            "dims": list(self.dims),
            "origin_index": self.origin_index,
            "members": list(self.run),
            "clipped": self.clipped,
            "classification": self.classification.to_dict() if self.classification else None,
            "growth": self.growth.to_dict() if self.growth else None,
            "certificates": [c.to_dict() for c in self.certificates],
        }


def cartan_dimension(table: MultiplicityTable) -> int:
    """``2|I| - rank(A)``, reported for the lattice origin inside a string."""
    return 2 * table.rank - table.cartan.rank()


def _require_root(table: MultiplicityTable, x: RootVector, allow_zero: bool) -> None:
    if x.is_zero():
        if allow_zero:
            return
        raise NotARoot(x)
    if classify_root(table.cartan, table.gram, x) is RootKind.NOT_A_ROOT:
        raise NotARoot(x)


def extract(
    table: MultiplicityTable,
    alpha: Sequence[int],
    beta: Sequence[int],
    window: tuple[int, int] = DEFAULT_WINDOW,
) -> RootString:
    """Multiplicities of ``alpha + n beta`` for ``n`` in ``window``.

    The window shrinks (and ``clipped`` is set) where vectors leave the
    height range of ``table``. Index ``n`` with ``alpha + n beta = 0`` gets
    ``dim h`` and is recorded in ``origin_index``.
    """
    alpha, beta = RootVector(alpha), RootVector(beta)
    lo, hi = window
    if not lo <= 0 <= hi:
        raise ValueError(f"window {window} must contain 0")
    _require_root(table, beta, allow_zero=False)
    _require_root(table, alpha, allow_zero=True)
    if not table.in_range(alpha):
        raise HeightBoundExceeded(f"alpha={list(alpha)} is outside the table range")

    def fits(n):
        return table.in_range(alpha + beta * n)

    new_hi = 0
    while new_hi < hi and fits(new_hi + 1):
        new_hi += 1
    new_lo = 0
    while new_lo > lo and fits(new_lo - 1):
        new_lo -= 1
    clipped = (new_lo, new_hi) != (lo, hi)
    lo, hi = new_lo, new_hi

    h_dim = cartan_dimension(table)
    dims = []
    origin = None
    for n in range(lo, hi + 1):
        v = alpha + beta * n
        if v.is_zero():
            origin = n
            dims.append(h_dim)
        else:
            dims.append(table.mult(v))

    def member(n):
        return n == origin or dims[n - lo] > 0

    top = 0
    while top < hi and member(top + 1):
        top += 1
    bottom = 0
    while bottom > lo and member(bottom - 1):
        bottom -= 1
    return RootString(alpha, beta, (lo, hi), dims, origin, (bottom, top), clipped)


def _certified_directions(B: GramTable, s: RootString) -> tuple[int, ...]:
    """+1 if a root member pairs negatively with beta, -1 if one pairs positively."""
    dirs = set()
    for n in s.root_members():
        f = form(B, s.vector(n), s.beta)
        if f < 0:
            dirs.add(1)
        elif f > 0:
            dirs.add(-1)
    return tuple(sorted(dirs, reverse=True))


def classify_string(table: MultiplicityTable, s: RootString) -> tuple[Classification, GrowthClass]:
    A, B = table.cartan, table.gram
    if s.window[0] > -1 or s.window[1] < 1:
        raise PreconditionViolated("classification needs the window to include -1 and 1")
    alpha, beta = s.alpha, s.beta
    alpha_kind = None if alpha.is_zero() else classify_root(A, B, alpha)

    def single_valued():
        vals = {s.dim(n) for n in s.root_members()}
        return GrowthClass(GrowthTag.MULTIPLICITY_ONE if vals <= {1} else GrowthTag.BOUNDED)

    if s.is_trivial():
        return Classification(StringTag.TRIVIAL, "neither neighbour of alpha lies in the string"), single_valued()

    beta_kind = classify_root(A, B, beta)
    if beta_kind is RootKind.REAL:
        return Classification(StringTag.FINITE, "strings along a real root are finite"), single_valued()

    nb = norm(B, beta)
    f = form(B, alpha, beta)
    if nb < 0:
        dirs = _certified_directions(B, s)
        growth = GrowthClass(GrowthTag.EXPONENTIAL_LB, {"directions": list(dirs)})
        if len(dirs) == 2:
            evidence = "non-isotropic beta; members pair with beta of both signs"
            unknown = False
        else:
            other_end_seen = s.lower_endpoint_seen() if dirs[0] > 0 else s.upper_endpoint_seen()
            unknown = not other_end_seen
            if other_end_seen:
                evidence = "non-isotropic beta; one certified direction, the other end lies in the window"
            else:
                evidence = "non-isotropic beta; second direction undecided within the table"
        return (
            Classification(StringTag.INFINITE_AT_LEAST_ONE_DIRECTION, evidence, dirs, unknown_at_bound=unknown),
            growth,
        )
    if f == 0:
        tag = GrowthTag.MULTIPLICITY_ONE if alpha_kind is RootKind.REAL else GrowthTag.BOUNDED
        return (
            Classification(StringTag.BI_INFINITE, "isotropic beta orthogonal to alpha", (1, -1)),
            GrowthClass(tag),
        )
    d = 1 if f < 0 else -1
    tag = StringTag.SEMI_INFINITE_PLUS if d > 0 else StringTag.SEMI_INFINITE_MINUS
    return (
        Classification(tag, "isotropic beta with (alpha, beta) != 0", (d,)),
        GrowthClass(GrowthTag.SUPERPOLYNOMIAL_LB, {"direction": d}),
    )


def classify(
    table: MultiplicityTable,
    alpha: Sequence[int],
    beta: Sequence[int],
    window: tuple[int, int] = DEFAULT_WINDOW,
) -> tuple[Classification, GrowthClass]:
    return classify_string(table, extract(table, alpha, beta, window))


# -- certificates ---------------------------------------------------------


def small_multiple_witness(table: MultiplicityTable, beta: Sequence[int]) -> tuple[int | None, list[int]]:
    """First ``s <= 5`` with ``mult(s beta) >= 2`` and the multiplicities inspected.

    Returns ``(None, mults)`` if no such ``s`` fits inside the table.
    """
    beta = RootVector(beta)
    mults = []
    for s in range(1, MAX_WITNESS_MULTIPLE + 1):
        v = beta * s
        if not table.in_range(v):
            break
        m = table.mult(v)
        mults.append(m)
        if m >= 2:
            return s, mults
    return None, mults


def witt_samples(table: MultiplicityTable, beta: Sequence[int], s: int) -> list[tuple[int, int, int]]:
    """``(n, witt_dim(m, n), mult(n s beta))`` for every ``n`` the table reaches, ``m = mult(s beta)``."""
    gamma = RootVector(beta) * s
    m = table.mult(gamma)
    out = []
    n = 1
    while table.in_range(gamma * n):
        out.append((n, witt_dim(m, n), table.mult(gamma * n)))
        n += 1
    return out


def _directional(s: RootString, d: int) -> list[tuple[int, int]]:
    """``(j, mult)`` for members ``n = j*d``, ``j >= 0``, walking away from alpha in direction ``d``."""
    out = []
    j = 0
    while s.run[0] <= j * d <= s.run[1]:
        n = j * d
        out.append((j, s.dim(n)))
        j += 1
    return out


def increment_certificate(table: MultiplicityTable, s: RootString, d: int) -> Certificate | None:
    """Consecutive-increment bound ``mult(g + (j+1) d beta) >= mult(g + j d beta) + mult(beta) - 1``.

    ``g`` is the first member in direction ``d`` that pairs negatively with
    ``d beta`` and differs from it.
    """
    B = table.gram
    step = s.beta * d
    mb = table.mult(s.beta)
    start = None
    for j, _ in _directional(s, d):
        n = j * d
        v = s.vector(n)
        if n != s.origin_index and v != step and form(B, v, step) < 0:
            start = j
            break
    if start is None:
        return None
    seq = [(j, m) for j, m in _directional(s, d) if j >= start]
    samples = [(j, prev + mb - 1, m) for (_, prev), (j, m) in zip(seq, seq[1:])]
    return Certificate(CertificateKind.LINEAR_INCREMENT, samples, {"direction": d, "start": start * d, "mult_beta": mb})


def partition_certificate(table: MultiplicityTable, s: RootString, d: int) -> Certificate | None:
    """``mult(alpha' + k d beta) >= p(k)`` from the far end ``alpha'`` of the string.

    Returns ``None`` when that end is not visible in the window.
    """
    seen = s.lower_endpoint_seen() if d > 0 else s.upper_endpoint_seen()
    if not seen:
        return None
    end = s.run[0] if d > 0 else s.run[1]
    shift = -end * d
    samples = []
    k = 0
    while s.run[0] <= end + k * d <= s.run[1]:
        samples.append((k, partition(k), s.dim(end + k * d)))
        k += 1
    return Certificate(CertificateKind.PARTITION_LB, samples, {"direction": d, "shift": shift})


def _period(values: list[int | None]) -> int | None:
    n = len(values)
    for p in range(1, n):
        if all(
            values[i] is None or values[i + p] is None or values[i] == values[i + p] for i in range(n - p)
        ):
            return p
    return None


def periodicity_certificate(s: RootString) -> Certificate:
    seq = [None if n == s.origin_index else s.dim(n) for n in s.members()]
    values = sorted({v for v in seq if v is not None})
    samples = [(n, 1, s.dim(n)) for n in s.root_members()]
    return Certificate(CertificateKind.AFFINE_PERIODICITY, samples, {"values": values, "period": _period(seq)})


def growth_certificate(table: MultiplicityTable, s: RootString) -> list[Certificate]:
    """Certificates backing the growth class of a classified string.

    Raises :class:`CertificateViolated` if any lower bound exceeds a
    computed multiplicity.
    """
    if s.classification is None or s.growth is None:
        s.classification, s.growth = classify_string(table, s)
    certs: list[Certificate] = []
    tag = s.growth.tag
    dirs = s.classification.directions
    if tag is GrowthTag.EXPONENTIAL_LB:
        witness, mults = small_multiple_witness(table, s.beta)
        if witness is not None:
            certs.append(
                Certificate(
                    CertificateKind.WITT_EXPONENTIAL,
                    witt_samples(table, s.beta, witness),
                    {"s": witness, "m": mults[-1], "mults": mults},
                )
            )
        for d in dirs:
            c = increment_certificate(table, s, d)
            if c is not None:
                certs.append(c)
    elif tag is GrowthTag.SUPERPOLYNOMIAL_LB:
        d = dirs[0]
        c = partition_certificate(table, s, d)
        if c is not None:
            s.growth.params["shift"] = c.params["shift"]
            certs.append(c)
        c = increment_certificate(table, s, d)
        if c is not None:
            certs.append(c)
    elif s.classification.tag is StringTag.BI_INFINITE and not s.is_trivial():
        cert = periodicity_certificate(s)
        s.growth.params.update(values=cert.params["values"], period=cert.params["period"])
        if len(cert.params["values"]) > 2:
            raise CertificateViolated(
                f"string through {list(s.alpha)} along {list(s.beta)} shows values {cert.params['values']}"
            )
        certs.append(cert)
    for c in certs:
        bad = c.violations()
        if bad:
            raise CertificateViolated(
                f"{c.kind.value} bound exceeded along {list(s.alpha)} + n {list(s.beta)} at {bad}"
            )
    return certs


def analyze(
    table: MultiplicityTable,
    alpha: Sequence[int],
    beta: Sequence[int],
    window: tuple[int, int] = DEFAULT_WINDOW,
) -> RootString:
    """Extract, classify, and certify in one call."""
    s = extract(table, alpha, beta, window)
    s.classification, s.growth = classify_string(table, s)
    s.certificates = growth_certificate(table, s)
    return s


# -- analyses -------------------------------------------------------------


def support_criterion(table: MultiplicityTable, alpha: Sequence[int], beta: Sequence[int]) -> bool:
    """For isotropic ``beta`` in ``K`` and positive ``alpha`` in a nontrivial string:
    ``(alpha, beta) == 0`` exactly when ``supp(alpha)`` lies inside ``supp(beta)``.

    Returns whether the form vanishes; raises :class:`CertificateViolated` if
    the two sides disagree.
    """
    from .lattice import Sign, in_K

    A, B = table.cartan, table.gram
    alpha, beta = RootVector(alpha), RootVector(beta)
    if not in_K(A, beta) or norm(B, beta) != 0:
        raise PreconditionViolated(f"{list(beta)} is not an isotropic element of K")
    if alpha.sign is not Sign.POSITIVE:
        raise PreconditionViolated(f"{list(alpha)} is not positive")
    if not is_root(A, B, alpha):
        raise PreconditionViolated(f"{list(alpha)} is not a root")
    neighbours = [alpha + beta, alpha - beta]
    if not any(v.is_zero() or is_root(A, B, v) for v in neighbours):
        raise PreconditionViolated("the string through alpha along beta is trivial")
    zero = form(B, alpha, beta) == 0
    inside = alpha.support <= beta.support
    if zero != inside:
        raise CertificateViolated(
            f"(alpha, beta) == 0 is {zero} but supp(alpha) within supp(beta) is {inside}"
        )
    return zero


@dataclass
class MonotonicityReport:
    gamma: RootVector
    beta: RootVector
    direction: int
    start: int
    dims: list[int]
    mult_beta: int
    strict_asserted: bool
    violations: list[dict] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_dict(self):
        return {
            "gamma": list(self.gamma),
            "beta": list(self.beta),
            "direction": self.direction,
            "start": self.start,
            "dims": self.dims,
            "mult_beta": self.mult_beta,
            "strict_asserted": self.strict_asserted,
            "violations": self.violations,
        }


def monotonicity_report(
    table: MultiplicityTable,
    gamma: Sequence[int],
    beta: Sequence[int],
    window: tuple[int, int] = DEFAULT_WINDOW,
    raise_on_violation: bool = True,
) -> MonotonicityReport:
    """Check growth along a non-isotropic imaginary direction.

    Walks from ``gamma`` in the direction ``d`` with ``(gamma, d beta) < 0``
    (or from the neighbour ``gamma + d beta`` when ``gamma`` is orthogonal
    to ``beta``). When ``mult(beta) > 1`` the multiplicities must increase
    strictly; for every pair ``m > n`` the difference must be at least
    ``(m - n)(mult(beta) - 1)``.
    """
    A, B = table.cartan, table.gram
    gamma, beta = RootVector(gamma), RootVector(beta)
    if classify_root(A, B, beta) is not RootKind.IMAGINARY or norm(B, beta) >= 0:
        raise PreconditionViolated(f"{list(beta)} is not a non-isotropic imaginary root")
    s = extract(table, gamma, beta, window)
    if s.is_trivial():
        raise PreconditionViolated("the string through gamma along beta is trivial")
    f = form(B, gamma, beta)
    if f != 0:
        d, start = (1 if f < 0 else -1), 0
    else:
        d = 1 if s.run[1] >= 1 else -1
        start = d
    step = beta * d
    seq = [(j, m) for j, m in _directional(s, d) if j >= abs(start)]
    # beta itself cannot be paired with beta: start past it.
    seq = [(j, m) for j, m in seq if s.vector(j * d) != step and j * d != s.origin_index]
    mb = table.mult(beta)
    dims = [m for _, m in seq]
    violations = []
    strict = mb > 1
    if strict:
        for (j1, m1), (j2, m2) in zip(seq, seq[1:]):
            if m2 <= m1:
                violations.append({"kind": "not-strict", "n": j1 * d, "m": j2 * d, "mults": [m1, m2]})
    for a in range(len(seq)):
        for b in range(a + 1, len(seq)):
            (jn, mn), (jm, mm) = seq[a], seq[b]
            if mm - mn < (jm - jn) * (mb - 1):
                violations.append({"kind": "increment", "n": jn * d, "m": jm * d, "mults": [mn, mm]})
    report = MonotonicityReport(gamma, beta, d, start, dims, mb, strict, violations)
    if violations and raise_on_violation:
        raise CertificateViolated(f"monotonicity fails along {list(gamma)} + n {list(beta)}: {violations[:3]}")
    return report
