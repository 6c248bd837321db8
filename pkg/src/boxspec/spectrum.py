"""Multiset calculus on truncated spectra.

A spectrum of a nonnegative selfadjoint operator is stored as the finite list
of its points below a cutoff ``Λ`` together with a flag saying whether that
list is *complete* below ``Λ``.  Everything here preserves that flag, which is
what makes truncation safe: all values are nonnegative, so every sum below
``Λ`` only involves addends below ``Λ``.
"""

from __future__ import annotations

import enum
import functools
import itertools
import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .errors import AmbiguousKernelError, MultiplicityUnavailableError, UnavailableError

DEFAULT_MERGE_TOL = 1e-9
DEFAULT_ZERO_TOL = 1e-12

Bidegree = tuple[int, int]


@functools.total_ordering
@dataclass(frozen=True)
class Cardinal:
    """Extended cardinal: a nonnegative integer or infinity (``n is None``)."""

    n: int | None

    def __post_init__(self):
        if self.n is not None:
            if isinstance(self.n, bool) or not isinstance(self.n, int) or self.n < 0:
                raise ValueError(f"cardinal must be a nonnegative int or None, got {self.n!r}")

    @classmethod
    def of(cls, x) -> "Cardinal":
        if isinstance(x, Cardinal):
            return x
        if x == "inf" or (isinstance(x, float) and math.isinf(x) and x > 0):
            return INF
        if isinstance(x, float) and x.is_integer():
            x = int(x)
        return cls(x)

    @property
    def is_infinite(self) -> bool:
        return self.n is None

    @property
    def is_zero(self) -> bool:
        return self.n == 0

    def __add__(self, other):
        other = Cardinal.of(other)
        if self.is_infinite or other.is_infinite:
            return INF
        return Cardinal(self.n + other.n)

    __radd__ = __add__

    def __mul__(self, other):
        other = Cardinal.of(other)
        # zero annihilates, including infinity
        if self.is_zero or other.is_zero:
            return ZERO
        if self.is_infinite or other.is_infinite:
            return INF
        return Cardinal(self.n * other.n)

    __rmul__ = __mul__

    def __lt__(self, other):
        other = Cardinal.of(other)
        if self.is_infinite:
            return False
        return other.is_infinite or self.n < other.n

    def __eq__(self, other):
        try:
            other = Cardinal.of(other)
        except (TypeError, ValueError):
            return NotImplemented
        return self.n == other.n

    def __hash__(self):
        return hash(self.n)

    def __str__(self):
        return "inf" if self.is_infinite else str(self.n)

    def __repr__(self):
        return f"Cardinal({self})"

    def to_json(self):
        return "inf" if self.is_infinite else self.n


ZERO = Cardinal(0)
ONE = Cardinal(1)
INF = Cardinal(None)


def close(a: float, b: float, tol: float) -> bool:
    """Relative closeness used to merge numerically equal eigenvalues."""
    return abs(a - b) <= tol * max(1.0, abs(a), abs(b))


@dataclass(frozen=True)
class SpectralPoint:
    value: float
    multiplicity: Cardinal

    def __post_init__(self):
        if not math.isfinite(self.value) or self.value < 0:
            raise ValueError(f"spectral values must be finite and >= 0, got {self.value!r}")
        if not isinstance(self.multiplicity, Cardinal):
            object.__setattr__(self, "multiplicity", Cardinal.of(self.multiplicity))
        if self.multiplicity.is_zero:
            raise ValueError("multiplicity 0 is represented by absence of the point")


@dataclass(frozen=True)
class TruncatedSpectrum:
    """Sorted spectral points below ``cutoff``.

    ``complete`` asserts that the operator has no spectrum in ``[0, cutoff)``
    other than the listed points.  ``pure_point=False`` marks set-only data:
    values are meaningful but multiplicities are not.
    """

    points: tuple[SpectralPoint, ...]
    cutoff: float
    complete: bool = True
    merge_tol: float = DEFAULT_MERGE_TOL
    pure_point: bool = True

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(self.points))
        if not self.cutoff > 0:
            raise ValueError(f"cutoff must be positive, got {self.cutoff!r}")
        if self.merge_tol < 0:
            raise ValueError("merge_tol must be nonnegative")
        prev = None
        for p in self.points:
            if p.value >= self.cutoff:
                raise ValueError(f"value {p.value} is not below the cutoff {self.cutoff}")
            if prev is not None and (p.value <= prev or close(p.value, prev, self.merge_tol)):
                raise ValueError(
                    f"values must be strictly increasing and separated by merge_tol ({prev}, {p.value})"
                )
            prev = p.value

    @classmethod
    def from_pairs(cls, pairs: Iterable, cutoff: float, complete: bool = True,
                   merge_tol: float = DEFAULT_MERGE_TOL, pure_point: bool = True) -> "TruncatedSpectrum":
        """Build from unsorted ``(value, multiplicity)`` pairs.

        Values at or above the cutoff are dropped; values within ``merge_tol``
        of each other are merged with additive multiplicity.
        """
        kept = [(float(v), Cardinal.of(m)) for v, m in pairs if float(v) < cutoff]
        points = tuple(SpectralPoint(v, m) for v, m in coalesce(kept, merge_tol))
        return cls(points, float(cutoff), complete, merge_tol, pure_point)

    @classmethod
    def empty(cls, cutoff: float, **kw) -> "TruncatedSpectrum":
        return cls((), float(cutoff), **kw)

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    @property
    def values(self) -> list[float]:
        return [p.value for p in self.points]

    @property
    def multiplicities(self) -> list[Cardinal]:
        return [p.multiplicity for p in self.points]

    def pairs(self) -> list[tuple[float, Cardinal]]:
        return [(p.value, p.multiplicity) for p in self.points]

    def total_multiplicity(self) -> Cardinal:
        return sum((p.multiplicity for p in self.points), ZERO)

    def positive_part(self, zero_tol: float = DEFAULT_ZERO_TOL) -> "TruncatedSpectrum":
        pts = tuple(p for p in self.points if p.value > zero_tol)
        return TruncatedSpectrum(pts, self.cutoff, self.complete, self.merge_tol, self.pure_point)

    def truncate(self, cutoff: float) -> "TruncatedSpectrum":
        """Restrict to a smaller cutoff; completeness is inherited."""
        cutoff = min(cutoff, self.cutoff)
        pts = tuple(p for p in self.points if p.value < cutoff)
        return TruncatedSpectrum(pts, cutoff, self.complete, self.merge_tol, self.pure_point)

    def require_pure_point(self, what: str):
        if not self.pure_point:
            raise MultiplicityUnavailableError(f"{what} needs multiplicities, but the spectrum is set-only")


def coalesce(pairs: Iterable[tuple[float, Cardinal]], tol: float) -> list[tuple[float, Cardinal]]:
    """Sort and merge runs of close values; the representative is the run minimum."""
    out: list[list] = []
    last = None
    for v, m in sorted(pairs, key=lambda vm: vm[0]):
        if out and close(v, last, tol):
            out[-1][1] = out[-1][1] + m
        else:
            out.append([v, m])
        last = v
    return [(v, m) for v, m in out]


def minkowski_sum(S: TruncatedSpectrum, T: TruncatedSpectrum) -> TruncatedSpectrum:
    """All pairwise sums ``s + t`` below ``min(S.cutoff, T.cutoff)``.

    Multiplicities multiply (eigenspaces of a sum of commuting tensor factors
    are tensor products) and colliding sums add.  Sums of closed subsets of
    ``[0, inf)`` are closed, so the truncated result needs no closure step.
    """
    for X in (S, T):
        if any(p.value < 0 for p in X.points):
            raise ValueError("minkowski_sum requires nonnegative spectra")
    cutoff = min(S.cutoff, T.cutoff)
    pairs = []
    for s in S.points:
        if s.value >= cutoff:
            break
        for t in T.points:
            v = s.value + t.value
            if v >= cutoff:
                break
            pairs.append((v, s.multiplicity * t.multiplicity))
    return TruncatedSpectrum.from_pairs(
        pairs,
        cutoff,
        complete=S.complete and T.complete,
        merge_tol=max(S.merge_tol, T.merge_tol),
        pure_point=S.pure_point and T.pure_point,
    )


def minkowski_sum_many(spectra: Sequence[TruncatedSpectrum]) -> TruncatedSpectrum:
    spectra = list(spectra)
    if not spectra:
        raise ValueError("minkowski_sum_many needs at least one spectrum")
    return functools.reduce(minkowski_sum, spectra)


def spectrum_union(spectra: Sequence[TruncatedSpectrum]) -> TruncatedSpectrum:
    """Spectrum of an orthogonal direct sum: union with additive multiplicities."""
    spectra = list(spectra)
    if not spectra:
        raise ValueError("spectrum_union needs at least one spectrum")
    cutoff = min(s.cutoff for s in spectra)
    return TruncatedSpectrum.from_pairs(
        [pair for s in spectra for pair in s.pairs()],
        cutoff,
        complete=all(s.complete for s in spectra),
        merge_tol=max(s.merge_tol for s in spectra),
        pure_point=all(s.pure_point for s in spectra),
    )


@dataclass(frozen=True)
class BidegreeSpectrum:
    """Per-bidegree spectra of one factor or product manifold.

    A bidegree missing from ``table`` is *not provided*, never an empty
    spectrum; ``unavailable`` says why, when known.
    """

    complex_dim: int
    table: Mapping[Bidegree, TruncatedSpectrum]
    unavailable: Mapping[Bidegree, str] = field(default_factory=dict)
    notes: tuple[str, ...] = ()

    def __post_init__(self):
        if self.complex_dim < 1:
            raise ValueError("complex_dim must be positive")
        for p, q in list(self.table) + list(self.unavailable):
            if not (0 <= p <= self.complex_dim and 0 <= q <= self.complex_dim):
                raise ValueError(f"bidegree {(p, q)} out of range for dimension {self.complex_dim}")

    def bidegrees(self) -> list[Bidegree]:
        n = self.complex_dim
        return [(p, q) for p in range(n + 1) for q in range(n + 1)]

    def __getitem__(self, pq: Bidegree) -> TruncatedSpectrum:
        if pq not in self.table:
            raise UnavailableError(self.unavailable.get(pq, f"bidegree {pq} not provided"))
        return self.table[pq]


def splits(total: int, dims: Sequence[int]):
    """All tuples ``(d_1, ..., d_N)`` with ``0 <= d_j <= dims[j]`` summing to ``total``."""
    for combo in itertools.product(*(range(d + 1) for d in dims)):
        if sum(combo) == total:
            yield combo


def bidegree_product(factors: Sequence[BidegreeSpectrum],
                     targets: Iterable[Bidegree] | None = None) -> BidegreeSpectrum:
    """Per-bidegree spectra of a product from those of the factors.

    Each target ``(p, q)`` is the union, over every way of splitting ``p`` and
    ``q`` among the factors, of the Minkowski sums of the factor spectra.  A
    target whose splits need a bidegree some factor does not provide is
    reported in ``unavailable`` rather than guessed.
    """
    factors = list(factors)
    if not factors:
        raise ValueError("bidegree_product needs at least one factor")
    dims = [f.complex_dim for f in factors]
    n = sum(dims)
    if targets is None:
        targets = [(p, q) for p in range(n + 1) for q in range(n + 1)]
    table: dict[Bidegree, TruncatedSpectrum] = {}
    unavailable: dict[Bidegree, str] = {}
    for p, q in targets:
        if not (0 <= p <= n and 0 <= q <= n):
            raise ValueError(f"target bidegree {(p, q)} out of range for dimension {n}")
        pieces = []
        missing = None
        for ps in splits(p, dims):
            for qs in splits(q, dims):
                spectra = []
                for j, (f, pq) in enumerate(zip(factors, zip(ps, qs)), start=1):
                    if pq not in f.table:
                        why = f.unavailable.get(pq, "not provided")
                        missing = f"factor {j} does not provide bidegree {pq[0]},{pq[1]} ({why})"
                        break
                    spectra.append(f.table[pq])
                if missing:
                    break
                pieces.append(minkowski_sum_many(spectra))
            if missing:
                break
        if missing:
            unavailable[(p, q)] = missing
        else:
            table[(p, q)] = spectrum_union(pieces)
    notes = tuple(dict.fromkeys(note for f in factors for note in f.notes))
    return BidegreeSpectrum(n, table, unavailable, notes)


def total_spectrum(spec: BidegreeSpectrum) -> TruncatedSpectrum:
    """Spectrum of the full form Laplacian: union over every bidegree."""
    for pq in spec.bidegrees():
        if pq not in spec.table:
            spec[pq]  # raises UnavailableError with the recorded reason
    return spectrum_union(spec.table.values())


class Verdict(str, enum.Enum):
    CLOSED_RANGE = "ClosedRange"
    NOT_CLOSED_RANGE = "NotClosedRange"
    UNKNOWN = "Unknown"


@dataclass(frozen=True)
class GapReport:
    """Closed-range verdict from the spectral gap above 0.

    ``gap_is_lower_bound`` is set when no positive point lies below the cutoff,
    in which case ``gap`` is the cutoff and the true gap is at least that.
    ``bound_constant`` is the constant ``C`` in ``|Ax| >= C|x|`` on the
    orthogonal complement of the kernel, which equals the gap.
    """

    verdict: Verdict
    gap: float | None = None
    bound_constant: float | None = None
    gap_is_lower_bound: bool = False

    def __post_init__(self):
        if self.verdict is Verdict.CLOSED_RANGE and not (self.gap and self.gap > 0):
            raise ValueError("a closed-range verdict needs a positive gap")


def gap_report(S: TruncatedSpectrum, zero_tol: float = DEFAULT_ZERO_TOL) -> GapReport:
    # An accumulation of spectrum at 0 can never be seen in a finite list, so a
    # truncated spectrum only ever yields ClosedRange or Unknown.
    if not S.complete:
        return GapReport(Verdict.UNKNOWN)
    positive = [p.value for p in S.points if p.value > zero_tol]
    if positive:
        return GapReport(Verdict.CLOSED_RANGE, positive[0], positive[0])
    return GapReport(Verdict.CLOSED_RANGE, S.cutoff, S.cutoff, gap_is_lower_bound=True)


def kernel_dim(S: TruncatedSpectrum, zero_tol: float = DEFAULT_ZERO_TOL) -> Cardinal:
    """Multiplicity of the eigenvalue 0 (points within ``zero_tol`` of it)."""
    S.require_pure_point("kernel_dim")
    near = [p for p in S.points if p.value <= zero_tol]
    if len(near) > 1:
        raise AmbiguousKernelError(
            f"zero_tol={zero_tol} covers {len(near)} distinct points ({near[0].value}, {near[1].value}, ...)"
        )
    return near[0].multiplicity if near else ZERO


@dataclass(frozen=True)
class HarmonicDims:
    """Dimensions of the harmonic spaces (kernel of the Laplacian) per bidegree.

    An entry of ``ZERO`` declares the bidegree trivial; a missing entry means
    unknown.
    """

    complex_dim: int
    table: Mapping[Bidegree, Cardinal]
    unavailable: Mapping[Bidegree, str] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "table", {pq: Cardinal.of(m) for pq, m in self.table.items()})
        if self.complex_dim < 1:
            raise ValueError("complex_dim must be positive")


def kunneth_product(factors: Sequence[HarmonicDims]) -> HarmonicDims:
    """Harmonic dimensions of a product: sum over splits of cardinal products."""
    factors = list(factors)
    if not factors:
        raise ValueError("kunneth_product needs at least one factor")
    dims = [f.complex_dim for f in factors]
    n = sum(dims)
    table: dict[Bidegree, Cardinal] = {}
    unavailable: dict[Bidegree, str] = {}
    for p in range(n + 1):
        for q in range(n + 1):
            total = ZERO
            missing = None
            for ps in splits(p, dims):
                for qs in splits(q, dims):
                    term = ONE
                    for j, (f, pq) in enumerate(zip(factors, zip(ps, qs)), start=1):
                        if pq not in f.table:
                            missing = f"factor {j} has no harmonic dimension for bidegree {pq[0]},{pq[1]}"
                            break
                        term = term * f.table[pq]
                    if missing:
                        break
                    total = total + term
                if missing:
                    break
            if missing:
                unavailable[(p, q)] = missing
            else:
                table[(p, q)] = total
    return HarmonicDims(n, table, unavailable)
