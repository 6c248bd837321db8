"""Labelled eigenstructure of the complex Laplacian on (0,q)-forms of a polydomain.

For planar factors ``Ω_1, ..., Ω_n`` write ``μ^j_1 <= μ^j_2 <= ...`` for the
(0,1)-form eigenvalues of factor ``j`` and ``λ^j_1 <= ...`` for its positive
function eigenvalues, both repeated by multiplicity.  For every ``J`` of size
``q``:

* kind ``W``: ``Σ_{j∈J} μ^j_{k_j}`` with a Bergman-space factor on every
  ``j ∉ J``, so infinite multiplicity when ``q < n``;
* kind ``V`` (only when ``q < n``): ``Σ_{j∈J} μ^j_{k_j} + Σ_{j∉J} λ^j_{k_j}``,
  one eigenform per index tuple;
* kind ``M`` (only when ``n - q >= 2``): the mixed case, a positive function
  eigenvalue on the factors in ``Z`` and a Bergman factor on the rest of the
  complement of ``J``; infinite multiplicity.

Together these exhaust the spectrum of ``□_q``.  W and V alone miss the mixed
products once two or more factors lie outside ``J``.
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numpy as np

from .bessel import bessel_j, bessel_zero
from .domains import Custom, Disc, PlanarDomain, Rectangle, dirichlet_sequence, factor_bidegree
from .errors import UnavailableError
from .spectrum import (
    DEFAULT_MERGE_TOL,
    DEFAULT_ZERO_TOL,
    INF,
    ONE,
    ZERO,
    Cardinal,
    close,
    kernel_dim,
)

LABEL_CAP = 16


_KIND_ORDER = {"W": 0, "M": 1, "V": 2}


@dataclass(frozen=True)
class EigenLabel:
    """Names one eigenform family member.

    ``Z`` lists the factors outside ``J`` that carry a positive function
    eigenvalue (empty for W, the whole complement for V).  ``k`` is aligned
    with ``support`` = sorted ``J ∪ Z``; its entries are 1-based positions in
    the factor's eigenvalue list repeated by multiplicity.
    """

    kind: str
    J: tuple[int, ...]
    k: tuple[int, ...]
    Z: tuple[int, ...] = ()

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(sorted(self.J + self.Z))

    def index_of(self, j: int) -> int:
        return self.k[self.support.index(j)]

    def sort_key(self):
        return (_KIND_ORDER[self.kind], self.J, self.Z, self.k)

    def to_json(self):
        return {"kind": self.kind, "J": list(self.J), "Z": list(self.Z), "k": list(self.k)}


@dataclass(frozen=True)
class EigenEntry:
    value: float
    multiplicity: Cardinal
    labels: tuple[EigenLabel, ...]
    label_count: int


@dataclass(frozen=True)
class Enumeration:
    """Sorted eigen-entries of ``□_q``, complete below ``cutoff``."""

    entries: tuple[EigenEntry, ...]
    cutoff: float
    q: int
    n: int
    merge_tol: float = DEFAULT_MERGE_TOL
    notes: tuple[str, ...] = ()

    def __iter__(self):
        return iter(self.entries)

    def __len__(self):
        return len(self.entries)

    def __getitem__(self, i):
        return self.entries[i]

    def pairs(self) -> list[tuple[float, Cardinal]]:
        return [(e.value, e.multiplicity) for e in self.entries]


@dataclass
class _FactorData:
    mu: list[tuple[float, tuple]]
    lam: list[tuple[float, tuple]]
    bergman: Cardinal


def _expand(spectrum, tag):
    out = []
    for i, p in enumerate(spectrum.points):
        if p.multiplicity.is_infinite:
            raise UnavailableError(f"cannot label eigenforms of an infinite-multiplicity value {p.value}")
        out.extend((p.value, (tag, i, c)) for c in range(p.multiplicity.n))
    return out


def _factor_data(domain: PlanarDomain, cutoff: float, merge_tol: float, zero_tol: float) -> _FactorData:
    if isinstance(domain, (Disc, Rectangle)):
        seq = dirichlet_sequence(domain, cutoff)
        return _FactorData(seq, seq, INF)
    if isinstance(domain, Custom):
        if domain.complex_dim != 1:
            raise ValueError("polydomain factors must have complex dimension 1")
        if not domain.pure_point:
            raise UnavailableError("custom factor is not pure point; eigen-entries need multiplicities")
        spec, _ = factor_bidegree(domain, cutoff, merge_tol)
        s00, s01 = spec[(0, 0)], spec[(0, 1)]
        for pq, s in (((0, 0), s00), ((0, 1), s01)):
            if not s.complete or s.cutoff < cutoff:
                raise UnavailableError(
                    f"custom factor spectrum {pq[0]},{pq[1]} is not complete below {cutoff}"
                )
        return _FactorData(
            _expand(s01, "custom01"), _expand(s00.positive_part(zero_tol), "custom00"),
            kernel_dim(s00, zero_tol),
        )
    raise TypeError(f"unsupported factor {domain!r}")


def _index_sums(seqs, cutoff) -> Iterator[tuple[float, tuple[int, ...]]]:
    """All ``(Σ seqs[i][k_i - 1], (k_1, ...))`` below cutoff, lexicographic in k."""
    if any(not s for s in seqs):
        return
    tail_min = [0.0] * (len(seqs) + 1)
    for i in range(len(seqs) - 1, -1, -1):
        tail_min[i] = tail_min[i + 1] + seqs[i][0][0]

    def rec(i, partial, idx):
        if i == len(seqs):
            yield partial, idx
            return
        for k, (v, _) in enumerate(seqs[i], start=1):
            if partial + v + tail_min[i + 1] >= cutoff:
                break
            yield from rec(i + 1, partial + v, idx + (k,))

    yield from rec(0, 0.0, ())


def iter_labels(factors: Sequence[PlanarDomain], q: int, cutoff: float,
                merge_tol: float = DEFAULT_MERGE_TOL,
                zero_tol: float = DEFAULT_ZERO_TOL) -> Iterator[tuple[float, Cardinal, EigenLabel]]:
    """Stream every ``(value, multiplicity, label)`` below ``cutoff``, subset by subset."""
    n = len(factors)
    if not 0 <= q <= n:
        raise ValueError(f"q must lie in [0, {n}], got {q}")
    data = [_factor_data(f, cutoff, merge_tol, zero_tol) for f in factors]
    for J in itertools.combinations(range(1, n + 1), q):
        rest = tuple(j for j in range(1, n + 1) if j not in J)
        for size in range(len(rest) + 1):
            for Z in itertools.combinations(rest, size):
                kind = "W" if not Z else ("V" if Z == rest else "M")
                mult = ONE
                for j in rest:
                    if j not in Z:
                        mult = mult * data[j - 1].bergman
                if mult.is_zero:
                    continue
                support = sorted(J + Z)
                seqs = [data[j - 1].mu if j in J else data[j - 1].lam for j in support]
                for value, k in _index_sums(seqs, cutoff):
                    yield value, mult, EigenLabel(kind, J, k, Z)


def enumerate_box_q(factors: Sequence[PlanarDomain], q: int, cutoff: float,
                    merge_tol: float = DEFAULT_MERGE_TOL, zero_tol: float = DEFAULT_ZERO_TOL,
                    label_cap: int = LABEL_CAP) -> Enumeration:
    """All eigenvalues of ``□_q`` below ``cutoff`` with merged multiplicities and labels."""
    factors = list(factors)
    if not factors:
        raise ValueError("need at least one factor")
    rows = sorted(iter_labels(factors, q, cutoff, merge_tol, zero_tol), key=lambda r: r[0])
    clusters: list[list] = []
    last = None
    for value, mult, label in rows:
        if clusters and close(value, last, merge_tol):
            clusters[-1][1] = clusters[-1][1] + mult
            clusters[-1][2].append(label)
        else:
            clusters.append([value, mult, [label]])
        last = value
    entries = []
    for value, mult, labels in clusters:
        labels.sort(key=EigenLabel.sort_key)
        entries.append(EigenEntry(value, mult, tuple(labels[:label_cap]), len(labels)))
    notes = []
    if any(isinstance(f, Custom) for f in factors):
        notes.append("custom factors: completeness of the list rests on their pure point declaration")
    if any(isinstance(f, (Disc, Rectangle)) for f in factors):
        notes.append("positive function eigenvalues of planar factors equal their (0,1) eigenvalues")
    return Enumeration(tuple(entries), float(cutoff), q, len(factors), merge_tol, tuple(notes))


def counting_function(entries, lam: float, cutoff: float | None = None) -> Cardinal:
    """Number of eigenvalues ``<= lam`` counted with multiplicity."""
    if cutoff is None:
        cutoff = getattr(entries, "cutoff", None)
    if cutoff is None:
        raise ValueError("counting_function needs the cutoff below which entries are complete")
    if lam >= cutoff:
        raise ValueError(f"lambda {lam} is not below the completeness cutoff {cutoff}")
    total = ZERO
    for e in entries:
        if e.value > lam:
            break
        total = total + e.multiplicity
    return total


class Compactness(str, enum.Enum):
    COMPACT = "Compact"
    NON_COMPACT = "NonCompact"
    NOT_APPLICABLE = "NotApplicable"


@dataclass(frozen=True)
class CompactnessVerdict:
    verdict: Compactness
    reason: str


def compactness_verdict(q: int, n: int) -> CompactnessVerdict:
    """Compactness of the dbar-Neumann operator ``N_q`` on an n-fold polydomain."""
    if not 0 <= q <= n:
        raise ValueError(f"need 0 <= q <= n, got q={q}, n={n}")
    if 0 < q < n:
        return CompactnessVerdict(
            Compactness.NON_COMPACT,
            "box_q has eigenvalues of infinite multiplicity (Bergman factors off J)",
        )
    if q == n:
        return CompactnessVerdict(
            Compactness.COMPACT,
            "all multiplicities finite and eigenvalues tend to infinity, as for the Dirichlet problem",
        )
    return CompactnessVerdict(
        Compactness.NOT_APPLICABLE,
        "q = 0: box_0 has the Bergman space as kernel; N_0 is only defined modulo it",
    )


# -- eigenform sampling -------------------------------------------------------

@dataclass
class FormSample:
    """Samples of a product eigenform coefficient on the tensor grid.

    ``values[i_1, ..., i_n]`` is the coefficient of ``dzbar^J`` at the point
    whose j-th factor coordinate is ``nodes[j][i_j]``.  Normalised so that
    ``sum |values|^2 * step^(2n) = 1``.
    """

    J: tuple[int, ...]
    nodes: list[np.ndarray]
    values: np.ndarray
    step: float
    label: EigenLabel
    factor_values: list[np.ndarray] = field(default_factory=list)


def factor_nodes(domain, step: float) -> np.ndarray:
    """Square-lattice points strictly inside the factor, shape ``(N, 2)``."""
    if isinstance(domain, Disc):
        r = domain.radius / step
        m = int(math.floor(r))
        ij = [(i, j) for i in range(-m, m + 1) for j in range(-m, m + 1)
              if i * i + j * j < r * r * (1.0 - 1e-12)]
        return np.array(ij, dtype=float) * step
    if isinstance(domain, Rectangle):
        xs = np.arange(1, int(math.ceil(domain.a / step)) + 1) * step
        ys = np.arange(1, int(math.ceil(domain.b / step)) + 1) * step
        xs = xs[xs < domain.a * (1 - 1e-12)]
        ys = ys[ys < domain.b * (1 - 1e-12)]
        X, Y = np.meshgrid(xs, ys, indexing="ij")
        return np.column_stack([X.ravel(), Y.ravel()])
    raise UnavailableError(f"eigenform sampling is not supported for {type(domain).__name__} factors")


def _mode(domain, k: int):
    cutoff = 4.0
    while True:
        seq = dirichlet_sequence(domain, cutoff)
        if len(seq) >= k:
            return seq[k - 1][1]
        cutoff *= 2.0


_jv = np.vectorize(bessel_j, otypes=[float])


def factor_function(domain, family: str, index: int, xy: np.ndarray) -> np.ndarray:
    """Values of ``Y_k`` (Dirichlet), ``Z_k = ∂Y_k/∂z`` or ``H_m`` (monomial) at points."""
    x, y = xy[:, 0], xy[:, 1]
    if family == "H":
        if isinstance(domain, Rectangle):
            z = (x - domain.a / 2) + 1j * (y - domain.b / 2)
        else:
            z = x + 1j * y
        return z.astype(complex) ** index
    mode = _mode(domain, index)
    if mode[0] == "rect":
        _, m, n = mode
        kx, ky = m * math.pi / domain.a, n * math.pi / domain.b
        if family == "Y":
            return (np.sin(kx * x) * np.sin(ky * y)).astype(complex)
        return 0.5 * (kx * np.cos(kx * x) * np.sin(ky * y) - 1j * ky * np.sin(kx * x) * np.cos(ky * y))
    _, n, k, s = mode
    alpha = bessel_zero(n, k) / domain.radius
    r = np.hypot(x, y)
    theta = np.arctan2(y, x)
    if family == "Y":
        return _jv(n, alpha * r) * np.exp(1j * s * n * theta)
    # d/dz [J_n(αr) e^{inθ}] = (α/2) J_{n-1} e^{i(n-1)θ};  d/dz [J_n(αr) e^{-inθ}] = -(α/2) J_{n+1} e^{-i(n+1)θ}
    if s == 1:
        return 0.5 * alpha * _jv(n - 1, alpha * r) * np.exp(1j * (n - 1) * theta)
    return -0.5 * alpha * _jv(n + 1, alpha * r) * np.exp(-1j * (n + 1) * theta)


def eigenform_sample(factors: Sequence[PlanarDomain], label: EigenLabel, q: int, grid_step: float,
                     holomorphic: dict[int, int] | None = None,
                     max_points: int = 20_000_000) -> FormSample:
    """Sample the eigenform named by ``label`` on a product lattice.

    ``holomorphic`` maps a factor index outside ``J ∪ Z`` to the power ``m`` of
    the monomial used as its Bergman-space element (default 0).
    """
    factors = list(factors)
    n = len(factors)
    if grid_step <= 0:
        raise ValueError("grid_step must be positive")
    if len(label.J) != q:
        raise ValueError(f"label has |J| = {len(label.J)} but q = {q}")
    if not 0 <= q <= n or any(not 1 <= j <= n for j in label.J) or list(label.J) != sorted(set(label.J)):
        raise ValueError(f"invalid J {label.J} for {n} factors")
    rest = tuple(j for j in range(1, n + 1) if j not in label.J)
    expected_Z = {"W": lambda Z: not Z, "V": lambda Z: Z == rest and rest,
                  "M": lambda Z: Z and Z != rest and set(Z) <= set(rest) and list(Z) == sorted(set(Z))}
    if label.kind not in expected_Z:
        raise ValueError(f"unknown label kind {label.kind!r}")
    if not expected_Z[label.kind](label.Z):
        raise ValueError(f"Z = {label.Z} is not valid for a kind {label.kind} label with J = {label.J}")
    if len(label.k) != len(label.support):
        raise ValueError("labels carry one eigenvalue index per factor in J and Z")
    if any(k < 1 for k in label.k):
        raise ValueError("eigenvalue indices are 1-based")
    holomorphic = holomorphic or {}

    nodes = [factor_nodes(f, grid_step) for f in factors]
    if math.prod(len(p) for p in nodes) > max_points:
        raise ValueError("product grid too large; increase grid_step")
    w = grid_step ** 2
    per_factor = []
    for j, (f, xy) in enumerate(zip(factors, nodes), start=1):
        if j in label.J:
            vals = factor_function(f, "Y", label.index_of(j), xy)
        elif j in label.Z:
            vals = factor_function(f, "Z", label.index_of(j), xy)
        else:
            vals = factor_function(f, "H", holomorphic.get(j, 0), xy)
        norm = math.sqrt(float(np.sum(np.abs(vals) ** 2)) * w)
        per_factor.append(vals / norm)
    values = per_factor[0]
    for vals in per_factor[1:]:
        values = np.multiply.outer(values, vals)
    return FormSample(tuple(label.J), nodes, values, grid_step, label, per_factor)
