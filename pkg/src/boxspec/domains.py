"""Spectra of planar factor domains and user-supplied custom factors.

On a planar domain the complex Laplacian is ``-Δ/4``: on (0,1)-forms with
Dirichlet conditions, on functions with the free condition ``u_zbar = 0`` on
the boundary.  All values produced here are eigenvalues of the complex
Laplacian, i.e. Dirichlet eigenvalues of ``-Δ`` divided by 4.
"""

from __future__ import annotations

import io
import json
import math
import os
import re
from dataclasses import dataclass
from typing import Any

from .bessel import MAX_ORDER, BracketError, bessel_zero
from .errors import ConfigError, EnvelopeError, MultiplicityUnavailableError
from .spectrum import (
    DEFAULT_MERGE_TOL,
    INF,
    ZERO,
    BidegreeSpectrum,
    Cardinal,
    HarmonicDims,
    SpectralPoint,
    TruncatedSpectrum,
    close,
)

FORM_BIDEGREE_NOTE = (
    "(1,q) spectra of planar factors equal the (0,q) spectra: dz is parallel for the flat metric"
)
FUNCTION_SPECTRUM_NOTE = (
    "positive (0,0) spectrum of planar factors taken equal to the (0,1) spectrum "
    "via u -> du/dzbar between eigenspaces"
)


@dataclass(frozen=True)
class Disc:
    radius: float

    def __post_init__(self):
        if not (isinstance(self.radius, (int, float)) and self.radius > 0 and math.isfinite(self.radius)):
            raise ValueError(f"disc radius must be positive, got {self.radius!r}")


@dataclass(frozen=True)
class Rectangle:
    a: float
    b: float

    def __post_init__(self):
        for name in ("a", "b"):
            v = getattr(self, name)
            if not (isinstance(v, (int, float)) and v > 0 and math.isfinite(v)):
                raise ValueError(f"rectangle side {name} must be positive, got {v!r}")


@dataclass(frozen=True)
class Custom:
    """A factor whose spectra come from outside (annuli, Hartogs triangle, ...)."""

    complex_dim: int
    spectra: BidegreeSpectrum
    harmonic: HarmonicDims | None = None
    pure_point: bool = True


PlanarDomain = Disc | Rectangle | Custom


# -- Dirichlet modes ----------------------------------------------------------

def disc_modes(radius: float, cutoff: float) -> list[tuple[float, int, int]]:
    """``(value, n, k)`` with ``value = j_{n,k}^2 / (4 radius^2) < cutoff``, sorted."""
    if radius <= 0 or cutoff <= 0:
        raise ValueError("radius and cutoff must be positive")
    bound = 2.0 * radius * math.sqrt(cutoff)  # j_{n,k} < bound
    modes = []
    n = 0
    while True:
        if n > MAX_ORDER:
            raise EnvelopeError(
                f"cutoff {cutoff} on radius {radius} needs Bessel order (n,k)=({n},1), "
                f"beyond the supported order {MAX_ORDER}"
            )
        k = 1
        while True:
            try:
                j = bessel_zero(n, k)
            except (BracketError, EnvelopeError) as exc:
                raise EnvelopeError(
                    f"cutoff {cutoff} on radius {radius} needs Bessel zero (n,k)=({n},{k}): {exc}"
                ) from exc
            if j >= bound:
                break
            modes.append((j * j / (4.0 * radius * radius), n, k))
            k += 1
        if k == 1:
            # j_{n,1} increases with n, so no higher order contributes either
            break
        n += 1
    modes.sort()
    return modes


def rect_modes(a: float, b: float, cutoff: float) -> list[tuple[float, int, int]]:
    """``(value, m, n)`` with ``value = (π²/4)(m²/a² + n²/b²) < cutoff``, sorted."""
    if a <= 0 or b <= 0 or cutoff <= 0:
        raise ValueError("sides and cutoff must be positive")
    c = math.pi ** 2 / 4.0
    modes = []
    m = 1
    while c * (m * m / (a * a) + 1.0 / (b * b)) < cutoff:
        n = 1
        while True:
            v = c * (m * m / (a * a) + n * n / (b * b))
            if v >= cutoff:
                break
            modes.append((v, m, n))
            n += 1
        m += 1
    modes.sort()
    return modes


def disc_sigma01(radius: float, cutoff: float, merge_tol: float = DEFAULT_MERGE_TOL) -> TruncatedSpectrum:
    """(0,1)-form spectrum of a disc; angular orders n >= 1 are doubly degenerate."""
    pairs = [(v, 1 if n == 0 else 2) for v, n, _ in disc_modes(radius, cutoff)]
    return TruncatedSpectrum.from_pairs(pairs, cutoff, merge_tol=merge_tol)


def rect_sigma01(a: float, b: float, cutoff: float, merge_tol: float = DEFAULT_MERGE_TOL) -> TruncatedSpectrum:
    pairs = [(v, 1) for v, _, _ in rect_modes(a, b, cutoff)]
    return TruncatedSpectrum.from_pairs(pairs, cutoff, merge_tol=merge_tol)


def dirichlet_sequence(domain: Disc | Rectangle, cutoff: float) -> list[tuple[float, tuple]]:
    """Eigenvalues repeated by multiplicity, each with the mode that realises it.

    Disc modes are ``("disc", n, k, s)`` with angular factor ``exp(i s n θ)``,
    ``s = 0`` for ``n = 0`` and ``s = ±1`` otherwise; rectangle modes are
    ``("rect", m, n)``.  The list order fixes the 1-based eigenvalue index used
    in eigenform labels.
    """
    if isinstance(domain, Disc):
        seq = []
        for v, n, k in disc_modes(domain.radius, cutoff):
            for s in ((0,) if n == 0 else (1, -1)):
                seq.append((v, ("disc", n, k, s)))
        return seq
    if isinstance(domain, Rectangle):
        return [(v, ("rect", m, n)) for v, m, n in rect_modes(domain.a, domain.b, cutoff)]
    raise TypeError(f"no analytic modes for {type(domain).__name__}")


# -- bidegree tables ----------------------------------------------------------

def planar_harmonic() -> HarmonicDims:
    # Bergman space in degrees (0,0) and (1,0); the (0,1) and (1,1) kernels are trivial
    return HarmonicDims(1, {(0, 0): INF, (0, 1): ZERO, (1, 0): INF, (1, 1): ZERO})


def factor_bidegree(domain: PlanarDomain, cutoff: float,
                    merge_tol: float = DEFAULT_MERGE_TOL) -> tuple[BidegreeSpectrum, HarmonicDims]:
    """Per-bidegree spectra and harmonic dimensions of one factor."""
    if isinstance(domain, Custom):
        return _custom_bidegree(domain, cutoff)
    if isinstance(domain, Disc):
        s01 = disc_sigma01(domain.radius, cutoff, merge_tol)
    elif isinstance(domain, Rectangle):
        s01 = rect_sigma01(domain.a, domain.b, cutoff, merge_tol)
    else:
        raise TypeError(f"unsupported factor {domain!r}")
    s00 = TruncatedSpectrum((SpectralPoint(0.0, INF),) + s01.points, s01.cutoff, True, merge_tol)
    table = {(0, 0): s00, (0, 1): s01, (1, 0): s00, (1, 1): s01}
    spec = BidegreeSpectrum(1, table, notes=(FUNCTION_SPECTRUM_NOTE, FORM_BIDEGREE_NOTE))
    return spec, planar_harmonic()


def _custom_bidegree(domain: Custom, cutoff: float):
    spec = domain.spectra
    table = {pq: s.truncate(cutoff) if s.cutoff > cutoff else s for pq, s in spec.table.items()}
    spec = BidegreeSpectrum(spec.complex_dim, table, spec.unavailable, spec.notes)
    harmonic = domain.harmonic
    if harmonic is None:
        harmonic = HarmonicDims(domain.complex_dim, {}, {
            pq: "custom factor declares no harmonic dimensions" for pq in spec.bidegrees()
        })
    return spec, harmonic


def require_pure_point(domain: PlanarDomain, what: str):
    if isinstance(domain, Custom) and not domain.pure_point:
        raise MultiplicityUnavailableError(f"{what} needs multiplicities; custom factor is not pure point")


# -- custom spectrum documents ------------------------------------------------

_BIDEGREE_KEY = re.compile(r"^(\d+),(\d+)$")


def _is_number(x) -> bool:
    return isinstance(x, (int, float)) and not isinstance(x, bool) and math.isfinite(x)


def _parse_mult(x, pointer, allow_zero=False) -> Cardinal:
    if x == "inf":
        return INF
    if isinstance(x, str) and x.isdigit():
        x = int(x)
    if isinstance(x, bool) or not isinstance(x, int) or x < (0 if allow_zero else 1):
        lo = "nonnegative" if allow_zero else "positive"
        raise ConfigError(f"multiplicity must be a {lo} integer or \"inf\", got {x!r}", pointer)
    return Cardinal(x)


def custom_from_dict(doc: Any, pointer: str = "", cutoff: float | None = None,
                     merge_tol: float = DEFAULT_MERGE_TOL) -> Custom:
    """Validate a parsed custom-factor document.

    Schema: ``{"type": "custom", "dim": D, "pure_point": bool, "spectra":
    {"P,Q": [[value, mult], ...]}, "harmonic": {"P,Q": mult}}`` with optional
    ``"cutoff"`` (defaults to the job cutoff) and ``"complete"`` (default
    true).  Tables must be strictly ascending; values at or beyond the cutoff
    are dropped.  Unknown keys are ignored.
    """
    if not isinstance(doc, dict):
        raise ConfigError("custom factor must be a JSON object", pointer or "/")
    if doc.get("type", "custom") != "custom":
        raise ConfigError("type must be \"custom\"", f"{pointer}/type")
    dim = doc.get("dim")
    if isinstance(dim, bool) or not isinstance(dim, int) or dim < 1:
        raise ConfigError("dim must be a positive integer", f"{pointer}/dim")
    pure_point = doc.get("pure_point")
    if not isinstance(pure_point, bool):
        raise ConfigError("pure_point must be a boolean", f"{pointer}/pure_point")
    if "cutoff" in doc:
        if not _is_number(doc["cutoff"]) or doc["cutoff"] <= 0:
            raise ConfigError("cutoff must be a positive number", f"{pointer}/cutoff")
        cutoff = float(doc["cutoff"]) if cutoff is None else min(cutoff, float(doc["cutoff"]))
    if cutoff is None:
        raise ConfigError("custom factor needs a cutoff (in the document or from the job)", f"{pointer}/cutoff")
    complete = doc.get("complete", True)
    if not isinstance(complete, bool):
        raise ConfigError("complete must be a boolean", f"{pointer}/complete")

    spectra = doc.get("spectra")
    if not isinstance(spectra, dict):
        raise ConfigError("spectra must be an object keyed by \"P,Q\"", f"{pointer}/spectra")
    table = {}
    for key, rows in spectra.items():
        kp = f"{pointer}/spectra/{key}"
        pq = _parse_bidegree(key, dim, kp)
        if not isinstance(rows, list):
            raise ConfigError("spectrum table must be a list of [value, multiplicity]", kp)
        points = []
        prev = None
        for i, row in enumerate(rows):
            rp = f"{kp}/{i}"
            if not isinstance(row, list) or len(row) != 2:
                raise ConfigError("entry must be [value, multiplicity]", rp)
            value, mult = row
            if not _is_number(value):
                raise ConfigError("value must be a finite number", f"{rp}/0")
            if value < 0:
                raise ConfigError(f"value must be nonnegative, got {value}", f"{rp}/0")
            m = _parse_mult(mult, f"{rp}/1")
            if prev is not None and (value <= prev or close(value, prev, merge_tol)):
                raise ConfigError("values must be strictly ascending", f"{rp}/0")
            prev = value
            if value < cutoff:
                points.append(SpectralPoint(float(value), m))
        table[pq] = TruncatedSpectrum(tuple(points), cutoff, complete, merge_tol, pure_point)

    harmonic = None
    if "harmonic" in doc:
        hdoc = doc["harmonic"]
        if not isinstance(hdoc, dict):
            raise ConfigError("harmonic must be an object keyed by \"P,Q\"", f"{pointer}/harmonic")
        htable = {}
        for key, mult in hdoc.items():
            hp = f"{pointer}/harmonic/{key}"
            htable[_parse_bidegree(key, dim, hp)] = _parse_mult(mult, hp, allow_zero=True)
        harmonic = HarmonicDims(dim, htable, {
            pq: "custom factor declares no harmonic dimension here"
            for pq in ((p, q) for p in range(dim + 1) for q in range(dim + 1)) if pq not in htable
        })

    notes = ("custom factor: completeness and pure point spectrum are asserted by the input, not verified",)
    unavailable = {(p, q): "custom factor does not provide this bidegree"
                   for p in range(dim + 1) for q in range(dim + 1) if (p, q) not in table}
    return Custom(dim, BidegreeSpectrum(dim, table, unavailable, notes), harmonic, pure_point)


def _parse_bidegree(key, dim, pointer):
    m = _BIDEGREE_KEY.match(key)
    if not m:
        raise ConfigError(f"bidegree key must look like \"P,Q\", got {key!r}", pointer)
    p, q = int(m.group(1)), int(m.group(2))
    if p > dim or q > dim:
        raise ConfigError(f"bidegree {key} exceeds dimension {dim}", pointer)
    return p, q


def load_custom_spectrum(source, cutoff: float | None = None,
                         merge_tol: float = DEFAULT_MERGE_TOL) -> Custom:
    """Load a custom factor from a path, a text stream, or a JSON string."""
    if isinstance(source, (str, os.PathLike)) and not str(source).lstrip().startswith("{"):
        with open(source, encoding="utf-8") as fh:
            text = fh.read()
    elif isinstance(source, io.IOBase) or hasattr(source, "read"):
        text = source.read()
    else:
        text = str(source)
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON: {exc}", "") from exc
    return custom_from_dict(doc, "", cutoff, merge_tol)
