"""Bessel functions of the first kind J_n and their positive zeros.

Three evaluation branches, each accurate to about 1e-13 absolute where used:

* power series for ``x <= SERIES_LIMIT``;
* Miller's backward recurrence, normalised with ``J_0 + 2 sum J_2k = 1``,
  between the series and the asymptotic region;
* Hankel's large-argument expansion for ``x >= max(ASYMPTOTIC_MIN, n**2)``,
  where its terms decay at least geometrically.
"""

from __future__ import annotations

import math
from functools import lru_cache

from .errors import BoxspecError, EnvelopeError

MAX_ORDER = 50
MAX_ARG = 1.0e4
SERIES_LIMIT = 8.0
ASYMPTOTIC_MIN = 25.0
SCAN_STEP = math.pi / 4
DEFAULT_XTOL = 1e-12


class BracketError(BoxspecError, RuntimeError):
    pass


def _check_envelope(n, x):
    if isinstance(n, bool) or not isinstance(n, int) or n < 0 or n > MAX_ORDER:
        raise EnvelopeError(f"order must be an integer in [0, {MAX_ORDER}], got {n!r}")
    if not (0.0 <= x <= MAX_ARG):
        raise EnvelopeError(f"argument must lie in [0, {MAX_ARG:g}], got {x!r}")


def bessel_j(n: int, x: float) -> float:
    """J_n(x) for integer ``0 <= n <= 50`` and ``0 <= x <= 1e4``."""
    x = float(x)
    _check_envelope(n, x)
    return _jn(n, x)


def asymptotic_threshold(n: int) -> float:
    return max(ASYMPTOTIC_MIN, float(n * n))


def _jn(n: int, x: float) -> float:
    if x == 0.0:
        return 1.0 if n == 0 else 0.0
    if x <= SERIES_LIMIT:
        return jn_series(n, x)
    if x >= asymptotic_threshold(n):
        return jn_asymptotic(n, x)
    return jn_miller(n, x)


def jn_series(n: int, x: float, max_terms: int = 200) -> float:
    half = 0.5 * x
    term = math.exp(n * math.log(half) - math.lgamma(n + 1))
    terms = [term]
    q = -half * half
    for k in range(1, max_terms):
        term *= q / (k * (k + n))
        terms.append(term)
        if k > half and abs(term) < 1e-18 * abs(terms[0]):
            break
    return math.fsum(terms)


def jn_miller(n: int, x: float) -> float:
    top = max(n, int(x)) + 1
    start = top + int(math.sqrt(40.0 * top)) + 20
    start += start % 2
    big, small = 1e250, 1e-250
    two_over_x = 2.0 / x
    j_next, j = 0.0, 1e-30
    norm = 0.0
    result = 0.0
    for k in range(start, 0, -1):
        # j holds J_k (unnormalised), j_next holds J_{k+1}
        j_prev = k * two_over_x * j - j_next
        j_next, j = j, j_prev
        if abs(j) > big:
            j *= small
            j_next *= small
            norm *= small
            result *= small
        if k - 1 == n:
            result = j
        if (k - 1) % 2 == 0 and k - 1 > 0:
            norm += 2.0 * j
    norm += j
    return result / norm


def jn_asymptotic(n: int, x: float) -> float:
    mu = 4.0 * n * n
    p_terms, q_terms = [], []
    a = 1.0
    prev = math.inf
    k = 0
    while True:
        k += 1
        a *= (mu - (2 * k - 1) ** 2) / (k * 8.0 * x)
        mag = abs(a)
        if mag > prev or mag < 1e-17:
            break
        prev = mag
        sign = -1.0 if (k // 2) % 2 else 1.0
        (q_terms if k % 2 else p_terms).append(sign * a)
        if k > 400:
            break
    P = 1.0 + math.fsum(p_terms)
    Q = math.fsum(q_terms)
    # cos(x - phase) expanded so the large x is never shifted by an inexact multiple of pi
    phase = (0.5 * n + 0.25) * math.pi
    c = math.cos(x) * math.cos(phase) + math.sin(x) * math.sin(phase)
    s = math.sin(x) * math.cos(phase) - math.cos(x) * math.sin(phase)
    return math.sqrt(2.0 / (math.pi * x)) * (P * c - Q * s)


def bessel_j_derivative(n: int, x: float) -> float:
    if n == 0:
        return -_jn(1, x)
    return 0.5 * (_jn(n - 1, x) - _jn(n + 1, x))


@lru_cache(maxsize=4096)
def _find_zero(n: int, k: int, xtol: float) -> tuple[float, float, float]:
    """k-th positive zero of J_n with its final sign-change bracket."""
    x = float(n)
    f = _jn(n, x) if x > 0 else 1.0
    found = 0
    budget = 4 * (k + n) + 40
    for _ in range(budget):
        x_new = x + SCAN_STEP
        if x_new > MAX_ARG:
            break
        f_new = _jn(n, x_new)
        if f_new == 0.0 or f * f_new < 0:
            found += 1
            if found == k:
                if f_new == 0.0:
                    return x_new, x, x_new
                return _refine(n, x, x_new, f, xtol)
        x, f = x_new, f_new
    raise BracketError(f"no bracket for zero {k} of J_{n} within the scan budget")


def _refine(n, lo, hi, f_lo, xtol):
    while hi - lo > xtol * hi:
        mid = 0.5 * (lo + hi)
        f_mid = _jn(n, mid)
        if f_mid == 0.0:
            return mid, lo, hi
        if f_lo * f_mid < 0:
            hi = mid
        else:
            lo, f_lo = mid, f_mid
    x = 0.5 * (lo + hi)
    for _ in range(4):
        d = bessel_j_derivative(n, x)
        if d == 0.0:
            break
        step = _jn(n, x) / d
        x_new = x - step
        if not lo <= x_new <= hi:
            break
        x = x_new
        if abs(step) <= 1e-16 * x:
            break
    return x, lo, hi


def bessel_zero_bracket(n: int, k: int, xtol: float = DEFAULT_XTOL) -> tuple[float, float, float]:
    """``(zero, lo, hi)``: the zero and the bisection bracket it was polished in."""
    if isinstance(n, bool) or not isinstance(n, int) or not 0 <= n <= MAX_ORDER:
        raise EnvelopeError(f"order must be an integer in [0, {MAX_ORDER}], got {n!r}")
    if isinstance(k, bool) or not isinstance(k, int) or k < 1:
        raise ValueError(f"zero rank must be a positive integer, got {k!r}")
    return _find_zero(n, k, xtol)


def bessel_zero(n: int, k: int, xtol: float = DEFAULT_XTOL) -> float:
    """The k-th positive zero j_{n,k} of J_n.

    Brackets come from a pi/4 sign-change scan starting at ``x = n`` (all
    zeros of J_n exceed n), then bisection to relative width ``xtol`` and a
    few Newton steps kept inside the bracket.  The result is checked against
    the interlacing ``j_{n,k} < j_{n+1,k} < j_{n,k+1}``.
    """
    z = bessel_zero_bracket(n, k, xtol)[0]
    upper = _find_zero(n, k + 1, xtol)[0]
    if n < MAX_ORDER:
        mid = _find_zero(n + 1, k, xtol)[0]
        ok = z < mid < upper
    else:
        ok = z < upper
    if not ok:
        raise BracketError(f"interlacing check failed at j_({n},{k}) = {z}")
    return z
