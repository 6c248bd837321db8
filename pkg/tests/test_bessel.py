import math

import numpy as np
import pytest
from scipy import special

from boxspec.bessel import (
    BracketError,
    asymptotic_threshold,
    bessel_j,
    bessel_zero,
    bessel_zero_bracket,
    jn_asymptotic,
    jn_miller,
    jn_series,
)
from boxspec.errors import EnvelopeError

# reference zeros from standard tables
TABLE_ZEROS = {
    (0, 1): 2.404825557695773,
    (0, 2): 5.520078110286311,
    (0, 3): 8.653727912911013,
    (1, 1): 3.831705970207512,
    (1, 2): 7.015586669815619,
    (2, 1): 5.135622301840683,
    (5, 3): 15.70017407971167,
    (10, 1): 14.47550068655454,
}


@pytest.mark.parametrize("nk,expected", sorted(TABLE_ZEROS.items()))
def test_zero_table(nk, expected):
    assert bessel_zero(*nk) == pytest.approx(expected, rel=1e-12)


def test_values_against_scipy_over_envelope():
    rng = np.random.default_rng(7)
    worst = 0.0
    for n in list(range(0, 51, 5)) + [1, 2, 3]:
        xs = np.concatenate([np.linspace(0, 60, 300), rng.uniform(0, 1e4, 100), [n * n, 8.0, 25.0]])
        for x in xs:
            if x > 1e4:
                continue
            worst = max(worst, abs(bessel_j(n, float(x)) - special.jv(n, x)))
    assert worst < 1e-12


def test_branches_agree_on_overlaps():
    for n in (0, 1, 2, 4):
        for x in np.linspace(6.0, 8.0, 9):
            assert jn_series(n, x) == pytest.approx(jn_miller(n, x), abs=1e-13)
    for n in (0, 1, 3, 5):
        t = asymptotic_threshold(n)
        for x in np.linspace(t, t + 10, 11):
            assert jn_asymptotic(n, x) == pytest.approx(jn_miller(n, x), abs=1e-12)


def test_small_and_zero_arguments():
    assert bessel_j(0, 0.0) == 1.0
    assert bessel_j(3, 0.0) == 0.0
    assert bessel_j(2, 1e-3) == pytest.approx(special.jv(2, 1e-3), rel=1e-13)


@pytest.mark.parametrize("n,x", [(-1, 1.0), (51, 1.0), (0, -0.5), (0, 1e4 + 1), (1.5, 2.0)])
def test_envelope(n, x):
    with pytest.raises(EnvelopeError):
        bessel_j(n, x)


def test_zeros_match_scipy():
    for n in (0, 1, 7, 20, 50):
        ref = special.jn_zeros(n, 8)
        got = [bessel_zero(n, k) for k in range(1, 9)]
        np.testing.assert_allclose(got, ref, rtol=1e-12)


def test_zeros_stable_under_halved_tolerance():
    for n, k in ((0, 1), (1, 1), (0, 2), (13, 4)):
        assert abs(bessel_zero(n, k, 1e-12) - bessel_zero(n, k, 5e-13)) < 1e-9


def test_interlacing():
    for n in range(0, 10):
        for k in range(1, 6):
            assert bessel_zero(n, k) < bessel_zero(n + 1, k) < bessel_zero(n, k + 1)


def test_bracket_contains_zero():
    z, lo, hi = bessel_zero_bracket(3, 2)
    assert lo <= z <= hi
    assert bessel_j(3, lo) * bessel_j(3, hi) <= 0
    assert hi - lo <= 1e-12 * hi


def test_zero_bad_rank():
    with pytest.raises(ValueError):
        bessel_zero(0, 0)
    with pytest.raises(EnvelopeError):
        bessel_zero(60, 1)


def test_scan_budget_exhausted():
    # zeros of J_0 are about pi apart, so the 4000th lies beyond the argument envelope
    with pytest.raises(BracketError):
        bessel_zero(0, 4000)


def test_zero_is_root():
    for (n, k) in TABLE_ZEROS:
        z = bessel_zero(n, k)
        assert abs(bessel_j(n, z)) < 1e-13
        assert not math.isnan(z)
