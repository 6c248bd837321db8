import itertools
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from boxspec.errors import AmbiguousKernelError, MultiplicityUnavailableError, UnavailableError
from boxspec.spectrum import (
    INF,
    ONE,
    ZERO,
    BidegreeSpectrum,
    Cardinal,
    HarmonicDims,
    SpectralPoint,
    TruncatedSpectrum,
    Verdict,
    bidegree_product,
    coalesce,
    gap_report,
    kernel_dim,
    kunneth_product,
    minkowski_sum,
    minkowski_sum_many,
    spectrum_union,
    splits,
    total_spectrum,
)


def spec(pairs, cutoff=100.0, **kw):
    return TruncatedSpectrum.from_pairs(pairs, cutoff, **kw)


# -- cardinals ----------------------------------------------------------------

def test_cardinal_arithmetic():
    two, three = Cardinal(2), Cardinal(3)
    assert two + three == Cardinal(5)
    assert two * three == Cardinal(6)
    assert two + INF == INF
    assert INF * two == INF
    assert ZERO * INF == ZERO
    assert INF * ZERO == ZERO
    assert INF + ZERO == INF


def test_cardinal_coercion_and_order():
    assert Cardinal.of("inf") is INF
    assert Cardinal.of(math.inf) is INF
    assert Cardinal.of(4.0) == Cardinal(4)
    assert Cardinal(3) < INF
    assert not INF < Cardinal(10 ** 9)
    assert sorted([INF, ONE, ZERO]) == [ZERO, ONE, INF]
    assert str(INF) == "inf" and INF.to_json() == "inf"
    with pytest.raises(ValueError):
        Cardinal(-1)
    with pytest.raises(ValueError):
        Cardinal(True)


# -- truncated spectra --------------------------------------------------------

def test_from_pairs_merges_and_drops_above_cutoff():
    S = spec([(2.0, 1), (1.0, 2), (1.0 + 1e-12, 3), (5.0, 1)], cutoff=5.0)
    assert S.pairs() == [(1.0, Cardinal(5)), (2.0, ONE)]


def test_points_must_be_sorted_and_below_cutoff():
    with pytest.raises(ValueError):
        TruncatedSpectrum((SpectralPoint(2.0, ONE), SpectralPoint(1.0, ONE)), 5.0)
    with pytest.raises(ValueError):
        TruncatedSpectrum((SpectralPoint(6.0, ONE),), 5.0)
    with pytest.raises(ValueError):
        SpectralPoint(-1.0, ONE)
    with pytest.raises(ValueError):
        SpectralPoint(1.0, ZERO)


def test_coalesce_chains_runs():
    out = coalesce([(1.0, ONE), (1.0 + 0.6e-9, ONE), (1.0 + 1.2e-9, ONE)], 1e-9)
    assert len(out) == 1 and out[0] == (1.0, Cardinal(3))


def test_minkowski_sum_small_example():
    S = spec([(0.0, INF), (1.0, 1)], cutoff=10.0)
    T = spec([(1.0, 1), (2.0, 2)], cutoff=10.0)
    U = minkowski_sum(S, T)
    assert U.pairs() == [(1.0, INF), (2.0, INF), (3.0, Cardinal(2))]


def test_minkowski_sum_uses_smaller_cutoff_and_and_of_completeness():
    S = spec([(1.0, 1)], cutoff=3.0)
    T = spec([(0.5, 1), (2.5, 1)], cutoff=10.0, complete=False)
    U = minkowski_sum(S, T)
    assert U.cutoff == 3.0
    assert not U.complete
    assert U.values == [1.5]


def test_minkowski_sum_many_needs_input():
    with pytest.raises(ValueError):
        minkowski_sum_many([])


def test_union_adds_multiplicities():
    U = spectrum_union([spec([(1.0, 1)]), spec([(1.0, 2), (3.0, 1)])])
    assert U.pairs() == [(1.0, Cardinal(3)), (3.0, ONE)]


finite_spectra = st.lists(
    st.tuples(st.floats(0.0, 20.0, allow_nan=False), st.integers(1, 3)), min_size=1, max_size=6
).map(lambda pairs: spec(pairs, cutoff=50.0))


def _expanded(S):
    return sorted(v for v, m in S.pairs() for _ in range(m.n))


@settings(max_examples=60, deadline=None)
@given(finite_spectra, finite_spectra)
def test_minkowski_sum_is_commutative(S, T):
    a, b = minkowski_sum(S, T), minkowski_sum(T, S)
    assert len(a) == len(b)
    for (v, m), (w, n) in zip(a.pairs(), b.pairs()):
        assert v == pytest.approx(w, rel=1e-9, abs=1e-9) and m == n


@settings(max_examples=60, deadline=None)
@given(finite_spectra, finite_spectra)
def test_minkowski_sum_matches_brute_force_multiset(S, T):
    brute = sorted(a + b for a in _expanded(S) for b in _expanded(T))
    got = _expanded(minkowski_sum(S, T))
    assert len(got) == len(brute)
    for x, y in zip(got, brute):
        assert x == pytest.approx(y, rel=1e-8, abs=1e-8)


@settings(max_examples=40, deadline=None)
@given(finite_spectra, finite_spectra, finite_spectra)
def test_minkowski_sum_is_associative(R, S, T):
    a = minkowski_sum(minkowski_sum(R, S), T)
    b = minkowski_sum(R, minkowski_sum(S, T))
    assert a.total_multiplicity() == b.total_multiplicity()


# -- bidegrees ----------------------------------------------------------------

def test_splits():
    assert sorted(splits(1, [1, 1])) == [(0, 1), (1, 0)]
    assert list(splits(3, [1, 1])) == []


def planar_like(positive, cutoff=20.0):
    s01 = spec([(v, 1) for v in positive], cutoff)
    s00 = spec([(0.0, INF)] + [(v, 1) for v in positive], cutoff)
    return BidegreeSpectrum(1, {(0, 0): s00, (0, 1): s01, (1, 0): s00, (1, 1): s01})


def test_bidegree_product_is_union_over_splits():
    P = bidegree_product([planar_like([1.0]), planar_like([2.0])])
    # (0,1): σ00(Ω1)+σ01(Ω2) ∪ σ01(Ω1)+σ00(Ω2)
    assert P[(0, 1)].pairs() == [(1.0, INF), (2.0, INF), (3.0, Cardinal(2))]
    assert P[(0, 2)].pairs() == [(3.0, ONE)]
    assert P[(0, 0)].pairs()[0] == (0.0, INF)


def test_bidegree_product_marks_missing_inputs():
    partial = BidegreeSpectrum(1, {(0, 1): spec([(1.0, 1)])}, {(0, 0): "not computed"})
    P = bidegree_product([partial, planar_like([2.0])], [(0, 1), (0, 2)])
    assert (0, 2) in P.table
    assert "not computed" in P.unavailable[(0, 1)]
    with pytest.raises(UnavailableError):
        P[(0, 1)]
    with pytest.raises(UnavailableError):
        total_spectrum(P)


# -- gap and kernel -----------------------------------------------------------

def test_gap_report_first_positive_point():
    r = gap_report(spec([(0.0, INF), (1.5, 2)]))
    assert r.verdict is Verdict.CLOSED_RANGE
    assert r.gap == 1.5 and r.bound_constant == 1.5 and not r.gap_is_lower_bound


def test_gap_report_lower_bound_when_nothing_positive():
    r = gap_report(spec([(0.0, 1)], cutoff=7.0))
    assert r.verdict is Verdict.CLOSED_RANGE and r.gap == 7.0 and r.gap_is_lower_bound


def test_gap_report_incomplete_is_unknown():
    assert gap_report(spec([(0.0, 1), (1.0, 1)], complete=False)).verdict is Verdict.UNKNOWN


def test_kernel_dim():
    assert kernel_dim(spec([(0.0, INF), (1.0, 1)])) == INF
    assert kernel_dim(spec([(1.0, 1)])) == ZERO
    assert kernel_dim(spec([(1e-13, 3)])) == Cardinal(3)


def test_kernel_dim_ambiguous_and_set_only():
    S = TruncatedSpectrum((SpectralPoint(0.0, ONE), SpectralPoint(1e-6, ONE)), 10.0)
    with pytest.raises(AmbiguousKernelError):
        kernel_dim(S, zero_tol=1e-3)
    with pytest.raises(MultiplicityUnavailableError):
        kernel_dim(spec([(0.0, 1)], pure_point=False))


# -- Künneth ------------------------------------------------------------------

def test_kunneth_planar_pair():
    planar = HarmonicDims(1, {(0, 0): INF, (0, 1): ZERO, (1, 0): INF, (1, 1): ZERO})
    K = kunneth_product([planar, planar])
    assert K.table[(0, 0)] == INF
    for q in (1, 2):
        for p in range(3):
            assert K.table[(p, q)] == ZERO


def test_kunneth_finite_and_missing():
    a = HarmonicDims(1, {(0, 0): 1, (0, 1): 2, (1, 0): 0, (1, 1): 3})
    b = HarmonicDims(1, {(0, 0): 2, (0, 1): 1, (1, 0): 1})
    K = kunneth_product([a, b])
    assert K.table[(0, 1)] == Cardinal(1 * 1 + 2 * 2)
    assert (1, 2) in K.unavailable
    assert (0, 0) in K.table


@settings(max_examples=60, deadline=None)
@given(st.lists(st.sampled_from([0, 1, 2, 5, "inf"]), min_size=2, max_size=4))
def test_kunneth_of_kernels_matches_cardinal_product(ks):
    # one-degree factors: the (0,0) product kernel is the product of the kernels
    factors = [HarmonicDims(1, {(0, 0): k, (0, 1): 0, (1, 0): 0, (1, 1): 0}) for k in ks]
    expected = ONE
    for k in ks:
        expected = expected * Cardinal.of(k)
    assert kunneth_product(factors).table[(0, 0)] == expected


def test_cardinal_product_reference_table():
    values = [ZERO, ONE, Cardinal(3), INF]
    expected = {
        (0, 0): 0, (0, 1): 0, (0, 2): 0, (0, 3): 0,
        (1, 1): 1, (1, 2): 3, (1, 3): "inf",
        (2, 2): 9, (2, 3): "inf", (3, 3): "inf",
    }
    for (i, j), e in expected.items():
        assert values[i] * values[j] == Cardinal.of(e)
        assert values[j] * values[i] == Cardinal.of(e)
    assert all(isinstance(a * b, Cardinal) for a, b in itertools.product(values, repeat=2))
