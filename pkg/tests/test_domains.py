import io
import json
import math

import pytest

from boxspec.domains import (
    Custom,
    Disc,
    Rectangle,
    custom_from_dict,
    disc_modes,
    disc_sigma01,
    factor_bidegree,
    load_custom_spectrum,
    rect_sigma01,
)
from boxspec.errors import ConfigError, EnvelopeError, UnavailableError
from boxspec.spectrum import INF, ONE, ZERO, Cardinal

J01_SQ_QUARTER = 2.404825557695773 ** 2 / 4
J11_SQ_QUARTER = 3.831705970207512 ** 2 / 4


def test_unit_disc_first_values():
    S = disc_sigma01(1.0, 2.0)
    assert len(S) == 1
    assert S.points[0].value == pytest.approx(J01_SQ_QUARTER, rel=1e-12)
    assert S.points[0].multiplicity == ONE
    S = disc_sigma01(1.0, 4.0)
    assert [p.multiplicity for p in S.points] == [ONE, Cardinal(2)]
    assert S.points[1].value == pytest.approx(J11_SQ_QUARTER, rel=1e-12)


def test_square_first_values():
    S = rect_sigma01(math.pi, math.pi, 2.0)
    assert S.pairs() == [(pytest.approx(0.5), ONE), (pytest.approx(1.25), Cardinal(2))]


def test_disc_scaling():
    big = disc_sigma01(2.0, 10.0)
    unit = disc_sigma01(1.0, 40.0)
    assert len(big) == len(unit)
    for p, q in zip(big.points, unit.points):
        assert p.value == pytest.approx(q.value / 4, rel=1e-12)
        assert p.multiplicity == q.multiplicity


def test_rectangle_scaling_and_symmetry():
    a = rect_sigma01(1.0, 2.0, 50.0)
    b = rect_sigma01(2.0, 1.0, 50.0)
    c = rect_sigma01(2.0, 4.0, 12.5)
    assert a.pairs() == b.pairs()
    for p, q in zip(a.points, c.points):
        assert p.value == pytest.approx(4 * q.value, rel=1e-12)


def test_raising_cutoff_only_adds_points():
    lo = disc_sigma01(1.0, 20.0)
    hi = disc_sigma01(1.0, 40.0)
    assert hi.pairs()[: len(lo)] == lo.pairs()
    assert all(v >= 20.0 for v in hi.values[len(lo):])


def test_weyl_counting_is_reasonable():
    # N(λ) ~ area·(4λ)/(4π) for the Dirichlet problem of -Δ/4
    lam = 400.0
    n = disc_sigma01(1.0, lam).total_multiplicity().n
    weyl = math.pi * 4 * lam / (4 * math.pi)
    assert 0.85 * weyl < n < 1.05 * weyl
    n = rect_sigma01(1.0, 3.0, lam).total_multiplicity().n
    weyl = 3.0 * 4 * lam / (4 * math.pi)
    assert 0.85 * weyl < n < 1.05 * weyl


def test_disc_envelope():
    with pytest.raises(EnvelopeError, match=r"\(n,k\)"):
        disc_modes(1.0, 1000.0)


def test_invalid_domains():
    with pytest.raises(ValueError):
        Disc(0.0)
    with pytest.raises(ValueError):
        Rectangle(1.0, -2.0)
    with pytest.raises(ValueError):
        Rectangle(1.0, math.inf)


def test_planar_bidegree_table():
    spec, harmonic = factor_bidegree(Disc(1.0), 5.0)
    s00, s01 = spec[(0, 0)], spec[(0, 1)]
    assert s00.points[0].value == 0.0 and s00.points[0].multiplicity == INF
    assert s00.positive_part().pairs() == s01.pairs()
    assert spec[(1, 0)] == s00 and spec[(1, 1)] == s01
    assert harmonic.table == {(0, 0): INF, (0, 1): ZERO, (1, 0): INF, (1, 1): ZERO}
    assert spec.notes


ANNULUS = {
    "type": "custom",
    "dim": 1,
    "pure_point": True,
    "spectra": {"0,1": [[2.0, 1], [5.0, 2]], "0,0": [[0.0, "inf"], [2.0, 1], [5.0, 2]]},
    "harmonic": {"0,0": "inf", "0,1": 0},
}


def test_custom_from_dict_round_trip():
    c = custom_from_dict(ANNULUS, cutoff=10.0)
    assert isinstance(c, Custom)
    assert c.spectra[(0, 1)].pairs() == [(2.0, ONE), (5.0, Cardinal(2))]
    assert c.harmonic.table[(0, 0)] == INF
    assert (1, 1) in c.harmonic.unavailable
    with pytest.raises(UnavailableError):
        c.spectra[(1, 1)]


def test_custom_cutoff_truncates():
    c = custom_from_dict(ANNULUS, cutoff=4.0)
    assert c.spectra[(0, 1)].pairs() == [(2.0, ONE)]
    spec, _ = factor_bidegree(c, 3.0)
    assert spec[(0, 1)].cutoff == 3.0


@pytest.mark.parametrize("patch,pointer", [
    ({"dim": 0}, "/dim"),
    ({"pure_point": "yes"}, "/pure_point"),
    ({"spectra": {"0,1": [[-1.0, 1]]}}, "/spectra/0,1/0/0"),
    ({"spectra": {"0,1": [[1.0, 0]]}}, "/spectra/0,1/0/1"),
    ({"spectra": {"0,1": [[2.0, 1], [1.0, 1]]}}, "/spectra/0,1/1/0"),
    ({"spectra": {"2,1": []}}, "/spectra/2,1"),
    ({"spectra": {"x": []}}, "/spectra/x"),
    ({"harmonic": {"0,0": -3}}, "/harmonic/0,0"),
])
def test_custom_errors_carry_pointers(patch, pointer):
    doc = dict(ANNULUS, **patch)
    with pytest.raises(ConfigError) as info:
        custom_from_dict(doc, "/factors/1", cutoff=10.0)
    assert info.value.pointer == "/factors/1" + pointer


def test_load_custom_spectrum_sources(tmp_path):
    text = json.dumps(dict(ANNULUS, cutoff=10.0))
    path = tmp_path / "annulus.json"
    path.write_text(text)
    a = load_custom_spectrum(str(path))
    b = load_custom_spectrum(io.StringIO(text))
    c = load_custom_spectrum(text)
    assert a == b == c
    with pytest.raises(ConfigError):
        load_custom_spectrum("{not json")
