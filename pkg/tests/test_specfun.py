import math

import numpy as np
import pytest
import scipy.special as sc
from hypothesis import given, settings, strategies as st

from sobovanish.errors import DomainError, PoleError
from sobovanish.specfun import bessel_j, gamma_fn, hyp2f1, hyp2f1_reg, ln_gamma, rgamma

# extended-precision reference values (mpmath, 40 digits), frozen here
J1_2_5_SERIES = 0.49709410246427403801  # 60-term power series of J_1(2.5)
BESSEL_REF = [
    (0.0, 10.0, -0.2459357644513483352),
    (2.5, 7.3, -0.30084943158749980838),
    (0.25, 40.0, 0.054911752342599731717),
    (3.0, 0.01, 2.0833203125325521682e-8),
    (1.5, 150.0, -0.045864573772034219353),
    (7.0, 3.0, 0.0025472944518046937591),
]
HYP_REF = [
    (1.25, 0.25, 2.0, 0.5, 1.1051328426563569914),
    (1.25, 0.25, 2.0, 0.99, 1.4748931970425605724),
    (1.5, 0.5, 2.5, 0.999, 1.703655626667564038),
]
LNGAMMA_REF = [(0.1, 2.2527126517342059599), (3.7, 1.4280723266653879219),
               (50.5, 146.51925549072062722)]


def test_ln_gamma_anchors():
    assert ln_gamma(1.0) == pytest.approx(0.0, abs=1e-15)
    assert ln_gamma(0.5) == pytest.approx(math.log(math.sqrt(math.pi)), rel=1e-14)
    assert ln_gamma(5.0) == pytest.approx(math.log(24.0), rel=1e-14)


@pytest.mark.parametrize("x, ref", LNGAMMA_REF)
def test_ln_gamma_frozen(x, ref):
    assert ln_gamma(x) == pytest.approx(ref, rel=1e-13)


def test_ln_gamma_rejects_nonpositive():
    with pytest.raises(DomainError):
        ln_gamma(0.0)
    with pytest.raises(DomainError):
        ln_gamma(-1.5)


def test_gamma_and_reciprocal():
    x = np.array([0.3, 1.7, 4.5, 11.2, -0.5, -2.3])
    for v in x:
        assert gamma_fn(v) == pytest.approx(sc.gamma(v), rel=1e-13)
        assert rgamma(v) == pytest.approx(sc.rgamma(v), rel=1e-13)
    assert rgamma(0.0) == 0.0
    assert rgamma(-3.0) == 0.0
    with pytest.raises(PoleError):
        gamma_fn(-2.0)


@settings(max_examples=200, deadline=None)
@given(st.floats(min_value=0.05, max_value=30.0))
def test_gamma_recurrence(x):
    assert gamma_fn(x + 1.0) == pytest.approx(x * gamma_fn(x), rel=1e-12)


def test_bessel_anchors():
    assert bessel_j(0.0, 0.0) == 1.0
    assert bessel_j(2.0, 0.0) == 0.0
    assert abs(bessel_j(0.5, math.pi)) < 1e-15
    assert bessel_j(1.0, 2.5) == pytest.approx(J1_2_5_SERIES, rel=1e-13)


@pytest.mark.parametrize("nu, x, ref", BESSEL_REF)
def test_bessel_frozen(nu, x, ref):
    assert bessel_j(nu, x) == pytest.approx(ref, rel=1e-11, abs=1e-15)


def test_bessel_matches_scipy_on_a_sweep():
    x = np.concatenate([np.linspace(0.0, 30.0, 3001), np.geomspace(30.0, 5e3, 500)])
    for nu in (0.0, 0.5, 1.0, 1.5, 2.0, 2.5, 3.3, 6.0):
        # worst case sits near x = 12 where the series hands over to Hankel
        assert np.max(np.abs(bessel_j(nu, x) - sc.jv(nu, x))) < 2e-12


def test_bessel_half_integer_closed_forms():
    x = np.linspace(0.05, 60.0, 997)
    pre = np.sqrt(2.0 / (np.pi * x))
    assert np.max(np.abs(bessel_j(0.5, x) - pre * np.sin(x))) < 1e-10
    assert np.max(np.abs(bessel_j(1.5, x) - pre * (np.sin(x) / x - np.cos(x)))) < 1e-10


def test_bessel_shape_and_domain():
    out = bessel_j(1.0, np.ones((3, 4)))
    assert out.shape == (3, 4)
    assert isinstance(bessel_j(1.0, 2.0), float)
    with pytest.raises(DomainError):
        bessel_j(1.0, -1.0)
    with pytest.raises(DomainError):
        bessel_j(-0.5, 1.0)


def test_hyp2f1_reg_trivial_cases():
    for c in (1.5, 2.0, 3.25):
        assert hyp2f1_reg(0.7, 0.0, c, 0.9) == pytest.approx(1.0 / gamma_fn(c), rel=1e-15)
        assert hyp2f1_reg(1.3, 0.4, c, 0.0) == pytest.approx(1.0 / gamma_fn(c), rel=1e-15)


def test_hyp2f1_reg_at_unit_argument():
    n, s = 2, 0.25
    expect = math.exp(ln_gamma(1 - 2 * s) - ln_gamma(1 - s) - ln_gamma(n / 2 + 1 - s))
    assert expect == pytest.approx(1.5737874653547949681, rel=1e-14)
    assert hyp2f1_reg(n / 2 + s, s, n / 2 + 1, 1.0) == pytest.approx(expect, rel=1e-13)


def test_hyp2f1_reg_diverges_at_one_when_c_le_a_plus_b():
    with pytest.raises(PoleError):
        hyp2f1_reg(1.5, 0.5, 2.0, 1.0)


@pytest.mark.parametrize("a, b, c, z, ref", HYP_REF)
def test_hyp2f1_reg_frozen(a, b, c, z, ref):
    assert hyp2f1_reg(a, b, c, z) == pytest.approx(ref, rel=1e-11)


def test_hyp2f1_matches_scipy_in_seminorm_regime():
    for n in (1, 2, 3, 5):
        for s in (0.05, 0.1, 0.25, 0.4, 0.49):
            for z in (0.0, 0.1, 0.5, 0.9, 0.95, 0.99, 0.999, 0.9999):
                a, b, c = n / 2 + s, s, n / 2 + 1
                assert hyp2f1(a, b, c, z) == pytest.approx(sc.hyp2f1(a, b, c, z), rel=1e-10)


def test_hyp2f1_reg_near_integer_exponent():
    # c - a - b = 1 - 2s is an integer at s = 0; approach it
    import mpmath as mp

    mp.mp.dps = 30
    for s in (1e-7, 1e-6, 1e-5):
        for z in (0.5, 0.99, 0.999999):
            a, b, c = 1.0 + s, s, 2.0
            ref = float(mp.hyp2f1(a, b, c, z) / mp.gamma(c))
            assert hyp2f1_reg(a, b, c, z) == pytest.approx(ref, rel=1e-9)


def test_hyp2f1_reg_rejects_outside_domain():
    with pytest.raises(DomainError):
        hyp2f1_reg(1.0, 0.5, 2.0, 1.5)
    with pytest.raises(DomainError):
        hyp2f1_reg(0.7, 0.3, 1.5, -0.8)
