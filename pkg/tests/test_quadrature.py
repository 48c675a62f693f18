import math

import numpy as np
import pytest
import scipy.special as sc

from sobovanish.errors import AccuracyError
from sobovanish.quadrature import (
    adaptive_gk,
    bessel_product_tail,
    gk21,
    panel_quad,
    power_exp_tail,
)


def test_gk21_exact_for_polynomials():
    val, err = gk21(lambda x: 7 * x ** 20 - x ** 3 + 2, -1.0, 2.0)
    exact = 7 * (2 ** 21 + 1) / 21 - (16 - 1) / 4 + 6
    assert val == pytest.approx(exact, rel=1e-13)


def test_adaptive_gk_smooth_and_singular():
    val, _ = adaptive_gk(np.exp, 0.0, 1.0, tol=1e-14)
    assert val == pytest.approx(math.e - 1, rel=1e-14)
    val, _ = adaptive_gk(lambda x: 1 / np.sqrt(x), 0.0, 1.0, tol=1e-11, max_panels=5000)
    assert val == pytest.approx(2.0, abs=1e-9)


def test_adaptive_gk_budget():
    with pytest.raises(AccuracyError) as info:
        adaptive_gk(lambda x: np.sin(1 / x), 1e-6, 1.0, tol=1e-14, max_panels=20)
    assert info.value.achieved > 1e-14


def test_panel_quad_oscillatory():
    k = 400.0
    val, _ = panel_quad(lambda x: np.cos(k * x) * np.exp(-x), 0.0, 10.0, 2 * math.pi / k, tol=1e-13)
    exact = (1 + math.exp(-10) * (k * math.sin(10 * k) - math.cos(10 * k))) / (1 + k * k)
    assert val == pytest.approx(exact, abs=1e-13)


def test_power_exp_tail():
    # int_R^inf r^-2 e^{ikr} dr against scipy's sine/cosine integrals
    k, R = 10.0, 5.0
    si, ci = sc.sici(k * R)
    c_int = math.cos(k * R) / R - k * (math.pi / 2 - si)
    s_int = math.sin(k * R) / R - k * ci
    val = power_exp_tail(-2.0, k, R)
    assert val.real == pytest.approx(c_int, abs=1e-14)
    assert val.imag == pytest.approx(s_int, abs=1e-14)
    assert power_exp_tail(-3.0, 0.0, 2.0) == pytest.approx(1 / 8)


def test_bessel_product_tail_against_long_integration():
    # int_R^Rmax r^lam J_nu(a r) J_nu(b r) dr, remainder beyond Rmax is O(Rmax^(lam - 1))
    lam, nu, a, b, R = -1.5, 1.0, 2.0, 3.0, 40.0
    ref, _ = panel_quad(lambda r: r ** lam * sc.jv(nu, a * r) * sc.jv(nu, b * r), R, 4000.0,
                        2 * math.pi / (a + b), tol=1e-14)
    ref += bessel_product_tail(lam, nu, a, b, 4000.0)
    assert bessel_product_tail(lam, nu, a, b, R) == pytest.approx(ref, abs=1e-12)
