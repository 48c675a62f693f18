"""Special functions: log-Gamma, Bessel J of real order, regularised 2F1.

Everything here is self-contained double-precision code; scipy/mpmath are
only used by the test-suite as references.

Accuracy targets (checked in ``tests/test_specfun.py``):

* ``ln_gamma``: relative 1e-12 on [1e-3, 50] (absolute ~1e-16 near the
  zeros at 1 and 2).
* ``bessel_j``: absolute 1e-10 for x <= 1e3, order <= 5.
* ``hyp2f1_reg``: 1e-10 on z in [0, 1].
"""
import math

import numpy as np

from ._accel import njit, select
from .errors import DomainError, PoleError

__all__ = [
    "EULER_GAMMA",
    "ln_gamma",
    "gamma_fn",
    "rgamma",
    "bessel_j",
    "hyp2f1_reg",
    "hyp2f1",
]

EULER_GAMMA = 0.57721566490153286061

# Bernoulli numbers B_2 .. B_16 for the Stirling series.
_BERNOULLI = np.array([
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
])
_HALF_LOG_2PI = 0.91893853320467274178
_STIRLING_MIN = 10.0


def _zeta_minus_one(k):
    # Euler-Maclaurin with N = 12 and six Bernoulli corrections; the
    # remainder is below 1e-18 for every k >= 2.
    n = 12
    head = sum(j ** -k for j in range(2, n))
    tail = n ** (1 - k) / (k - 1) + 0.5 * n ** -k
    rising = float(k)
    power = n ** (-k - 1)
    fact = 2.0
    for m in range(1, 7):
        tail += _BERNOULLI[m - 1] / fact * rising * power
        rising *= (k + 2 * m - 1) * (k + 2 * m)
        power /= n * n
        fact *= (2 * m + 1) * (2 * m + 2)
    return head + tail


# (zeta(k) - 1) for k = 2..40; lnGamma(1+z) series converges like (|z|/2)^k.
_ZETA_M1 = np.array([_zeta_minus_one(k) for k in range(2, 41)])


@njit
def _ln_gamma_1p(z):
    # ln Gamma(1+z) for |z| <= 1/2 (Abramowitz & Stegun 6.1.33).
    total = 0.0
    zk = -z
    for i in range(_ZETA_M1.shape[0]):
        zk *= -z
        k = i + 2
        term = _ZETA_M1[i] * zk / k
        total += term
        if abs(term) < 1e-18:
            break
    return -math.log1p(z) + z * (1.0 - EULER_GAMMA) + total


@njit
def _ln_gamma_kernel(x):
    if x < 0.5:
        return _ln_gamma_1p(x) - math.log(x)
    if x <= 1.5:
        return _ln_gamma_1p(x - 1.0)
    if x <= 2.5:
        z = x - 2.0
        return math.log1p(z) + _ln_gamma_1p(z)
    shift = 0.0
    while x < _STIRLING_MIN:
        shift += math.log(x)
        x += 1.0
    inv = 1.0 / x
    inv2 = inv * inv
    series = 0.0
    p = inv
    for k in range(_BERNOULLI.shape[0]):
        series += _BERNOULLI[k] / ((2 * k + 2) * (2 * k + 1)) * p
        p *= inv2
    return (x - 0.5) * math.log(x) - x + _HALF_LOG_2PI + series - shift


@njit
def _rgamma_kernel(x):
    if x > 0.0:
        if x > 171.0:
            return 0.0
        return math.exp(-_ln_gamma_kernel(x))
    if x == math.floor(x):
        return 0.0
    # reflection: 1/Gamma(x) = Gamma(1-x) sin(pi x) / pi
    return math.sin(math.pi * x) * math.exp(_ln_gamma_kernel(1.0 - x)) / math.pi


def ln_gamma(x):
    """Natural log of the Gamma function for positive real ``x``.

    Near the zeros x = 1, 2 a Taylor series about 1 keeps the absolute
    error at rounding level; elsewhere the argument is shifted to >= 10 and
    the Stirling series with eight Bernoulli terms is summed.

    Raises
    ------
    DomainError
        if ``x <= 0`` or not finite.
    """
    x = float(x)
    if not (x > 0.0 and math.isfinite(x)):
        raise DomainError(f"ln_gamma needs a positive finite argument, got {x!r}")
    return _ln_gamma_kernel(x)


def gamma_fn(x):
    """Gamma function for any real non-pole ``x``."""
    x = float(x)
    if x <= 0.0 and x == math.floor(x):
        raise PoleError(f"Gamma has a pole at {x!r}")
    if x > 0.0:
        return math.exp(_ln_gamma_kernel(x))
    return 1.0 / _rgamma_kernel(x)


def rgamma(x):
    """Reciprocal Gamma function, entire; zero at the non-positive integers."""
    return _rgamma_kernel(float(x))


# --------------------------------------------------------------------------
# Bessel J
# --------------------------------------------------------------------------

_ASYM_X = 12.0
_ASYM_DIRECT_MAX_ORDER = 5.5


@njit
def _bessel_series(nu, x):
    # ascending series, used for x <= max(12, 2 nu)
    if x == 0.0:
        return 1.0 if nu == 0.0 else 0.0
    h = 0.5 * x
    q = -h * h
    term = math.exp(nu * math.log(h) - _ln_gamma_kernel(nu + 1.0))
    total = term
    k = 0
    while k < 500:
        k += 1
        term *= q / (k * (k + nu))
        total += term
        if k > 4 and abs(term) <= 1e-17 * abs(total):
            break
    return total


@njit
def _bessel_hankel(nu, x):
    # Hankel expansion truncated at its smallest term.
    mu = 4.0 * nu * nu
    p = 1.0
    q = 0.0
    a = 1.0
    best = 1e300
    for k in range(1, 80):
        a *= (mu - (2 * k - 1) ** 2) / (k * 8.0 * x)
        mag = abs(a)
        if mag >= best:
            break
        best = mag
        if k % 2 == 1:
            q += a if (k // 2) % 2 == 0 else -a
        else:
            p += -a if (k // 2) % 2 == 1 else a
        if mag < 1e-17:
            break
    w = x - (0.5 * nu + 0.25) * math.pi
    return math.sqrt(2.0 / (math.pi * x)) * (p * math.cos(w) - q * math.sin(w))


@njit
def _bessel_scalar(nu, x):
    if x <= max(_ASYM_X, 2.0 * nu):
        return _bessel_series(nu, x)
    if nu <= _ASYM_DIRECT_MAX_ORDER:
        return _bessel_hankel(nu, x)
    # upward recurrence is stable while the order stays below x
    m = int(math.floor(nu))
    mu0 = nu - m
    jm1 = _bessel_hankel(mu0, x)
    j = _bessel_hankel(mu0 + 1.0, x)
    order = mu0 + 1.0
    for _ in range(m - 1):
        jm1, j = j, 2.0 * order / x * j - jm1
        order += 1.0
    return j


@njit
def _bessel_j_loop(nu, x):
    out = np.empty(x.shape[0])
    for i in range(x.shape[0]):
        out[i] = _bessel_scalar(nu, x[i])
    return out


def _bessel_j_numpy(nu, x):
    out = np.empty_like(x)
    small = x <= max(_ASYM_X, 2.0 * nu)
    if np.any(small):
        xs = x[small]
        h = 0.5 * xs
        q = -h * h
        with np.errstate(divide="ignore"):
            term = np.exp(nu * np.log(h) - _ln_gamma_kernel(nu + 1.0))
        if nu == 0.0:
            term = np.where(xs == 0.0, 1.0, term)
        total = term.copy()
        for k in range(1, 120):
            term = term * q / (k * (k + nu))
            total += term
            if k > 4 and np.all(np.abs(term) <= 1e-17 * np.abs(total)):
                break
        out[small] = total
    big = ~small
    if np.any(big):
        xb = x[big]
        if nu <= _ASYM_DIRECT_MAX_ORDER:
            out[big] = _hankel_numpy(nu, xb)
        else:
            m = int(np.floor(nu))
            mu0 = nu - m
            jm1 = _hankel_numpy(mu0, xb)
            j = _hankel_numpy(mu0 + 1.0, xb)
            order = mu0 + 1.0
            for _ in range(m - 1):
                jm1, j = j, 2.0 * order / xb * j - jm1
                order += 1.0
            out[big] = j
    return out


def _hankel_numpy(nu, x):
    mu = 4.0 * nu * nu
    p = np.ones_like(x)
    q = np.zeros_like(x)
    a = np.ones_like(x)
    best = np.full_like(x, np.inf)
    live = np.ones(x.shape, dtype=bool)
    for k in range(1, 80):
        a = a * (mu - (2 * k - 1) ** 2) / (k * 8.0 * x)
        mag = np.abs(a)
        live &= mag < best
        if not live.any():
            break
        best = np.where(live, mag, best)
        inc = np.where(live, a, 0.0)
        if k % 2 == 1:
            q += inc if (k // 2) % 2 == 0 else -inc
        else:
            p += -inc if (k // 2) % 2 == 1 else inc
        live &= mag >= 1e-17
    w = x - (0.5 * nu + 0.25) * np.pi
    return np.sqrt(2.0 / (np.pi * x)) * (p * np.cos(w) - q * np.sin(w))


_bessel_j_kernel = select(_bessel_j_loop, _bessel_j_numpy)


def bessel_j(order, x):
    """Bessel function of the first kind J_order(x) for x >= 0.

    Ascending series for ``x <= max(12, 2*order)``; above that the Hankel
    asymptotic expansion truncated at its smallest term (orders above 5.5
    are reached by upward recurrence from the fractional part).

    Parameters
    ----------
    order : float
        Non-negative real order.
    x : float or array_like
        Non-negative argument(s).

    Returns
    -------
    float or ndarray
        Same shape as ``x``.
    """
    nu = float(order)
    if not (nu >= 0.0 and math.isfinite(nu)):
        raise DomainError(f"bessel_j needs a non-negative order, got {order!r}")
    arr = np.asarray(x, dtype=np.float64)
    if np.any(arr < 0.0) or not np.all(np.isfinite(arr)):
        raise DomainError("bessel_j needs finite non-negative arguments")
    if arr.ndim == 0:
        return float(_bessel_scalar(nu, float(arr)))
    flat = np.ascontiguousarray(arr.ravel())
    return _bessel_j_kernel(nu, flat).reshape(arr.shape)


# --------------------------------------------------------------------------
# Gauss hypergeometric function
# --------------------------------------------------------------------------

_SERIES_ZMAX = 0.9
_SERIES_ZMAX_NEAR_INT = 0.995
_NEAR_INTEGER = 2e-5


def _nonpositive_int(v):
    return v <= 0.0 and v == math.floor(v)


@njit
def _series_2f1(a, b, c, z):
    # plain Gauss series for 2F1 (not regularised), |z| <= 0.9 or terminating
    total = 1.0
    term = 1.0
    k = 0
    while k < 20000:
        term *= (a + k) * (b + k) / ((c + k) * (k + 1.0)) * z
        total += term
        k += 1
        if term == 0.0:
            break
        if abs(term) <= 1e-17 * abs(total) and k > 2:
            break
    return total


def _connection(a, b, c, z):
    # 1-z transformation of the regularised function (valid when c-a-b is
    # not an integer)
    w = 1.0 - z
    m = c - a - b
    first = gamma_fn(m) * rgamma(c - a) * rgamma(c - b) * _series_2f1(a, b, 1.0 - m, w)
    if w == 0.0:
        return first
    second = (
        w ** m * gamma_fn(-m) * rgamma(a) * rgamma(b)
        * _series_2f1(c - a, c - b, m + 1.0, w)
    )
    return first + second


def _near_integer_connection(a, b, c, z, m_int):
    # Smooth in b: interpolate from four shifted b values that keep c-a-b a
    # safe distance from the integer m_int.
    # step balances cancellation (~eps/h^2) against interpolation (~(h L)^4)
    log_w = max(1.0, abs(math.log(1.0 - z))) if z < 1.0 else 40.0
    step = 2.5e-3 / log_w ** (2.0 / 3.0)
    offsets = np.array([-2.0, -1.0, 1.0, 2.0]) * step
    b_nodes = (c - a - m_int) - offsets
    values = np.array([_connection(a, bk, c, z) for bk in b_nodes])
    # cubic Lagrange through (b_nodes, values) evaluated at b
    total = 0.0
    for i in range(4):
        weight = 1.0
        for j in range(4):
            if i != j:
                weight *= (b - b_nodes[j]) / (b_nodes[i] - b_nodes[j])
        total += weight * values[i]
    return total


def hyp2f1_reg(a, b, c, z):
    """Regularised Gauss hypergeometric function F(a, b; c; z) / Gamma(c).

    Raw series for ``z <= 0.9``; on ``(0.9, 1]`` the 1-z connection formula
    with Gamma-ratio prefactors, and the Gauss value at ``z = 1``.  When
    ``c - a - b`` sits within 2e-5 of an integer the connection formula is
    ill-conditioned: the series is pushed out to ``z <= 0.995`` and beyond
    that the formula is evaluated at four nearby ``b`` and interpolated
    (relative error ~1e-10 there, ~1e-12 elsewhere).

    Raises
    ------
    DomainError
        ``z`` outside [0, 1] or ``c <= 0``.
    PoleError
        ``z == 1`` with ``c - a - b <= 0``.
    """
    a, b, c, z = float(a), float(b), float(c), float(z)
    if not (0.0 <= z <= 1.0):
        raise DomainError(f"hyp2f1_reg is defined here for z in [0, 1], got {z!r}")
    if not c > 0.0:
        raise DomainError(f"hyp2f1_reg needs c > 0, got {c!r}")
    m = c - a - b
    terminating = _nonpositive_int(a) or _nonpositive_int(b)
    if z == 1.0 and not terminating:
        if m <= 0.0:
            raise PoleError(f"2F1 diverges at z=1 when c-a-b = {m!r} <= 0")
        return gamma_fn(m) * rgamma(c - a) * rgamma(c - b)
    if terminating or z <= _SERIES_ZMAX:
        return _series_2f1(a, b, c, z) * rgamma(c)
    m_int = round(m)
    if abs(m - m_int) < _NEAR_INTEGER:
        if z <= _SERIES_ZMAX_NEAR_INT:
            return _series_2f1(a, b, c, z) * rgamma(c)
        return _near_integer_connection(a, b, c, z, m_int)
    return _connection(a, b, c, z)


def hyp2f1(a, b, c, z):
    """Un-regularised 2F1 on [0, 1]; thin wrapper over :func:`hyp2f1_reg`."""
    return hyp2f1_reg(a, b, c, z) * gamma_fn(c)
