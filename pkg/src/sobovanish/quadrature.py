"""Adaptive Gauss-Kronrod quadrature and asymptotic tails for oscillatory
integrals.

Used as the independent oracle for the closed-form Bessel-product integrals
and for radial Fourier transforms.  Integrands are vectorised callables
``fn(x: ndarray) -> ndarray``.
"""
import heapq
import math

import numpy as np

from .errors import AccuracyError

__all__ = [
    "gk21",
    "adaptive_gk",
    "panel_quad",
    "power_exp_tail",
    "hankel_coefficients",
    "bessel_product_tail",
]

# QUADPACK qk21 abscissae (positive half, descending) and weights.
_XGK = np.array([
    0.995657163025808080735527280689003,
    0.973906528517171720077964012084452,
    0.930157491355708226001207180059508,
    0.865063366688984510732096688423493,
    0.780817726586416897063717578345042,
    0.679409568299024406234327365114874,
    0.562757134668604683339000099272694,
    0.433395394129247190799265943165784,
    0.294392862701460198131126603103866,
    0.148874338981631210884826001129720,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.011694638867371874278064396062192,
    0.032558162307964727478818972459390,
    0.054755896574351996031381300244580,
    0.075039674810919952767043140916190,
    0.093125454583697605535065465083366,
    0.109387158802297641899210590325805,
    0.123491976262065851077600525603550,
    0.134709217311473325928054001771707,
    0.142775938577060080797094273138717,
    0.147739104901338491374841515972068,
    0.149445554002916905664936468389821,
])
# Gauss 10-point weights sit on the odd-indexed Kronrod nodes.
_WG = np.array([
    0.066671344308688137593568809893332,
    0.149451349150580593145776339657697,
    0.219086362515982043995534934228163,
    0.269266719309996355091226921569469,
    0.295524224714752870173892994651338,
])

_NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
_KRONROD_W = np.concatenate([_WGK[:-1], _WGK[::-1]])
_GAUSS_W = np.zeros(21)
_GAUSS_W[1:10:2] = _WG
_GAUSS_W[11:20:2] = _WG[::-1]


def gk21(fn, a, b):
    """One 21-point Kronrod panel on [a, b]; returns (value, error estimate)."""
    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    y = fn(mid + half * _NODES)
    k = half * np.dot(_KRONROD_W, y)
    g = half * np.dot(_GAUSS_W, y)
    return k, abs(k - g)


def gk21_batch(fn, edges):
    """Kronrod values and error estimates on consecutive panels ``edges``.

    A single vectorised call to ``fn`` covers all panels.
    """
    edges = np.asarray(edges, dtype=np.float64)
    return _gk21_pairs(fn, np.column_stack([edges[:-1], edges[1:]]))


def adaptive_gk(fn, a, b, tol=1e-10, rel=1e-13, max_panels=2000, initial=None):
    """Globally adaptive GK21 quadrature of ``fn`` over [a, b].

    Parameters
    ----------
    fn : callable
        Vectorised integrand.
    a, b : float
        Finite limits.
    tol, rel : float
        Stop once the summed error estimate is below
        ``max(tol, rel * |value|)``.
    max_panels : int
        Budget; exceeding it raises :class:`AccuracyError`.
    initial : array_like, optional
        Initial panel edges (e.g. one per oscillation), must start at ``a``
        and end at ``b``.

    Returns
    -------
    value, error : float
    """
    if a == b:
        return 0.0, 0.0
    edges = np.linspace(a, b, 2) if initial is None else np.asarray(initial, float)
    vals, errs = gk21_batch(fn, edges)
    heap = [(-e, lo, hi, v) for e, lo, hi, v in zip(errs, edges[:-1], edges[1:], vals)]
    heapq.heapify(heap)
    total = float(np.sum(vals))
    err = float(np.sum(errs))
    count = len(heap)
    while err > max(tol, rel * abs(total)):
        if count >= max_panels:
            raise AccuracyError(
                f"adaptive_gk: error {err:.3g} above tolerance after {count} panels",
                achieved=err,
                value=total,
            )
        # split the worst few panels together so the integrand call stays vectorised
        take = [heapq.heappop(heap) for _ in range(min(len(heap), 16))]
        split = []
        for negerr, lo, hi, v in take:
            total -= v
            err += negerr
            m = 0.5 * (lo + hi)
            split.extend([(lo, m), (m, hi)])
        vals, errs = _gk21_pairs(fn, np.array(split))
        for (lo, hi), v, e in zip(split, vals, errs):
            heapq.heappush(heap, (-e, lo, hi, v))
            total += v
            err += e
        count += len(take)
        # guard against drift in the running sums
        if count % 256 < 16:
            total = math.fsum(item[3] for item in heap)
            err = math.fsum(-item[0] for item in heap)
    return math.fsum(item[3] for item in heap), err


def _gk21_pairs(fn, lo_hi):
    half = 0.5 * (lo_hi[:, 1] - lo_hi[:, 0])
    mid = 0.5 * (lo_hi[:, 1] + lo_hi[:, 0])
    x = mid[:, None] + half[:, None] * _NODES[None, :]
    y = fn(x.ravel()).reshape(x.shape)
    k = half * (y @ _KRONROD_W)
    g = half * (y @ _GAUSS_W)
    return k, np.abs(k - g)


def panel_quad(fn, a, b, period, tol=1e-11, rel=1e-13, max_panels=200000):
    """Adaptive quadrature seeded with one panel per oscillation ``period``."""
    if b <= a:
        return 0.0, 0.0
    count = max(1, int(math.ceil((b - a) / period)))
    edges = np.linspace(a, b, count + 1)
    return adaptive_gk(fn, a, b, tol=tol, rel=rel,
                       max_panels=max(max_panels, 4 * count), initial=edges)


def power_exp_tail(q, k, R):
    """Complex value of the integral of r**q * exp(i k r) over [R, inf).

    For ``k == 0`` this needs ``q < -1`` and is exact.  Otherwise the
    integration-by-parts series is summed up to its smallest term, which
    is accurate to about ``exp(-|k| R)`` relative; callers pick R with
    ``|k| R >= 40``.
    """
    if k == 0.0:
        if q >= -1.0:
            raise ValueError("power_exp_tail: divergent non-oscillatory tail")
        return complex(-(R ** (q + 1.0)) / (q + 1.0))
    ik = 1j * k
    term = R ** q
    total = term
    best = abs(term)
    for j in range(200):
        term = term * (-(q - j) / (ik * R))
        mag = abs(term)
        if mag >= best or mag == 0.0:
            break
        best = mag
        total += term
        if mag < 1e-18 * abs(total):
            break
    return -np.exp(ik * R) / ik * total


def hankel_coefficients(nu, count):
    """Coefficients a_k(nu), k < count, of the Hankel expansion.

    H1_nu(x) ~ sqrt(2/(pi x)) exp(i w) sum_k i**k a_k / x**k, with
    w = x - nu pi/2 - pi/4 and J_nu = Re H1_nu.
    """
    mu = 4.0 * nu * nu
    out = np.empty(count)
    a = 1.0
    for k in range(count):
        out[k] = a
        a *= (mu - (2 * k + 1) ** 2) / ((k + 1) * 8.0)
    return out


def bessel_product_tail(lam, nu, a, b, R, terms=14):
    """Asymptotic value of the integral of r**lam J_nu(a r) J_nu(b r), r > R.

    Both Bessel factors are replaced by their Hankel expansions and the
    product is integrated term by term with :func:`power_exp_tail`.  Needs
    ``lam < 0``; accuracy is set by ``a R``, ``b R`` and ``|a - b| R``
    (callers keep all of them, where nonzero, above about 40).
    """
    ca = hankel_coefficients(nu, terms) * (1j ** np.arange(terms)) / a ** np.arange(terms)
    cb = hankel_coefficients(nu, terms) * (1j ** np.arange(terms)) / b ** np.arange(terms)
    phase = -nu * math.pi / 2.0 - math.pi / 4.0
    # J_a J_b = 2/(pi r sqrt(ab)) Re[A] Re[B], Re A Re B = Re(A B + A conj(B)) / 2
    pref = 1.0 / (math.pi * math.sqrt(a * b))
    total = 0.0
    for m in range(terms):
        same = 0j
        cross = 0j
        for j in range(m + 1):
            same += ca[j] * cb[m - j]
            cross += ca[j] * np.conj(cb[m - j])
        q = lam - 1.0 - m
        same *= np.exp(2j * phase)
        total += (same * power_exp_tail(q, a + b, R)).real
        total += (cross * power_exp_tail(q, a - b, R)).real
    return pref * total
