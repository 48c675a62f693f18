"""Fourier transforms of radial functions on R^n.

Convention throughout the package: ``F v(xi) = int exp(-2 pi i <x, xi>) v(x) dx``.
For a radial ``v(|x|)`` this reduces to the Hankel-type integral

    F v(xi) = 2 pi |xi|^(1 - n/2) int_0^inf J_(n/2 - 1)(2 pi |xi| s) v(s) s^(n/2) ds,

and for the indicator of the annulus f <= |x| <= g to

    |xi|^(-n/2) (g^(n/2) J_(n/2)(2 pi g |xi|) - f^(n/2) J_(n/2)(2 pi f |xi|)).
"""
import math
from dataclasses import dataclass, field
from typing import Callable, Tuple

import numpy as np

from .errors import AccuracyError, DomainError
from .quadrature import panel_quad
from .specfun import bessel_j, gamma_fn

__all__ = [
    "MAX_DIM",
    "RadialProfile",
    "check_dim",
    "check_annulus",
    "ball_volume",
    "annulus_volume",
    "annulus_ft",
    "radial_ft_quadrature",
    "mollifier_ft_factor",
]

MAX_DIM = 8


def check_dim(n):
    """Validate a dimension (1 <= n <= 8) and return it as int."""
    if isinstance(n, bool) or int(n) != n or not 1 <= int(n) <= MAX_DIM:
        raise DomainError(f"dimension must be an integer in [1, {MAX_DIM}], got {n!r}")
    return int(n)


def check_annulus(f, g):
    """Validate 0 < f <= g and return them as floats."""
    f, g = float(f), float(g)
    if not (0.0 < f <= g) or not math.isfinite(g):
        raise DomainError(f"annulus needs 0 < f <= g < inf, got f={f!r}, g={g!r}")
    return f, g


def ball_volume(n, radius=1.0):
    """Lebesgue measure of the n-ball of the given radius."""
    return math.pi ** (n / 2.0) / gamma_fn(n / 2.0 + 1.0) * radius ** n


def annulus_volume(f, g, n):
    """Measure of {f <= |x| <= g} in R^n."""
    return math.pi ** (n / 2.0) * (g ** n - f ** n) / gamma_fn(n / 2.0 + 1.0)


@dataclass(frozen=True)
class RadialProfile:
    """Scalar radial profile ``r -> v(r)`` supported in [r0, r1].

    Attributes
    ----------
    fn : callable
        Vectorised profile.
    r0, r1 : float
        Support; ``v`` vanishes outside.
    breaks : tuple of float
        Interior points where ``v`` is not smooth (quadrature splits there).
    """

    fn: Callable[[np.ndarray], np.ndarray]
    r0: float
    r1: float
    breaks: Tuple[float, ...] = field(default=())

    def __post_init__(self):
        if not (0.0 <= self.r0 <= self.r1):
            raise DomainError(f"profile support needs 0 <= r0 <= r1, got [{self.r0}, {self.r1}]")


def annulus_ft(f, g, n, xi):
    """Fourier transform of the annulus indicator at radius ``xi``.

    Parameters
    ----------
    f, g : float
        Inner and outer radius, ``0 < f <= g``.
    n : int
        Dimension.
    xi : float or array_like
        Non-negative frequency radius; ``xi = 0`` returns the annulus volume.

    Returns
    -------
    float or ndarray
    """
    f, g = check_annulus(f, g)
    n = check_dim(n)
    x = np.asarray(xi, dtype=np.float64)
    if np.any(x < 0.0):
        raise DomainError("annulus_ft takes non-negative |xi|")
    flat = np.atleast_1d(x).ravel()
    out = np.full(flat.shape, annulus_volume(f, g, n))
    pos = flat > 0.0
    if np.any(pos):
        z = flat[pos]
        nu = n / 2.0
        if n == 1:
            val = (np.sin(2 * np.pi * g * z) - np.sin(2 * np.pi * f * z)) / (np.pi * z)
        else:
            val = z ** (-nu) * (
                bessel_j(nu, 2 * np.pi * g * z) * g ** nu
                - bessel_j(nu, 2 * np.pi * f * z) * f ** nu
            )
        out[pos] = val
    if x.ndim == 0:
        return float(out[0])
    return out.reshape(x.shape)


def radial_ft_quadrature(profile, n, xi, tol=1e-9, max_panels=200000):
    """Fourier transform of a compactly supported radial profile by quadrature.

    The radial integral is split at the profile's break points and seeded
    with one GK21 panel per Bessel oscillation ``1 / xi``.

    Raises
    ------
    AccuracyError
        If ``tol`` (absolute) is not met within ``max_panels``.
    """
    n = check_dim(n)
    xi = float(xi)
    if not xi > 0.0:
        raise DomainError(f"radial_ft_quadrature needs xi > 0, got {xi!r}")
    k = 2.0 * math.pi * xi
    if n == 1:
        # J_(-1/2)(x) = sqrt(2 / (pi x)) cos x collapses the kernel
        pref = 2.0

        def integrand(s):
            return np.cos(k * s) * profile.fn(s)
    else:
        nu = n / 2.0 - 1.0
        pref = 2.0 * math.pi * xi ** (1.0 - n / 2.0)

        def integrand(s):
            return bessel_j(nu, k * s) * profile.fn(s) * s ** (n / 2.0)

    pts = sorted({profile.r0, profile.r1, *[b for b in profile.breaks
                                           if profile.r0 < b < profile.r1]})
    total = 0.0
    err = 0.0
    period = 1.0 / xi
    share = tol / (pref * max(1, len(pts) - 1))
    for lo, hi in zip(pts[:-1], pts[1:]):
        try:
            v, e = panel_quad(integrand, lo, hi, period, tol=share, rel=0.0,
                              max_panels=max_panels)
        except AccuracyError as exc:
            raise AccuracyError(
                f"radial_ft_quadrature: tolerance {tol:g} not reached",
                achieved=pref * (exc.achieved or math.inf),
                value=None,
            ) from exc
        total += v
        err += e
    return pref * total


def mollifier_ft_factor(eps, xi, bump, n=1, tol=1e-9):
    """Transform of the scaled radial mollifier, ``F(G_1(|.|))(eps * xi)``.

    ``bump`` must provide ``radial_profile(n)`` returning the unit-mass
    profile of ``G_1`` on R^n (see :class:`sobovanish.construct.MollifierSpec`).
    Since ``G_eps(x) = eps^-n G_1(x / eps)``, this equals the transform of
    ``G_eps`` at ``xi``.
    """
    eps = float(eps)
    if not eps > 0.0:
        raise DomainError(f"mollifier scale must be positive, got {eps!r}")
    arg = eps * abs(float(xi))
    if arg == 0.0:
        return 1.0
    return radial_ft_quadrature(bump.radial_profile(n), n, arg, tol=tol)
