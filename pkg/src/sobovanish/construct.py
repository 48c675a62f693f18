"""Short-path ingredients: mollifiers, schedules and the mollified field.

The 1D field is ``u(t, x) = (1_[f(t), g(t)] * G_eps)(x)``, i.e. a difference of
two shifted mollifier CDFs, and its extension to R^n is
``(u(t, |x|), 0, ..., 0)``.
"""
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Optional, Tuple

import numpy as np
from scipy.optimize import brentq

from ._accel import njit, select
from .errors import ConstructionError, DomainError, SynthesisError
from .quadrature import adaptive_gk, gk21_batch
from .radialft import RadialProfile, check_dim
from .sobolev import surface_volume

__all__ = [
    "MollifierSpec",
    "mollifier_cdf",
    "Schedule",
    "smooth_bump",
    "default_schedule",
    "transport_schedule",
    "synthesize_schedule",
    "MollifiedField",
    "TransportField",
    "field_eval_1d",
    "field_eval_nd",
]

_TABLE_POINTS = 4096


def _exp_bump(x):
    x = np.asarray(x, dtype=np.float64)
    out = np.zeros_like(x)
    inside = np.abs(x) < 1.0
    xi = x[inside]
    out[inside] = np.exp(-1.0 / (1.0 - xi * xi))
    return out


_SHAPES = {"exp": _exp_bump}


@lru_cache(maxsize=None)
def _cdf_table(shape):
    # CDF of the unit-mass bump on [-1, 1] at the table nodes, plus the
    # density there (exact Hermite slopes)
    bump = _SHAPES[shape]
    nodes = np.linspace(-1.0, 1.0, _TABLE_POINTS)
    pieces, _ = gk21_batch(bump, nodes)
    cum = np.concatenate([[0.0], np.cumsum(pieces)])
    mass = cum[-1]
    values = cum / mass
    values[-1] = 1.0
    slopes = bump(nodes) / mass
    _limit_slopes(values, slopes, nodes[1] - nodes[0])
    values.setflags(write=False)
    slopes.setflags(write=False)
    return values, slopes, mass


def _limit_slopes(values, slopes, step):
    # Fritsch-Carlson: keep each Hermite cubic monotone
    secant = np.diff(values) / step
    for i, d in enumerate(secant):
        if d == 0.0:
            slopes[i] = slopes[i + 1] = 0.0
            continue
        a, b = slopes[i] / d, slopes[i + 1] / d
        r = a * a + b * b
        if r > 9.0:
            tau = 3.0 / math.sqrt(r)
            slopes[i] = tau * a * d
            slopes[i + 1] = tau * b * d


@njit
def _hermite_cdf_loop(values, slopes, z):
    # z is the argument already scaled to the unit bump
    m = values.shape[0] - 1
    step = 2.0 / m
    out = np.empty(z.shape[0])
    for i in range(z.shape[0]):
        x = z[i]
        if x <= -1.0:
            out[i] = 0.0
            continue
        if x >= 1.0:
            out[i] = 1.0
            continue
        pos = (x + 1.0) / step
        k = int(pos)
        if k >= m:
            k = m - 1
        t = pos - k
        t2 = t * t
        t3 = t2 * t
        out[i] = ((2.0 * t3 - 3.0 * t2 + 1.0) * values[k]
                  + (t3 - 2.0 * t2 + t) * step * slopes[k]
                  + (-2.0 * t3 + 3.0 * t2) * values[k + 1]
                  + (t3 - t2) * step * slopes[k + 1])
    return out


def _hermite_cdf_numpy(values, slopes, z):
    m = values.shape[0] - 1
    step = 2.0 / m
    zc = np.clip(z, -1.0, 1.0)
    pos = (zc + 1.0) / step
    k = np.minimum(pos.astype(np.int64), m - 1)
    t = pos - k
    t2 = t * t
    t3 = t2 * t
    out = ((2.0 * t3 - 3.0 * t2 + 1.0) * values[k]
           + (t3 - 2.0 * t2 + t) * step * slopes[k]
           + (-2.0 * t3 + 3.0 * t2) * values[k + 1]
           + (t3 - t2) * step * slopes[k + 1])
    out = np.where(z <= -1.0, 0.0, out)
    return np.where(z >= 1.0, 1.0, out)


_hermite_cdf = select(_hermite_cdf_loop, _hermite_cdf_numpy)


@dataclass(frozen=True)
class MollifierSpec:
    """Smooth even bump ``G_eps(x) = G_1(x / eps) / eps`` with unit mass.

    Attributes
    ----------
    eps : float
        Scale; the support is [-eps, eps].
    shape : str
        Name of the unnormalised bump on [-1, 1]; ``"exp"`` is
        ``exp(-1 / (1 - x^2))``.
    """

    eps: float
    shape: str = "exp"

    def __post_init__(self):
        if not (self.eps > 0.0 and math.isfinite(self.eps)):
            raise ConstructionError(f"mollifier scale must be positive, got {self.eps!r}")
        if self.shape not in _SHAPES:
            raise ConstructionError(f"unknown mollifier shape {self.shape!r}")

    @property
    def mass(self):
        """Integral of the unnormalised bump over [-1, 1]."""
        return _cdf_table(self.shape)[2]

    def density(self, x):
        """``G_eps(x)``."""
        z = np.asarray(x, dtype=np.float64) / self.eps
        return _SHAPES[self.shape](z) / (self.mass * self.eps)

    def cdf(self, x):
        """``int_{-inf}^x G_eps``; vectorised."""
        values, slopes, _ = _cdf_table(self.shape)
        z = np.asarray(x, dtype=np.float64) / self.eps
        flat = np.ascontiguousarray(np.atleast_1d(z).ravel())
        out = _hermite_cdf(values, slopes, flat)
        if np.ndim(z) == 0:
            return float(out[0])
        return out.reshape(np.shape(z))

    def radial_profile(self, n):
        """Profile of ``G_1(|x|)`` on R^n rescaled to unit n-dimensional mass."""
        n = check_dim(n)
        bump = _SHAPES[self.shape]
        moment, _ = adaptive_gk(lambda r: bump(r) * r ** (n - 1), 0.0, 1.0,
                                tol=1e-15, rel=1e-14, initial=np.linspace(0, 1, 9))
        scale = 1.0 / (surface_volume(n) * moment)
        return RadialProfile(lambda r: scale * bump(r), 0.0, 1.0)


def mollifier_cdf(m, x):
    """CDF of the mollifier ``m`` at ``x``: 0 below ``-eps``, 1 above ``eps``."""
    return m.cdf(x)


# --------------------------------------------------------------------------
# schedules
# --------------------------------------------------------------------------

def smooth_bump(t, start, stop):
    """Polynomial bump ``(4 tau (1 - tau))^4`` on [start, stop], max 1; C^3."""
    t = np.asarray(t, dtype=np.float64)
    tau = (t - start) / (stop - start)
    inside = (tau > 0.0) & (tau < 1.0)
    return np.where(inside, (4.0 * tau * (1.0 - tau)) ** 4, 0.0)


@dataclass(frozen=True)
class Schedule:
    """Interval endpoints ``f(t) <= g(t)`` on [0, T] and their limit ``h``.

    Attributes
    ----------
    T : float
        Horizon.
    f_fn, g_fn, h_fn : callable
        Vectorised maps of time.
    delta : float
        Squeeze parameter, ``sup_t (g - f)``.
    breaks : tuple of float
        Times where the schedule is only finitely smooth (time quadrature
        splits there).
    label : str
        Family name, recorded in outputs.
    """

    T: float
    f_fn: Callable
    g_fn: Callable
    h_fn: Callable
    delta: float
    breaks: Tuple[float, ...] = field(default=())
    label: str = "custom"

    def f(self, t):
        return self.f_fn(t)

    def g(self, t):
        return self.g_fn(t)

    def h(self, t):
        return self.h_fn(t)

    def width(self, t):
        return self.g_fn(t) - self.f_fn(t)

    def check(self, samples=4097):
        """Verify the invariants on a dense time sample; raise on violation."""
        t = np.linspace(0.0, self.T, samples)
        f, g = np.asarray(self.f(t), float), np.asarray(self.g(t), float)
        if np.any(f > g):
            raise ConstructionError("schedule has f(t) > g(t)")
        active = f < g
        if np.any(f[active] < 1.0):
            raise ConstructionError(
                "schedule support must stay in [1, inf) wherever f < g "
                f"(min f = {float(f[active].min()):.6g})"
            )
        return self

    def segments(self):
        """Sub-intervals of [0, T] split at the break points."""
        pts = sorted({0.0, self.T, *[b for b in self.breaks if 0.0 < b < self.T]})
        return list(zip(pts[:-1], pts[1:]))


def _as_time_fn(spec):
    if callable(spec):
        return spec
    value = float(spec)
    return lambda t: np.full(np.shape(t), value) if np.ndim(t) else value


def default_schedule(T=1.0, h=1.5, delta=0.2, activation="bump"):
    """``f = h - delta a / 2``, ``g = h + delta a / 2``.

    Parameters
    ----------
    T : float
        Horizon.
    h : float or callable
        Limit map.
    delta : float
        Squeeze parameter (``>= 0``).
    activation : {"bump", "constant"} or callable
        ``"bump"`` is :func:`smooth_bump` on [T/4, 3T/4]; ``"constant"`` is
        1 on all of [0, T].  Callables must have max 1.

    Raises
    ------
    ConstructionError
        If ``delta < 0`` or the support leaves [1, inf).
    """
    T = float(T)
    delta = float(delta)
    if not T > 0.0:
        raise ConstructionError(f"horizon must be positive, got {T!r}")
    if not delta >= 0.0:
        raise ConstructionError(f"delta must be >= 0, got {delta!r}")
    h_fn = _as_time_fn(h)
    breaks = ()
    if activation == "bump":
        a_fn = lambda t: smooth_bump(t, 0.25 * T, 0.75 * T)  # noqa: E731
        breaks = (0.25 * T, 0.75 * T)
        label = "bump"
    elif activation == "constant":
        a_fn = lambda t: np.ones(np.shape(t)) if np.ndim(t) else 1.0  # noqa: E731
        label = "constant"
    elif callable(activation):
        a_fn = activation
        label = "custom"
    else:
        raise ConstructionError(f"unknown activation {activation!r}")

    def f_fn(t):
        return h_fn(t) - 0.5 * delta * a_fn(t)

    def g_fn(t):
        return h_fn(t) + 0.5 * delta * a_fn(t)

    return Schedule(T, f_fn, g_fn, h_fn, delta, breaks, label).check()


def transport_schedule(phi, support, T, kappa=None, t0=0.0):
    """Explicit schedule whose indicator transport flow ends at ``phi``.

    The front ``g`` sweeps the support [x0, x1] at speed ``1 / (1 - kappa)``;
    a point ``x`` is overtaken at ``t0 + (1 - kappa)(x - x0)``, then moves
    with unit speed until the rear ``f`` catches it at
    ``t0 + (1 - kappa)(x - x0) + D(x)``, ``D = phi - id``.  The window width
    is ``kappa D / (1 - kappa)``, so ``delta -> 0`` with ``kappa``.  Needs
    ``phi' > kappa`` on the support.
    """
    x0, x1 = float(support[0]), float(support[1])
    if not 1.0 <= x0 < x1:
        raise SynthesisError(f"target support must lie in [1, inf), got [{x0}, {x1}]")
    grid = np.linspace(x0, x1, 4001)
    disp = np.asarray(phi(grid), float) - grid
    if np.any(disp < -1e-12):
        raise SynthesisError("target must satisfy phi(x) >= x", residual=float(-disp.min()))
    slope = np.gradient(grid + disp, grid)
    min_slope = float(slope.min())
    if kappa is None:
        kappa = min(0.05, 0.5 * min_slope)
    if not 0.0 < kappa < min(1.0, min_slope):
        raise SynthesisError(
            f"sweep parameter kappa={kappa!r} must lie in (0, min phi' = {min_slope:.4g})"
        )
    t_end = t0 + (1.0 - kappa) * (x1 - x0)
    if t_end > T:
        raise SynthesisError(f"horizon {T} too short; sweep needs {t_end:.6g}")

    def front(t):
        t = np.asarray(t, float)
        return np.clip(x0 + (t - t0) / (1.0 - kappa), x0, x1)

    def rear_time(x):
        return t0 + (1.0 - kappa) * (x - x0) + (float(phi(x)) - x)

    def rear_scalar(t):
        if t <= t0:
            return x0
        if t >= t_end:
            return x1
        # rear_time is increasing from t0 to t_end on [x0, x1]
        x = brentq(lambda y: rear_time(y) - t, x0, x1, xtol=1e-15, rtol=1e-15)
        return float(phi(x))

    def rear(t):
        if np.ndim(t) == 0:
            return rear_scalar(float(t))
        return np.array([rear_scalar(float(v)) for v in np.ravel(t)]).reshape(np.shape(t))

    def limit(t):
        t = np.asarray(t, float)
        return np.clip(x0 + (t - t0), x0, x1)

    delta = kappa / (1.0 - kappa) * float(disp.max())
    sched = Schedule(T, rear, front, limit, delta, (t0, t_end), "transport")
    return sched.check(samples=513)


def synthesize_schedule(phi, support, T=1.0, tol=1e-8, residual_tol=1e-3,
                        kappa=None, seeds=201):
    """Schedule whose un-mollified flow maps ``x`` to ``phi(x)`` at time ``T``.

    Uses the explicit sweep of :func:`transport_schedule` and measures the
    endpoint residual with the event-located indicator flow
    :func:`sobovanish.flow.transport_endpoints` (``tol`` is its root
    tolerance).

    Returns
    -------
    schedule : Schedule
    residual : float
        ``sup |flow endpoint - phi|`` over a seed grid covering the support.

    Raises
    ------
    SynthesisError
        If the residual exceeds ``residual_tol`` (carries the residual).
    """
    from .flow import transport_endpoints

    x0, x1 = float(support[0]), float(support[1])
    grid = np.linspace(x0, x1, 2001)
    if np.max(np.abs(np.asarray(phi(grid), float) - grid)) == 0.0:
        sched = default_schedule(T, 0.5 * (x0 + x1), 0.0)
        return sched, 0.0
    sched = transport_schedule(phi, support, T, kappa)
    pad = 0.1 * (x1 - x0)
    xs = np.linspace(x0 - pad, x1 + pad, seeds)
    images = transport_endpoints(sched, xs, T, tol=tol)
    residual = float(np.max(np.abs(images - np.asarray(phi(xs), float))))
    if residual > residual_tol:
        raise SynthesisError(
            f"schedule synthesis residual {residual:.3g} above {residual_tol:g}",
            residual=residual,
        )
    return sched, residual


# --------------------------------------------------------------------------
# fields
# --------------------------------------------------------------------------

def _check_time(sched, t):
    if not (-1e-12 * sched.T <= t <= sched.T * (1.0 + 1e-12)):
        raise DomainError(f"time {t!r} outside [0, {sched.T}]")


@dataclass(frozen=True)
class MollifiedField:
    """``u(t, x) = (1_[f(t), g(t)] * G_eps)(x)`` and its radial extension."""

    schedule: Schedule
    mollifier: MollifierSpec
    dim: int = 1

    def __post_init__(self):
        check_dim(self.dim)

    @property
    def eps(self):
        return self.mollifier.eps

    def profile(self, t, r):
        """Scalar 1D profile ``u(t, r)``."""
        f = float(self.schedule.f(t))
        g = float(self.schedule.g(t))
        if f == g:
            return np.zeros(np.shape(r)) if np.ndim(r) else 0.0
        r = np.asarray(r, dtype=np.float64)
        return self.mollifier.cdf(r - f) - self.mollifier.cdf(r - g)

    def velocity(self, t, x):
        """Flow velocity at positions ``x``: shape (m,) in 1D, (m, n) else."""
        if self.dim == 1:
            return self.profile(t, x)
        v = np.zeros_like(x)
        v[:, 0] = self.profile(t, np.sqrt(np.sum(x * x, axis=1)))
        return v

    def support_band(self, samples=2049):
        """[min f - eps, max g + eps] over the horizon."""
        t = np.linspace(0.0, self.schedule.T, samples)
        f, g = np.asarray(self.schedule.f(t)), np.asarray(self.schedule.g(t))
        active = f < g
        if not np.any(active):
            return None
        return float(f[active].min()) - self.eps, float(g[active].max()) + self.eps


@dataclass(frozen=True)
class TransportField:
    """Un-mollified transport field ``1_[f(t), g(t)](x)`` (1D).

    The window can be far narrower than a natural step, so integrators are
    told to cap the step at ``max_step``; points inside the window for less
    than that may be missed, costing at most ``max_step`` in the endpoint.
    """

    schedule: Schedule
    dim: int = 1
    max_step: float = 2.5e-4
    discontinuous = True

    def velocity(self, t, x):
        f = float(self.schedule.f(t))
        g = float(self.schedule.g(t))
        return ((x >= f) & (x <= g)).astype(np.float64)


def field_eval_1d(fld, t, x):
    """``u(t, x)`` of a :class:`MollifiedField`; values in [0, 1]."""
    t = float(t)
    _check_time(fld.schedule, t)
    return fld.profile(t, x)


def field_eval_nd(fld, t, x):
    """Radial extension ``(u(t, |x|), 0, ..., 0)`` at point(s) ``x``."""
    t = float(t)
    _check_time(fld.schedule, t)
    pts = np.asarray(x, dtype=np.float64)
    single = pts.ndim == 1
    pts = np.atleast_2d(pts)
    if pts.shape[1] != fld.dim:
        raise DomainError(f"points must have {fld.dim} coordinates, got {pts.shape[1]}")
    out = np.zeros_like(pts)
    out[:, 0] = fld.profile(t, np.sqrt(np.sum(pts * pts, axis=1)))
    return out[0] if single else out
