"""Flows of time-dependent vector fields and their endpoint maps.

Fields are objects with ``velocity(t, x)`` (and ``dim``); seeds are advanced
together by an embedded Dormand-Prince 5(4) pair with one common step size,
so results depend only on (field, seeds, tol).
"""
import math
from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np

from scipy.optimize import brentq

from .errors import DiffeomorphismError, StiffnessError

__all__ = [
    "Trajectory",
    "EndpointMap",
    "ConstantField",
    "ZeroField",
    "integrate",
    "endpoint_map",
    "eps_drift",
    "eps_ladder",
    "product_form_check",
    "transport_endpoints",
]

# Dormand-Prince 5(4) tableau
_C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
_A = [
    [],
    [1 / 5],
    [3 / 40, 9 / 40],
    [44 / 45, -56 / 15, 32 / 9],
    [19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729],
    [9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656],
    [35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84],
]
_B5 = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0])
_B4 = np.array([5179 / 57600, 0.0, 7571 / 16695, 393 / 640, -92097 / 339200, 187 / 2100, 1 / 40])
_E = _B5 - _B4


@dataclass(frozen=True)
class ZeroField:
    """``u = 0``."""

    dim: int = 1

    def velocity(self, t, x):
        return np.zeros_like(x)


@dataclass(frozen=True)
class ConstantField:
    """``u = speed`` along the first axis everywhere (test stub)."""

    speed: float = 1.0
    dim: int = 1

    def velocity(self, t, x):
        v = np.zeros_like(x)
        if x.ndim == 1:
            v[:] = self.speed
        else:
            v[:, 0] = self.speed
        return v


@dataclass
class Trajectory:
    """Seeds, sample times and positions ``states[k]`` at ``times[k]``."""

    seeds: np.ndarray
    times: np.ndarray
    states: np.ndarray
    tol: float
    steps: int = 0
    rejected: int = 0

    @property
    def endpoint(self):
        return self.states[-1]


@dataclass
class EndpointMap:
    """Images of the seeds at the final time with check metadata."""

    seeds: np.ndarray
    images: np.ndarray
    monotone: Optional[bool] = None
    min_gap: Optional[float] = None
    fixed_point_error: Optional[float] = None
    band: Optional[Tuple[float, float]] = None


def integrate(fld, seeds, T, tol=1e-8, t0=0.0, times=None, h0=None, max_steps=1000000,
              control=None, max_step=None):
    """Advance ``seeds`` under ``fld`` from ``t0`` to ``T``.

    Parameters
    ----------
    fld : object
        Provides ``velocity(t, x)``.
    seeds : array_like
        Shape (m,) in 1D or (m, n).
    T : float
        Final time.
    tol : float
        Absolute error budget, max over seeds; each step is held to
        ``tol * h / (T - t0)`` so the accumulated error stays near ``tol``.
    control : {"unit", "step"}, optional
        Error per unit step (above) or plain per-step control.  Defaults to
        "step" for fields flagged ``discontinuous`` (a jump crossed inside a
        step costs O(h), which per-unit-step control can never accept).
    max_step : float, optional
        Step cap; defaults to the field's ``max_step`` attribute if any.
        Needed for fields whose support can slip between stages.
    times : array_like, optional
        Output times in [t0, T] (always includes t0 and T); steps land on
        them exactly.

    Returns
    -------
    Trajectory

    Raises
    ------
    StiffnessError
        Step size underflow.
    """
    y = np.array(seeds, dtype=np.float64, copy=True)
    out_times = np.unique(np.concatenate([[t0, T], [] if times is None else np.asarray(times, float)]))
    states = [y.copy()]
    t = float(t0)
    span = float(T) - t
    h = min(span, 1e-2) if h0 is None else float(h0)
    if span <= 0.0 or y.size == 0:
        return Trajectory(y.copy(), out_times, np.array([y] * len(out_times)), tol)
    if control is None:
        control = "step" if getattr(fld, "discontinuous", False) else "unit"
    if control not in ("unit", "step"):
        raise ValueError(f"control must be 'unit' or 'step', got {control!r}")
    per_unit = control == "unit"
    if max_step is None:
        max_step = getattr(fld, "max_step", None)
    hmax = span if max_step is None else float(max_step)
    h = min(h, hmax)
    k = [None] * 7
    k[0] = fld.velocity(t, y)
    steps = rejected = 0
    target_idx = 1
    hmin = 1e-14 * max(1.0, abs(T))
    while target_idx < len(out_times):
        target = out_times[target_idx]
        if steps + rejected > max_steps:
            raise StiffnessError(f"integrate: more than {max_steps} steps")
        last = False
        nominal = h
        if t + h >= target - 1e-15 * max(1.0, abs(target)):
            h = target - t
            last = True
        for i in range(1, 7):
            yi = y.copy()
            for j, a in enumerate(_A[i]):
                if a != 0.0:
                    yi += h * a * k[j]
            k[i] = fld.velocity(t + _C[i] * h, yi)
        # the last stage is evaluated at the 5th-order solution (FSAL)
        err_vec = h * sum(e * kk for e, kk in zip(_E, k) if e != 0.0)
        # error per unit step: the local bound scales with h / span, which
        # keeps the accumulated (global) error near tol
        bound = tol * h / span if per_unit else tol
        err = float(np.max(np.abs(err_vec))) / bound
        factor = 5.0 if err == 0.0 else min(5.0, max(0.2, 0.9 * err ** -0.2))
        if err <= 1.0:
            t = target if last else t + h
            y = yi
            k[0] = k[6]
            steps += 1
            if last:
                states.append(y.copy())
                target_idx += 1
                # a step shortened to hit an output time says little about the next one
                h = max(h * factor, min(nominal, h * 5.0)) if h < nominal else h * factor
            else:
                h *= factor
            h = min(h, hmax)
        else:
            rejected += 1
            h *= factor
            if h < hmin:
                raise StiffnessError(f"integrate: step size underflow at t={t:.17g}")
    return Trajectory(np.array(seeds, dtype=np.float64), out_times, np.array(states), tol, steps, rejected)


def endpoint_map(traj, band=None, check=True):
    """Endpoint map with diffeomorphism checks (1D).

    Parameters
    ----------
    traj : Trajectory
    band : (float, float), optional
        Swept region; seeds outside it must be fixed points and the largest
        deviation is recorded in ``fixed_point_error``.
    check : bool
        Raise :class:`DiffeomorphismError` when a 1D map is not strictly
        increasing.
    """
    seeds = traj.seeds
    images = traj.states[-1]
    emap = EndpointMap(seeds, images, band=band)
    if seeds.ndim == 1:
        order = np.argsort(seeds, kind="stable")
        gaps = np.diff(images[order])
        emap.min_gap = float(gaps.min()) if gaps.size else math.inf
        emap.monotone = bool(np.all(gaps > 0.0))
        if check and not emap.monotone:
            raise DiffeomorphismError(
                f"endpoint map not strictly increasing (min gap {emap.min_gap:.3g})"
            )
    if band is not None:
        pos = seeds if seeds.ndim == 1 else np.sqrt(np.sum(seeds * seeds, axis=1))
        outside = (pos < band[0]) | (pos > band[1])
        if seeds.ndim == 1:
            dev = np.abs(images - seeds)
        else:
            dev = np.max(np.abs(images - seeds), axis=1)
        emap.fixed_point_error = float(dev[outside].max()) if np.any(outside) else 0.0
    return emap


def eps_drift(field_a, field_b, seeds, T, tol=1e-8):
    """``sup |endpoint_a - endpoint_b|`` over the seeds (reported, not asserted)."""
    ea = integrate(field_a, seeds, T, tol).states[-1]
    eb = integrate(field_b, seeds, T, tol).states[-1]
    return float(np.max(np.abs(ea - eb))) if ea.size else 0.0


def eps_ladder(make_field, eps0, levels, seeds, T, tol=1e-8):
    """Drift between consecutive scales ``eps0 2^-k`` and ``eps0 2^-(k+1)``.

    ``make_field(eps)`` builds the field; returns a list of
    ``(eps, drift)`` for ``k = 1..levels``.
    """
    out = []
    prev_eps = eps0 / 2.0
    prev = integrate(make_field(prev_eps), seeds, T, tol).states[-1]
    for k in range(1, levels + 1):
        eps = eps0 * 2.0 ** -(k + 1)
        cur = integrate(make_field(eps), seeds, T, tol).states[-1]
        out.append((prev_eps, float(np.max(np.abs(prev - cur)))))
        prev, prev_eps = cur, eps
    return out


@dataclass
class ProductFormReport:
    """Discrepancy between the true n-D flow and ``(phi_R(t,|x|), x_2, ..)``."""

    seeds: np.ndarray
    initial: np.ndarray
    final: np.ndarray

    @property
    def sup_initial(self):
        return float(self.initial.max()) if self.initial.size else 0.0

    @property
    def sup_final(self):
        return float(self.final.max()) if self.final.size else 0.0

    def rows(self):
        return [
            {"seed": [float(v) for v in s], "t0": float(a), "T": float(b)}
            for s, a, b in zip(self.seeds, self.initial, self.final)
        ]


def product_form_check(fld, seeds, T, tol=1e-8):
    """Compare the integrated radial-extension flow with the product form.

    The candidate map is ``x -> (phi_R(t, |x|), x_2, ..., x_n)`` with
    ``phi_R`` the 1D flow of the profile; at ``t = 0`` it differs from the
    identity by ``||x| - x_1|`` off the first axis.
    """
    pts = np.asarray(seeds, dtype=np.float64)
    if pts.ndim != 2 or pts.shape[1] < 2:
        raise ValueError("product_form_check needs seeds of shape (m, n), n >= 2")
    radius = np.sqrt(np.sum(pts * pts, axis=1))
    true_end = integrate(fld, pts, T, tol).states[-1]

    class _Radial:
        dim = 1

        def velocity(self, t, r):
            return fld.profile(t, r)

    radial_end = integrate(_Radial(), radius, T, tol).states[-1]

    def candidate(first):
        c = pts.copy()
        c[:, 0] = first
        return c

    initial = np.max(np.abs(candidate(radius) - pts), axis=1)
    final = np.max(np.abs(candidate(radial_end) - true_end), axis=1)
    return ProductFormReport(pts, initial, final)


def transport_endpoints(schedule, seeds, T=None, tol=1e-12, scan=4096):
    """Exact flow of the indicator field ``1_[f(t), g(t)](x)`` in 1D.

    A point rests until the window reaches it, then moves with unit speed
    until it leaves; entry and exit times are located by bracketing the
    crossings of ``f`` and ``g`` on a time scan and refining with ``brentq``
    to ``tol``.  The window may be arbitrarily narrow as long as each edge
    crosses a point at most once per scan interval.

    Returns
    -------
    ndarray
        Images of ``seeds`` at time ``T`` (default: the schedule horizon).
    """
    T = schedule.T if T is None else float(T)
    ts = np.linspace(0.0, T, scan + 1)
    fs = np.asarray(schedule.f(ts), float)
    gs = np.asarray(schedule.g(ts), float)
    f = lambda t: float(schedule.f(t))  # noqa: E731
    g = lambda t: float(schedule.g(t))  # noqa: E731
    ge0 = lambda v: v >= 0.0  # noqa: E731
    le0 = lambda v: v <= 0.0  # noqa: E731
    lt0 = lambda v: v < 0.0  # noqa: E731
    gt0 = lambda v: v > 0.0  # noqa: E731

    def first_event(values, k0, t_start, fn, pred):
        # first time after t_start where pred(fn) switches from False to True
        if pred(fn(t_start)):
            return None
        hits = np.nonzero(pred(values[k0 + 1:]))[0]
        if hits.size == 0:
            return None
        k = k0 + int(hits[0])
        lo, hi = (t_start if k == k0 else ts[k]), ts[k + 1]
        if fn(hi) == 0.0 or pred(fn(lo)):
            root = hi if fn(hi) == 0.0 else lo
        else:
            root = brentq(fn, lo, hi, xtol=tol, rtol=4 * np.finfo(float).eps)
        # land on the far side so the new state is consistent
        for _ in range(64):
            if pred(fn(root)):
                break
            root = min(root + tol, hi)
        return root, k

    out = np.array(seeds, dtype=np.float64, copy=True)
    for i, x0 in enumerate(out):
        t, x, k = 0.0, float(x0), 0
        inside = f(0.0) <= x <= g(0.0) and f(0.0) < g(0.0)
        while t < T:
            if not inside:
                # wait for an edge to sweep over x
                evs = [first_event(gs - x, k, t, lambda s: g(s) - x, ge0),
                       first_event(fs - x, k, t, lambda s: f(s) - x, le0)]
                evs = [e for e in evs if e is not None]
                if not evs:
                    break
                t, k = min(evs)
                inside = f(t) <= x <= g(t) and f(t) < g(t)
                if not inside and t < T:
                    # touched an empty or passing window: step past it
                    t = min(T, t + tol)
                continue
            # moving: y(s) = x_in + (s - t_in); leaves when an edge passes y
            t_in, x_in = t, x
            ys = x_in + (ts - t_in)
            evs = [first_event(gs - ys, k, t_in, lambda s: g(s) - (x_in + (s - t_in)), lt0),
                   first_event(fs - ys, k, t_in, lambda s: f(s) - (x_in + (s - t_in)), gt0)]
            evs = [e for e in evs if e is not None]
            if not evs:
                x = x_in + (T - t_in)
                break
            t, k = min(evs)
            x = x_in + (t - t_in)
            inside = False
        out[i] = x
    return out
