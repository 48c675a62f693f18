"""Sweeps over order, squeeze and mollifier scale.

A path in the diffeomorphism group is generated by the mollified field
``u(t)``; its length is ``int_0^T ||u(t)||_{H^s} dt``.  Two numbers are
tracked per configuration:

* ``len_bound`` -- ``sqrt(C int_0^T ||1_[f,g](|.|)||^2 dt)`` with
  ``C = T sup |F G_1|^2`` (Cauchy-Schwarz in time, then mollification can only
  shrink the Fourier transform), evaluated with closed-form annulus norms;
* ``len_direct`` -- the length itself from grid spectra of the sampled field.
"""
import concurrent.futures as cf
import hashlib
import json
import math
import time
from dataclasses import asdict, dataclass, field
from functools import lru_cache
from typing import Dict, List, Optional

import numpy as np

from .construct import MollifiedField, MollifierSpec, default_schedule
from .errors import DomainError, SobovanishError
from .flow import eps_drift
from .radialft import check_annulus, check_dim, mollifier_ft_factor
from .sobolev import (
    GridSpec,
    GridSpectrum,
    annulus_hs_norm,
    annulus_seminorm_quadrature,
    annulus_seminorm_sq,
    check_order,
    sample_radial,
    surface_volume,
)
from .specfun import gamma_fn, ln_gamma

__all__ = [
    "SweepRow",
    "SweepResult",
    "RunManifest",
    "time_nodes",
    "mollifier_constant",
    "length_bound",
    "length_direct",
    "default_field_grid",
    "fit_slope",
    "vanishing_sweep",
    "divergence_probe",
    "divergence_prediction",
    "chart_reduction_factor",
    "scale_lengths",
]

CSV_COLUMNS = (
    "n", "s", "delta", "eps", "seminorm_sq", "l2_sq", "len_bound", "len_direct",
    "endpoint_drift", "method", "wall_time_ms", "status",
)


@dataclass
class SweepRow:
    """One sweep configuration and its measured quantities."""

    n: int
    s: float
    delta: float
    eps: float
    seminorm_sq: float = math.nan
    l2_sq: float = math.nan
    len_bound: float = math.nan
    len_direct: float = math.nan
    endpoint_drift: float = math.nan
    method: str = "closed_form"
    wall_time_ms: float = math.nan
    status: str = "ok"

    def values(self):
        return [getattr(self, c) for c in CSV_COLUMNS]


@dataclass
class SweepResult:
    rows: List[SweepRow]
    slopes: Dict[float, Dict[str, float]]


@dataclass
class RunManifest:
    """Provenance record written next to every output file."""

    command: str
    config: dict
    config_hash: str
    code_version: str
    backend: str
    tolerances: dict
    started: str
    finished: str = ""
    row_count: int = 0
    outputs: Dict[str, str] = field(default_factory=dict)
    wall_times_ms: List[float] = field(default_factory=list)

    def to_json(self):
        return json.dumps(asdict(self), indent=2, sort_keys=True)


# --------------------------------------------------------------------------
# time quadrature and the mollifier constant
# --------------------------------------------------------------------------

def time_nodes(schedule, nodes=64):
    """Composite Gauss-Legendre nodes and weights on [0, T].

    One ``nodes``-point rule per smooth segment of the schedule.
    """
    x, w = np.polynomial.legendre.leggauss(int(nodes))
    ts, ws = [], []
    for a, b in schedule.segments():
        ts.append(0.5 * (b - a) * x + 0.5 * (a + b))
        ws.append(0.5 * (b - a) * w)
    return np.concatenate(ts), np.concatenate(ws)


@lru_cache(maxsize=None)
def _sup_mollifier_ft(shape, n, xi_max=32.0, samples=257):
    bump = MollifierSpec(1.0, shape)
    values = [1.0]
    for xi in np.linspace(xi_max / samples, xi_max, samples):
        values.append(abs(mollifier_ft_factor(1.0, xi, bump, n=n)))
    return max(values)


def mollifier_constant(mollifier, n, T):
    """``C(G_1, T) = T sup |F G_1(|.|)|^2``.

    For a non-negative unit-mass bump the supremum is the value 1 at the
    origin; it is still evaluated on a frequency sample as a check.
    """
    return float(T) * _sup_mollifier_ft(mollifier.shape, check_dim(n)) ** 2


def length_bound(schedule, mollifier, n, s, nodes=64):
    """Upper bound on the H^s length of the mollified path.

    ``sqrt(C(G_1, T) int_0^T (||1||_L2^2 + || |xi|^s F 1 ||^2) dt)`` with
    closed-form annulus norms of ``1_[f(t), g(t)](|.|)``.
    """
    n = check_dim(n)
    s = check_order(s)
    ts, ws = time_nodes(schedule, nodes)
    f = np.asarray(schedule.f(ts), float)
    g = np.asarray(schedule.g(ts), float)
    energy = 0.0
    for fi, gi, wi in zip(f, g, ws):
        if gi > fi:
            energy += wi * annulus_hs_norm(fi, gi, n, s).total_sq
    return math.sqrt(mollifier_constant(mollifier, n, schedule.T) * energy)


def default_field_grid(schedule, mollifier, n, points=None):
    """Grid covering the field's support twice over.

    ``dx <= eps / 16`` in one dimension and ``eps / 4`` above, where the point
    count is cubic or worse.
    """
    n = check_dim(n)
    ts = np.linspace(0.0, schedule.T, 513)
    reach = float(np.max(schedule.g(ts))) + mollifier.eps
    L = 2.0 * 1.05 * reach
    if points is None:
        points = 32
        cells = 16.0 if n == 1 else 4.0
        while 2.0 * L / points > mollifier.eps / cells:
            points *= 2
    return GridSpec(n, L, int(points))


def length_direct(schedule, mollifier, n, s, grid=None, nodes=64, return_energy=False):
    """``int_0^T ||u(t)||_{H^s} dt`` from grid spectra of the sampled field.

    The field is smooth, so the spectra need no jump tail.

    Returns
    -------
    float, or (float, float) with ``int_0^T ||u||^2 dt`` when
    ``return_energy`` is set.
    """
    n = check_dim(n)
    s = check_order(s, closed_form=False)
    if grid is None:
        grid = default_field_grid(schedule, mollifier, n)
    fld = MollifiedField(schedule, mollifier, n)
    ts, ws = time_nodes(schedule, nodes)
    length = 0.0
    energy = 0.0
    for t, w in zip(ts, ws):
        if float(schedule.g(t)) <= float(schedule.f(t)):
            continue
        u = sample_radial(lambda r: fld.profile(t, r), grid)
        total = GridSpectrum(u, grid).norm(s).total_sq
        length += w * math.sqrt(total)
        energy += w * total
    length, energy = float(length), float(energy)
    return (length, energy) if return_energy else length


# --------------------------------------------------------------------------
# sweeps
# --------------------------------------------------------------------------

def fit_slope(x, y, trim=1):
    """Least-squares slope of log y against log x, dropping ``trim`` points
    at either end (sorted by x)."""
    x = np.asarray(x, float)
    y = np.asarray(y, float)
    keep = (x > 0) & (y > 0) & np.isfinite(y)
    x, y = x[keep], y[keep]
    order = np.argsort(x)
    x, y = x[order], y[order]
    if trim and x.size > 2 * trim + 1:
        x, y = x[trim:-trim], y[trim:-trim]
    if x.size < 2:
        return math.nan
    return float(np.polyfit(np.log(x), np.log(y), 1)[0])


def _sweep_row(task):
    # one (n, s, delta) configuration; module-level so worker processes can run it
    start = time.perf_counter()
    row = SweepRow(task["n"], task["s"], task["delta"], task["eps"])
    methods = ["closed_form"]
    try:
        n, s, delta, h = task["n"], task["s"], task["delta"], task["h"]
        sched = default_schedule(task["T"], h, delta, task["activation"])
        moll = MollifierSpec(task["eps"], task.get("shape", "exp"))
        if delta > 0.0:
            peak = annulus_hs_norm(h - 0.5 * delta, h + 0.5 * delta, n, s)
            row.seminorm_sq, row.l2_sq = peak.seminorm_sq, peak.l2_sq
        else:
            row.seminorm_sq = row.l2_sq = 0.0
        row.len_bound = length_bound(sched, moll, n, s, task["time_nodes"])
        if task.get("direct"):
            methods.append("grid")
            grid = default_field_grid(sched, moll, n, task.get("grid_points"))
            row.len_direct = length_direct(sched, moll, n, s, grid, task["time_nodes"])
        if task.get("drift"):
            fa = MollifiedField(sched, moll, 1)
            fb = MollifiedField(sched, MollifierSpec(0.5 * task["eps"], moll.shape), 1)
            seeds = np.linspace(h - delta - 2 * task["eps"] - 0.5,
                                h + delta + 2 * task["eps"] + task["T"] + 0.5,
                                task.get("seeds", 101))
            row.endpoint_drift = eps_drift(fa, fb, seeds, task["T"], task.get("tol", 1e-8))
    except SobovanishError as exc:
        row.status = f"error: {type(exc).__name__}: {exc}"
    row.method = "+".join(methods)
    row.wall_time_ms = 1e3 * (time.perf_counter() - start)
    return row


def vanishing_sweep(n, s_list, delta_list, eps=0.05, T=1.0, h=1.5, activation="bump",
                    direct=False, drift=False, time_nodes=64, grid_points=None,
                    workers=1, tol=1e-8, seeds=101):
    """Rows for every (s, delta) plus fitted log-log slopes per order.

    Slopes (middle points only): ``seminorm_sq`` against delta, expected
    ``1 - 2s``; ``len_bound`` against delta, expected ``(1 - 2s) / 2``
    once the seminorm dominates the L2 part.

    Rows are produced in (s, delta) order whatever ``workers`` is.
    """
    n = check_dim(n)
    for s in s_list:
        check_order(s)
    for d in delta_list:
        if not d >= 0.0:
            raise DomainError(f"delta must be >= 0, got {d!r}")
    tasks = [
        dict(n=n, s=float(s), delta=float(d), eps=float(eps), T=float(T), h=float(h),
             activation=activation, direct=direct, drift=drift, time_nodes=int(time_nodes),
             grid_points=grid_points, tol=tol, seeds=seeds)
        for s in s_list for d in delta_list
    ]
    if workers and workers > 1:
        with cf.ProcessPoolExecutor(max_workers=int(workers)) as pool:
            rows = list(pool.map(_sweep_row, tasks))
    else:
        rows = [_sweep_row(t) for t in tasks]
    slopes = {}
    for s in s_list:
        sel = [r for r in rows if r.s == float(s) and r.delta > 0 and r.status == "ok"]
        d = [r.delta for r in sel]
        slopes[float(s)] = {
            "seminorm_sq": fit_slope(d, [r.seminorm_sq for r in sel]),
            "len_bound": fit_slope(d, [r.len_bound for r in sel]),
        }
    return SweepResult(rows, slopes)


def divergence_prediction(n, f, g, s):
    """Gamma(1 - 2s)-carrying part of the closed form (the two equal-radius
    terms); the cross term stays bounded as s -> 1/2."""
    n = check_dim(n)
    f, g = check_annulus(f, g)
    s = check_order(s)
    h = n / 2.0
    core = math.exp(ln_gamma(h + s) - 2.0 * ln_gamma(1.0 - s) - ln_gamma(h + 1.0 - s))
    radial = sum(r ** n * 0.5 * (math.pi * r) ** (-2.0 * s) for r in (f, g))
    return surface_volume(n) * gamma_fn(1.0 - 2.0 * s) * core * radial


def divergence_probe(n, f, g, s_list, quadrature_anchor=None):
    """Seminorms for s approaching 1/2 against the Gamma(1 - 2s) prediction.

    Returns a list of dicts with ``s``, ``seminorm_sq``, ``prediction``,
    ``gamma_1m2s`` and ``ratio`` (= seminorm_sq / prediction).  When
    ``quadrature_anchor`` is an order, that row also carries the quadrature
    value.
    """
    f, g = check_annulus(f, g)
    if f == g:
        raise DomainError("divergence_probe needs f < g (f = g gives 0/0)")
    out = []
    for s in s_list:
        s = check_order(s)
        if s < 0.4:
            raise DomainError(f"divergence_probe orders must lie in [0.4, 0.5), got {s!r}")
        value = annulus_seminorm_sq(f, g, n, s)
        pred = divergence_prediction(n, f, g, s)
        row = {"s": s, "seminorm_sq": value, "prediction": pred,
               "gamma_1m2s": gamma_fn(1.0 - 2.0 * s), "ratio": value / pred}
        if quadrature_anchor is not None and s == quadrature_anchor:
            row["quadrature"] = annulus_seminorm_quadrature(f, g, n, s)
        out.append(row)
    return out


def chart_reduction_factor(C1):
    """Validate the single-chart constant ``C1 > 0`` (lengths scale by it)."""
    C1 = float(C1)
    if not (C1 > 0.0 and math.isfinite(C1)):
        raise DomainError(f"chart constant C1 must be positive, got {C1!r}")
    return C1


def scale_lengths(rows, C1):
    """Copies of ``rows`` with both length columns multiplied by ``C1``."""
    c = chart_reduction_factor(C1)
    out = []
    for r in rows:
        d = asdict(r)
        d["len_bound"] *= c
        d["len_direct"] *= c
        out.append(SweepRow(**d))
    return out


def config_hash(config):
    """SHA-256 of the canonical JSON form of ``config``."""
    blob = json.dumps(config, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()
