"""Verification suites run by ``sobovanish verify``.

Each suite returns a list of :class:`Check` records, one per measured
quantity, so a report shows the error achieved next to its tolerance.
"""
from dataclasses import asdict, dataclass

import numpy as np

from .construct import MollifiedField, MollifierSpec, default_schedule
from .flow import endpoint_map, integrate
from .quadrature import adaptive_gk
from .radialft import RadialProfile, annulus_ft, radial_ft_quadrature
from .sobolev import (
    annulus_seminorm_quadrature,
    annulus_seminorm_sq,
    grid_annulus_norm,
    surface_volume,
    ws_equal_args,
    ws_mixed_args,
)
from .specfun import bessel_j, gamma_fn
from .experiments import divergence_probe, fit_slope

__all__ = ["Check", "SUITES", "run_suites"]


@dataclass
class Check:
    name: str
    error: float
    tolerance: float
    passed: bool
    detail: str = ""

    def as_dict(self):
        d = asdict(self)
        d["error"] = float(d["error"])
        return d


def _check(name, error, tol, detail=""):
    error = float(error)
    return Check(name, error, float(tol), bool(error <= tol), detail)


def specfun_suite(cfg, rng):
    """Antiderivative identity, half-integer Bessel closed forms, Gamma recurrence."""
    out = []
    # int_0^z t^nu J_(nu-1)(t) dt = z^nu J_nu(z)
    worst = 0.0
    for _ in range(int(cfg.get("samples", 20))):
        nu = rng.uniform(1.0, 5.0)
        z = rng.uniform(0.5, 30.0)
        val, _err = adaptive_gk(lambda t: t ** nu * bessel_j(nu - 1.0, t), 0.0, z, tol=1e-13,
                                initial=np.linspace(0.0, z, int(z) + 2))
        ref = z ** nu * bessel_j(nu, z)
        worst = max(worst, abs(val - ref) / max(1.0, abs(ref)))
    out.append(_check("specfun.antiderivative", worst, 1e-8))

    x = np.linspace(0.05, 60.0, 997)
    pre = np.sqrt(2.0 / (np.pi * x))
    forms = {
        0.5: pre * np.sin(x),
        1.5: pre * (np.sin(x) / x - np.cos(x)),
        2.5: pre * ((3.0 / x ** 2 - 1.0) * np.sin(x) - 3.0 * np.cos(x) / x),
    }
    worst = max(float(np.max(np.abs(bessel_j(nu, x) - ref))) for nu, ref in forms.items())
    out.append(_check("specfun.half_integer", worst, 1e-10))

    xs = np.concatenate([rng.uniform(0.1, 20.0, 40), -rng.uniform(0.05, 0.95, 10) - rng.integers(0, 5, 10)])
    worst = max(abs(gamma_fn(v + 1.0) - v * gamma_fn(v)) / abs(v * gamma_fn(v)) for v in xs)
    out.append(_check("specfun.gamma_recurrence", worst, 1e-12))
    return out


def plancherel_suite(cfg, rng):
    out = []
    for n in cfg.get("dims", [1, 2, 3]):
        for f, g in cfg.get("annuli", [[1, 2], [1, 1.1], [2, 5]]):
            ref = surface_volume(n) * (g ** n - f ** n) / n
            err = abs(annulus_seminorm_sq(f, g, n, 0.0) - ref) / ref
            out.append(_check(f"plancherel.n{n}.f{f}.g{g}", err, 1e-10))
    return out


def triple_suite(cfg, rng):
    """Closed form against oscillatory quadrature and the grid-spectral norm."""
    out = []
    qtol = float(cfg.get("quadrature_rel", 1e-6))
    gtol = float(cfg.get("grid_rel", 0.02))
    use_grid = bool(cfg.get("grid", True))
    for n in cfg.get("dims", [1, 2, 3]):
        for s in cfg.get("s_values", [0.0, 0.1, 0.25, 0.4]):
            for f, g in cfg.get("annuli", [[1, 2], [1, 1.1]]):
                cf_val = annulus_seminorm_sq(f, g, n, s)
                q = annulus_seminorm_quadrature(f, g, n, s)
                tag = f"n{n}.s{s}.f{f}.g{g}"
                out.append(_check(f"triple.quadrature.{tag}", abs(q - cf_val) / cf_val, qtol))
                if use_grid:
                    gv = grid_annulus_norm(f, g, n, s).seminorm_sq
                    out.append(_check(f"triple.grid.{tag}", abs(gv - cf_val) / cf_val, gtol))
    return out


def vanishing_suite(cfg, rng):
    """Log-log slope of the seminorm squared of [h - d, h + d] against d."""
    out = []
    h = float(cfg.get("h", 1.5))
    n = int(cfg.get("n", 1))
    deltas = np.logspace(-4, -1, int(cfg.get("points", 13)))
    for s in cfg.get("s_values", [0.0, 0.1, 0.25, 0.3, 0.4]):
        vals = [annulus_seminorm_sq(h - d, h + d, n, s) for d in deltas]
        slope = fit_slope(deltas, vals)
        expect = 1.0 - 2.0 * s
        out.append(_check(f"vanishing.slope.s{s}", abs(slope - expect) / expect, 0.10,
                          f"slope={slope:.6f}"))
    return out


def divergence_suite(cfg, rng):
    """Ratio between s = 0.499 and s = 0.49 against the Gamma(1 - 2s) prediction."""
    f, g = cfg.get("annulus", [1.0, 2.0])
    lo, hi = cfg.get("orders", [0.49, 0.499])
    rows = divergence_probe(int(cfg.get("n", 1)), f, g, [lo, hi])
    actual = rows[1]["seminorm_sq"] / rows[0]["seminorm_sq"]
    predicted = rows[1]["prediction"] / rows[0]["prediction"]
    return [_check("divergence.ratio", abs(actual / predicted - 1.0), 0.15,
                   f"actual={actual:.6f} predicted={predicted:.6f}")]


def gauss_limit_suite(cfg, rng):
    """Mixed-argument value tends to the equal-argument one at rate d^(1 - 2s)."""
    n = int(cfg.get("n", 2))
    s = float(cfg.get("s", 0.25))
    h = float(cfg.get("h", 1.5))
    ref = ws_equal_args(n, s, h)
    deltas = np.array([1e-2, 1e-3, 1e-4, 1e-5, 1e-6])
    gaps = [abs(ws_mixed_args(n, s, h - d, h + d) - ref) / abs(ref) for d in deltas]
    slope = float(np.polyfit(np.log(deltas), np.log(gaps), 1)[0])
    out = [_check("gauss_limit.rate", abs(slope - (1.0 - 2.0 * s)), 0.02,
                  f"slope={slope:.6f} gap(1e-6)={gaps[-1]:.4e}")]
    if cfg.get("strict_gap", False):
        out.append(_check("gauss_limit.gap_1e-6", gaps[-1], 1e-4))
    return out


def ft_suite(cfg, rng):
    """Closed-form annulus transform against the radial quadrature."""
    out = []
    for n in cfg.get("dims", [1, 2, 3]):
        f, g = cfg.get("annulus", [1.0, 2.0])
        prof = RadialProfile(lambda r: np.ones_like(r), f, g)
        worst = 0.0
        for xi in cfg.get("xi", [0.1, 0.7, 3.3, 12.5]):
            worst = max(worst, abs(radial_ft_quadrature(prof, n, xi, tol=1e-12) - annulus_ft(f, g, n, xi)))
        out.append(_check(f"ft.annulus.n{n}", worst, 1e-9))
    return out


def flow_suite(cfg, rng):
    """Monotone endpoint maps, fixed points off the band, semigroup property."""
    tol = float(cfg.get("tol", 1e-8))
    T = float(cfg.get("T", 1.0))
    sched = default_schedule(T, float(cfg.get("h", 1.5)), float(cfg.get("delta", 0.2)))
    fld = MollifiedField(sched, MollifierSpec(float(cfg.get("eps", 0.1))), 1)
    band = fld.support_band()
    seeds = np.linspace(band[0] - 0.5, band[1] + T + 0.5, int(cfg.get("seeds", 401)))
    traj = integrate(fld, seeds, T, tol)
    emap = endpoint_map(traj, band=band, check=False)
    half = integrate(fld, seeds, 0.5 * T, tol).states[-1]
    second = integrate(fld, half, T, tol, t0=0.5 * T).states[-1]
    semi = float(np.max(np.abs(second - traj.endpoint)))
    speed = float(np.max(np.abs(traj.endpoint - seeds)))
    return [
        _check("flow.monotone", 0.0 if emap.monotone else 1.0, 0.0, f"min_gap={emap.min_gap:.3e}"),
        _check("flow.fixed_points", emap.fixed_point_error, 1e-7),
        _check("flow.semigroup", semi, 2.0 * tol),
        _check("flow.speed_bound", max(0.0, speed - T), 0.0),
    ]


SUITES = {
    "specfun": specfun_suite,
    "plancherel": plancherel_suite,
    "triple": triple_suite,
    "vanishing": vanishing_suite,
    "divergence": divergence_suite,
    "gauss_limit": gauss_limit_suite,
    "ft": ft_suite,
    "flow": flow_suite,
}


def run_suites(names, options=None, seed=0):
    """Run the named suites in order; ``options[name]`` configures each."""
    options = options or {}
    rng = np.random.default_rng(seed)
    checks = []
    for name in names:
        checks.extend(SUITES[name](options.get(name, {}) or {}, rng))
    return checks
