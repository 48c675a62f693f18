"""Command-line entry point: ``sobovanish {verify,sweep,flow,norm,ft-check}``.

Configuration is a YAML file of nested sections merged over
:data:`DEFAULT_CONFIG`; the flags ``--out``, ``--workers``, ``--tol`` and
``--seed`` override the file.  Every file written is accompanied by
``<file>.manifest.json`` carrying the SHA-256 of the effective config.

Exit codes: 0 success, 1 check failure, 2 configuration error.

CSV schema (``sweep.csv``)::

    n,s,delta,eps,seminorm_sq,l2_sq,len_bound,len_direct,endpoint_drift,method,wall_time_ms

Floats are written with 17 significant digits so the text round-trips.  A
trailing ``status`` column is added only when some row failed.
"""
import argparse
import copy
import csv
import datetime
import hashlib
import io
import json
import logging
import math
import os
import re
import sys
import time

import numpy as np
import yaml

from . import __version__
from ._accel import BACKEND
from .checks import SUITES, run_suites
from .construct import MollifiedField, MollifierSpec, default_schedule
from .errors import ConfigError, SobovanishError
from .experiments import (
    CSV_COLUMNS,
    RunManifest,
    config_hash,
    scale_lengths,
    vanishing_sweep,
)
from .flow import endpoint_map, integrate, product_form_check
from .radialft import MAX_DIM, RadialProfile, annulus_ft, radial_ft_quadrature
from .sobolev import annulus_hs_norm, annulus_seminorm_quadrature, grid_annulus_norm

log = logging.getLogger("sobovanish")

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2

DEFAULT_CONFIG = {
    "seed": 0,
    "workers": 1,
    "tolerances": {"ode": 1e-8, "quadrature_rel": 1e-6, "grid_rel": 0.02, "ft_abs": 1e-9},
    "output": {"dir": "sobovanish-out", "timing": False},
    "verify": {
        "checks": ["specfun", "plancherel", "triple", "vanishing", "divergence",
                   "gauss_limit", "ft", "flow"],
        "options": {},
    },
    "sweep": {
        "n": 1,
        "s": [0.0, 0.1, 0.25, 0.3, 0.4],
        "delta": [0.1, 0.03, 0.01, 0.003, 0.001, 0.0003, 0.0001, 0.0],
        "eps": 0.05,
        "T": 1.0,
        "h": 1.5,
        "activation": "bump",
        "direct": True,
        "drift": True,
        "time_nodes": 64,
        "grid_points": None,
        "C1": 1.0,
    },
    "flow": {
        "T": 1.0,
        "h": 1.5,
        "delta": 0.2,
        "eps0": 0.2,
        "levels": 8,
        "seeds": 201,
        "margin": None,
        "product_form": {"n": 2, "count": 9},
    },
    "norm": {"n": 1, "s": 0.25, "f": 1.0, "g": 2.0, "method": "all", "grid_points": None},
    "ft_check": {"dims": [1, 2, 3], "f": 1.0, "g": 2.0, "xi": [0.1, 0.7, 3.3, 12.5],
                 "random_profiles": 3},
}


# --------------------------------------------------------------------------
# config parsing, validation and serialisation
# --------------------------------------------------------------------------

class _Loader(yaml.SafeLoader):
    """SafeLoader that also reads exponent floats without a dot (``1e-4``)."""


_Loader.add_implicit_resolver(
    "tag:yaml.org,2002:float",
    re.compile(r"^[-+]?(?:[0-9][0-9_]*)(?:\.[0-9_]*)?[eE][-+]?[0-9]+$"),
    list("-+0123456789"),
)


def parse_config(text):
    """YAML text -> dict (empty text gives an empty dict)."""
    try:
        data = yaml.load(text, Loader=_Loader)
    except yaml.YAMLError as exc:
        raise ConfigError(f"config is not valid YAML: {exc}", field="<file>") from exc
    if data is None:
        return {}
    if not isinstance(data, dict):
        raise ConfigError("config must be a mapping of sections", field="<root>")
    return data


def dump_config(cfg):
    """dict -> YAML text; ``parse_config(dump_config(c)) == c``."""
    return yaml.safe_dump(cfg, sort_keys=True, default_flow_style=None)


def _merge(base, override, path=""):
    out = copy.deepcopy(base)
    for key, value in override.items():
        where = f"{path}.{key}" if path else key
        if key not in base:
            raise ConfigError(f"unknown config key '{where}'", field=where)
        if isinstance(base[key], dict) and key != "options":
            if not isinstance(value, dict):
                raise ConfigError(f"'{where}' must be a section", field=where)
            out[key] = _merge(base[key], value, where)
        else:
            out[key] = copy.deepcopy(value)
    return out


def _num(cfg, path, lo=None, hi=None, lo_open=False, hi_open=False, integer=False,
         what=None):
    value = cfg
    for part in path.split("."):
        value = value[part]
    return _check_num(value, path, lo, hi, lo_open, hi_open, integer, what)


def _check_num(value, field, lo=None, hi=None, lo_open=False, hi_open=False, integer=False,
               what=None):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"'{field}' must be a number, got {value!r}", field=field)
    if integer and int(value) != value:
        raise ConfigError(f"'{field}' must be an integer, got {value!r}", field=field)
    bad = (
        (lo is not None and (value < lo or (lo_open and value == lo)))
        or (hi is not None and (value > hi or (hi_open and value == hi)))
        or not math.isfinite(value)
    )
    if bad:
        lo_s = "(" if lo_open else "["
        hi_s = ")" if hi_open else "]"
        rng = f"{lo_s}{lo if lo is not None else '-inf'}, {hi if hi is not None else 'inf'}{hi_s}"
        raise ConfigError(f"'{field}' must lie in {rng}{': ' + what if what else ''}, got {value!r}",
                          field=field)
    return value


def _order(value, field):
    return _check_num(value, field, 0.0, 0.5, hi_open=True,
                      what="closed-form norms need 0 <= s < 1/2")


def _list(cfg, section, key):
    value = cfg[section][key]
    if not isinstance(value, list):
        raise ConfigError(f"'{section}.{key}' must be a list", field=f"{section}.{key}")
    return value


def validate_config(cfg):
    """Check every numeric range before any computation; raise ConfigError."""
    _num(cfg, "seed", 0, integer=True)
    _num(cfg, "workers", 1, integer=True)
    for key in DEFAULT_CONFIG["tolerances"]:
        _num(cfg, f"tolerances.{key}", 0.0, lo_open=True)
    if not isinstance(cfg["output"]["dir"], str) or not cfg["output"]["dir"]:
        raise ConfigError("'output.dir' must be a non-empty path", field="output.dir")

    checks = _list(cfg, "verify", "checks")
    for i, name in enumerate(checks):
        if name not in SUITES:
            raise ConfigError(f"'verify.checks[{i}]' unknown check {name!r}; "
                              f"choose from {sorted(SUITES)}", field=f"verify.checks[{i}]")
    options = cfg["verify"]["options"] or {}
    if not isinstance(options, dict):
        raise ConfigError("'verify.options' must be a mapping", field="verify.options")
    for name, opts in options.items():
        if name not in SUITES:
            raise ConfigError(f"'verify.options.{name}' is not a check", field=f"verify.options.{name}")
        for key in ("s_values", "orders"):
            for i, s in enumerate((opts or {}).get(key, [])):
                _order(s, f"verify.options.{name}.{key}[{i}]")
        if "s" in (opts or {}):
            _order(opts["s"], f"verify.options.{name}.s")
        for i, n in enumerate((opts or {}).get("dims", [])):
            _check_num(n, f"verify.options.{name}.dims[{i}]", 1, MAX_DIM, integer=True)

    sw = cfg["sweep"]
    _num(cfg, "sweep.n", 1, MAX_DIM, integer=True)
    for i, s in enumerate(_list(cfg, "sweep", "s")):
        _order(s, f"sweep.s[{i}]")
    for i, d in enumerate(_list(cfg, "sweep", "delta")):
        _check_num(d, f"sweep.delta[{i}]", 0.0)
    _num(cfg, "sweep.eps", 0.0, lo_open=True)
    _num(cfg, "sweep.T", 0.0, lo_open=True)
    _num(cfg, "sweep.time_nodes", 1, integer=True)
    _num(cfg, "sweep.C1", 0.0, lo_open=True, what="chart constant must be positive")
    if sw["activation"] not in ("bump", "constant"):
        raise ConfigError("'sweep.activation' must be 'bump' or 'constant'", field="sweep.activation")
    if sw["grid_points"] is not None:
        _num(cfg, "sweep.grid_points", 32, integer=True)
    dmax = max(sw["delta"], default=0.0)
    _check_num(sw["h"] - 0.5 * dmax, "sweep.h", 1.0, what="support must stay in [1, inf): h - delta/2 >= 1")

    _num(cfg, "flow.T", 0.0, lo_open=True)
    _num(cfg, "flow.delta", 0.0)
    _num(cfg, "flow.eps0", 0.0, lo_open=True)
    _num(cfg, "flow.levels", 1, integer=True)
    _num(cfg, "flow.seeds", 2, integer=True)
    if cfg["flow"]["margin"] is not None:
        _num(cfg, "flow.margin", 0.0)
    _check_num(cfg["flow"]["h"] - 0.5 * cfg["flow"]["delta"], "flow.h", 1.0,
               what="support must stay in [1, inf): h - delta/2 >= 1")
    _num(cfg, "flow.product_form.n", 2, MAX_DIM, integer=True)
    _num(cfg, "flow.product_form.count", 1, integer=True)

    nm = cfg["norm"]
    _num(cfg, "norm.n", 1, MAX_DIM, integer=True)
    if nm["method"] not in ("closed_form", "quadrature", "grid", "all"):
        raise ConfigError("'norm.method' must be closed_form, quadrature, grid or all",
                          field="norm.method")
    if nm["method"] == "grid":
        _num(cfg, "norm.s", 0.0, 1.0, hi_open=True, what="H^s norms need 0 <= s < 1")
    else:
        _order(nm["s"], "norm.s")
    _num(cfg, "norm.f", 0.0, lo_open=True)
    _num(cfg, "norm.g", nm["f"], what="annulus needs f <= g")

    ft = cfg["ft_check"]
    for i, n in enumerate(_list(cfg, "ft_check", "dims")):
        _check_num(n, f"ft_check.dims[{i}]", 1, MAX_DIM, integer=True)
    _num(cfg, "ft_check.f", 0.0, lo_open=True)
    _num(cfg, "ft_check.g", ft["f"], what="annulus needs f <= g")
    for i, xi in enumerate(_list(cfg, "ft_check", "xi")):
        _check_num(xi, f"ft_check.xi[{i}]", 0.0, lo_open=True)
    _num(cfg, "ft_check.random_profiles", 0, integer=True)
    return cfg


def load_config(path=None, overrides=None):
    """Defaults <- file <- flag overrides, validated."""
    cfg = copy.deepcopy(DEFAULT_CONFIG)
    if path:
        try:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise ConfigError(f"cannot read config: {exc}", field="--config") from exc
        cfg = _merge(cfg, parse_config(text))
    for dotted, value in (overrides or {}).items():
        if value is None:
            continue
        node = cfg
        *head, last = dotted.split(".")
        for part in head:
            node = node[part]
        node[last] = value
    return validate_config(cfg)


# --------------------------------------------------------------------------
# output
# --------------------------------------------------------------------------

def fmt(value):
    """17-significant-digit text for floats, plain text otherwise."""
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if math.isnan(value):
            return "nan"
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return f"{value:.17g}"
    return str(value)


def sweep_csv(rows, timing=False):
    """CSV text for sweep rows (see module docstring for the schema)."""
    flagged = any(r.status != "ok" for r in rows)
    cols = list(CSV_COLUMNS[:-1]) + (["status"] if flagged else [])
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(cols)
    for r in rows:
        vals = []
        for c in cols:
            v = getattr(r, c)
            if c == "wall_time_ms" and not timing:
                v = math.nan
            vals.append(fmt(v))
        writer.writerow(vals)
    return buf.getvalue()


def _now():
    return datetime.datetime.now(datetime.timezone.utc).isoformat(timespec="milliseconds")


class _Writer:
    """Writes outputs and their manifests into one directory."""

    def __init__(self, command, cfg, input_text=None):
        self.cfg = cfg
        self.dir = cfg["output"]["dir"]
        self.manifest = RunManifest(
            command=command,
            config=cfg,
            config_hash=config_hash(cfg),
            code_version=__version__,
            backend=BACKEND,
            tolerances=dict(cfg["tolerances"]),
            started=_now(),
        )
        self.input_sha256 = hashlib.sha256(input_text.encode()).hexdigest() if input_text else None

    def write(self, name, text, rows=0):
        os.makedirs(self.dir, exist_ok=True)
        path = os.path.join(self.dir, name)
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        m = copy.deepcopy(self.manifest)
        m.finished = _now()
        m.row_count = rows
        m.outputs = {name: hashlib.sha256(text.encode()).hexdigest()}
        payload = json.loads(m.to_json())
        payload["input_sha256"] = self.input_sha256
        with open(path + ".manifest.json", "w", encoding="utf-8") as fh:
            fh.write(json.dumps(payload, indent=2, sort_keys=True) + "\n")
        log.info("wrote %s", path)
        return path


# --------------------------------------------------------------------------
# commands
# --------------------------------------------------------------------------

def cmd_verify(cfg, writer):
    names = cfg["verify"]["checks"]
    options = copy.deepcopy(cfg["verify"]["options"] or {})
    tol = cfg["tolerances"]
    triple = options.setdefault("triple", {})
    triple.setdefault("quadrature_rel", tol["quadrature_rel"])
    triple.setdefault("grid_rel", tol["grid_rel"])
    options.setdefault("flow", {}).setdefault("tol", tol["ode"])
    checks = run_suites(names, options, seed=cfg["seed"])
    report = {
        "checks": [c.as_dict() for c in checks],
        "count": len(checks),
        "failed": sum(not c.passed for c in checks),
        "passed": all(c.passed for c in checks),
    }
    for c in checks:
        log.info("%-48s %s  error=%.3e tol=%.1e", c.name, "PASS" if c.passed else "FAIL",
                 c.error, c.tolerance)
    writer.write("verify_report.json", json.dumps(report, indent=2) + "\n", rows=len(checks))
    print(f"verify: {len(checks) - report['failed']}/{len(checks)} checks passed")
    return EXIT_OK if report["passed"] else EXIT_FAIL


def cmd_sweep(cfg, writer):
    sw = cfg["sweep"]
    result = vanishing_sweep(
        sw["n"], sw["s"], sw["delta"], eps=sw["eps"], T=sw["T"], h=sw["h"],
        activation=sw["activation"], direct=sw["direct"], drift=sw["drift"],
        time_nodes=sw["time_nodes"], grid_points=sw["grid_points"], workers=cfg["workers"],
        tol=cfg["tolerances"]["ode"],
    )
    rows = scale_lengths(result.rows, sw["C1"])
    writer.manifest.wall_times_ms = [r.wall_time_ms for r in rows]
    writer.write("sweep.csv", sweep_csv(rows, cfg["output"]["timing"]), rows=len(rows))
    slopes = {fmt(s): {k: v for k, v in d.items()} for s, d in result.slopes.items()}
    writer.write("sweep_slopes.json", json.dumps(slopes, indent=2, sort_keys=True) + "\n",
                 rows=len(slopes))
    bad = sum(r.status != "ok" for r in rows)
    violations = sum(
        1 for r in rows
        if math.isfinite(r.len_direct) and r.len_direct > 1.05 * r.len_bound
    )
    print(f"sweep: {len(rows)} rows, {bad} failed, {violations} bound violations")
    return EXIT_OK if bad == 0 and violations == 0 else EXIT_FAIL


def _flow_level(sched, eps, seeds, T, tol, band):
    fld = MollifiedField(sched, MollifierSpec(eps), 1)
    entry = {"eps": eps, "status": "ok"}
    try:
        traj = integrate(fld, seeds, T, tol)
        emap = endpoint_map(traj, band=band, check=False)
        # the squeeze compresses the swept points at rate ~1/eps, so for small
        # eps neighbouring images can coincide in double precision
        weak = emap.min_gap >= 0.0
        entry.update(monotone=emap.monotone, weakly_monotone=weak, min_gap=emap.min_gap,
                     fixed_point_error=emap.fixed_point_error,
                     images=[float(v) for v in emap.images])
        if not weak:
            entry["status"] = "not a diffeomorphism"
        elif not emap.monotone:
            entry["status"] = "images tied at double precision"
        return entry, traj.endpoint
    except SobovanishError as exc:
        entry["status"] = f"error: {type(exc).__name__}: {exc}"
        return entry, None


def cmd_flow(cfg, writer):
    fl = cfg["flow"]
    T, tol = fl["T"], cfg["tolerances"]["ode"]
    sched = default_schedule(T, fl["h"], fl["delta"])
    margin = T if fl["margin"] is None else fl["margin"]
    band = MollifiedField(sched, MollifierSpec(fl["eps0"]), 1).support_band()
    lo = fl["h"] - 0.5 * fl["delta"] - fl["eps0"]
    hi = fl["h"] + 0.5 * fl["delta"] + fl["eps0"]
    seeds = np.linspace(lo - margin, hi + margin, fl["seeds"])

    levels, ends = [], []
    for k in range(1, fl["levels"] + 2):
        eps = fl["eps0"] * 2.0 ** -k
        entry, end = _flow_level(sched, eps, seeds, T, tol, band)
        levels.append(entry)
        ends.append(end)
    ladder = []
    for k in range(fl["levels"]):
        a, b = ends[k], ends[k + 1]
        drift = float(np.max(np.abs(a - b))) if a is not None and b is not None else math.nan
        ladder.append({"eps": levels[k]["eps"], "eps_next": levels[k + 1]["eps"], "drift": drift,
                       "monotone": levels[k].get("monotone"),
                       "weakly_monotone": levels[k].get("weakly_monotone"),
                       "status": levels[k]["status"]})

    pf = fl["product_form"]
    n = pf["n"]
    r_max = hi + margin
    axis = np.linspace(-r_max, r_max, pf["count"])
    grids = np.meshgrid(*([axis] * 2), indexing="ij")
    pts = np.zeros((axis.size ** 2, n))
    pts[:, 0], pts[:, 1] = grids[0].ravel(), grids[1].ravel()
    report = product_form_check(MollifiedField(sched, MollifierSpec(fl["eps0"]), n), pts, T, tol)

    out = {
        "seeds": [float(v) for v in seeds],
        "band": list(band) if band is not None else None,
        "levels": levels[:-1],
        "eps_ladder": ladder,
        "drift_trend": _trend([e["drift"] for e in ladder]),
        "product_form": {
            "n": n,
            "sup_initial": report.sup_initial,
            "sup_final": report.sup_final,
            "rows": report.rows(),
        },
    }
    writer.write("flow.json", json.dumps(out, indent=2) + "\n", rows=len(ladder))
    monotone = all(e.get("weakly_monotone") for e in levels[:-1])
    strict = sum(bool(e.get("monotone")) for e in levels[:-1])
    print(f"flow: {len(ladder)} ladder entries, order preserved={monotone} "
          f"(strict at {strict}/{len(ladder)} levels), "
          f"product-form sup discrepancy t=0 {report.sup_initial:.4g}, t=T {report.sup_final:.4g}")
    return EXIT_OK if monotone else EXIT_FAIL


def _trend(values):
    v = [x for x in values if math.isfinite(x)]
    if len(v) < 2:
        return "undetermined"
    d = np.diff(v)
    if np.all(d <= 0):
        return "nonincreasing"
    if np.all(d >= 0):
        return "nondecreasing"
    return "mixed"


def cmd_norm(cfg, writer):
    nm = cfg["norm"]
    n, s, f, g, method = nm["n"], nm["s"], nm["f"], nm["g"], nm["method"]
    out = {"n": n, "s": s, "f": f, "g": g}
    if method in ("closed_form", "all"):
        r = annulus_hs_norm(f, g, n, s)
        out["closed_form"] = {"seminorm_sq": r.seminorm_sq, "l2_sq": r.l2_sq, "total": r.total}
    if method in ("quadrature", "all") and f < g:
        out["quadrature"] = {"seminorm_sq": annulus_seminorm_quadrature(f, g, n, s)}
    if method in ("grid", "all") and f < g:
        r = grid_annulus_norm(f, g, n, s, points=nm["grid_points"])
        out["grid"] = {"seminorm_sq": r.seminorm_sq, "l2_sq": r.l2_sq, "total": r.total}
    print(json.dumps(out, indent=2))
    return EXIT_OK


def cmd_ft_check(cfg, writer):
    ft = cfg["ft_check"]
    tol = cfg["tolerances"]["ft_abs"]
    rng = np.random.default_rng(cfg["seed"])
    f, g = ft["f"], ft["g"]
    rows = []
    for n in ft["dims"]:
        prof = RadialProfile(lambda r: np.ones_like(r), f, g)
        for xi in ft["xi"]:
            cf_val = annulus_ft(f, g, n, xi)
            q = radial_ft_quadrature(prof, n, xi, tol=0.1 * tol)
            rows.append({"n": n, "profile": "annulus", "xi": xi, "closed_form": cf_val,
                         "quadrature": q, "error": abs(q - cf_val)})
        # random step profiles: superpositions of annuli with random weights
        for k in range(ft["random_profiles"]):
            radii = np.sort(rng.uniform(f, g, 4))
            weights = rng.normal(size=3)

            def fn(r, radii=radii, weights=weights):
                idx = np.clip(np.searchsorted(radii, r, side="right") - 1, 0, 2)
                return weights[idx]

            prof_r = RadialProfile(fn, radii[0], radii[-1], tuple(radii[1:-1]))
            for xi in ft["xi"]:
                cf_val = sum(w * annulus_ft(a, b, n, xi)
                             for w, a, b in zip(weights, radii[:-1], radii[1:]))
                q = radial_ft_quadrature(prof_r, n, xi, tol=0.1 * tol)
                rows.append({"n": n, "profile": f"random{k}", "xi": xi, "closed_form": cf_val,
                             "quadrature": q, "error": abs(q - cf_val)})
    worst = max((r["error"] for r in rows), default=0.0)
    print(json.dumps({"rows": rows, "max_error": worst, "tolerance": tol}, indent=2))
    return EXIT_OK if worst <= tol else EXIT_FAIL


COMMANDS = {
    "verify": cmd_verify,
    "sweep": cmd_sweep,
    "flow": cmd_flow,
    "norm": cmd_norm,
    "ft-check": cmd_ft_check,
}


def build_parser():
    p = argparse.ArgumentParser(
        prog="sobovanish",
        description="Fractional Sobolev norms of radial indicator fields and "
                    "vanishing-length sweeps.",
    )
    p.add_argument("command", choices=sorted(COMMANDS))
    p.add_argument("--config", metavar="PATH", help="YAML config file")
    p.add_argument("--out", metavar="DIR", help="output directory (output.dir)")
    p.add_argument("--workers", type=int, metavar="N", help="parallel sweep workers")
    p.add_argument("--tol", type=float, metavar="X", help="ODE tolerance (tolerances.ode)")
    p.add_argument("--seed", type=int, metavar="N", help="seed for random test fields")
    p.add_argument("--dump-config", action="store_true",
                   help="print the effective config and exit")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    overrides = {"output.dir": args.out, "workers": args.workers,
                 "tolerances.ode": args.tol, "seed": args.seed}
    try:
        cfg = load_config(args.config, overrides)
    except ConfigError as exc:
        print(f"config error [{exc.field}]: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    if args.dump_config:
        sys.stdout.write(dump_config(cfg))
        return EXIT_OK
    input_text = None
    if args.config:
        with open(args.config, encoding="utf-8") as fh:
            input_text = fh.read()
    writer = _Writer(args.command, cfg, input_text)
    start = time.perf_counter()
    try:
        status = COMMANDS[args.command](cfg, writer)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    log.info("%s finished in %.2f s", args.command, time.perf_counter() - start)
    return status


if __name__ == "__main__":
    sys.exit(main())
