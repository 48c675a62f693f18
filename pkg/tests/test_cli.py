import csv
import hashlib
import json
import subprocess
import sys

import pytest

from sobovanish.cli import DEFAULT_CONFIG, dump_config, load_config, main, parse_config
from sobovanish.experiments import config_hash

HEADER = ("n,s,delta,eps,seminorm_sq,l2_sq,len_bound,len_direct,endpoint_drift,method,"
          "wall_time_ms")


def write(tmp_path, text, name="cfg.yaml"):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


def run(tmp_path, *args, config=None):
    argv = list(args) + ["--out", str(tmp_path / "out")]
    if config is not None:
        argv += ["--config", write(tmp_path, config)]
    return main(argv)


def test_config_round_trip():
    cfg = load_config()
    assert parse_config(dump_config(cfg)) == cfg
    custom = parse_config("sweep:\n  delta: [1e-1, 1e-4, 0]\n  eps: 5e-2\n")
    assert custom["sweep"]["delta"] == [0.1, 1e-4, 0]
    assert isinstance(custom["sweep"]["eps"], float)
    merged = load_config(None)
    assert parse_config(dump_config(merged)) == merged


def test_flags_override_file(tmp_path):
    path = write(tmp_path, "tolerances:\n  ode: 1.0e-6\nseed: 3\n")
    cfg = load_config(path, {"tolerances.ode": 1e-9, "seed": None})
    assert cfg["tolerances"]["ode"] == 1e-9
    assert cfg["seed"] == 3


def test_config_errors_name_the_field(tmp_path, capsys):
    bad = "verify:\n  options:\n    triple:\n      s_values: [0.1, 0.6]\n"
    assert run(tmp_path, "verify", config=bad) == 2
    err = capsys.readouterr().err
    assert "verify.options.triple.s_values[1]" in err and "s < 1/2" in err
    assert run(tmp_path, "sweep", config="sweep:\n  bogus: 1\n") == 2
    assert "sweep.bogus" in capsys.readouterr().err
    assert run(tmp_path, "sweep", config="sweep:\n  C1: 0\n") == 2
    assert run(tmp_path, "sweep", config="sweep:\n  n: 9\n") == 2
    assert run(tmp_path, "sweep", config="sweep: [1, 2]\n") == 2


def test_verify_empty_check_list(tmp_path):
    assert run(tmp_path, "verify", config="verify:\n  checks: []\n") == 0
    report = json.loads((tmp_path / "out" / "verify_report.json").read_text())
    assert report["count"] == 0 and report["passed"] is True


def test_verify_default_config_passes(tmp_path):
    assert run(tmp_path, "verify") == 0
    report = json.loads((tmp_path / "out" / "verify_report.json").read_text())
    assert report["passed"] and report["count"] > 50
    for check in report["checks"]:
        assert check["error"] <= check["tolerance"]


def test_verify_flags_failures(tmp_path):
    cfg = "verify:\n  checks: [gauss_limit]\n  options:\n    gauss_limit: {strict_gap: true}\n"
    assert run(tmp_path, "verify", config=cfg) == 1


SWEEP = "sweep:\n  s: [0.1, 0.3]\n  delta: [0.1, 0.01, 0.0]\n  time_nodes: 16\n"


def test_sweep_csv_and_manifest(tmp_path):
    assert run(tmp_path, "sweep", config=SWEEP) == 0
    out = tmp_path / "out"
    text = (out / "sweep.csv").read_text()
    lines = text.splitlines()
    assert lines[0] == HEADER
    rows = list(csv.DictReader(lines))
    assert len(rows) == 6
    for r in rows:
        assert r["wall_time_ms"] == "nan"
        if float(r["delta"]) == 0.0:
            assert float(r["len_bound"]) == 0.0 and float(r["len_direct"]) == 0.0
        assert float(r["len_direct"]) <= 1.05 * float(r["len_bound"])
    manifest = json.loads((out / "sweep.csv.manifest.json").read_text())
    cfg = load_config(str(tmp_path / "cfg.yaml"), {"output.dir": str(out)})
    assert manifest["config_hash"] == config_hash(cfg)
    assert manifest["outputs"]["sweep.csv"] == hashlib.sha256(text.encode()).hexdigest()
    assert manifest["row_count"] == 6
    assert len(manifest["wall_times_ms"]) == 6
    assert (out / "sweep_slopes.json.manifest.json").exists()


def test_sweep_is_byte_identical(tmp_path):
    assert run(tmp_path, "sweep", config=SWEEP) == 0
    first = (tmp_path / "out" / "sweep.csv").read_bytes()
    assert run(tmp_path, "sweep", "--workers", "2", config=SWEEP) == 0
    assert (tmp_path / "out" / "sweep.csv").read_bytes() == first


def test_sweep_float_text_round_trips(tmp_path):
    assert run(tmp_path, "sweep", config=SWEEP) == 0
    for r in csv.DictReader((tmp_path / "out" / "sweep.csv").read_text().splitlines()):
        for key in ("seminorm_sq", "len_bound"):
            v = float(r[key])
            assert f"{v:.17g}" == r[key]


FLOW = "flow:\n  seeds: 41\n  levels: 8\n  product_form: {n: 2, count: 5}\n"


def test_flow_ladder(tmp_path):
    assert run(tmp_path, "flow", config=FLOW) == 0
    data = json.loads((tmp_path / "out" / "flow.json").read_text())
    assert len(data["eps_ladder"]) == 8
    assert data["levels"][0]["monotone"] is True
    assert all(level["weakly_monotone"] for level in data["levels"])
    assert data["drift_trend"] in ("nonincreasing", "nondecreasing", "mixed")
    assert data["product_form"]["sup_initial"] > 0.0


def test_flow_identity_schedule(tmp_path):
    cfg = "flow:\n  delta: 0.0\n  seeds: 21\n  levels: 2\n  product_form: {n: 2, count: 3}\n"
    assert run(tmp_path, "flow", config=cfg) == 0
    data = json.loads((tmp_path / "out" / "flow.json").read_text())
    for level in data["levels"]:
        assert level["images"] == data["seeds"]
    assert all(e["drift"] == 0.0 for e in data["eps_ladder"])


def test_norm_and_ft_check(tmp_path, capsys):
    assert run(tmp_path, "norm", config="norm: {n: 2, s: 0.25, method: closed_form}\n") == 0
    out = json.loads(capsys.readouterr().out)
    assert out["closed_form"]["seminorm_sq"] == pytest.approx(5.9625649655591120226, rel=1e-10)
    assert run(tmp_path, "ft-check", "--seed", "4") == 0
    out = json.loads(capsys.readouterr().out)
    assert out["max_error"] <= out["tolerance"]
    assert any(r["profile"].startswith("random") for r in out["rows"])


def test_module_entry_point(tmp_path):
    res = subprocess.run([sys.executable, "-m", "sobovanish", "verify", "--out", str(tmp_path),
                          "--config", write(tmp_path, "verify:\n  checks: [plancherel]\n")],
                         capture_output=True, text=True)
    assert res.returncode == 0
    assert "9/9" in res.stdout


def test_defaults_are_not_mutated():
    before = json.dumps(DEFAULT_CONFIG, sort_keys=True)
    load_config(None, {"seed": 5})
    assert json.dumps(DEFAULT_CONFIG, sort_keys=True) == before
