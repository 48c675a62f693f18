"""Time the numba kernels against their numpy fallbacks.

Each backend runs in its own interpreter because the choice is fixed at
import time by ``SOBOVANISH_BACKEND``.

    python3 benchmarks/bench_backends.py [--repeat 5]
"""
import argparse
import json
import os
import subprocess
import sys

CHILD = r"""
import json, sys, time
import numpy as np
from sobovanish import BACKEND
from sobovanish.specfun import bessel_j, hyp2f1_reg
from sobovanish.sobolev import GridSpec, sample_annulus
from sobovanish.construct import MollifierSpec

repeat = int(sys.argv[1])
rng = np.random.default_rng(0)
x = rng.uniform(0.0, 200.0, 200_000)
z = rng.uniform(-0.2, 0.2, 200_000)
spec = GridSpec(2, 4.2, 512)
moll = MollifierSpec(0.05)

cases = {
    "bessel_j(1.5, x) 2e5": lambda: bessel_j(1.5, x),
    "bessel_j(0.5, x) 2e5": lambda: bessel_j(0.5, x),
    "hyp2f1_reg x2000": lambda: [hyp2f1_reg(1.25, 0.25, 2.0, 0.9 * k / 2000) for k in range(2000)],
    "sample_annulus 2D 512^2 sub4": lambda: sample_annulus(1.0, 2.0, spec, 4),
    "mollifier cdf 2e5": lambda: moll.cdf(z),
}
out = {}
for name, fn in cases.items():
    fn()  # warm-up (JIT compile, caches)
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t)
    out[name] = best
print(json.dumps({"backend": BACKEND, "times": out}))
"""


def run(backend, repeat):
    env = dict(os.environ, SOBOVANISH_BACKEND=backend)
    res = subprocess.run([sys.executable, "-c", CHILD, str(repeat)], env=env,
                         capture_output=True, text=True, check=True)
    return json.loads(res.stdout.strip().splitlines()[-1])


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--repeat", type=int, default=5)
    args = p.parse_args(argv)
    numba = run("numba", args.repeat)
    numpy = run("numpy", args.repeat)
    print(f"{'kernel':34s} {'numba [ms]':>11s} {'numpy [ms]':>11s} {'speedup':>8s}")
    for name, t_nb in numba["times"].items():
        t_np = numpy["times"][name]
        print(f"{name:34s} {1e3 * t_nb:11.2f} {1e3 * t_np:11.2f} {t_np / t_nb:8.2f}")
    if numba["backend"] != "numba":
        print("note: numba unavailable, both columns ran the numpy fallback")


if __name__ == "__main__":
    main()
