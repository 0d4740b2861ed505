"""Compare the compiled kernels against the NumPy fallback.

    python benchmarks/bench_kernels.py [--repeat 5] [--L 20]

Micro benchmarks call both implementations directly; the end-to-end timing
(sup norms of the full system on the 1/(4L) probe mesh) runs each backend in
a fresh interpreter so the import-time selection is exercised.
"""
import argparse
import os
import subprocess
import sys
import timeit

import numpy as np

from flatsphere import _pykernels
from flatsphere.cutoff import KernelSpec

try:
    from flatsphere import _ckernels
except ImportError:
    _ckernels = None

E2E = """
import time
from flatsphere import KernelSpec, build_system, fekete_points, sup_norms
from flatsphere._backend import BACKEND
system = build_system(fekete_points(2, {L}, 0.2), KernelSpec(2, {L}, 0.2))
best = float("inf")
for _ in range({repeat}):
    t0 = time.perf_counter()
    sup_norms(system, 1.0 / (4 * {L}))
    best = min(best, time.perf_counter() - t0)
print(BACKEND, best)
"""


def best_of(fn, repeat):
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def micro(L, repeat):
    rng = np.random.default_rng(0)
    table = KernelSpec(2, L, 0.2).table
    coef, (u, v) = table._series, table._rec
    t = rng.uniform(-1, 1, 2_000_000)
    n = (int(0.6 * L) + 1) ** 2
    a = rng.standard_normal((n, n))
    k = rng.standard_normal((n, 20_000))
    out = []
    for name, args in (("zonal_series", (coef, u, v, t)), ("flat_contract", (a, a, k))):
        py = best_of(lambda: getattr(_pykernels, name)(*args), repeat)
        cy = best_of(lambda: getattr(_ckernels, name)(*args), repeat) if _ckernels else float("nan")
        out.append((name, py, cy))
    return out


def end_to_end(L, repeat):
    res = {}
    for label, extra in (("cython", {}), ("python", {"FLATSPHERE_PURE_PYTHON": "1"})):
        env = dict(os.environ, **extra)
        proc = subprocess.run([sys.executable, "-c", E2E.format(L=L, repeat=repeat)],
                              env=env, capture_output=True, text=True, check=True)
        backend, secs = proc.stdout.split()
        res[label] = (backend, float(secs))
    return res


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--repeat", type=int, default=5)
    p.add_argument("--L", type=int, default=20)
    args = p.parse_args(argv)
    print(f"{'kernel':<22}{'python s':>12}{'cython s':>12}{'speedup':>10}")
    for name, py, cy in micro(args.L, args.repeat):
        print(f"{name:<22}{py:>12.4f}{cy:>12.4f}{py / cy:>10.2f}")
    e2e = end_to_end(args.L, args.repeat)
    py, cy = e2e["python"][1], e2e["cython"][1]
    print(f"{'sup_norms L=' + str(args.L):<22}{py:>12.4f}{cy:>12.4f}{py / cy:>10.2f}")
    if e2e["cython"][0] != "cython":
        print("note: compiled extension unavailable, both columns used the fallback")


if __name__ == "__main__":
    main()
