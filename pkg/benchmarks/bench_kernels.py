#!/usr/bin/env python3
"""Benchmark the JIT kernels against the pure-Python fallback lane.

Runs the same workloads twice in subprocesses, once with CURVLAB_NUMBA=1
and once with CURVLAB_NUMBA=0, and prints a side-by-side table.  JIT
compilation time is excluded by a warmup call inside the child.

Usage:  python3 benchmarks/bench_kernels.py [--quick]
"""

from __future__ import annotations

import argparse
import json
import os
import subprocess
import sys

CHILD = r"""
import json
import sys
import time

from curvlab import _kernels
from curvlab.families import gosset, johnson, cocktail_party
from curvlab.graphs import cartesian_product, distances
from curvlab.sharpness import is_strongly_spherical
from curvlab.transport import kappa

quick = sys.argv[1] == "quick"
_kernels.warmup()
results = {"numba": _kernels.NUMBA_ENABLED}

g = gosset()
t0 = time.perf_counter()
d = distances(g)
results["bfs_gosset"] = time.perf_counter() - t0

t0 = time.perf_counter()
vals = [kappa(g, d, u, v).value for u, v in g.edges()]
results["edge_kappa_gosset"] = time.perf_counter() - t0
assert all(v == vals[0] for v in vals)

base = johnson(6, 3)
t0 = time.perf_counter()
db = distances(base)
verdict = is_strongly_spherical(base, db)
results["spherical_j63"] = time.perf_counter() - t0
assert verdict.holds

if not quick:
    prod = cartesian_product(johnson(6, 3), cocktail_party(4))
    dp = distances(prod)
    t0 = time.perf_counter()
    verdict = is_strongly_spherical(prod, dp)
    results["spherical_j63xcp4"] = time.perf_counter() - t0
    assert verdict.holds

print(json.dumps(results))
"""


def run_lane(flag: str, quick: bool) -> dict:
    env = dict(os.environ, CURVLAB_NUMBA=flag)
    out = subprocess.run(
        [sys.executable, "-c", CHILD, "quick" if quick else "full"],
        env=env,
        capture_output=True,
        text=True,
        check=True,
    )
    return json.loads(out.stdout.strip().splitlines()[-1])


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--quick", action="store_true", help="skip the 160-vertex product")
    args = ap.parse_args()

    jit = run_lane("1", args.quick)
    pure = run_lane("0", args.quick)
    assert jit.pop("numba") is True, "numba lane did not engage (is numba installed?)"
    assert pure.pop("numba") is False

    width = max(len(k) for k in jit)
    print(f"{'workload'.ljust(width)}   numba      fallback   speedup")
    for key in jit:
        a, b = jit[key], pure[key]
        print(f"{key.ljust(width)}   {a:8.3f}s  {b:8.3f}s  {b / a:6.1f}x")


if __name__ == "__main__":
    main()
