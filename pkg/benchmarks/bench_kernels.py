"""Time the hot kernels with and without numba.

Each path runs in its own interpreter because PROXIGRAPH_JIT is read at
import time. Usage: python3 benchmarks/bench_kernels.py [--repeat 3]
"""
import argparse
import json
import os
import subprocess
import sys

CHILD = r"""
import json, sys, time
import numpy as np
from proxigraph import kernels
from proxigraph.cycles import exact_minimal
from proxigraph.geometry import PointSet
from proxigraph.witness import generate

repeat = int(sys.argv[1])
rng = np.random.default_rng(7)
small = generate(10, "uniform", rng)
big = generate(300, "uniform", rng)
mid = generate(120, "uniform", rng)
Pb, Db = big.int_coords, big.sq_matrix
Dm = mid.sq_matrix

cases = {
    "gabriel_counts n=300": lambda: kernels.gabriel_counts(Pb),
    "lune_counts n=300": lambda: kernels.lune_counts(Db),
    "exact_minimal n=10": lambda: exact_minimal(small),
    "local_search n=120": lambda: kernels.local_search(Dm, kernels.nearest_neighbor_tour(Dm, 0)),
}
for fn in cases.values():  # compile / warm caches
    fn()
out = {}
for name, fn in cases.items():
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter(); fn(); best = min(best, time.perf_counter() - t)
    out[name] = best
print(json.dumps(out))
"""


def run(jit: bool, repeat: int) -> dict:
    env = dict(os.environ, PROXIGRAPH_JIT="1" if jit else "0")
    proc = subprocess.run([sys.executable, "-c", CHILD, str(repeat)], env=env,
                          capture_output=True, text=True, check=True)
    return json.loads(proc.stdout.strip().splitlines()[-1])


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    fast, slow = run(True, args.repeat), run(False, args.repeat)
    print(f"{'kernel':<26}{'numba s':>10}{'python s':>11}{'speedup':>10}")
    for name in fast:
        print(f"{name:<26}{fast[name]:>10.4f}{slow[name]:>11.4f}{slow[name] / fast[name]:>9.1f}x")


if __name__ == "__main__":
    main()
