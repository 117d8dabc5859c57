#!/usr/bin/env python3
"""Benchmark the zigzag rank kernel: numba JIT against the numpy fallback.

Each backend runs in its own process (the backend is chosen at import time
from GRIL_BACKEND).  The workload is the hot path of a landscape
computation: boundary-cap rank probes over a point-cloud bifiltration.

Usage: python benchmarks/bench_zigzag.py [--points N] [--grid M] [--probes K]
"""

import argparse
import json
import os
import subprocess
import sys
import time

PAYLOAD = r"""
import json, time
import numpy as np
from gril.backend import BACKEND
from gril.complexes import BiFiltration, GridPoint, GridSpec
from gril.filtrations import knn_density_bifiltration
from gril.genrank import compute_rank
from gril.worms import DiscreteWorm

cfg = json.loads(%r)
rng = np.random.default_rng(7)
th = rng.uniform(0, 2 * np.pi, cfg["points"])
pts = np.c_[np.cos(th), np.sin(th)]
M = cfg["grid"]
f = knn_density_bifiltration(pts, alpha=5, r_max=1.2, grid=GridSpec(M))
nsimp = len(f)

worms = []
while len(worms) < cfg["probes"]:
    ell = int(rng.integers(1, 3))
    px = int(rng.integers(2 * ell, M + 1))
    py = int(rng.integers(2 * ell, M + 1))
    d = int(rng.integers(1, min(px, py) // ell + 1))
    worms.append(DiscreteWorm(GridPoint(px, py), d, ell, GridSpec(M)))

# warm up (jit compilation happens here on the numba path)
t0 = time.time()
compute_rank(f, worms[0], 0)
warmup = time.time() - t0

f = BiFiltration(f.complex, f.grid, dict(f.value))  # drop the rank cache
t0 = time.time()
checksum = 0
for w in worms:
    checksum += compute_rank(f, w, 0) + compute_rank(f, w, 1)
elapsed = time.time() - t0
print(json.dumps({"backend": BACKEND, "simplices": nsimp, "warmup": warmup,
                  "probes": len(worms), "seconds": elapsed,
                  "checksum": checksum}))
"""


def run(backend: str, cfg: dict) -> dict:
    env = dict(os.environ, GRIL_BACKEND=backend)
    out = subprocess.run([sys.executable, "-c", PAYLOAD % json.dumps(cfg)],
                         capture_output=True, text=True, env=env)
    if out.returncode != 0:
        raise RuntimeError(out.stderr)
    return json.loads(out.stdout.strip().splitlines()[-1])


def main() -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("--points", type=int, default=60)
    ap.add_argument("--grid", type=int, default=24)
    ap.add_argument("--probes", type=int, default=150)
    args = ap.parse_args()
    cfg = {"points": args.points, "grid": args.grid, "probes": args.probes}
    results = [run("numba", cfg), run("numpy", cfg)]
    if results[0]["checksum"] != results[1]["checksum"]:
        print("BACKENDS DISAGREE", results)
        return 1
    print(f"workload: {results[0]['simplices']} simplices, "
          f"{cfg['probes']} rank probes on a {cfg['grid']}x{cfg['grid']} grid")
    for r in results:
        rate = r["probes"] / r["seconds"]
        print(f"  {r['backend']:>6}: {r['seconds']:7.2f} s "
              f"({rate:7.1f} probes/s, warmup {r['warmup']:.2f} s)")
    speedup = results[1]["seconds"] / results[0]["seconds"]
    print(f"  numba speedup: {speedup:.1f}x (identical rank checksums)")
    return 0


if __name__ == "__main__":
    sys.exit(main())
