"""Command-line surface.

Subcommands: compute (GRIL feature vectors for bifiltration files or a
TUDataset directory), hourglass (synthetic dataset generator), rank (a
single worm rank probe), check-oracle (randomized zigzag-vs-oracle
equivalence), distance (sup-norm between two exported feature CSVs).

Exit codes: 0 ok, 1 usage, 2 parse/validation failure, 3 oracle mismatch.
"""

from __future__ import annotations

import argparse
import glob
import os
import sys
from typing import List, Optional

import numpy as np

from . import io as gio
from .complexes import GridPoint, GridSpec
from .filtrations import hks_rc_bifiltration, hourglass_generate
from .genrank import compute_rank, rank_oracle
from .gril import compute_gril_vector, default_workers
from .worms import DiscreteWorm, worm_region

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INVALID = 2
EXIT_MISMATCH = 3


def _subgrid(M: int, step: int) -> List[GridPoint]:
    return [GridPoint(i, j) for i in range(0, M + 1, step)
            for j in range(0, M + 1, step)]


def _cmd_compute(args) -> int:
    dims = tuple(int(d) for d in args.dims.split(","))
    workers = args.workers if args.workers else default_workers()
    inputs = []  # (id, label, bifiltration)
    if args.format == "bifil":
        if os.path.isdir(args.input):
            paths = sorted(glob.glob(os.path.join(args.input, "*.bifil")))
            if not paths:
                print(f"no .bifil files in {args.input}", file=sys.stderr)
                return EXIT_INVALID
        else:
            paths = [args.input]
        for path in paths:
            with open(path) as fh:
                f = gio.parse_bifiltration(fh.read())
            if f.grid.M != args.grid:
                print(f"{path}: file grid {f.grid.M} != --grid {args.grid}",
                      file=sys.stderr)
                return EXIT_INVALID
            name = os.path.splitext(os.path.basename(path))[0]
            inputs.append((name, 0, f))
    else:
        markers = glob.glob(os.path.join(args.input, "*_graph_indicator.txt"))
        if markers:
            name = os.path.basename(markers[0])[:-len("_graph_indicator.txt")]
        else:
            name = os.path.basename(os.path.normpath(args.input))
        graphs = gio.read_tudataset(args.input, name)
        grid = GridSpec(args.grid)
        for gi, g in enumerate(graphs):
            f = hks_rc_bifiltration(g, grid)
            inputs.append((f"{name}_{gi}", g.label, f))
    centers = _subgrid(args.grid, args.subgrid_step)
    vectors, ids, labels = [], [], []
    for gid, label, f in inputs:
        v = compute_gril_vector(f, centers, args.kmax, (args.ell,), dims,
                                workers=workers)
        vectors.append(v)
        ids.append(gid)
        labels.append(label)
    csv = gio.emit_features(vectors, ids, labels)
    with open(args.out, "w") as fh:
        fh.write(csv)
    if args.heatmaps:
        os.makedirs(args.heatmaps, exist_ok=True)
        for v, gid in zip(vectors, ids):
            for dim in dims:
                for k in range(1, args.kmax + 1):
                    pgm = gio.emit_heatmap(v, k, args.ell, dim)
                    fname = f"{gid}_h{dim}_k{k}_l{args.ell}.pgm"
                    with open(os.path.join(args.heatmaps, fname), "w") as fh:
                        fh.write(pgm)
    print(f"wrote {args.out} ({len(vectors)} rows)")
    return EXIT_OK


def _cmd_hourglass(args) -> int:
    rng = np.random.default_rng(args.seed)
    graphs = []
    for i in range(args.count):
        n1 = int(rng.integers(args.min, args.max + 1))
        n2 = int(rng.integers(args.min, args.max + 1))
        traversal = "T1" if i % 2 == 0 else "T2"
        graphs.append(hourglass_generate(n1, n2, traversal,
                                         seed=int(rng.integers(0, 2 ** 31))))
    name = f"HourGlass_{args.min}_{args.max}"
    gio.write_tudataset(args.out, name, graphs)
    print(f"wrote {args.count} graphs to {args.out} as {name}")
    return EXIT_OK


def _cmd_rank(args) -> int:
    with open(args.input) as fh:
        f = gio.parse_bifiltration(fh.read())
    ci, cj = (int(x) for x in args.center.split(","))
    w = DiscreteWorm(GridPoint(ci, cj), args.width, args.ell, f.grid)
    print(compute_rank(f, w, args.dim))
    return EXIT_OK


def _cmd_check_oracle(args) -> int:
    from .testutil import random_bifiltration, random_worm
    rng = np.random.default_rng(args.seed)
    for trial in range(args.trials):
        f = random_bifiltration(rng, max_simplices=args.max_simplices, M=args.grid)
        w = random_worm(rng, f.grid)
        for dim in (0, 1):
            zz = compute_rank(f, w, dim)
            oracle = rank_oracle(f, worm_region(w), dim)
            if zz != oracle:
                print(f"MISMATCH trial={trial} dim={dim} center={w.center} "
                      f"d={w.width_steps} ell={w.ell}: zigzag={zz} oracle={oracle}")
                return EXIT_MISMATCH
    print(f"ok: {args.trials} trials agree")
    return EXIT_OK


def _cmd_distance(args) -> int:
    with open(args.a) as fh:
        ids_a, _, cols_a, mat_a = gio.parse_features(fh.read())
    with open(args.b) as fh:
        ids_b, _, cols_b, mat_b = gio.parse_features(fh.read())
    if cols_a != cols_b:
        print("feature columns differ", file=sys.stderr)
        return EXIT_INVALID
    if ids_a != ids_b:
        print("graph ids differ", file=sys.stderr)
        return EXIT_INVALID
    if mat_a.size == 0:
        print(0.0)
        return EXIT_OK
    print(float(np.max(np.abs(mat_a - mat_b))))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="gril",
                                description="Generalized rank invariant landscapes")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("compute", help="compute GRIL feature vectors")
    c.add_argument("--input", required=True)
    c.add_argument("--format", required=True, choices=["bifil", "tudataset"])
    c.add_argument("--grid", required=True, type=int)
    c.add_argument("--subgrid-step", required=True, type=int, dest="subgrid_step")
    c.add_argument("--kmax", required=True, type=int)
    c.add_argument("--ell", required=True, type=int)
    c.add_argument("--dims", default="0,1")
    c.add_argument("--out", required=True)
    c.add_argument("--heatmaps", default=None)
    c.add_argument("--workers", type=int, default=None)
    c.set_defaults(func=_cmd_compute)

    h = sub.add_parser("hourglass", help="generate an HourGlass dataset")
    h.add_argument("--min", required=True, type=int)
    h.add_argument("--max", required=True, type=int)
    h.add_argument("--count", required=True, type=int)
    h.add_argument("--seed", required=True, type=int)
    h.add_argument("--out", required=True)
    h.set_defaults(func=_cmd_hourglass)

    r = sub.add_parser("rank", help="one generalized-rank probe")
    r.add_argument("--input", required=True)
    r.add_argument("--center", required=True)
    r.add_argument("--width", required=True, type=int)
    r.add_argument("--ell", required=True, type=int)
    r.add_argument("--dim", required=True, type=int)
    r.set_defaults(func=_cmd_rank)

    o = sub.add_parser("check-oracle", help="randomized zigzag vs oracle check")
    o.add_argument("--trials", type=int, default=1000)
    o.add_argument("--max-simplices", type=int, default=10, dest="max_simplices")
    o.add_argument("--grid", type=int, default=8)
    o.add_argument("--seed", type=int, default=0)
    o.set_defaults(func=_cmd_check_oracle)

    d = sub.add_parser("distance", help="sup-norm distance between feature CSVs")
    d.add_argument("--a", required=True)
    d.add_argument("--b", required=True)
    d.set_defaults(func=_cmd_distance)
    return p


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code not in (0, None) else EXIT_OK
    try:
        return args.func(args)
    except (gio.ParseError, ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
