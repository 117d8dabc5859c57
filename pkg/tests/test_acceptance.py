"""Acceptance criteria, one test per criterion, each printing a PASS/FAIL line.

Run with `pytest tests/test_acceptance.py -v -s` to see the per-criterion
report.  Tolerances are fixed here, not calibrated elsewhere.
"""

import time

import numpy as np
import pytest

from gril.complexes import (BiFiltration, GridPoint, GridSpec,
                            SimplicialComplex, simplex)
from gril.filtrations import (hourglass_bifiltration, hourglass_generate,
                              knn_density_bifiltration)
from gril.genrank import compute_rank, rank_oracle, rectangle_rank
from gril.gril import (GrilQuery, assignment, compute_gril,
                       compute_gril_vector, directional_probe, gril_distance,
                       reconstruct_rank)
from gril.testutil import random_bifiltration, random_worm
from gril.worms import DiscreteWorm, worm_region


def report(name, ok, detail=""):
    print(f"\n[{'PASS' if ok else 'FAIL'}] {name}" + (f" ({detail})" if detail else ""))
    assert ok, f"{name}: {detail}"


def fresh_copy(f):
    """Same bifiltration, new caches (for timing and cache-independence tests)."""
    return BiFiltration(f.complex, f.grid, dict(f.value))


def test_criterion_1_oracle_equivalence():
    rng = np.random.default_rng(1001)
    t0 = time.time()
    mismatches = 0
    trials = 1000
    for _ in range(trials):
        M = int(rng.integers(3, 9))
        f = random_bifiltration(rng, max_simplices=10, M=M)
        w = random_worm(rng, f.grid, max_ell=3)
        region = worm_region(w)
        for dim in (0, 1):
            if compute_rank(f, w, dim) != rank_oracle(f, region, dim):
                mismatches += 1
    elapsed = time.time() - t0
    report("criterion 1: oracle equivalence, 1000 trials",
           mismatches == 0 and elapsed < 120,
           f"{mismatches} mismatches in {elapsed:.1f}s")


def test_criterion_2_rectangle_consistency():
    rng = np.random.default_rng(1002)
    bad = 0
    for _ in range(200):
        M = int(rng.integers(4, 9))
        f = random_bifiltration(rng, M=M)
        d = int(rng.integers(1, M // 2 + 1))
        ci = int(rng.integers(d, M - d + 1))
        cj = int(rng.integers(d, M - d + 1))
        u = GridPoint(ci - d, cj - d)
        v = GridPoint(ci + d, cj + d)
        w = DiscreteWorm(GridPoint(ci, cj), d, 1, f.grid)
        assert worm_region(w) == {GridPoint(x, y)
                                  for x in range(u.i, v.i + 1)
                                  for y in range(u.j, v.j + 1)}
        for dim in (0, 1):
            if compute_rank(f, w, dim) != rectangle_rank(f, u, v, dim):
                bad += 1
    report("criterion 2: rectangle consistency, 200 trials", bad == 0,
           f"{bad} mismatches")


def test_criterion_3_monotonicity():
    rng = np.random.default_rng(1003)
    bad_rank = 0
    for _ in range(500):
        M = int(rng.integers(3, 9))
        f = random_bifiltration(rng, M=M)
        p = GridPoint(int(rng.integers(0, M + 1)), int(rng.integers(0, M + 1)))
        ell = int(rng.integers(1, 4))
        d1 = int(rng.integers(1, M + 1))
        d2 = int(rng.integers(d1, M + 1))
        dim = int(rng.integers(0, 2))
        r_small = compute_rank(f, DiscreteWorm(p, d1, ell, f.grid), dim)
        r_large = compute_rank(f, DiscreteWorm(p, d2, ell, f.grid), dim)
        if r_large > r_small:
            bad_rank += 1
    bad_k = 0
    for _ in range(20):
        f = random_bifiltration(rng, M=8)
        centers = [GridPoint(i, j) for i in range(0, 9, 4) for j in range(0, 9, 4)]
        v = compute_gril_vector(f, centers, kmax=4, ells=(1, 2), dims=(0, 1))
        if not np.all(v.values[:, :, :-1, :] >= v.values[:, :, 1:, :] - 1e-12):
            bad_k += 1
    report("criterion 3: monotonicity (500 nested pairs, antitone k)",
           bad_rank == 0 and bad_k == 0,
           f"{bad_rank} rank violations, {bad_k} k-antitonicity violations")


def _perturbed(f, rng, max_steps=2):
    """A monotone perturbation of f; returns (f', eps in grid steps)."""
    M = f.grid.M
    value = {}
    eps = 0
    for s in f.complex.sorted_simplices():
        gp = f.value[s]
        ni = min(M, max(0, gp.i + int(rng.integers(-max_steps, max_steps + 1))))
        nj = min(M, max(0, gp.j + int(rng.integers(-max_steps, max_steps + 1))))
        for face in s.facets():
            ni = max(ni, value[face].i)
            nj = max(nj, value[face].j)
        value[s] = GridPoint(ni, nj)
        eps = max(eps, abs(ni - gp.i), abs(nj - gp.j))
    return BiFiltration(f.complex, f.grid, value), eps


def test_criterion_4_stability():
    rng = np.random.default_rng(1004)
    worst = 0.0
    bad = 0
    for _ in range(100):
        M = int(rng.integers(4, 9))
        f = random_bifiltration(rng, M=M)
        fp, eps_steps = _perturbed(f, rng)
        centers = [GridPoint(i, j) for i in range(0, M + 1, 2)
                   for j in range(0, M + 1, 2)]
        va = compute_gril_vector(f, centers, kmax=2, ells=(1, 2), dims=(0, 1))
        vb = compute_gril_vector(fp, centers, kmax=2, ells=(1, 2), dims=(0, 1))
        dist = gril_distance(va, vb)
        bound = (eps_steps + 2) * f.grid.rho
        worst = max(worst, dist - bound)
        if dist > bound + 1e-12:
            bad += 1
    report("criterion 4: stability |lambda^f - lambda^f'| <= eps + 2 rho",
           bad == 0, f"{bad} violations, worst slack {worst:.4f}")


def test_criterion_5_sandwich_refinement():
    rng = np.random.default_rng(1005)
    bad = 0
    worst = 0.0
    for _ in range(50):
        M = int(rng.integers(3, 7))
        f = random_bifiltration(rng, M=M)
        doubled = {s: GridPoint(2 * gp.i, 2 * gp.j) for s, gp in f.value.items()}
        f2 = BiFiltration(f.complex, GridSpec(2 * M), doubled)
        for _ in range(4):
            p = GridPoint(int(rng.integers(0, M + 1)), int(rng.integers(0, M + 1)))
            q = GrilQuery(p, int(rng.integers(1, 3)), int(rng.integers(1, 3)),
                          int(rng.integers(0, 2)))
            q2 = GrilQuery(GridPoint(2 * p.i, 2 * p.j), q.k, q.ell, q.dim)
            diff = abs(compute_gril(f, q) - compute_gril(f2, q2))
            worst = max(worst, diff - 1.0 / M)
            if diff > 1.0 / M + 1e-12:
                bad += 1
    report("criterion 5: grid refinement changes lambda-hat by <= 1/M",
           bad == 0, f"{bad} violations, worst slack {worst:.4f}")


def test_criterion_6_reconstruction_round_trip():
    rng = np.random.default_rng(1006)
    bad = 0
    for _ in range(200):
        M = int(rng.integers(3, 9))
        f = random_bifiltration(rng, M=M)
        w = random_worm(rng, f.grid)
        dim = int(rng.integers(0, 2))
        kmax = max(1, compute_rank(f, DiscreteWorm(w.center, 1, w.ell, f.grid), dim))
        v = compute_gril_vector(f, [w.center], kmax=kmax, ells=(w.ell,), dims=(dim,))
        got = reconstruct_rank(v, w.center, w.width_steps * f.grid.rho, w.ell, dim)
        if got != compute_rank(f, w, dim):
            bad += 1
    report("criterion 6: reconstruct_rank round trip, 200 trials", bad == 0,
           f"{bad} mismatches")


def test_criterion_7_binary_search_and_caching():
    rng = np.random.default_rng(1007)
    bad_scan = 0
    for _ in range(200):
        M = int(rng.integers(3, 9))
        f = random_bifiltration(rng, M=M)
        q = GrilQuery(GridPoint(int(rng.integers(0, M + 1)),
                                int(rng.integers(0, M + 1))),
                      int(rng.integers(1, 4)), int(rng.integers(1, 4)),
                      int(rng.integers(0, 2)))
        lam = compute_gril(f, q)
        best = 0
        for d in range(1, M + 1):
            if compute_rank(f, DiscreteWorm(q.center, d, q.ell, f.grid), q.dim) >= q.k:
                best = d
        if abs(lam - best * f.grid.rho) > 1e-12:
            bad_scan += 1
    # cached vector equals entrywise computation on fresh objects
    bad_cache = 0
    for _ in range(10):
        f = random_bifiltration(rng, M=8)
        centers = [GridPoint(i, j) for i in range(0, 9, 2) for j in range(0, 9, 2)]
        v = compute_gril_vector(f, centers, kmax=3, ells=(1, 2), dims=(0, 1))
        for _ in range(10):
            ci = int(rng.integers(0, len(centers)))
            k = int(rng.integers(1, 4))
            ell = (1, 2)[int(rng.integers(0, 2))]
            dim = int(rng.integers(0, 2))
            single = compute_gril(fresh_copy(f),
                                  GrilQuery(centers[ci], k, ell, dim))
            if abs(v.value(centers[ci], k, ell, dim) - single) > 1e-12:
                bad_cache += 1
    # worker independence
    f = random_bifiltration(np.random.default_rng(77), M=8)
    centers = [GridPoint(i, j) for i in range(0, 9, 2) for j in range(0, 9, 2)]
    v1 = compute_gril_vector(fresh_copy(f), centers, 3, (1, 2), (0, 1), workers=1)
    v3 = compute_gril_vector(fresh_copy(f), centers, 3, (1, 2), (0, 1), workers=3)
    workers_same = np.array_equal(v1.values, v3.values)
    report("criterion 7: binary search == scan, caching sound, workers invariant",
           bad_scan == 0 and bad_cache == 0 and workers_same,
           f"{bad_scan} scan mismatches, {bad_cache} cache mismatches, "
           f"workers_same={workers_same}")


def _circle(rng, n, cx=0.0, cy=0.0, r=1.0):
    th = rng.uniform(0, 2 * np.pi, n)
    return np.c_[cx + r * np.cos(th), cy + r * np.sin(th)]


def _disk(rng, n, cx=0.0, cy=0.0, r=1.0):
    th = rng.uniform(0, 2 * np.pi, n)
    rr = r * np.sqrt(rng.uniform(0, 1, n))
    return np.c_[cx + rr * np.cos(th), cy + rr * np.sin(th)]


def test_criterion_8_point_cloud_discrimination():
    t0 = time.time()
    M = 32
    grid = GridSpec(M)
    centers = [GridPoint(i, j) for i in range(0, M + 1, 4)
               for j in range(0, M + 1, 4)]

    def lambdas(pts):
        f = knn_density_bifiltration(pts, alpha=5, r_max=1.2, grid=grid)
        v = compute_gril_vector(f, centers, kmax=2, ells=(2,), dims=(1,))
        return float(v.values[0, :, 0, 0].max()), float(v.values[0, :, 1, 0].max())

    ok = 0
    for seed in range(10):
        rng = np.random.default_rng(seed)
        c_l1, c_l2 = lambdas(_circle(rng, 60))
        t_l1, t_l2 = lambdas(np.vstack([_circle(rng, 30, cx=-1.5, r=0.7),
                                        _circle(rng, 30, cx=1.5, r=0.7)]))
        d_l1, d_l2 = lambdas(np.vstack([_circle(rng, 30, cx=-1.5, r=0.7),
                                        _disk(rng, 30, cx=1.5, r=0.7)]))
        good = (c_l1 > 0 and c_l2 == 0 and t_l1 > 0 and t_l2 > 0
                and d_l1 > 0 and d_l2 == 0)
        ok += good
    elapsed = time.time() - t0
    report("criterion 8: circle / two-circles / circle+disk discrimination",
           ok == 10 and elapsed < 300, f"{ok}/10 seeds in {elapsed:.0f}s")


def _loo_nearest_centroid(X, y):
    X = np.asarray(X)
    y = np.asarray(y)
    n = len(y)
    correct = 0
    for i in range(n):
        mask = np.arange(n) != i
        Xt, yt = X[mask], y[mask]
        mu, sd = Xt.mean(axis=0), Xt.std(axis=0)
        sd[sd == 0] = 1.0
        Xs, xs = (Xt - mu) / sd, (X[i] - mu) / sd
        c0 = Xs[yt == 0].mean(axis=0)
        c1 = Xs[yt == 1].mean(axis=0)
        pred = 0 if np.linalg.norm(xs - c0) <= np.linalg.norm(xs - c1) else 1
        correct += pred == y[i]
    return correct / n


def test_criterion_9_hourglass_separability():
    t0 = time.time()
    M = 50
    grid = GridSpec(M)
    # centers along the top curvature rows, where the traversal classes
    # provably differ in the rank-2 component structure
    centers = [GridPoint(i, j) for i in range(0, M + 1, 5) for j in (45, 50)]
    rng = np.random.default_rng(2024)
    X, y = [], []
    for i in range(100):
        n1 = int(rng.integers(10, 21))
        n2 = int(rng.integers(10, 21))
        trav = "T1" if i % 2 == 0 else "T2"
        g = hourglass_generate(n1, n2, trav, seed=int(rng.integers(0, 2 ** 31)))
        f = hourglass_bifiltration(g, grid)
        v = compute_gril_vector(f, centers, kmax=2, ells=(1, 2), dims=(0,))
        X.append(v.flatten())
        y.append(0 if trav == "T1" else 1)
    acc = _loo_nearest_centroid(X, y)
    elapsed = time.time() - t0
    report("criterion 9: HourGlass[10,20] nearest-centroid LOO >= 90%",
           acc >= 0.90 and elapsed < 900, f"accuracy {acc:.2f} in {elapsed:.0f}s")


def _probe_instances():
    """20 generic instances covering the four support cases."""
    out = []
    # case 1: a merging edge crossing the top edge; slope 1/ell
    for ell, gy, num in ((1, 27, 0), (2, 33, 1), (2, 29, 2), (3, 33, 3), (1, 31, 4)):
        a, b, ab = simplex(0), simplex(1), simplex(0, 1)
        K = SimplicialComplex([a, b, ab])
        f = BiFiltration(K, GridSpec(40),
                         {a: GridPoint(1, 3), b: GridPoint(2, 1),
                          ab: GridPoint(4, gy)})
        out.append((f"case1.{num}", f, GrilQuery(GridPoint(20, 20), 2, ell, 0),
                    2 * ell, 1.0 / ell))
    # case 2: a vertex pinned by the left edge; slope 1/ell
    for ell, ax, num in ((1, 14, 0), (2, 8, 1), (2, 10, 2), (3, 8, 3), (1, 12, 4)):
        v = simplex(0)
        f = BiFiltration(SimplicialComplex([v]), GridSpec(40),
                         {v: GridPoint(ax, 1)})
        out.append((f"case2.{num}", f, GrilQuery(GridPoint(20, 20), 1, ell, 0),
                    2 * ell, 1.0 / ell))
    # case 3: coverage and glue pinned at the lower staircase; slope 1
    case3 = [
        (0, (20, 20), (2, 15), (14, 3), (15, 16)),
        (1, (20, 20), (2, 14), (13, 3), (14, 15)),
        (2, (20, 20), (2, 13), (12, 3), (13, 14)),
        (3, (22, 18), (4, 13), (16, 1), (17, 14)),
        (4, (20, 20), (1, 17), (12, 2), (13, 18)),
    ]
    for num, p, va, vb, vg in case3:
        a, b, g = simplex(0), simplex(1), simplex(0, 1)
        f = BiFiltration(SimplicialComplex([a, b, g]), GridSpec(40),
                         {a: GridPoint(*va), b: GridPoint(*vb),
                          g: GridPoint(*vg)})
        out.append((f"case3.{num}", f, GrilQuery(GridPoint(*p), 1, 2, 0),
                    2, 1.0))
    # case 4: a merging edge entering through the upper staircase; slope 1
    case4 = [
        (0, (20, 20), (24, 26)),
        (1, (20, 20), (26, 25)),
        (2, (20, 20), (23, 28)),
        (3, (18, 22), (22, 28)),
        (4, (20, 20), (25, 27)),
    ]
    for num, p, vab in case4:
        a, b, ab = simplex(0), simplex(1), simplex(0, 1)
        f = BiFiltration(SimplicialComplex([a, b, ab]), GridSpec(40),
                         {a: GridPoint(1, 4), b: GridPoint(3, 1),
                          ab: GridPoint(*vab)})
        out.append((f"case4.{num}", f, GrilQuery(GridPoint(*p), 2, 2, 0),
                    2, 1.0))
    return out


def test_criterion_10_derivative_probe():
    bad = []
    instances = _probe_instances()
    assert len(instances) == 20
    for name, f, q, alpha_steps, slope in instances:
        rho = f.grid.rho
        if compute_gril(f, q) == 0.0:
            bad.append((name, "landscape value is zero"))
            continue
        s = assignment(f, q)
        if not s.support:
            bad.append((name, "no support detected"))
            continue
        alpha = alpha_steps * rho
        pred, obs = directional_probe(f, s, alpha, q)
        if abs(pred - slope) > 1e-12:
            bad.append((name, f"slope {pred} != {slope}"))
        elif abs(obs - alpha * pred) > 2 * rho + 1e-12:
            bad.append((name, f"observed {obs:.4f} vs {alpha * pred:.4f}"))
    report("criterion 10: derivative probes within 2 rho on 20 instances",
           not bad, f"failures: {bad}")


def test_criterion_11_scaling_smoke():
    rng = np.random.default_rng(1011)
    pts = _circle(rng, 40)
    M = 20
    grid = GridSpec(M)
    f0 = knn_density_bifiltration(pts, alpha=5, r_max=1.2, grid=grid)
    all_centers = [GridPoint(i, j) for i in range(0, M + 1, 2)
                   for j in range(0, M + 1, 2)][:120]
    small = all_centers[::2]
    large = all_centers
    assert len(large) == 2 * len(small)

    def timed(centers):
        runs = []
        for _ in range(3):
            f = fresh_copy(f0)
            t0 = time.time()
            compute_gril_vector(f, centers, kmax=2, ells=(2,), dims=(0, 1))
            runs.append(time.time() - t0)
        return float(np.median(runs))

    timed(small)  # warm the jit and allocator
    t_small = timed(small)
    t_large = timed(large)
    ratio = t_large / t_small
    report("criterion 11: doubling |P| costs <= 2.5x", ratio <= 2.5,
           f"ratio {ratio:.2f} ({t_small:.2f}s -> {t_large:.2f}s)")
