import numpy as np
import pytest

from gril import gf2
from gril.complexes import (BiFiltration, GridPoint, GridSpec,
                            SimplicialComplex, simplex, subcomplex_at)
from gril.genrank import (IntervalRegion, build_poset_diagram, compute_rank,
                          homology_space, induced_map, rank_oracle,
                          rectangle_rank, restrict_to_path, _path_step_arrays)
from gril.testutil import random_bifiltration, random_worm
from gril.worms import DiscreteWorm, boundary_path, worm_region
from gril.zigzag import INSERT


def k2_bifiltration(M=10):
    a, b, ab = simplex(0), simplex(1), simplex(0, 1)
    K = SimplicialComplex([a, b, ab])
    return BiFiltration(K, GridSpec(M), {a: GridPoint(1, 1), b: GridPoint(3, 3),
                                         ab: GridPoint(6, 6)})


def triangle_graph_bifiltration(M=10):
    simps = [simplex(0), simplex(1), simplex(2),
             simplex(0, 1), simplex(0, 2), simplex(1, 2)]
    K = SimplicialComplex(simps)
    vals = {s: GridPoint(1, 1) for s in simps}
    return BiFiltration(K, GridSpec(M), vals)


def test_homology_space_dims():
    f = k2_bifiltration()
    assert homology_space(f, GridPoint(0, 0), 0) == []
    assert len(homology_space(f, GridPoint(4, 4), 0)) == 2
    g = triangle_graph_bifiltration()
    assert len(homology_space(g, GridPoint(1, 1), 1)) == 1
    assert len(homology_space(g, GridPoint(1, 1), 0)) == 1


def test_induced_map_identity():
    f = k2_bifiltration()
    u = GridPoint(4, 4)
    m = induced_map(f, u, u, 0)
    assert m.nrows == m.ncols == 2
    assert gf2.rank(m) == 2


def test_induced_map_merge():
    f = k2_bifiltration()
    m = induced_map(f, GridPoint(4, 4), GridPoint(7, 7), 0)
    assert m.nrows == 1 and m.ncols == 2
    assert gf2.rank(m) == 1


def test_induced_map_rejects_incomparable():
    f = k2_bifiltration()
    with pytest.raises(ValueError):
        induced_map(f, GridPoint(4, 2), GridPoint(2, 4), 0)


def test_rectangle_rank_examples():
    f = k2_bifiltration()
    assert rectangle_rank(f, GridPoint(4, 4), GridPoint(4, 4), 0) == 2
    assert rectangle_rank(f, GridPoint(3, 3), GridPoint(6, 6), 0) == 1
    assert rectangle_rank(f, GridPoint(0, 0), GridPoint(2, 2), 0) == 0


def test_interval_region_validation():
    # a down-right staircase is order-convex
    IntervalRegion([GridPoint(0, 1), GridPoint(1, 1), GridPoint(1, 0)]).check()
    with pytest.raises(ValueError):
        # disconnected
        IntervalRegion([GridPoint(0, 0), GridPoint(2, 2)]).check()
    with pytest.raises(ValueError):
        # connected but not order-convex: (0,0) <= (1,0) <= (1,1) with the
        # middle point missing
        IntervalRegion([GridPoint(0, 0), GridPoint(0, 1), GridPoint(1, 1)]).check()


def test_oracle_single_point_is_homology_dim():
    f = k2_bifiltration()
    assert rank_oracle(f, [GridPoint(4, 4)], 0) == 2
    assert rank_oracle(f, [GridPoint(7, 7)], 0) == 1


def test_oracle_rectangle_equals_rectangle_rank():
    rng = np.random.default_rng(2)
    for _ in range(30):
        f = random_bifiltration(rng, M=6)
        M = f.grid.M
        ui, uj = int(rng.integers(0, M)), int(rng.integers(0, M))
        vi, vj = int(rng.integers(ui, M + 1)), int(rng.integers(uj, M + 1))
        u, v = GridPoint(ui, uj), GridPoint(vi, vj)
        box = [GridPoint(x, y) for x in range(ui, vi + 1)
               for y in range(uj, vj + 1)]
        for dim in (0, 1):
            assert rank_oracle(f, box, dim) == rectangle_rank(f, u, v, dim)


def test_restrict_to_path_constant():
    f = k2_bifiltration()
    w = DiscreteWorm(GridPoint(4, 4), 1, 1, f.grid)
    path = boundary_path(w)
    zf = restrict_to_path(f, path)
    # starts by inserting the full subcomplex at the path start
    start = subcomplex_at(f, path.points[0])
    assert [s for op, s in zf.steps[:len(start)]] == start.sorted_simplices()
    assert all(op == INSERT for op, _ in zf.steps[:len(start)])


def test_restrict_to_path_emits_diffs():
    f = k2_bifiltration()
    w = DiscreteWorm(GridPoint(4, 4), 3, 1, f.grid)
    path = boundary_path(w)
    zf = restrict_to_path(f, path)
    # replaying the steps must track the sublevel complexes exactly
    cur = set()
    idx = 0
    for op, s in zf.steps:
        if op == INSERT:
            cur.add(s)
        else:
            cur.remove(s)
    assert cur == set(subcomplex_at(f, path.points[-1]).simplices)


def test_path_step_arrays_match_object_version():
    rng = np.random.default_rng(3)
    for _ in range(25):
        f = random_bifiltration(rng, M=8)
        w = random_worm(rng, f.grid)
        path = boundary_path(w)
        zf = restrict_to_path(f, path)
        ops, dims, slots, prefix = _path_step_arrays(f, path)
        assert len(zf.steps) == len(ops)
        assert prefix == len(subcomplex_at(f, path.points[0]))
        from gril.complexes import filtration_arrays
        per_dim = filtration_arrays(f)
        for (op, s), o, d, sl in zip(zf.steps, ops, dims, slots):
            assert (op == INSERT) == (o == 1)
            assert s.dim == d
            assert per_dim[s.dim][0][sl] == s


def test_compute_rank_worked_examples():
    f = k2_bifiltration()
    w1 = DiscreteWorm(GridPoint(4, 4), 1, 1, f.grid)
    w3 = DiscreteWorm(GridPoint(4, 4), 3, 1, f.grid)
    assert compute_rank(f, w1, 0) == 2
    assert compute_rank(f, w3, 0) == 1
    # empty complex over any worm
    v = simplex(0)
    g = BiFiltration(SimplicialComplex([v]), GridSpec(10), {v: GridPoint(10, 10)})
    assert compute_rank(g, DiscreteWorm(GridPoint(2, 2), 1, 2, g.grid), 0) == 0


def test_oracle_equivalence_randomized():
    rng = np.random.default_rng(11)
    for _ in range(150):
        M = int(rng.integers(3, 9))
        f = random_bifiltration(rng, M=M)
        w = random_worm(rng, f.grid)
        region = worm_region(w)
        for dim in (0, 1):
            assert compute_rank(f, w, dim) == rank_oracle(f, region, dim)


def test_rank_monotone_in_width():
    rng = np.random.default_rng(12)
    for _ in range(40):
        f = random_bifiltration(rng, M=8)
        p = GridPoint(int(rng.integers(0, 9)), int(rng.integers(0, 9)))
        ell = int(rng.integers(1, 4))
        prev = None
        for d in range(1, 6):
            r = compute_rank(f, DiscreteWorm(p, d, ell, f.grid), 0)
            if prev is not None:
                assert r <= prev
            prev = r


def test_poset_diagram_functorial():
    rng = np.random.default_rng(13)
    for _ in range(25):
        f = random_bifiltration(rng, M=6)
        M = f.grid.M
        ui, uj = int(rng.integers(0, M - 1)), int(rng.integers(0, M - 1))
        u = GridPoint(ui, uj)
        v = GridPoint(ui + int(rng.integers(0, 2)), uj + int(rng.integers(0, 2)))
        w = GridPoint(v.i + int(rng.integers(0, 2)), v.j + int(rng.integers(0, 2)))
        for dim in (0, 1):
            direct = induced_map(f, u, w, dim)
            first = induced_map(f, u, v, dim)
            second = induced_map(f, v, w, dim)
            # composite equals direct, column by column
            for k in range(first.ncols):
                comp = gf2.matvec(second, first.columns[k])
                assert comp == direct.columns[k]
