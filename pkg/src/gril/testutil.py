"""Random instance generators and independent cross-check oracles shared by
the test suite and `gril check-oracle`."""

from __future__ import annotations

from typing import List, Tuple

import numpy as np

from . import gf2
from .complexes import (BiFiltration, GridPoint, GridSpec, Simplex,
                        SimplicialComplex, simplex)
from .gf2 import Gf2Matrix, Gf2Vector
from .genrank import diagram_rank
from .worms import DiscreteWorm
from .zigzag import DELETE, INSERT, ZigzagFiltration


def random_complex(rng: np.random.Generator, max_simplices: int = 10,
                   edge_p: float = 0.7, tri_p: float = 0.6) -> SimplicialComplex:
    """A small random complex: vertices, random edges, triangles where possible."""
    nv = int(rng.integers(2, 5))
    simps = [simplex(v) for v in range(nv)]
    pairs = [(u, v) for u in range(nv) for v in range(u + 1, nv)]
    perm = rng.permutation(len(pairs))
    eset = set()
    for idx in perm:
        if len(simps) >= max_simplices:
            break
        if rng.random() < edge_p:
            u, v = pairs[idx]
            simps.append(simplex(u, v))
            eset.add((u, v))
    for u in range(nv):
        for v in range(u + 1, nv):
            for w in range(v + 1, nv):
                if len(simps) >= max_simplices:
                    break
                if ((u, v) in eset and (u, w) in eset and (v, w) in eset
                        and rng.random() < tri_p):
                    simps.append(simplex(u, v, w))
    return SimplicialComplex(simps, _validated=True)


def random_bifiltration(rng: np.random.Generator, max_simplices: int = 10,
                        M: int = 8) -> BiFiltration:
    """A random monotone bifiltration: random vertex values, faces bumped up.

    Not restricted to lower-star functions: higher simplices may exceed the
    max of their faces, which exercises the general monotone case.
    """
    K = random_complex(rng, max_simplices=max_simplices)
    g = GridSpec(M)
    value = {}
    for s in K.sorted_simplices():
        if s.dim == 0:
            vi, vj = int(rng.integers(0, M + 1)), int(rng.integers(0, M + 1))
        else:
            vi = max(value[f].i for f in s.facets())
            vj = max(value[f].j for f in s.facets())
            vi = min(M, vi + int(rng.integers(0, 3)))
            vj = min(M, vj + int(rng.integers(0, 3)))
        value[s] = GridPoint(vi, vj)
    return BiFiltration(K, g, value)


def random_worm(rng: np.random.Generator, grid: GridSpec,
                max_ell: int = 3) -> DiscreteWorm:
    """A random worm whose region stays above the domain's lower-left corner
    (worms reaching below it have rank 0 by convention, so the boundary
    zigzag and the region oracle are only comparable on fitting worms)."""
    M = grid.M
    ell = int(rng.integers(1, max_ell + 1))
    center = GridPoint(int(rng.integers(ell, M + 1)), int(rng.integers(ell, M + 1)))
    dmax = min(center.i, center.j) // ell
    d = int(rng.integers(1, dmax + 1))
    return DiscreteWorm(center, d, ell, grid)


def random_zigzag(rng: np.random.Generator, n_steps: int = 20,
                  max_simplices: int = 10) -> ZigzagFiltration:
    """A random valid insert/delete sequence over a small simplex pool."""
    pool = list(random_complex(rng, max_simplices=max_simplices).simplices)
    present: set = set()
    steps = []
    for _ in range(n_steps):
        insertable = [s for s in pool if s not in present
                      and all(f in present for f in s.facets())]
        cofaces = {s: 0 for s in present}
        for s in present:
            for f in s.facets():
                cofaces[f] += 1
        deletable = [s for s in present if cofaces[s] == 0]
        ops = []
        if insertable:
            ops.append(INSERT)
        if deletable:
            ops.append(DELETE)
        if not ops:
            break
        op = ops[int(rng.integers(0, len(ops)))]
        if op == INSERT:
            s = insertable[int(rng.integers(0, len(insertable)))]
            present.add(s)
        else:
            s = deletable[int(rng.integers(0, len(deletable)))]
            present.remove(s)
        steps.append((op, s))
    return ZigzagFiltration(steps)


# ---------------------------------------------------------------------------
# a second oracle: the limit-to-colimit rank of a zigzag's step diagram,
# computed from explicit complexes with plain GF(2) algebra

def _complex_homology(simplices: frozenset, dim: int, slot) -> Tuple[list, list]:
    """(homology basis cycles, boundary echelon) as global-slot chains."""
    boundary = []
    low_seen = {}
    for s in simplices:
        if s.dim != dim + 1:
            continue
        bits = Gf2Vector(slot[f] for f in s.facets()).bits
        while bits:
            k = low_seen.get(bits.bit_length() - 1)
            if k is None:
                break
            bits ^= boundary[k]
        if bits:
            low_seen[bits.bit_length() - 1] = len(boundary)
            boundary.append(bits)
    boundary_vecs = [Gf2Vector.from_bits(b) for b in boundary]
    dim_simps = sorted(s for s in simplices if s.dim == dim)
    if dim == 0:
        cycles = [Gf2Vector([slot[s]]) for s in dim_simps]
    else:
        nrows = 1 + max((slot[c] for c in simplices if c.dim == dim - 1),
                        default=0)
        cols = [Gf2Vector(slot[f] for f in s.facets()) for s in dim_simps]
        mat = Gf2Matrix(max(nrows, 1), cols)
        cycles = []
        for vec in gf2.kernel_basis(mat):
            cycles.append(Gf2Vector(slot[dim_simps[i]] for i in vec.support))
    basis = []
    reduced = list(boundary)
    low2 = dict(low_seen)
    for z in cycles:
        bits = z.bits
        while bits:
            k = low2.get(bits.bit_length() - 1)
            if k is None:
                break
            bits ^= reduced[k]
        if bits:
            low2[bits.bit_length() - 1] = len(reduced)
            reduced.append(bits)
            basis.append(z)
    return basis, boundary_vecs


def zigzag_step_diagram_rank(zf: ZigzagFiltration, dim: int) -> int:
    """Rank of the limit-to-colimit map over the diagram of step complexes.

    Independent of the zigzag engine: homology spaces and inclusion maps
    are built per step with plain GF(2) reductions and fed to the generic
    diagram rank.  Equals the engine's full-bar count for valid filtrations.
    """
    complexes: List[frozenset] = []
    cur: set = set()
    for op, s in zf.steps:
        if op == INSERT:
            cur.add(s)
        else:
            cur.discard(s)
        complexes.append(frozenset(cur))
    if not complexes:
        return 0
    universe = sorted({s for c in complexes for s in c},
                      key=lambda s: (s.dim, s.vertices))
    slot = {}
    counts: dict = {}
    for s in universe:
        slot[s] = counts.get(s.dim, 0)
        counts[s.dim] = slot[s] + 1
    spaces = [_complex_homology(c, dim, slot) for c in complexes]
    dims = [len(basis) for basis, _ in spaces]
    arrows = []
    for t in range(len(complexes) - 1):
        if zf.steps[t + 1][0] == INSERT:
            src, dst = t, t + 1
        else:
            src, dst = t + 1, t
        sbasis, _ = spaces[src]
        tbasis, tbnd = spaces[dst]
        solve = list(tbnd) + list(tbasis)
        nb = len(tbnd)
        cols = []
        for z in sbasis:
            combo = gf2.in_span(solve, z)
            assert combo is not None
            cols.append(Gf2Vector(i - nb for i in combo if i >= nb))
        arrows.append((src, dst, Gf2Matrix(len(tbasis), cols)))
    return diagram_rank(dims, arrows)
