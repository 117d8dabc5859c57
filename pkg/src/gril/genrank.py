"""Generalized rank of a bifiltration over a worm, two independent ways.

The production route restricts the bifiltration to the worm's boundary cap,
runs the zigzag engine, and counts the bars spanning every complex from the
completed starting complex to the end of the path.  The oracle route builds
the full poset diagram of homology spaces over the worm's grid points and
computes the rank of the canonical limit-to-colimit map by plain GF(2)
linear algebra.  The two must agree exactly; the randomized equivalence
test over both routes is the central correctness gate of this package.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, List, Sequence, Tuple

import numpy as np

from . import gf2
from ._zz_kernel import zz_run
from .complexes import (BiFiltration, GridPoint, Simplex, SimplicialComplex,
                        filtration_arrays, subcomplex_at)
from .gf2 import Gf2Matrix, Gf2Vector
from .worms import UP, BoundaryPath, DiscreteWorm, boundary_path
from .zigzag import DELETE, INSERT, ZigzagFiltration


# ---------------------------------------------------------------------------
# homology spaces and induced maps (oracle-side, exact and unhurried)

def _sub_slots(f: BiFiltration, u: GridPoint) -> List[np.ndarray]:
    """Per dimension, the sorted global slots of simplices present at u."""
    key = ("sub", u.i, u.j)
    out = f._cache.get(key)
    if out is None:
        out = []
        for simps, vi, vj, _ in filtration_arrays(f):
            out.append(np.nonzero((vi <= u.i) & (vj <= u.j))[0])
        f._cache[key] = out
    return out


def _simplex_chain(slots: Iterable[int]) -> Gf2Vector:
    return Gf2Vector(int(s) for s in slots)


def _boundary_image(f: BiFiltration, u: GridPoint, dim: int) -> List[Gf2Vector]:
    """Echelon basis of im d_{dim+1} at u, as chains over global dim-slots."""
    key = ("bnd", u.i, u.j, dim)
    out = f._cache.get(key)
    if out is not None:
        return out
    per_dim = filtration_arrays(f)
    cols: List[Gf2Vector] = []
    if dim + 1 < len(per_dim):
        facets = per_dim[dim + 1][3]
        for s in _sub_slots(f, u)[dim + 1]:
            cols.append(_simplex_chain(facets[s]))
    out = []
    low_seen: Dict[int, int] = {}
    reduced: List[int] = []
    for col in cols:
        bits = col.bits
        while bits:
            k = low_seen.get(bits.bit_length() - 1)
            if k is None:
                break
            bits ^= reduced[k]
        if bits:
            low_seen[bits.bit_length() - 1] = len(reduced)
            reduced.append(bits)
    out = [Gf2Vector.from_bits(b) for b in reduced]
    f._cache[key] = out
    return out


def homology_space(f: BiFiltration, u: GridPoint, dim: int) -> List[Gf2Vector]:
    """A basis of H_dim of the sublevel complex at u, as cycle chains.

    Chains are indexed by the global slot order of dim-simplices of the
    full complex, so inclusions of sublevel complexes act as the identity
    on chains.  The basis is deterministic and cached per (u, dim).
    """
    key = ("hom", u.i, u.j, dim)
    out = f._cache.get(key)
    if out is not None:
        return out
    per_dim = filtration_arrays(f)
    sub = _sub_slots(f, u)
    if dim >= len(per_dim) or len(sub[dim]) == 0:
        f._cache[key] = []
        return []
    if dim == 0:
        cycles = [Gf2Vector([int(s)]) for s in sub[0]]
    else:
        facets = per_dim[dim][3]
        cols = [_simplex_chain(facets[s]) for s in sub[dim]]
        mat = Gf2Matrix(len(per_dim[dim - 1][0]), cols)
        local_kernel = gf2.kernel_basis(mat)
        local_slots = sub[dim]
        cycles = []
        for vec in local_kernel:
            cycles.append(Gf2Vector(int(local_slots[i]) for i in vec.support))
    # extend the boundary image to the cycle space; the extension is H
    basis: List[Gf2Vector] = []
    low_seen: Dict[int, int] = {}
    reduced: List[int] = []
    for b in _boundary_image(f, u, dim):
        low_seen[b.bits.bit_length() - 1] = len(reduced)
        reduced.append(b.bits)
    for z in cycles:
        bits = z.bits
        while bits:
            k = low_seen.get(bits.bit_length() - 1)
            if k is None:
                break
            bits ^= reduced[k]
        if bits:
            low_seen[bits.bit_length() - 1] = len(reduced)
            reduced.append(bits)
            basis.append(z)
    f._cache[key] = basis
    return basis


def induced_map(f: BiFiltration, u: GridPoint, v: GridPoint, dim: int) -> Gf2Matrix:
    """Matrix of H_dim(X_u) -> H_dim(X_v) in the cached bases."""
    if not (u.i <= v.i and u.j <= v.j):
        raise ValueError(f"{u} is not below {v} in the product order")
    key = ("map", u.i, u.j, v.i, v.j, dim)
    out = f._cache.get(key)
    if out is not None:
        return out
    basis_u = homology_space(f, u, dim)
    basis_v = homology_space(f, v, dim)
    bnd_v = _boundary_image(f, v, dim)
    solve_basis = list(bnd_v) + list(basis_v)
    nb = len(bnd_v)
    cols = []
    for z in basis_u:
        combo = gf2.in_span(solve_basis, z)
        if combo is None:
            raise AssertionError("u-cycle not expressible at v: bases corrupt")
        cols.append(Gf2Vector(i - nb for i in combo if i >= nb))
    out = Gf2Matrix(len(basis_v), cols)
    f._cache[key] = out
    return out


def rectangle_rank(f: BiFiltration, u: GridPoint, v: GridPoint, dim: int) -> int:
    """rank of the inclusion-induced map over the rectangle [u, v]."""
    return gf2.rank(induced_map(f, u, v, dim))


# ---------------------------------------------------------------------------
# interval regions and the limit-to-colimit oracle

@dataclass(frozen=True)
class IntervalRegion:
    """A connected, order-convex set of grid points."""

    points: FrozenSet[GridPoint]

    def __init__(self, points: Iterable[GridPoint]):
        object.__setattr__(self, "points", frozenset(points))

    def check(self) -> None:
        pts = self.points
        if not pts:
            raise ValueError("interval region must be nonempty")
        # connectivity under unit grid steps
        start = next(iter(pts))
        seen = {start}
        frontier = [start]
        while frontier:
            p = frontier.pop()
            for q in (GridPoint(p.i + 1, p.j), GridPoint(p.i - 1, p.j),
                      GridPoint(p.i, p.j + 1), GridPoint(p.i, p.j - 1)):
                if q in pts and q not in seen:
                    seen.add(q)
                    frontier.append(q)
        if seen != pts:
            raise ValueError("interval region is not connected")
        # order convexity: with contiguous rows and columns, full boxes
        # between comparable members reduce to the two box corners
        cols: Dict[int, List[int]] = {}
        rows: Dict[int, List[int]] = {}
        for p in pts:
            cols.setdefault(p.i, []).append(p.j)
            rows.setdefault(p.j, []).append(p.i)
        for vals in list(cols.values()) + list(rows.values()):
            vals.sort()
            if vals[-1] - vals[0] + 1 != len(vals):
                raise ValueError("interval condition fails: gap in a row or column")
        for u in pts:
            for w in pts:
                if u.i <= w.i and u.j <= w.j:
                    if GridPoint(u.i, w.j) not in pts or GridPoint(w.i, u.j) not in pts:
                        raise ValueError(
                            f"interval condition fails between {u} and {w}")


@dataclass(frozen=True)
class PosetDiagram:
    """Homology spaces over a region's grid points with covering-pair maps."""

    points: Tuple[GridPoint, ...]
    dims: Tuple[int, ...]
    covers: Tuple[Tuple[int, int], ...]
    maps: Tuple[Gf2Matrix, ...]


def build_poset_diagram(f: BiFiltration, region: Sequence[GridPoint],
                        dim: int) -> PosetDiagram:
    pts = tuple(sorted(set(region)))
    index = {p: k for k, p in enumerate(pts)}
    dims = tuple(len(homology_space(f, p, dim)) for p in pts)
    covers: List[Tuple[int, int]] = []
    maps: List[Gf2Matrix] = []
    for p in pts:
        for q in (GridPoint(p.i + 1, p.j), GridPoint(p.i, p.j + 1)):
            if q in index:
                covers.append((index[p], index[q]))
                maps.append(induced_map(f, p, q, dim))
    return PosetDiagram(pts, dims, tuple(covers), tuple(maps))


def diagram_rank(dims: Sequence[int], arrows: Sequence[Tuple[int, int, Gf2Matrix]]) -> int:
    """Rank of the canonical limit-to-colimit map of a connected diagram.

    The limit is the kernel of (m_u)_u -> (phi_a(m_src) - m_dst)_a; the
    colimit is the cokernel of (m_a)_a -> iota_dst(phi_a(m_a)) - iota_src(m_a).
    The canonical map evaluates a compatible family at any node, node 0 here.
    """
    nnodes = len(dims)
    offsets = [0]
    for d in dims:
        offsets.append(offsets[-1] + d)
    total = offsets[-1]
    if total == 0:
        return 0
    arrow_offsets = [0]
    for _, dst, _ in arrows:
        arrow_offsets.append(arrow_offsets[-1] + dims[dst])
    lim_rows = arrow_offsets[-1]
    lim_cols: List[Gf2Vector] = []
    for u in range(nnodes):
        for k in range(dims[u]):
            bits = 0
            for a, (src, dst, mat) in enumerate(arrows):
                if src == u:
                    bits ^= mat.columns[k].bits << arrow_offsets[a]
                if dst == u:
                    bits ^= 1 << (arrow_offsets[a] + k)
            lim_cols.append(Gf2Vector.from_bits(bits))
    lim_basis = gf2.kernel_basis(Gf2Matrix(lim_rows, lim_cols))
    if not lim_basis:
        return 0
    relations: List[Gf2Vector] = []
    for src, dst, mat in arrows:
        for k in range(dims[src]):
            bits = (mat.columns[k].bits << offsets[dst]) ^ (1 << (offsets[src] + k))
            relations.append(Gf2Vector.from_bits(bits))
    mask0 = (1 << dims[0]) - 1
    lifts = [Gf2Vector.from_bits(x.bits & mask0) for x in lim_basis]
    base = gf2.rank(Gf2Matrix(total, relations))
    together = gf2.rank(Gf2Matrix(total, relations + lifts))
    return together - base


def rank_oracle(f: BiFiltration, region, dim: int) -> int:
    """Brute-force generalized rank over an interval region of grid points.

    Exponential-ish in region size; intended for small instances and as the
    correctness gate for :func:`compute_rank`.
    """
    if not isinstance(region, IntervalRegion):
        region = IntervalRegion(region)
    region.check()
    dg = build_poset_diagram(f, tuple(region.points), dim)
    arrows = [(s, d, m) for (s, d), m in zip(dg.covers, dg.maps)]
    return diagram_rank(dg.dims, arrows)


# ---------------------------------------------------------------------------
# the boundary-cap zigzag route

def restrict_to_path(f: BiFiltration, path: BoundaryPath) -> ZigzagFiltration:
    """Zigzag filtration tracing sublevel complexes along a boundary path.

    The steps first build the complex at the path's start (insertions in
    dimension order), then per path step emit the sublevel difference:
    insertions by increasing dimension on Up steps, deletions by decreasing
    dimension on Down steps.
    """
    steps: List[Tuple[str, Simplex]] = []
    cur = subcomplex_at(f, path.points[0])
    for s in cur.sorted_simplices():
        steps.append((INSERT, s))
    for i, nxt_pt in enumerate(path.points[1:]):
        nxt = subcomplex_at(f, nxt_pt)
        if path.directions[i] == UP:
            added = sorted(nxt.simplices - cur.simplices,
                           key=lambda s: (s.dim, s.vertices))
            steps.extend((INSERT, s) for s in added)
        else:
            gone = sorted(cur.simplices - nxt.simplices,
                          key=lambda s: (-s.dim, s.vertices))
            steps.extend((DELETE, s) for s in gone)
        cur = nxt
    return ZigzagFiltration(steps)


def _path_step_arrays(f: BiFiltration, path: BoundaryPath):
    """Kernel-ready step encoding of restrict_to_path, plus the prefix length."""
    per_dim = filtration_arrays(f)
    pts_i = np.array([p.i for p in path.points], dtype=np.int64)
    pts_j = np.array([p.j for p in path.points], dtype=np.int64)
    members = []
    for simps, vi, vj, _ in per_dim:
        members.append((vi[:, None] <= pts_i[None, :]) & (vj[:, None] <= pts_j[None, :]))
    ops: List[int] = []
    dims: List[int] = []
    slots: List[int] = []
    ndims = len(per_dim)
    for q in range(ndims):
        for s in np.nonzero(members[q][:, 0])[0]:
            ops.append(1)
            dims.append(q)
            slots.append(int(s))
    prefix = len(ops)
    for i in range(len(path.points) - 1):
        if path.directions[i] == UP:
            for q in range(ndims):
                col = members[q]
                for s in np.nonzero(col[:, i + 1] & ~col[:, i])[0]:
                    ops.append(1)
                    dims.append(q)
                    slots.append(int(s))
        else:
            for q in range(ndims - 1, -1, -1):
                col = members[q]
                for s in np.nonzero(col[:, i] & ~col[:, i + 1])[0]:
                    ops.append(0)
                    dims.append(q)
                    slots.append(int(s))
    return (np.array(ops, dtype=np.int8), np.array(dims, dtype=np.int8),
            np.array(slots, dtype=np.int64), prefix)


def _rank_counts(f: BiFiltration, w: DiscreteWorm) -> Tuple[int, int, int]:
    path = boundary_path(w)
    ops, dims, slots, prefix = _path_step_arrays(f, path)
    per_dim = filtration_arrays(f)
    m = [len(per_dim[q][0]) if q < len(per_dim) else 0 for q in range(3)]
    facets1 = per_dim[1][3] if len(per_dim) > 1 and m[1] else np.zeros((1, 2), dtype=np.int64)
    facets2 = per_dim[2][3] if len(per_dim) > 2 and m[2] else np.zeros((1, 3), dtype=np.int64)
    bdim, bb, bd = zz_run(ops, dims, slots, m[0], m[1], m[2], facets1, facets2)
    n = len(ops)
    counts = [0, 0, 0]
    if prefix > 0:
        for k in range(len(bdim)):
            if bb[k] < prefix and bd[k] == n:
                counts[int(bdim[k])] += 1
    return counts[0], counts[1], counts[2]


def compute_rank(f: BiFiltration, w: DiscreteWorm, dim: int) -> int:
    """Generalized rank of f over the worm, via the boundary-cap zigzag.

    Equals the number of zigzag bars spanning every complex from the fully
    built starting complex to the end of the path; cached per (f, worm) for
    all homology dimensions at once.

    A worm reaching below the domain's lower-left corner contains points
    whose sublevel complexes are empty, so no class survives across it and
    the rank is 0.  (Beyond the upper-right corner sublevel complexes
    saturate, so clipping there is harmless.)  This keeps the landscape
    1-Lipschitz in the filtration even at boundary centers.
    """
    if w.grid != f.grid:
        raise ValueError("worm and bifiltration live on different grids")
    if dim > 2:
        return 0
    reach = w.ell * w.width_steps
    if w.center.i - reach < 0 or w.center.j - reach < 0:
        return 0
    cache = f._cache.setdefault("ranks", {})
    key = (w.center.i, w.center.j, w.width_steps, w.ell)
    counts = cache.get(key)
    if counts is None:
        counts = _rank_counts(f, w)
        cache[key] = counts
    return counts[dim]
