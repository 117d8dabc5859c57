"""Simplicial complexes, grid quantization and bifiltration functions.

A bifiltration assigns each simplex a grid point in [0,1]^2 (stored as
integer grid coordinates) such that faces never exceed cofaces in the
product order.  Real-valued pre-bifiltrations (e.g. from lower-star
constructions) are normalized per input object and snapped up to the grid.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, NamedTuple, Optional, Tuple

import numpy as np


class Simplex(NamedTuple):
    """An abstract simplex: a nonempty, strictly increasing vertex tuple."""

    vertices: Tuple[int, ...]

    @property
    def dim(self) -> int:
        return len(self.vertices) - 1

    def facets(self) -> List["Simplex"]:
        """Codimension-1 faces (empty for vertices)."""
        if len(self.vertices) == 1:
            return []
        verts = self.vertices
        return [Simplex(verts[:i] + verts[i + 1:]) for i in range(len(verts))]

    def __repr__(self) -> str:
        return f"Simplex{self.vertices}"


def simplex(*vertices: int) -> Simplex:
    """Build a simplex from vertex ids, sorting and checking for duplicates."""
    verts = tuple(sorted(vertices))
    if not verts:
        raise ValueError("a simplex needs at least one vertex")
    if len(set(verts)) != len(verts):
        raise ValueError(f"duplicate vertices in simplex {vertices}")
    return Simplex(verts)


class SimplicialComplex:
    """A finite abstract simplicial complex, closed under taking faces."""

    def __init__(self, simplices: Iterable[Simplex], _validated: bool = False):
        self._simplices = set(simplices)
        if not _validated:
            for s in self._simplices:
                for f in s.facets():
                    if f not in self._simplices:
                        raise ValueError(f"complex not closed under faces: {s} missing face {f}")

    @property
    def simplices(self) -> frozenset:
        return frozenset(self._simplices)

    def __contains__(self, s: Simplex) -> bool:
        return s in self._simplices

    def __len__(self) -> int:
        return len(self._simplices)

    def __eq__(self, other) -> bool:
        return isinstance(other, SimplicialComplex) and self._simplices == other._simplices

    def by_dim(self, dim: int) -> List[Simplex]:
        """Simplices of one dimension, in lexicographic vertex order."""
        return sorted((s for s in self._simplices if s.dim == dim))

    def max_dim(self) -> int:
        return max((s.dim for s in self._simplices), default=-1)

    def sorted_simplices(self) -> List[Simplex]:
        """All simplices sorted by (dimension, vertices); faces precede cofaces."""
        return sorted(self._simplices, key=lambda s: (s.dim, s.vertices))


@dataclass(frozen=True)
class GridSpec:
    """Uniform grid on [0,1]^2 with M subdivisions per axis; resolution rho = 1/M."""

    M: int

    def __post_init__(self):
        if self.M < 1:
            raise ValueError("grid subdivision count must be >= 1")

    @property
    def rho(self) -> float:
        return 1.0 / self.M


class GridPoint(NamedTuple):
    """Integer grid coordinates (i, j) with 0 <= i, j <= M."""

    i: int
    j: int

    def value(self, grid: GridSpec) -> Tuple[float, float]:
        return (self.i * grid.rho, self.j * grid.rho)

    def __le__(self, other) -> bool:  # product order, not lexicographic
        return self.i <= other.i and self.j <= other.j

    def __ge__(self, other) -> bool:
        return self.i >= other.i and self.j >= other.j

    def __lt__(self, other) -> bool:
        return self <= other and self != other

    def __gt__(self, other) -> bool:
        return self >= other and self != other


@dataclass(frozen=True)
class PreBiFiltration:
    """Real-valued monotone function on a complex, before grid quantization."""

    complex: SimplicialComplex
    values: Dict[Simplex, Tuple[float, float]]

    def __post_init__(self):
        for s in self.complex.simplices:
            if s not in self.values:
                raise ValueError(f"missing value for simplex {s}")


class BiFiltration:
    """A simplicial complex with a grid-quantized R^2-valued filtration function.

    Monotonicity (faces <= cofaces in the product order) is the defining
    invariant but is checked by :func:`validate`, not at construction, so
    that ill-formed inputs can be diagnosed.
    """

    def __init__(self, complex: SimplicialComplex, grid: GridSpec,
                 value: Dict[Simplex, GridPoint]):
        self.complex = complex
        self.grid = grid
        self.value = dict(value)
        for s in complex.simplices:
            gp = self.value.get(s)
            if gp is None:
                raise ValueError(f"missing value for simplex {s}")
            if not (0 <= gp.i <= grid.M and 0 <= gp.j <= grid.M):
                raise ValueError(f"value {gp} of {s} outside grid [0, {grid.M}]^2")
        self._cache: dict = {}

    def __len__(self) -> int:
        return len(self.complex)

    def simplices(self) -> List[Simplex]:
        return self.complex.sorted_simplices()


def lower_star(vertex_values: Dict[int, Tuple[float, float]],
               complex: SimplicialComplex) -> PreBiFiltration:
    """Assign every simplex the componentwise max over its vertices' values."""
    values: Dict[Simplex, Tuple[float, float]] = {}
    for s in complex.simplices:
        try:
            xs = [vertex_values[v] for v in s.vertices]
        except KeyError as e:
            raise ValueError(f"missing vertex value for vertex {e.args[0]}") from None
        values[s] = (max(x for x, _ in xs), max(y for _, y in xs))
    return PreBiFiltration(complex, values)


def _snap_up(v: float, M: int) -> int:
    # Values within 1e-9 of a grid point snap to it instead of the next one up.
    return min(M, max(0, math.ceil(v * M - 1e-9)))


def normalize_and_snap(pre: PreBiFiltration, grid: GridSpec) -> BiFiltration:
    """Min-max rescale each coordinate to [0,1], then round up to the grid.

    A coordinate that is constant over the whole object maps to 0.  The
    rescaling is order-preserving per coordinate, so monotone inputs stay
    monotone.
    """
    if not pre.values:
        raise ValueError("cannot normalize an empty pre-bifiltration")
    xs = [v[0] for v in pre.values.values()]
    ys = [v[1] for v in pre.values.values()]
    spans = []
    for vals in (xs, ys):
        lo, hi = min(vals), max(vals)
        spans.append((lo, hi - lo))
    value: Dict[Simplex, GridPoint] = {}
    for s, (x, y) in pre.values.items():
        coords = []
        for raw, (lo, span) in zip((x, y), spans):
            t = 0.0 if span <= 0 else (raw - lo) / span
            coords.append(_snap_up(t, grid.M))
        value[s] = GridPoint(coords[0], coords[1])
    return BiFiltration(pre.complex, grid, value)


def snap(pre: PreBiFiltration, grid: GridSpec) -> BiFiltration:
    """Round values (already in [0,1]^2) up to the grid without rescaling."""
    value = {s: GridPoint(_snap_up(x, grid.M), _snap_up(y, grid.M))
             for s, (x, y) in pre.values.items()}
    return BiFiltration(pre.complex, grid, value)


def validate(f: BiFiltration) -> List[Tuple[Simplex, Simplex]]:
    """Return all (face, coface) pairs violating monotonicity; empty iff valid."""
    violations = []
    for s in f.complex.sorted_simplices():
        vs = f.value[s]
        for face in s.facets():
            vf = f.value[face]
            if not (vf.i <= vs.i and vf.j <= vs.j):
                violations.append((face, s))
    return violations


def subcomplex_at(f: BiFiltration, u: GridPoint) -> SimplicialComplex:
    """The sublevel complex {sigma : value(sigma) <= u} in the product order."""
    kept = [s for s in f.complex.simplices
            if f.value[s].i <= u.i and f.value[s].j <= u.j]
    return SimplicialComplex(kept, _validated=True)


def filtration_arrays(f: BiFiltration):
    """Per-dimension arrays used by the fast rank path; cached on ``f``.

    For each dimension q: the simplex list (sorted), its i/j grid values as
    int arrays, and facet index tables mapping a q-simplex to the positions
    of its codim-1 faces in dimension q-1.
    """
    cached = f._cache.get("arrays")
    if cached is not None:
        return cached
    dims = range(f.complex.max_dim() + 1)
    per_dim = []
    index_of: Dict[Simplex, int] = {}
    for q in dims:
        simps = f.complex.by_dim(q)
        for pos, s in enumerate(simps):
            index_of[s] = pos
        vi = np.array([f.value[s].i for s in simps], dtype=np.int64)
        vj = np.array([f.value[s].j for s in simps], dtype=np.int64)
        if q == 0:
            facets = np.zeros((len(simps), 0), dtype=np.int64)
        else:
            facets = np.array(
                [[index_of[face] for face in s.facets()] for s in simps],
                dtype=np.int64).reshape(len(simps), q + 1)
        per_dim.append((simps, vi, vj, facets))
    f._cache["arrays"] = per_dim
    return per_dim
