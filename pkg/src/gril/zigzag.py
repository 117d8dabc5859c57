"""Zigzag filtrations and their interval decompositions.

A zigzag filtration starts from the empty complex and inserts or deletes
one simplex per step.  Its barcode lists, per homology dimension, the
half-open step intervals [b, d): the class lives in the complexes after
steps b+1 through d.  Bars equal to [0, n) are the full bars: their count
is the rank of the limit-to-colimit map of the diagram of step complexes.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Tuple

import numpy as np

from . import _zz_kernel
from .complexes import Simplex

INSERT = "insert"
DELETE = "delete"


@dataclass(frozen=True)
class ZigzagFiltration:
    """A sequence of single-simplex insert/delete steps from the empty complex."""

    steps: Tuple[Tuple[str, Simplex], ...]

    def __init__(self, steps: Iterable[Tuple[str, Simplex]]):
        object.__setattr__(self, "steps", tuple((op, s) for op, s in steps))
        for op, _ in self.steps:
            if op not in (INSERT, DELETE):
                raise ValueError(f"unknown zigzag operation {op!r}")

    def __len__(self) -> int:
        return len(self.steps)


def first_invalid_step(zf: ZigzagFiltration) -> Optional[int]:
    """Index of the first step breaking the face/coface discipline, or None.

    Inserts need the simplex absent and its facets present; deletes need it
    present with no coface present.
    """
    present: set = set()
    cofaces: Dict[Simplex, int] = {}
    for idx, (op, s) in enumerate(zf.steps):
        if op == INSERT:
            if s in present:
                return idx
            if any(f not in present for f in s.facets()):
                return idx
            present.add(s)
            for f in s.facets():
                cofaces[f] = cofaces.get(f, 0) + 1
        else:
            if s not in present or cofaces.get(s, 0) > 0:
                return idx
            present.remove(s)
            for f in s.facets():
                cofaces[f] -= 1
    return None


class Barcode:
    """Interval decomposition of a zigzag filtration, per homology dimension."""

    def __init__(self, nsteps: int, bars_by_dim: Dict[int, List[Tuple[int, int]]]):
        self.nsteps = nsteps
        self._bars = {dim: tuple(sorted(bars)) for dim, bars in bars_by_dim.items()}

    def bars(self, dim: int) -> Tuple[Tuple[int, int], ...]:
        return self._bars.get(dim, ())

    def dims(self) -> Tuple[int, ...]:
        return tuple(sorted(self._bars))

    def __eq__(self, other) -> bool:
        return (isinstance(other, Barcode) and self.nsteps == other.nsteps
                and self._bars == other._bars)

    def __repr__(self) -> str:
        return f"Barcode(nsteps={self.nsteps}, bars={self._bars})"


def _encode(zf: ZigzagFiltration):
    """Slot the simplices appearing in zf into per-dimension universes."""
    universe: List[List[Simplex]] = [[], [], []]
    seen = set()
    maxdim = 0
    for _, s in zf.steps:
        if s.dim > 2:
            raise ValueError("complexes above dimension 2 are not supported")
        maxdim = max(maxdim, s.dim)
        if s not in seen:
            seen.add(s)
            universe[s.dim].append(s)
    for q in range(3):
        universe[q].sort()
    slot_of = {s: i for q in range(3) for i, s in enumerate(universe[q])}
    n = len(zf.steps)
    ops = np.zeros(n, dtype=np.int8)
    dims = np.zeros(n, dtype=np.int8)
    slots = np.zeros(n, dtype=np.int64)
    for i, (op, s) in enumerate(zf.steps):
        ops[i] = 1 if op == INSERT else 0
        dims[i] = s.dim
        slots[i] = slot_of[s]
    m0, m1, m2 = (len(universe[q]) for q in range(3))
    facets1 = np.zeros((max(1, m1), 2), dtype=np.int64)
    for i, s in enumerate(universe[1]):
        facets1[i, 0] = slot_of[Simplex((s.vertices[0],))]
        facets1[i, 1] = slot_of[Simplex((s.vertices[1],))]
    facets2 = np.zeros((max(1, m2), 3), dtype=np.int64)
    for i, s in enumerate(universe[2]):
        for k, f in enumerate(sorted(s.facets())):
            facets2[i, k] = slot_of[f]
    return ops, dims, slots, m0, m1, m2, facets1, facets2


def zigzag_barcode(zf: ZigzagFiltration, max_dim: int = 1) -> Barcode:
    """Interval decomposition for homology dimensions 0..max_dim.

    Raises ValueError naming the first offending step if the filtration
    violates the face/coface discipline.
    """
    bad = first_invalid_step(zf)
    if bad is not None:
        op, s = zf.steps[bad]
        raise ValueError(f"invalid zigzag step {bad}: cannot {op} {s}")
    ops, dims, slots, m0, m1, m2, facets1, facets2 = _encode(zf)
    bdim, bb, bd = _zz_kernel.zz_run(ops, dims, slots, m0, m1, m2, facets1, facets2)
    bars: Dict[int, List[Tuple[int, int]]] = {q: [] for q in range(max_dim + 1)}
    for k in range(len(bdim)):
        q = int(bdim[k])
        if q <= max_dim:
            bars[q].append((int(bb[k]), int(bd[k])))
    return Barcode(len(zf.steps), bars)


def count_full_bars(bc: Barcode, n: int, dim: int) -> int:
    """Number of dim-bars equal to the full interval [0, n)."""
    if bc.nsteps != n:
        raise ValueError(f"barcode has {bc.nsteps} steps, expected {n}")
    return sum(1 for (b, d) in bc.bars(dim) if b == 0 and d == n)


def count_bars_spanning(bc: Barcode, first: int, dim: int) -> int:
    """Number of dim-bars alive in every complex from index ``first`` to the end.

    ``first`` indexes the complex reached after that many steps; with
    first=0 the initial empty complex carries no classes, so the count is 0.
    """
    if first <= 0:
        return 0
    return sum(1 for (b, d) in bc.bars(dim) if b < first and d == bc.nsteps)
