"""The GRIL landscape: maximal worm widths sustaining a generalized rank.

lambda(p, k, ell) is the largest width delta (a multiple of the grid
resolution, capped at 1) for which the generalized rank of the bifiltration
over the ell-worm at p stays at least k, or 0 when no width qualifies.
Because rank is antitone in width, each value is found by binary search;
batched computation shares rank probes across k and homology dimensions
and tightens the search window as k grows.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Dict, Mapping, Optional, Sequence, Tuple

import numpy as np

from .complexes import BiFiltration, GridPoint, GridSpec, Simplex, validate
from .genrank import compute_rank
from .worms import DiscreteWorm


@dataclass(frozen=True)
class GrilQuery:
    center: GridPoint
    k: int
    ell: int
    dim: int

    def __post_init__(self):
        if self.k < 1 or self.ell < 1:
            raise ValueError("k and ell must be at least 1")


def _gril_steps(f: BiFiltration, center: GridPoint, k: int, ell: int,
                dim: int, hi: Optional[int] = None) -> int:
    """Binary search for the maximal qualifying width, in grid steps.

    Probes the midpoint (rounded down to a grid step), growing past it on
    success and shrinking below it on failure, until the window empties.
    """
    dmin = 1
    dmax = f.grid.M if hi is None else hi
    lam = 0
    while dmin <= dmax:
        d = (dmin + dmax) // 2
        if compute_rank(f, DiscreteWorm(center, d, ell, f.grid), dim) >= k:
            lam = d
            dmin = d + 1
        else:
            dmax = d - 1
    return lam


def compute_gril(f: BiFiltration, q: GrilQuery) -> float:
    """lambda-hat at a single query; 0.0 when even the smallest worm fails."""
    return _gril_steps(f, q.center, q.k, q.ell, q.dim) * f.grid.rho


@dataclass(frozen=True)
class GrilVector:
    """GRIL values over a set of centers, ranks 1..kmax, worm sizes and dims.

    values has shape (len(dims), len(centers), kmax, len(ells)); flattening
    in C order gives the canonical export order: dim, then center, then k,
    then ell.
    """

    grid: GridSpec
    centers: Tuple[GridPoint, ...]
    kmax: int
    ells: Tuple[int, ...]
    dims: Tuple[int, ...]
    values: np.ndarray

    def signature(self) -> tuple:
        return (self.grid.M, self.centers, self.kmax, self.ells, self.dims)

    def value(self, p: GridPoint, k: int, ell: int, dim: int) -> float:
        return float(self.values[self.dims.index(dim),
                                 self.centers.index(p),
                                 k - 1,
                                 self.ells.index(ell)])

    def flatten(self) -> np.ndarray:
        return self.values.ravel()


def _center_block(f: BiFiltration, centers: Sequence[GridPoint], kmax: int,
                  ells: Sequence[int], dims: Sequence[int]) -> np.ndarray:
    out = np.zeros((len(dims), len(centers), kmax, len(ells)))
    for ci, center in enumerate(centers):
        for ei, ell in enumerate(ells):
            for di, dim in enumerate(dims):
                hi = f.grid.M
                for k in range(1, kmax + 1):
                    # rank is antitone in k, so the previous value caps the search
                    steps = _gril_steps(f, center, k, ell, dim, hi=hi)
                    out[di, ci, k - 1, ei] = steps * f.grid.rho
                    hi = steps
                    if hi == 0:
                        break
    return out


def default_workers() -> int:
    try:
        return max(1, int(os.environ.get("GRIL_WORKERS", "1")))
    except ValueError:
        return 1


def compute_gril_vector(f: BiFiltration, centers: Sequence[GridPoint],
                        kmax: int, ells: Sequence[int] = (2,),
                        dims: Sequence[int] = (0, 1),
                        workers: Optional[int] = None) -> GrilVector:
    """GRIL values for every (center, k, ell, dim), equal to entrywise
    compute_gril; rank probes are memoized per worm so homology dimensions
    and successive k share zigzag runs.

    With workers > 1 the centers are partitioned across processes; the
    result is assembled in center order and independent of the worker count.
    """
    centers = tuple(centers)
    ells = tuple(ells)
    dims = tuple(dims)
    if workers is None:
        workers = default_workers()
    if workers <= 1 or len(centers) <= 1:
        values = _center_block(f, centers, kmax, ells, dims)
    else:
        nchunks = min(len(centers), workers * 4)
        chunks = [list(centers[i::nchunks]) for i in range(nchunks)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            blocks = list(pool.map(_center_block, [f] * len(chunks), chunks,
                                   [kmax] * len(chunks), [ells] * len(chunks),
                                   [dims] * len(chunks)))
        values = np.zeros((len(dims), len(centers), kmax, len(ells)))
        for i, block in enumerate(blocks):
            values[:, i::nchunks, :, :] = block
    return GrilVector(f.grid, centers, kmax, ells, dims, values)


def reconstruct_rank(v: GrilVector, p: GridPoint, delta: float, ell: int,
                     dim: int) -> int:
    """Largest k whose landscape value at (p, ell, dim) is >= delta; 0 if none.

    Inverts the landscape back to the generalized rank of the worm of width
    delta, provided kmax exceeds the true rank.
    """
    di = v.dims.index(dim)
    ci = v.centers.index(p)
    ei = v.ells.index(ell)
    best = 0
    for k in range(1, v.kmax + 1):
        if v.values[di, ci, k - 1, ei] >= delta - 1e-12:
            best = k
    return best


def gril_distance(a: GrilVector, b: GrilVector) -> float:
    """Sup-norm distance between two landscapes on identical index sets."""
    if a.signature() != b.signature():
        raise ValueError("landscape index sets differ")
    if a.values.size == 0:
        return 0.0
    return float(np.max(np.abs(a.values - b.values)))


# ---------------------------------------------------------------------------
# derivative assignment (support simplices of the maximal worm)

AXIS = "axis"          # top/left edge support: slope 1/ell
DIAGONAL = "diagonal"  # off-diagonal edge support: slope 1


@dataclass(frozen=True)
class AssignmentS:
    """Perturbation direction supported on the simplices pinning the maximal worm."""

    values: Mapping[Simplex, Tuple[int, int]]
    case_group: Optional[str]
    mixed: bool

    @property
    def support(self) -> frozenset:
        return frozenset(self.values)

    def norm_inf(self) -> int:
        if not self.values:
            return 0
        return max(max(abs(a), abs(b)) for a, b in self.values.values())


def _check_generic(f: BiFiltration) -> None:
    seen_i: Dict[int, Simplex] = {}
    seen_j: Dict[int, Simplex] = {}
    for s in f.complex.sorted_simplices():
        gp = f.value[s]
        if gp.i in seen_i:
            raise ValueError(f"not generic: {seen_i[gp.i]} and {s} share x-value")
        if gp.j in seen_j:
            raise ValueError(f"not generic: {seen_j[gp.j]} and {s} share y-value")
        seen_i[gp.i] = s
        seen_j[gp.j] = s


def assignment(f: BiFiltration, q: GrilQuery) -> AssignmentS:
    """Support simplices of the maximal worm at q and their movement signs.

    Requires a generic bifiltration (all x-values distinct, all y-values
    distinct).  On the grid the maximal worm's binding constraints show up
    one expansion step past its edges, so detection uses unit bands around
    the edge coordinates: a simplex whose y-value is crossed by the rising
    top edge gets (0, +ell); one whose x-value is crossed by the left edge
    moving left gets (-ell, 0); an incomparable pair whose join sits on the
    lower or upper off-diagonal edge gets unit moves, the smaller-x simplex
    vertically and the other horizontally.  A configuration supported on
    both an axis edge and an off-diagonal edge is degenerate: the support
    comes back empty with ``mixed`` set.
    """
    _check_generic(f)
    D = _gril_steps(f, q.center, q.k, q.ell, q.dim)
    if D == 0:
        raise ValueError("assignment needs a positive landscape value")
    px, py, ell = q.center.i, q.center.j, q.ell
    M = f.grid.M
    if D == M or px - ell * (D + 1) < 0 or py - ell * (D + 1) < 0:
        # the next expansion is blocked by the domain, not by f: nothing
        # about f constrains the width, so the derivative direction is empty
        return AssignmentS({}, None, False)
    axis: Dict[Simplex, Tuple[int, int]] = {}
    diag: Dict[Simplex, Tuple[int, int]] = {}
    conflict = False
    simps = f.complex.sorted_simplices()
    for s in simps:
        gp = f.value[s]
        # top edge sweeps y in (py + ell*D, py + ell*(D+1)]
        if (py + ell * D < gp.j <= py + ell * (D + 1)
                and gp.i <= px - (ell - 2) * (D + 1)):
            axis[s] = (0, ell)
        # left edge sweeps x in (px - ell*(D+1), px - ell*D]
        if (px - ell * (D + 1) < gp.i <= px - ell * D
                and gp.j <= py + ell * D):
            if s in axis:
                conflict = True
            axis[s] = (-ell, 0)
    lo_sum = px + py - 2 * D
    hi_sum = px + py + 2 * D

    def _on_lower(ji: int, jj: int) -> bool:
        return (lo_sum - 1 <= ji + jj <= lo_sum + 1
                and px - ell * (D + 1) <= ji <= px + (ell - 2) * (D + 1) + 1)

    def _on_upper(ji: int, jj: int) -> bool:
        return (hi_sum < ji + jj <= hi_sum + 2
                and px - (ell - 2) * (D + 1) - 1 <= ji <= px + ell * (D + 1))

    for a in simps:
        ga = f.value[a]
        # a single value on an off-diagonal edge is the degenerate pair
        # (sigma = tau): it carries both unit moves
        if _on_lower(ga.i, ga.j):
            if diag.get(a, (-1, -1)) != (-1, -1):
                conflict = True
            diag[a] = (-1, -1)
        if _on_upper(ga.i, ga.j):
            if diag.get(a, (1, 1)) != (1, 1):
                conflict = True
            diag[a] = (1, 1)
        for b in simps:
            gb = f.value[b]
            if ga.i < gb.i and ga.j > gb.j:
                ji, jj = gb.i, ga.j  # join of the incomparable pair
                if _on_lower(ji, jj):
                    for s, val in ((a, (0, -1)), (b, (-1, 0))):
                        if diag.get(s, val) != val:
                            conflict = True
                        diag[s] = val
                if _on_upper(ji, jj):
                    for s, val in ((a, (0, 1)), (b, (1, 0))):
                        if diag.get(s, val) != val:
                            conflict = True
                        diag[s] = val
    if conflict or (axis and diag):
        return AssignmentS({}, None, True)
    if axis:
        return AssignmentS(dict(axis), AXIS, False)
    if diag:
        return AssignmentS(dict(diag), DIAGONAL, False)
    return AssignmentS({}, None, False)


def perturb(f: BiFiltration, s: AssignmentS, alpha: float) -> BiFiltration:
    """f moved by alpha along the unit-sup-norm direction s / |s|_inf.

    Values stay on the grid (alpha must move every support simplex by whole
    grid steps); the result is revalidated and rejected if monotonicity or
    the grid bounds break.
    """
    norm = s.norm_inf()
    if norm == 0:
        return f
    rho = f.grid.rho
    value = dict(f.value)
    for simp, (sx, sy) in s.values.items():
        di = alpha * sx / (rho * norm)
        dj = alpha * sy / (rho * norm)
        if abs(di - round(di)) > 1e-9 or abs(dj - round(dj)) > 1e-9:
            raise ValueError("alpha must move support values by whole grid steps")
        gp = value[simp]
        ni, nj = gp.i + int(round(di)), gp.j + int(round(dj))
        if not (0 <= ni <= f.grid.M and 0 <= nj <= f.grid.M):
            raise ValueError(f"perturbation pushes {simp} off the grid")
        value[simp] = GridPoint(ni, nj)
    out = BiFiltration(f.complex, f.grid, value)
    bad = validate(out)
    if bad:
        raise ValueError(f"perturbation breaks monotonicity at {bad[0]}")
    return out


def directional_probe(f: BiFiltration, s: AssignmentS, alpha: float,
                      q: GrilQuery) -> Tuple[float, float]:
    """(predicted slope, observed landscape change) for a move of size alpha
    along s / |s|_inf.

    The predicted slope is 1 for off-diagonal (unit-move) support, 1/ell
    for top/left-edge support, and 0 for empty support; the observed change
    should sit within a grid step or two of alpha * slope.
    """
    if s.case_group == DIAGONAL:
        predicted = 1.0
    elif s.case_group == AXIS:
        predicted = 1.0 / q.ell
    else:
        predicted = 0.0
    norm = s.norm_inf()
    if norm:
        step = f.grid.rho * norm
        if abs(alpha / step - round(alpha / step)) > 1e-9:
            raise ValueError("alpha must be a multiple of rho * |s|_inf")
    fp = perturb(f, s, alpha)
    observed = compute_gril(fp, q) - compute_gril(f, q)
    return predicted, observed
