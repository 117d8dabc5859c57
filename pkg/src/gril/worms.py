"""Staircase worm regions on the grid and their boundary zigzag paths.

A discrete ell-worm of width d grid steps around a center p is the union of
(2(ell-1)d + 1) axis-aligned squares of half-width d whose centers walk the
off-diagonal through p in unit grid steps, clipped to the grid box.  The
region is an order-convex staircase; ranks over it are computed along the
boundary cap: the full boundary minus the rightmost vertical edge and the
bottommost horizontal edge.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Set, Tuple

from .complexes import GridPoint, GridSpec

UP = "up"
DOWN = "down"


@dataclass(frozen=True)
class DiscreteWorm:
    """Worm probe region: center, width in grid steps, ell, and its grid."""

    center: GridPoint
    width_steps: int
    ell: int
    grid: GridSpec

    def __post_init__(self):
        if self.width_steps < 1:
            raise ValueError("worm width must be at least one grid step")
        if self.ell < 1:
            raise ValueError("ell must be at least 1")
        M = self.grid.M
        if not (0 <= self.center.i <= M and 0 <= self.center.j <= M):
            raise ValueError("worm center must lie on the grid")

    @property
    def delta(self) -> float:
        return self.width_steps * self.grid.rho


@dataclass(frozen=True)
class BoundaryPath:
    """Grid points along a worm's boundary cap; step i is Up when the path
    moves to a larger point in the product order, Down when smaller."""

    points: Tuple[GridPoint, ...]
    directions: Tuple[str, ...]

    def __post_init__(self):
        if len(self.directions) != max(0, len(self.points) - 1):
            raise ValueError("directions must have one entry per step")


def _offset_range(w: DiscreteWorm):
    """Range of off-diagonal offsets whose square centers stay on the grid."""
    M = w.grid.M
    px, py = w.center
    A = (w.ell - 1) * w.width_steps
    return max(-A, -px, py - M), min(A, M - px, py)


def _column_profile(w: DiscreteWorm):
    """Clipped column ranges of the worm region.

    Returns (xs, ylo, yhi): for each grid column x in xs the region covers
    rows ylo[x]..yhi[x].  Columns are contiguous and the bounds are
    non-increasing left to right.
    """
    M = w.grid.M
    px, py, d = w.center.i, w.center.j, w.width_steps
    a_lo, a_hi = _offset_range(w)
    xs, ylos, yhis = [], [], []
    for x in range(max(0, px + a_lo - d), min(M, px + a_hi + d) + 1):
        u = x - px
        ahi = min(u + d, a_hi)
        alo = max(u - d, a_lo)
        if alo > ahi:
            continue
        ylo = max(0, py - ahi - d)
        yhi = min(M, py - alo + d)
        if ylo > yhi:
            continue
        xs.append(x)
        ylos.append(ylo)
        yhis.append(yhi)
    return xs, ylos, yhis


def worm_region(w: DiscreteWorm) -> Set[GridPoint]:
    """All grid points inside the (clipped) closed worm region."""
    xs, ylos, yhis = _column_profile(w)
    return {GridPoint(x, y)
            for x, lo, hi in zip(xs, ylos, yhis)
            for y in range(lo, hi + 1)}


def worm_contains(w: DiscreteWorm, p: GridPoint) -> bool:
    """Membership test without materializing the region."""
    if not (0 <= p.i <= w.grid.M and 0 <= p.j <= w.grid.M):
        return False
    d = w.width_steps
    a_lo, a_hi = _offset_range(w)
    u = p.i - w.center.i
    ahi = min(u + d, a_hi)
    alo = max(u - d, a_lo)
    if alo > ahi:
        return False
    return w.center.j - ahi - d <= p.j <= w.center.j - alo + d


def worm_nested(w1: DiscreteWorm, w2: DiscreteWorm) -> bool:
    """True iff w1's region is contained in w2's (same center and ell only)."""
    if w1.center != w2.center or w1.ell != w2.ell or w1.grid != w2.grid:
        raise ValueError("nestedness is defined for worms sharing center and ell")
    return w1.width_steps <= w2.width_steps


def boundary_path(w: DiscreteWorm) -> BoundaryPath:
    """The boundary cap of the worm as a zigzag path of grid points.

    Walks the lower staircase from its right end to its left end, up the
    left edge, across the top edge, and down the upper staircase; the
    rightmost vertical edge and the bottommost horizontal edge of the
    region are omitted (only their far corners are kept).
    """
    xs, ylos, yhis = _column_profile(w)
    if not xs:
        raise ValueError("worm region is empty after clipping")
    xlo, xhi = xs[0], xs[-1]
    ncols = len(xs)
    if ncols == 1:
        pts = [GridPoint(xlo, y) for y in range(ylos[0], yhis[0] + 1)]
    else:
        ymin = ylos[-1]
        xb = 0
        while ylos[xb] > ymin:
            xb += 1
        # lower boundary, left to right, stopping where the bottom edge starts
        lower: List[GridPoint] = [GridPoint(xlo, ylos[0])]
        for c in range(xb):
            x = xs[c + 1]
            lower.append(GridPoint(x, ylos[c]))
            for y in range(ylos[c] - 1, ylos[c + 1] - 1, -1):
                lower.append(GridPoint(x, y))
        pts = list(reversed(lower))
        # left edge up to the region's top-left corner
        for y in range(ylos[0] + 1, yhis[0] + 1):
            pts.append(GridPoint(xlo, y))
        # upper boundary, left to right, ending atop the omitted right edge
        for c in range(ncols - 1):
            x = xs[c]
            for y in range(yhis[c] - 1, yhis[c + 1] - 1, -1):
                pts.append(GridPoint(x, y))
            pts.append(GridPoint(xs[c + 1], yhis[c + 1]))
    dirs = []
    for a, b in zip(pts, pts[1:]):
        if b.i >= a.i and b.j >= a.j:
            dirs.append(UP)
        elif b.i <= a.i and b.j <= a.j:
            dirs.append(DOWN)
        else:
            raise AssertionError("boundary walk produced incomparable neighbors")
    return BoundaryPath(tuple(pts), tuple(dirs))
