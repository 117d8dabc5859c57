"""Bifiltration constructors for graphs and point clouds.

Graphs become 1-dimensional complexes.  The first filtration coordinate is
a lower-star of a vertex descriptor (heat kernel signature, or synthetic
traversal attributes); the second puts vertices at zero and edges at their
Forman curvature, min-max rescaled to [0,1] first so the zero floor keeps
the bifiltration monotone.  Point clouds get a cutoff Vietoris-Rips complex
with a k-nearest-neighbor density coordinate on vertices and an edge-length
coordinate on edges.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .complexes import (BiFiltration, GridSpec, PreBiFiltration, Simplex,
                        SimplicialComplex, lower_star, normalize_and_snap,
                        simplex)


@dataclass
class AttributedGraph:
    """Simple undirected graph with optional per-vertex attributes and a label."""

    n: int
    edges: List[Tuple[int, int]]
    x: Optional[List[float]] = None
    label: Optional[int] = None

    def __post_init__(self):
        seen = set()
        cleaned = []
        for u, v in self.edges:
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError(f"edge ({u},{v}) references a missing vertex")
            key = (min(u, v), max(u, v))
            if key not in seen:
                seen.add(key)
                cleaned.append(key)
        self.edges = sorted(cleaned)
        if self.x is not None and len(self.x) != self.n:
            raise ValueError("attribute list length must equal vertex count")

    def degrees(self) -> np.ndarray:
        deg = np.zeros(self.n, dtype=np.int64)
        for u, v in self.edges:
            deg[u] += 1
            deg[v] += 1
        return deg

    def to_complex(self) -> SimplicialComplex:
        simps = [simplex(v) for v in range(self.n)]
        simps += [simplex(u, v) for u, v in self.edges]
        return SimplicialComplex(simps, _validated=True)


def _components(g: AttributedGraph) -> List[List[int]]:
    adj: List[List[int]] = [[] for _ in range(g.n)]
    for u, v in g.edges:
        adj[u].append(v)
        adj[v].append(u)
    seen = [False] * g.n
    comps = []
    for start in range(g.n):
        if seen[start]:
            continue
        comp = [start]
        seen[start] = True
        stack = [start]
        while stack:
            u = stack.pop()
            for w in adj[u]:
                if not seen[w]:
                    seen[w] = True
                    comp.append(w)
                    stack.append(w)
        comps.append(sorted(comp))
    return comps


def hks(g: AttributedGraph, t: float) -> np.ndarray:
    """Heat kernel signature at diffusion time t, per vertex.

    hks_t(v) = sum_i exp(-t * lam_i) * phi_i(v)^2 over the eigenpairs of the
    symmetric normalized Laplacian, computed per connected component.
    """
    if g.n == 0:
        raise ValueError("empty graph")
    if t <= 0:
        raise ValueError("diffusion time must be positive")
    out = np.zeros(g.n)
    deg = g.degrees()
    edge_set = set(g.edges)
    for comp in _components(g):
        idx = {v: i for i, v in enumerate(comp)}
        m = len(comp)
        # symmetric normalized Laplacian; degree-zero vertices get a zero row
        L = np.diag([1.0 if deg[v] > 0 else 0.0 for v in comp])
        for u, v in edge_set:
            if u in idx and v in idx:
                w = 1.0 / np.sqrt(deg[u] * deg[v])
                L[idx[u], idx[v]] -= w
                L[idx[v], idx[u]] -= w
        lam, phi = np.linalg.eigh(L)
        weights = np.exp(-t * lam)
        out[comp] = (phi ** 2) @ weights
    return out


def forman_ricci(g: AttributedGraph) -> Dict[Tuple[int, int], float]:
    """Unweighted Forman curvature per edge: F(u,v) = 4 - deg(u) - deg(v)."""
    deg = g.degrees()
    return {(u, v): float(4 - deg[u] - deg[v]) for u, v in g.edges}


def _normalize01(values: Sequence[float]) -> List[float]:
    # min-max to [0,1]; a constant collection maps to all zeros
    lo, hi = min(values), max(values)
    span = hi - lo
    if span <= 0:
        return [0.0] * len(values)
    return [(v - lo) / span for v in values]


def _vertex_edge_prefiltration(g: AttributedGraph, vertex_coord1: Sequence[float],
                               edge_coord2: Sequence[float]) -> PreBiFiltration:
    """First coordinate lower-star of a vertex value; second coordinate zero
    on vertices and a rescaled edge value on edges."""
    complex = g.to_complex()
    c2 = _normalize01(edge_coord2) if edge_coord2 else []
    values: Dict[Simplex, Tuple[float, float]] = {}
    for v in range(g.n):
        values[simplex(v)] = (float(vertex_coord1[v]), 0.0)
    for (u, v), c in zip(g.edges, c2):
        values[simplex(u, v)] = (max(vertex_coord1[u], vertex_coord1[v]), float(c))
    return PreBiFiltration(complex, values)


def hks_rc_bifiltration(g: AttributedGraph, grid: GridSpec,
                        t: float = 10.0) -> BiFiltration:
    """Heat-kernel-signature x Forman-curvature bifiltration of a graph."""
    h = hks(g, t)
    curv = forman_ricci(g)
    pre = _vertex_edge_prefiltration(g, h, [curv[e] for e in g.edges])
    return normalize_and_snap(pre, grid)


# ---------------------------------------------------------------------------
# HourGlass synthetic dataset

def _circulant_edges(n: int, offset0: int) -> List[Tuple[int, int]]:
    edges = set()
    for i in range(n):
        for off in (1, 2):
            j = (i + off) % n
            edges.add((min(i, j) + offset0, max(i, j) + offset0))
    return sorted(edges)


def hourglass_generate(n1: int, n2: int, traversal: str, seed: int) -> AttributedGraph:
    """Two circulant subgraphs with offsets {1,2}, joined by random cross edges.

    Vertices 0..n1-1 form the first circulant, n1..n1+n2-1 the second.  For
    each of the two pairings (top half of one subgraph against the bottom
    half of the other) 2|V| vertex pairs are sampled with replacement and
    deduplicated into cross edges.  The attribute of a vertex is its index
    in the chosen traversal: T1 walks the first subgraph then the second;
    T2 walks both top halves first, then both bottom halves.
    """
    if n1 < 4 or n2 < 4:
        raise ValueError("circulant subgraphs need at least 4 nodes")
    if traversal not in ("T1", "T2"):
        raise ValueError("traversal must be 'T1' or 'T2'")
    rng = np.random.default_rng(seed)
    nv = n1 + n2
    edges = _circulant_edges(n1, 0) + _circulant_edges(n2, n1)
    h1, h2 = n1 // 2, n2 // 2
    g1_top = list(range(0, h1))
    g1_bot = list(range(h1, n1))
    g2_top = list(range(n1, n1 + h2))
    g2_bot = list(range(n1 + h2, nv))
    cross = set()
    for side_a, side_b in ((g1_top, g2_bot), (g1_bot, g2_top)):
        ia = rng.integers(0, len(side_a), size=2 * nv)
        ib = rng.integers(0, len(side_b), size=2 * nv)
        for a, b in zip(ia, ib):
            cross.add((side_a[int(a)], side_b[int(b)]))
    edges = sorted(set(edges) | cross)
    if traversal == "T1":
        order = list(range(nv))
    else:
        order = g1_top + g2_top + g1_bot + g2_bot
    x = [0.0] * nv
    for pos, v in enumerate(order):
        x[v] = float(pos)
    return AttributedGraph(nv, edges, x=x, label=0 if traversal == "T1" else 1)


def hourglass_bifiltration(g: AttributedGraph, grid: GridSpec) -> BiFiltration:
    """Traversal-attribute x Forman-curvature bifiltration of an HourGlass graph."""
    if g.x is None:
        raise ValueError("hourglass bifiltration needs vertex attributes")
    curv = forman_ricci(g)
    pre = _vertex_edge_prefiltration(g, g.x, [curv[e] for e in g.edges])
    return normalize_and_snap(pre, grid)


# ---------------------------------------------------------------------------
# point clouds

def knn_density_bifiltration(points: np.ndarray, alpha: int, r_max: float,
                             grid: GridSpec) -> BiFiltration:
    """Cutoff Vietoris-Rips bifiltration with a k-NN density coordinate.

    Vertices get (1 - exp(-mean distance to the alpha nearest neighbors), 0);
    edges shorter than r_max get (max of endpoint values, 1 - exp(-length));
    triangles with all edges present get the componentwise max over their
    edges.  The result is min-max normalized and snapped to the grid.
    """
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2:
        raise ValueError("points must be an (n, 2) array")
    n = pts.shape[0]
    if n <= alpha:
        raise ValueError(f"need more than alpha={alpha} points, got {n}")
    diff = pts[:, None, :] - pts[None, :, :]
    dist = np.sqrt((diff ** 2).sum(axis=2))
    nn = np.sort(dist, axis=1)[:, 1:alpha + 1]
    fx = 1.0 - np.exp(-nn.mean(axis=1))
    values: Dict[Simplex, Tuple[float, float]] = {}
    simps: List[Simplex] = []
    for v in range(n):
        s = simplex(v)
        simps.append(s)
        values[s] = (float(fx[v]), 0.0)
    neighbors: List[List[int]] = [[] for _ in range(n)]
    for u in range(n):
        for v in range(u + 1, n):
            if dist[u, v] <= r_max:
                s = simplex(u, v)
                simps.append(s)
                values[s] = (float(max(fx[u], fx[v])),
                             float(1.0 - np.exp(-dist[u, v])))
                neighbors[u].append(v)
    for u in range(n):
        for i, v in enumerate(neighbors[u]):
            for w in neighbors[u][i + 1:]:
                if dist[v, w] <= r_max:
                    e1 = values[simplex(u, v)]
                    e2 = values[simplex(u, w)]
                    e3 = values[simplex(v, w)]
                    s = simplex(u, v, w)
                    simps.append(s)
                    values[s] = (max(e1[0], e2[0], e3[0]),
                                 max(e1[1], e2[1], e3[1]))
    pre = PreBiFiltration(SimplicialComplex(simps, _validated=True), values)
    return normalize_and_snap(pre, grid)
