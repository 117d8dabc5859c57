"""File formats: bifiltration text files, TUDataset directories, feature
CSVs and PGM heatmaps.

Everything is text-first so fixtures diff cleanly.  Bifiltration files
carry a header ``bifil 2 <M>`` and one simplex per line,
``<dim> <v0> ... <vdim> ; <i> <j>``, faces before cofaces.  TUDataset
directories follow the standard 1-based layout (``<name>_A.txt`` etc.);
indices are rebased to 0 per graph internally.
"""

from __future__ import annotations

import os
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .complexes import (BiFiltration, GridPoint, GridSpec, Simplex,
                        SimplicialComplex, simplex, validate)
from .filtrations import AttributedGraph
from .gril import GrilVector


class ParseError(ValueError):
    """Malformed input file; carries a 1-based line number when known."""

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        where = f"line {line}: " if line is not None else ""
        super().__init__(where + message)


# ---------------------------------------------------------------------------
# bifiltration files

def serialize_bifiltration(f: BiFiltration) -> str:
    lines = [f"bifil 2 {f.grid.M}"]
    for s in f.complex.sorted_simplices():
        gp = f.value[s]
        verts = " ".join(str(v) for v in s.vertices)
        lines.append(f"{s.dim} {verts} ; {gp.i} {gp.j}")
    return "\n".join(lines) + "\n"


def parse_bifiltration(doc: str) -> BiFiltration:
    lines = doc.splitlines()
    if not lines:
        raise ParseError("empty document")
    header = lines[0].split()
    if len(header) != 3 or header[0] != "bifil" or header[1] != "2":
        raise ParseError(f"bad header {lines[0]!r}, expected 'bifil 2 <M>'", 1)
    try:
        M = int(header[2])
    except ValueError:
        raise ParseError(f"bad grid size {header[2]!r}", 1) from None
    if M < 1:
        raise ParseError("grid size must be positive", 1)
    grid = GridSpec(M)
    value: Dict[Simplex, GridPoint] = {}
    seen: set = set()
    for lineno, raw in enumerate(lines[1:], start=2):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if ";" not in line:
            raise ParseError("missing ';' separator", lineno)
        left, _, right = line.partition(";")
        try:
            nums = [int(tok) for tok in left.split()]
            coords = [int(tok) for tok in right.split()]
        except ValueError:
            raise ParseError("non-integer token", lineno) from None
        if len(nums) < 2:
            raise ParseError("expected '<dim> <v0> ...'", lineno)
        dim, verts = nums[0], nums[1:]
        if dim != len(verts) - 1:
            raise ParseError(f"dimension {dim} does not match {len(verts)} vertices",
                             lineno)
        if len(coords) != 2:
            raise ParseError("expected two grid coordinates after ';'", lineno)
        i, j = coords
        if not (0 <= i <= M and 0 <= j <= M):
            raise ParseError(f"grid value ({i},{j}) outside [0,{M}]^2", lineno)
        try:
            s = simplex(*verts)
        except ValueError as e:
            raise ParseError(str(e), lineno) from None
        if s in seen:
            raise ParseError(f"duplicate simplex {s}", lineno)
        for face in s.facets():
            if face not in seen:
                raise ParseError(f"face {face} of {s} not declared yet", lineno)
        seen.add(s)
        value[s] = GridPoint(i, j)
    if not value:
        raise ParseError("no simplices")
    f = BiFiltration(SimplicialComplex(seen, _validated=True), grid, value)
    bad = validate(f)
    if bad:
        face, cof = bad[0]
        raise ParseError(f"monotonicity violated: {face} has a larger value than {cof}")
    return f


# ---------------------------------------------------------------------------
# TUDataset directories

def _read_lines(path: str) -> List[str]:
    if not os.path.exists(path):
        raise ParseError(f"missing file {path}")
    with open(path) as fh:
        return [ln.strip() for ln in fh if ln.strip()]


def read_tudataset(directory: str, name: str) -> List[AttributedGraph]:
    """Load a TUDataset-layout directory into attributed graphs.

    Requires ``<name>_A.txt``, ``<name>_graph_indicator.txt`` and
    ``<name>_graph_labels.txt``; ``<name>_node_labels.txt`` is optional and
    becomes the vertex attribute.  All indices in the files are 1-based.
    """
    def fpath(suffix: str) -> str:
        return os.path.join(directory, f"{name}_{suffix}.txt")

    indicator = [int(x) for x in _read_lines(fpath("graph_indicator"))]
    ngraphs = max(indicator) if indicator else 0
    labels = [int(x) for x in _read_lines(fpath("graph_labels"))]
    if len(labels) < ngraphs:
        raise ParseError(f"{len(labels)} labels for {ngraphs} graphs")
    node_labels: Optional[List[float]] = None
    if os.path.exists(fpath("node_labels")):
        node_labels = [float(x) for x in _read_lines(fpath("node_labels"))]
        if len(node_labels) != len(indicator):
            raise ParseError(f"{len(node_labels)} node labels for {len(indicator)} nodes")
    members: List[List[int]] = [[] for _ in range(ngraphs)]
    for v, gid in enumerate(indicator, start=1):
        if not (1 <= gid <= ngraphs):
            raise ParseError(f"bad graph id {gid} for node {v}")
        members[gid - 1].append(v)
    local: Dict[int, Tuple[int, int]] = {}
    for gi, verts in enumerate(members):
        for li, v in enumerate(verts):
            local[v] = (gi, li)
    edges: List[List[Tuple[int, int]]] = [[] for _ in range(ngraphs)]
    for lineno, line in enumerate(_read_lines(fpath("A")), start=1):
        parts = line.replace(",", " ").split()
        if len(parts) != 2:
            raise ParseError("expected 'u, v'", lineno)
        u, v = int(parts[0]), int(parts[1])
        if u not in local or v not in local:
            raise ParseError(f"edge ({u},{v}) references a missing node", lineno)
        (gu, lu), (gv, lv) = local[u], local[v]
        if gu != gv:
            raise ParseError(f"edge ({u},{v}) crosses graph boundary", lineno)
        if lu != lv:
            edges[gu].append((min(lu, lv), max(lu, lv)))
    graphs = []
    for gi, verts in enumerate(members):
        x = None
        if node_labels is not None:
            x = [node_labels[v - 1] for v in verts]
        graphs.append(AttributedGraph(len(verts), sorted(set(edges[gi])),
                                      x=x, label=labels[gi]))
    return graphs


def write_tudataset(directory: str, name: str, graphs: Sequence[AttributedGraph]) -> None:
    os.makedirs(directory, exist_ok=True)
    a_lines, ind_lines, lab_lines, node_lines = [], [], [], []
    offset = 0
    has_x = all(g.x is not None for g in graphs)
    for gi, g in enumerate(graphs, start=1):
        for _ in range(g.n):
            ind_lines.append(str(gi))
        for u, v in g.edges:
            a_lines.append(f"{u + 1 + offset}, {v + 1 + offset}")
            a_lines.append(f"{v + 1 + offset}, {u + 1 + offset}")
        lab_lines.append(str(g.label if g.label is not None else 0))
        if has_x:
            node_lines.extend(str(val) for val in g.x)
        offset += g.n
    def write(suffix: str, lines: List[str]) -> None:
        with open(os.path.join(directory, f"{name}_{suffix}.txt"), "w") as fh:
            fh.write("\n".join(lines) + ("\n" if lines else ""))
    write("A", a_lines)
    write("graph_indicator", ind_lines)
    write("graph_labels", lab_lines)
    if has_x:
        write("node_labels", node_lines)


# ---------------------------------------------------------------------------
# feature CSV and heatmaps

def feature_columns(v: GrilVector) -> List[str]:
    cols = []
    for dim in v.dims:
        for pi in range(len(v.centers)):
            for k in range(1, v.kmax + 1):
                for ell in v.ells:
                    cols.append(f"h{dim}_p{pi}_k{k}_l{ell}")
    return cols


def emit_features(vectors: Sequence[GrilVector], ids: Sequence[str],
                  labels: Sequence) -> str:
    """CSV with one row per object; columns ordered dim, center, k, ell."""
    if not vectors:
        raise ValueError("no vectors to export")
    sig = vectors[0].signature()
    for v in vectors[1:]:
        if v.signature() != sig:
            raise ValueError("landscape index sets differ across vectors")
    header = "graph_id,label," + ",".join(feature_columns(vectors[0]))
    rows = [header]
    for v, gid, label in zip(vectors, ids, labels):
        vals = ",".join(format(x, ".6g") for x in v.flatten())
        rows.append(f"{gid},{label},{vals}")
    return "\n".join(rows) + "\n"


def parse_features(doc: str) -> Tuple[List[str], List[str], List[str], np.ndarray]:
    lines = [ln for ln in doc.splitlines() if ln.strip()]
    if not lines:
        raise ParseError("empty feature csv")
    header = lines[0].split(",")
    if header[:2] != ["graph_id", "label"]:
        raise ParseError("feature csv must start with graph_id,label", 1)
    cols = header[2:]
    ids, labels, rows = [], [], []
    for lineno, line in enumerate(lines[1:], start=2):
        parts = line.split(",")
        if len(parts) != len(header):
            raise ParseError(f"expected {len(header)} fields, got {len(parts)}", lineno)
        ids.append(parts[0])
        labels.append(parts[1])
        rows.append([float(x) for x in parts[2:]])
    return ids, labels, cols, np.array(rows)


def emit_heatmap(v: GrilVector, k: int, ell: int, dim: int) -> str:
    """Plain PGM (P2) of the landscape over the center subgrid.

    Pixel rows run top-down over decreasing j; columns left-right over
    increasing i; intensity is round(255 * value).
    """
    is_ = sorted({p.i for p in v.centers})
    js = sorted({p.j for p in v.centers})
    if len(is_) * len(js) != len(set(v.centers)) or len(v.centers) != len(set(v.centers)):
        raise ValueError("centers do not form a full rectangular subgrid")
    lookup = {}
    di = v.dims.index(dim)
    ei = v.ells.index(ell)
    for ci, p in enumerate(v.centers):
        lookup[(p.i, p.j)] = float(v.values[di, ci, k - 1, ei])
    if len(lookup) != len(is_) * len(js):
        raise ValueError("centers do not form a full rectangular subgrid")
    lines = ["P2", f"{len(is_)} {len(js)}", "255"]
    for j in reversed(js):
        lines.append(" ".join(str(int(round(255 * lookup[(i, j)]))) for i in is_))
    return "\n".join(lines) + "\n"
