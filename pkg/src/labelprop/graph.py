"""Undirected weighted graphs in compressed sparse row (CSR) form.

Loaders return the arcs as stored in the file (plus symmetric expansion for
MatrixMarket ``symmetric`` storage and duplicate-arc merging).  `preprocess`
turns any loaded graph into the canonical form the detectors expect:
symmetric, unit arc weights by default, and exactly one weight-1 self-loop
per vertex.

Weight conventions, fixed once here and relied on everywhere else:

* each undirected edge is stored as two directed arcs; a self-loop is
  stored once;
* a self-loop counts twice toward a vertex degree and twice toward
  ``total_weight`` (so the one-community partition has modularity 0);
* all weights are strictly positive.
"""

from __future__ import annotations

import io
import os
from dataclasses import dataclass
from typing import IO, Iterable, Union

import numpy as np

Source = Union[str, os.PathLike, IO[str]]


class GraphParseError(ValueError):
    """Malformed graph file; the message names the offending line."""


@dataclass(frozen=True)
class Graph:
    """Immutable CSR graph.

    ``offsets`` has length ``vertex_count + 1`` and indexes ``neighbors``
    and ``weights`` (both length ``edge_count``).  Adjacency is sorted by
    neighbor id within each row, which is the documented scan order for
    strict tie breaking.  ``total_weight`` is the sum of all stored arc
    weights with self-loops counted twice.
    """

    vertex_count: int
    edge_count: int
    offsets: np.ndarray
    neighbors: np.ndarray
    weights: np.ndarray
    total_weight: float


def _freeze(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


def from_arcs(vertex_count: int, u, v, w) -> Graph:
    """Build a CSR graph from arc arrays, merging duplicate arcs by weight sum."""
    u = np.asarray(u, dtype=np.int64)
    v = np.asarray(v, dtype=np.int64)
    w = np.asarray(w, dtype=np.float64)
    n = int(vertex_count)
    if u.size:
        order = np.lexsort((v, u))
        u, v, w = u[order], v[order], w[order]
        fresh = np.empty(u.size, dtype=bool)
        fresh[0] = True
        fresh[1:] = (u[1:] != u[:-1]) | (v[1:] != v[:-1])
        starts = np.flatnonzero(fresh)
        w = np.add.reduceat(w, starts)
        u, v = u[starts], v[starts]
    offsets = np.zeros(n + 1, dtype=np.int64)
    if u.size:
        np.cumsum(np.bincount(u, minlength=n), out=offsets[1:])
    total = float(w.sum() + w[u == v].sum())
    return Graph(
        vertex_count=n,
        edge_count=int(u.size),
        offsets=_freeze(offsets),
        neighbors=_freeze(v.copy()),
        weights=_freeze(w.copy()),
        total_weight=total,
    )


def arc_rows(graph: Graph) -> np.ndarray:
    """Source vertex of every stored arc (the CSR row index, repeated)."""
    return np.repeat(
        np.arange(graph.vertex_count, dtype=np.int64),
        np.diff(graph.offsets),
    )


def _lines(source: Source):
    if hasattr(source, "read"):
        return source
    return open(source, "r", encoding="utf-8")


def load_matrix_market(source: Source) -> Graph:
    """Parse a MatrixMarket coordinate file into a raw (unpreprocessed) graph.

    Supported header: ``%%MatrixMarket matrix coordinate
    (pattern|real|integer) (general|symmetric)``.  Indices are 1-based in
    the file and shifted to 0-based.  ``pattern`` entries get weight 1;
    ``symmetric`` storage is expanded to both arc directions (diagonal
    entries are kept single); duplicate arcs are merged by weight sum.
    """
    stream = _lines(source)
    close = stream is not source
    try:
        header = stream.readline()
        if not header:
            raise GraphParseError("line 1: empty file, expected MatrixMarket header")
        parts = header.strip().lower().split()
        if len(parts) != 5 or parts[0] != "%%matrixmarket":
            raise GraphParseError(f"line 1: malformed MatrixMarket header: {header.strip()!r}")
        _, obj, fmt, field, symmetry = parts
        if obj != "matrix" or fmt != "coordinate":
            raise GraphParseError(f"line 1: unsupported MatrixMarket type {obj!r} {fmt!r}")
        if field not in ("pattern", "real", "integer"):
            raise GraphParseError(f"line 1: unsupported field type {field!r}")
        if symmetry not in ("general", "symmetric"):
            raise GraphParseError(f"line 1: unsupported symmetry {symmetry!r}")

        lineno = 1
        rows = cols = count = -1
        for raw in stream:
            lineno += 1
            line = raw.strip()
            if not line or line.startswith("%"):
                continue
            dims = line.split()
            if len(dims) != 3:
                raise GraphParseError(f"line {lineno}: expected 'rows cols entries', got {line!r}")
            try:
                rows, cols, count = (int(t) for t in dims)
            except ValueError:
                raise GraphParseError(f"line {lineno}: non-integer size line {line!r}") from None
            if rows < 0 or cols < 0 or count < 0:
                raise GraphParseError(f"line {lineno}: negative value in size line {line!r}")
            break
        if rows < 0:
            raise GraphParseError(f"line {lineno}: missing size line")

        want_weight = field != "pattern"
        us = np.empty(count, dtype=np.int64)
        vs = np.empty(count, dtype=np.int64)
        ws = np.empty(count, dtype=np.float64)
        seen = 0
        for raw in stream:
            lineno += 1
            line = raw.strip()
            if not line or line.startswith("%"):
                continue
            if seen >= count:
                raise GraphParseError(f"line {lineno}: more entries than the {count} declared")
            toks = line.split()
            if len(toks) != (3 if want_weight else 2):
                raise GraphParseError(f"line {lineno}: malformed entry {line!r}")
            try:
                i = int(toks[0])
                j = int(toks[1])
                weight = float(toks[2]) if want_weight else 1.0
            except ValueError:
                raise GraphParseError(f"line {lineno}: non-numeric token in {line!r}") from None
            if not (1 <= i <= rows) or not (1 <= j <= cols):
                raise GraphParseError(
                    f"line {lineno}: index ({i}, {j}) outside declared {rows} x {cols} bounds"
                )
            if weight <= 0:
                raise GraphParseError(f"line {lineno}: non-positive weight {weight}")
            us[seen], vs[seen], ws[seen] = i - 1, j - 1, weight
            seen += 1
        if seen != count:
            raise GraphParseError(f"line {lineno}: file ended after {seen} of {count} entries")

        if symmetry == "symmetric":
            off = us != vs
            us, vs, ws = (
                np.concatenate([us, vs[off]]),
                np.concatenate([vs, us[off]]),
                np.concatenate([ws, ws[off]]),
            )
        return from_arcs(max(rows, cols), us, vs, ws)
    finally:
        if close:
            stream.close()


def load_edge_list(source: Source) -> Graph:
    """Parse a whitespace edge list (``u v [w]``, 0-based, ``#`` comments).

    A missing weight defaults to 1.  The vertex count is the largest index
    seen plus one.  Duplicate arcs are merged by weight sum.
    """
    stream = _lines(source)
    close = stream is not source
    us: list[int] = []
    vs: list[int] = []
    ws: list[float] = []
    try:
        for lineno, raw in enumerate(stream, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            toks = line.split()
            if len(toks) not in (2, 3):
                raise GraphParseError(f"line {lineno}: expected 'u v [w]', got {line!r}")
            try:
                u = int(toks[0])
                v = int(toks[1])
                weight = float(toks[2]) if len(toks) == 3 else 1.0
            except ValueError:
                raise GraphParseError(f"line {lineno}: non-numeric token in {line!r}") from None
            if u < 0 or v < 0:
                raise GraphParseError(f"line {lineno}: negative vertex index in {line!r}")
            if weight <= 0:
                raise GraphParseError(f"line {lineno}: non-positive weight {weight}")
            us.append(u)
            vs.append(v)
            ws.append(weight)
    finally:
        if close:
            stream.close()
    n = 1 + max(max(us, default=-1), max(vs, default=-1))
    return from_arcs(n, us, vs, ws)


def load_graph(path: Source, fmt: str = "auto") -> Graph:
    """Load by format name, or sniff from the file extension / first bytes."""
    if fmt == "mtx":
        return load_matrix_market(path)
    if fmt == "edgelist":
        return load_edge_list(path)
    if fmt != "auto":
        raise ValueError(f"unknown graph format {fmt!r}")
    if hasattr(path, "read"):
        text = path.read()
        stream = io.StringIO(text)
        if text.lstrip().lower().startswith("%%matrixmarket"):
            return load_matrix_market(stream)
        return load_edge_list(stream)
    if str(path).endswith((".mtx", ".mm")):
        return load_matrix_market(path)
    with open(path, "r", encoding="utf-8") as fh:
        first = fh.readline()
    if first.lower().startswith("%%matrixmarket"):
        return load_matrix_market(path)
    return load_edge_list(path)


def preprocess(
    graph: Graph,
    unit_weights: bool = True,
    self_loops: bool = True,
) -> Graph:
    """Canonicalize a loaded graph for detection.

    Off-diagonal arcs are made symmetric (when both directions exist with
    different weights the larger wins, which makes this a no-op on an
    already symmetric graph).  With ``unit_weights`` every weight is forced
    to 1.  With ``self_loops`` existing self-loops are dropped and every
    vertex gets exactly one self-loop of weight 1; otherwise self-loops
    pass through untouched.
    """
    n = graph.vertex_count
    if n == 0:
        return from_arcs(0, [], [], [])
    rows = arc_rows(graph)
    cols = graph.neighbors
    w = np.asarray(graph.weights, dtype=np.float64)

    diag = rows == cols
    ru, rv, rw = rows[~diag], cols[~diag], w[~diag]

    # Undirected pair -> max weight over both stored directions, then emit both.
    lo = np.minimum(ru, rv)
    hi = np.maximum(ru, rv)
    key = lo * n + hi
    order = np.argsort(key, kind="stable")
    key, lo, hi, rw = key[order], lo[order], hi[order], rw[order]
    if key.size:
        fresh = np.empty(key.size, dtype=bool)
        fresh[0] = True
        fresh[1:] = key[1:] != key[:-1]
        starts = np.flatnonzero(fresh)
        rw = np.maximum.reduceat(rw, starts)
        lo, hi = lo[starts], hi[starts]
    if unit_weights:
        rw = np.ones_like(rw)
    out_u = np.concatenate([lo, hi])
    out_v = np.concatenate([hi, lo])
    out_w = np.concatenate([rw, rw])

    if self_loops:
        loop_u = np.arange(n, dtype=np.int64)
        loop_w = np.ones(n, dtype=np.float64)
    else:
        loop_u = rows[diag]
        loop_w = np.ones_like(w[diag]) if unit_weights else w[diag]
    out_u = np.concatenate([out_u, loop_u])
    out_v = np.concatenate([out_v, loop_u])
    out_w = np.concatenate([out_w, loop_w])
    return from_arcs(n, out_u, out_v, out_w)


def degree_weight(graph: Graph, vertex: int) -> float:
    """Weighted degree of one vertex; a self-loop counts twice."""
    n = graph.vertex_count
    if not 0 <= vertex < n:
        raise ValueError(f"vertex {vertex} out of range [0, {n})")
    lo, hi = graph.offsets[vertex], graph.offsets[vertex + 1]
    row = graph.neighbors[lo:hi]
    wts = graph.weights[lo:hi]
    return float(wts.sum() + wts[row == vertex].sum())


def degree_weights(graph: Graph) -> np.ndarray:
    """Weighted degree of every vertex; self-loops count twice."""
    n = graph.vertex_count
    rows = arc_rows(graph)
    deg = np.bincount(rows, weights=graph.weights, minlength=n)
    diag = rows == graph.neighbors
    deg += np.bincount(rows[diag], weights=graph.weights[diag], minlength=n)
    return deg


def check_symmetric(graph: Graph) -> None:
    """Raise if any arc lacks its equal-weight reverse (debug guard)."""
    n = graph.vertex_count
    if n == 0:
        return
    rows = arc_rows(graph)
    cols = graph.neighbors
    k_fwd = rows * n + cols
    k_rev = cols * n + rows
    o1 = np.argsort(k_fwd)
    o2 = np.argsort(k_rev)
    if not np.array_equal(k_fwd[o1], k_rev[o2]) or not np.allclose(
        graph.weights[o1], graph.weights[o2]
    ):
        raise ValueError("graph is not symmetric; run preprocess() before detecting")


def graphs_equal(a: Graph, b: Graph) -> bool:
    """Arc-for-arc equality (used by idempotence and round-trip tests)."""
    return (
        a.vertex_count == b.vertex_count
        and a.edge_count == b.edge_count
        and np.array_equal(a.offsets, b.offsets)
        and np.array_equal(a.neighbors, b.neighbors)
        and np.array_equal(a.weights, b.weights)
    )
