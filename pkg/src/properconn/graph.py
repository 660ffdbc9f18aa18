"""Graph and edge-coloring data types, random generation, and text I/O.

Graphs are undirected, finite, and simple, with vertices 0..n-1.  Edges are
stored as a lexicographically sorted (m, 2) array of (u, v) rows with u < v,
plus a CSR adjacency structure shared with the compiled kernels.  Graph and
EdgeColoring are immutable after construction and safe to share across
concurrent readers.

Random generation follows the G(n, p) model: every one of the C(n, 2) vertex
pairs is an edge independently with probability p.  The generator is numpy's
default_rng (PCG64) seeded with the model's 64-bit seed, consumed in
lexicographic pair order, so identical (n, p, seed) always reproduces the
identical graph.  For p < 0.2 the sampler walks the pair order with batched
geometric skips; otherwise it draws per-pair Bernoulli variates row by row.
Both paths agree in distribution.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    EdgeNotInGraph,
    FormatError,
    MissingColor,
)
from . import kernels


def _build_csr(n: int, edges: np.ndarray):
    """CSR adjacency (indptr, indices, adj_edge) from a sorted edge array.

    adj_edge[j] is the edge row that produced adjacency slot j, so per-slot
    edge colors are colors[adj_edge].  Rows are neighbor-ascending; the
    kernels rely on that ordering.
    """
    m = edges.shape[0]
    indptr = np.zeros(n + 1, dtype=np.int32)
    if m == 0:
        return indptr, np.zeros(0, np.int32), np.zeros(0, np.int32)
    both = np.concatenate([edges[:, 0], edges[:, 1]]).astype(np.int64)
    other = np.concatenate([edges[:, 1], edges[:, 0]]).astype(np.int64)
    eids = np.concatenate([np.arange(m), np.arange(m)])
    order = np.lexsort((other, both))
    indices = other[order].astype(np.int32)
    adj_edge = eids[order].astype(np.int32)
    counts = np.bincount(both, minlength=n)
    indptr[1:] = np.cumsum(counts)
    return indptr, indices, adj_edge


def _freeze(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class Graph:
    """Immutable simple graph.

    Attributes:
        n: vertex count.
        edges: (m, 2) int32 array of (u, v) rows, u < v, lexicographically
            sorted, no duplicates.
        indptr, indices: CSR adjacency; indices within each row ascending.
        adj_edge: edge row id for each CSR slot.
    """

    n: int
    edges: np.ndarray
    indptr: np.ndarray = field(repr=False)
    indices: np.ndarray = field(repr=False)
    adj_edge: np.ndarray = field(repr=False)
    _edge_keys: np.ndarray = field(repr=False)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        """Builds a graph, normalizing each pair to (min, max) and sorting.

        Raises:
            ValueError: on a negative n, a self-loop, an out-of-range vertex,
                or a duplicate edge.
        """
        if n < 0:
            raise ValueError(f"vertex count must be non-negative, got {n}")
        rows = []
        for u, v in edges:
            u, v = int(u), int(v)
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) outside 0..{n - 1}")
            rows.append((u, v) if u < v else (v, u))
        arr = np.array(sorted(rows), dtype=np.int32).reshape(len(rows), 2)
        if len(rows) > 1 and (np.diff(arr[:, 0].astype(np.int64) * n + arr[:, 1]) == 0).any():
            raise ValueError("duplicate edge")
        return cls._from_sorted(n, arr)

    @classmethod
    def _from_sorted(cls, n: int, arr: np.ndarray) -> "Graph":
        """Wraps an already validated, sorted (m, 2) int32 edge array."""
        indptr, indices, adj_edge = _build_csr(n, arr)
        keys = arr[:, 0].astype(np.int64) * n + arr[:, 1] if arr.size else np.zeros(0, np.int64)
        return cls(
            n=n,
            edges=_freeze(arr),
            indptr=_freeze(indptr),
            indices=_freeze(indices),
            adj_edge=_freeze(adj_edge),
            _edge_keys=_freeze(keys),
        )

    @property
    def m(self) -> int:
        return self.edges.shape[0]

    def degrees(self) -> np.ndarray:
        return np.diff(self.indptr)

    def neighbors(self, v: int) -> np.ndarray:
        return self.indices[self.indptr[v]:self.indptr[v + 1]]

    def edge_id(self, u: int, v: int) -> int:
        """Row index of edge {u, v}, or -1 if absent."""
        if u == v or not (0 <= u < self.n and 0 <= v < self.n):
            return -1
        if u > v:
            u, v = v, u
        key = u * self.n + v
        i = int(np.searchsorted(self._edge_keys, key))
        if i < self.m and self._edge_keys[i] == key:
            return i
        return -1

    def has_edge(self, u: int, v: int) -> bool:
        return self.edge_id(u, v) >= 0

    def edge_ids(self, pairs: np.ndarray) -> np.ndarray:
        """Vectorized edge_id for an (r, 2) array of normalized pairs."""
        if pairs.size == 0:
            return np.zeros(0, np.int64)
        lo = np.minimum(pairs[:, 0], pairs[:, 1]).astype(np.int64)
        hi = np.maximum(pairs[:, 0], pairs[:, 1]).astype(np.int64)
        keys = lo * self.n + hi
        idx = np.searchsorted(self._edge_keys, keys)
        idx = np.minimum(idx, max(self.m - 1, 0))
        ok = (self.m > 0) & (self._edge_keys[idx] == keys)
        return np.where(ok, idx, -1)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Graph)
            and self.n == other.n
            and self.edges.shape == other.edges.shape
            and bool(np.array_equal(self.edges, other.edges))
        )

    def __hash__(self):
        return hash((self.n, self.edges.tobytes()))


@dataclass(frozen=True, eq=False)
class EdgeColoring:
    """Total assignment of colors 1..palette_size to a fixed edge set.

    The assignment is keyed by normalized (u, v) pairs in the same sorted
    order as the owning graph's edge array; colors[i] colors edges[i].
    palette_size may exceed the number of colors actually used.
    """

    palette_size: int
    edges: np.ndarray
    colors: np.ndarray

    @classmethod
    def from_colors(cls, g: Graph, palette_size: int, colors: Sequence[int] | np.ndarray) -> "EdgeColoring":
        """Colors g's edges in edge-array order.

        Raises:
            ValueError: on a length mismatch or a color outside 1..palette_size.
        """
        arr = np.asarray(colors, dtype=np.int32).copy()
        if palette_size < 1:
            raise ValueError(f"palette_size must be positive, got {palette_size}")
        if arr.shape != (g.m,):
            raise ValueError(f"expected {g.m} colors, got {arr.shape}")
        if g.m and (arr.min() < 1 or arr.max() > palette_size):
            raise ValueError("color outside 1..palette_size")
        return cls(palette_size=palette_size, edges=g.edges, colors=_freeze(arr))

    @classmethod
    def monochromatic(cls, g: Graph, color: int = 1, palette_size: int = 1) -> "EdgeColoring":
        return cls.from_colors(g, palette_size, np.full(g.m, color, np.int32))

    def color_of(self, u: int, v: int) -> int:
        """Color of edge {u, v}.

        Raises:
            EdgeNotInGraph: if the pair is not an edge of the keyed set.
        """
        if u > v:
            u, v = v, u
        m = self.edges.shape[0]
        lo = np.searchsorted(self.edges[:, 0], u, side="left")
        hi = np.searchsorted(self.edges[:, 0], u, side="right")
        for i in range(lo, hi):
            if self.edges[i, 1] == v:
                return int(self.colors[i])
        raise EdgeNotInGraph(f"({u}, {v}) is not a colored edge")

    def matches(self, g: Graph) -> bool:
        """True when this coloring is keyed by exactly g's edge set."""
        return self.edges.shape == g.edges.shape and bool(np.array_equal(self.edges, g.edges))

    def adj_colors(self, g: Graph) -> np.ndarray:
        """Per-CSR-slot colors aligned with g.indices."""
        if not self.matches(g):
            raise EdgeNotInGraph("coloring is not keyed by this graph's edge set")
        if g.m == 0:
            return np.zeros(0, np.int32)
        return self.colors[g.adj_edge]

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, EdgeColoring)
            and self.palette_size == other.palette_size
            and bool(np.array_equal(self.edges, other.edges))
            and bool(np.array_equal(self.colors, other.colors))
        )

    def __hash__(self):
        return hash((self.palette_size, self.edges.tobytes(), self.colors.tobytes()))


@dataclass(frozen=True)
class RandomModel:
    """G(n, p) sampling parameters: n vertices, edge probability p, 64-bit seed."""

    n: int
    p: float
    seed: int

    def __post_init__(self):
        if self.n < 0:
            raise ValueError(f"n must be non-negative, got {self.n}")
        if not (0.0 <= self.p <= 1.0):
            raise ValueError(f"p must lie in [0, 1], got {self.p}")
        if not (0 <= int(self.seed) < 2 ** 64):
            raise ValueError("seed must fit in 64 bits")


def _pair_offsets(n: int) -> np.ndarray:
    """offsets[u] = flat index of pair (u, u+1) in lexicographic pair order."""
    u = np.arange(n, dtype=np.int64)
    return u * (2 * n - u - 1) // 2


def _flat_to_pairs(flat: np.ndarray, n: int) -> np.ndarray:
    offsets = _pair_offsets(n)
    u = np.searchsorted(offsets, flat, side="right") - 1
    v = u + 1 + (flat - offsets[u])
    return np.stack([u, v], axis=1).astype(np.int32)


def gnp_sample(model: RandomModel) -> Graph:
    """Samples G(n, p) reproducibly from the model's seed.

    The PCG64 stream is consumed in lexicographic pair order: for p >= 0.2
    one uniform variate per pair, drawn row by row (all pairs (u, *) in one
    call); for 0 < p < 0.2 batched geometric skip lengths
    1 + floor(log(1 - U) / log(1 - p)) between successive edges.
    """
    n, p = model.n, model.p
    total = n * (n - 1) // 2
    if total == 0 or p == 0.0:
        return Graph._from_sorted(n, np.zeros((0, 2), np.int32))
    if p == 1.0:
        pairs = _flat_to_pairs(np.arange(total, dtype=np.int64), n)
        return Graph._from_sorted(n, pairs)
    rng = np.random.default_rng(int(model.seed))
    if p >= 0.2:
        rows = []
        for u in range(n - 1):
            hits = np.flatnonzero(rng.random(n - 1 - u) < p)
            if hits.size:
                rows.append(np.stack([np.full(hits.size, u, np.int64), u + 1 + hits], axis=1))
        if not rows:
            return Graph._from_sorted(n, np.zeros((0, 2), np.int32))
        pairs = np.concatenate(rows).astype(np.int32)
        return Graph._from_sorted(n, pairs)
    # geometric skipping over the flat pair order
    log1m = math.log1p(-p)
    flat: list[np.ndarray] = []
    pos = -1
    batch = max(1024, int(total * p * 1.2) + 16)
    while pos < total:
        u01 = rng.random(batch)
        gaps = 1 + np.floor(np.log1p(-u01) / log1m).astype(np.int64)
        idx = pos + np.cumsum(gaps)
        flat.append(idx[idx < total])
        if idx[-1] >= total:
            break
        pos = int(idx[-1])
    chosen = np.concatenate(flat) if flat else np.zeros(0, np.int64)
    chosen = chosen[chosen < total]
    return Graph._from_sorted(n, _flat_to_pairs(chosen, n))


def is_connected(g: Graph) -> bool:
    """True iff g has a single component; n <= 1 counts as connected."""
    if g.n <= 1:
        return True
    if g.m == 0:
        return False
    return bool(kernels.reach_mask(g.indptr, g.indices, 0).all())


def bfs_distances(g: Graph, src: int) -> np.ndarray:
    """Shortest-path hop distances from src; -1 marks unreachable vertices."""
    if not (0 <= src < g.n):
        raise ValueError(f"source {src} outside 0..{g.n - 1}")
    return kernels.bfs_dist(g.indptr, g.indices, src)


def diameter(g: Graph) -> int | float:
    """Maximum pairwise distance; math.inf if disconnected, 0 if n <= 1."""
    if g.n <= 1:
        return 0
    best = 0
    for src in range(g.n):
        dist = kernels.bfs_dist(g.indptr, g.indices, src)
        if (dist < 0).any():
            return math.inf
        best = max(best, int(dist.max()))
    return best


def is_2_connected(g: Graph) -> bool:
    """True iff n >= 3, connected, and removing any one vertex keeps it connected."""
    if g.n < 3 or not is_connected(g):
        return False
    for v in range(g.n):
        keep = np.ones(g.n, bool)
        keep[v] = False
        sub = induced_subgraph(g, np.flatnonzero(keep))
        if not is_connected(sub):
            return False
    return True


def induced_subgraph(g: Graph, vertices: np.ndarray) -> Graph:
    """Induced subgraph on the given vertices, relabeled 0..len-1 in ascending order."""
    verts = np.unique(np.asarray(vertices, dtype=np.int64))
    if verts.size and (verts[0] < 0 or verts[-1] >= g.n):
        raise ValueError("vertex outside 0..n-1")
    local = np.full(g.n, -1, np.int64)
    local[verts] = np.arange(verts.size)
    if g.m == 0:
        return Graph._from_sorted(int(verts.size), np.zeros((0, 2), np.int32))
    keep = (local[g.edges[:, 0]] >= 0) & (local[g.edges[:, 1]] >= 0)
    sub = local[g.edges[keep]].astype(np.int32)
    return Graph._from_sorted(int(verts.size), sub.reshape(-1, 2))


def complete_graph(n: int) -> Graph:
    return gnp_sample(RandomModel(n=n, p=1.0, seed=0))


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise ValueError(f"cycle needs at least 3 vertices, got {n}")
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def path_graph(n: int) -> Graph:
    if n < 1:
        raise ValueError(f"path needs at least 1 vertex, got {n}")
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def star_graph(leaves: int) -> Graph:
    return Graph.from_edges(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def is_complete(g: Graph) -> bool:
    return g.m == g.n * (g.n - 1) // 2


# ---------------------------------------------------------------------------
# text formats


def write_graph(g: Graph) -> str:
    """Graph text: "n m" then one "u v" line per edge, lexicographic order."""
    lines = [f"{g.n} {g.m}"]
    lines.extend(f"{int(u)} {int(v)}" for u, v in g.edges)
    return "\n".join(lines) + "\n"


def read_graph(text: str) -> Graph:
    """Parses the graph text format.

    Raises:
        FormatError: malformed line, bad counts, vertex out of range,
            u >= v, or duplicate edge.
    """
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise FormatError("empty graph text")
    head = lines[0].split()
    if len(head) != 2:
        raise FormatError(f"header must be 'n m', got {lines[0]!r}")
    try:
        n, m = int(head[0]), int(head[1])
    except ValueError as exc:
        raise FormatError(f"header must be integers, got {lines[0]!r}") from exc
    if n < 0 or m < 0:
        raise FormatError("n and m must be non-negative")
    if len(lines) - 1 != m:
        raise FormatError(f"expected {m} edge lines, found {len(lines) - 1}")
    rows = []
    for ln_no, ln in enumerate(lines[1:], start=2):
        parts = ln.split()
        if len(parts) != 2:
            raise FormatError(f"line {ln_no}: expected 'u v', got {ln!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError as exc:
            raise FormatError(f"line {ln_no}: non-integer vertex") from exc
        if not (0 <= u < n and 0 <= v < n):
            raise FormatError(f"line {ln_no}: vertex outside 0..{n - 1}")
        if u >= v:
            raise FormatError(f"line {ln_no}: require u < v, got {u} {v}")
        rows.append((u, v))
    if len(set(rows)) != len(rows):
        raise FormatError("duplicate edge")
    return Graph.from_edges(n, rows)


def write_coloring(c: EdgeColoring) -> str:
    """Coloring text: "k" then one "u v c" line per edge, lexicographic order."""
    lines = [f"{c.palette_size}"]
    lines.extend(
        f"{int(u)} {int(v)} {int(col)}" for (u, v), col in zip(c.edges, c.colors)
    )
    return "\n".join(lines) + "\n"


def read_coloring(g: Graph, text: str) -> EdgeColoring:
    """Parses a coloring for g's edge set.

    Raises:
        FormatError: malformed line, color outside 1..k, duplicate edge line.
        EdgeNotInGraph: a line names an edge g does not have.
        MissingColor: fewer lines than g has edges (some edge uncolored).
    """
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise FormatError("empty coloring text")
    try:
        k = int(lines[0].strip())
    except ValueError as exc:
        raise FormatError(f"palette line must be an integer, got {lines[0]!r}") from exc
    if k < 1:
        raise FormatError(f"palette size must be positive, got {k}")
    if len(lines) - 1 < g.m:
        raise MissingColor(f"expected {g.m} colored edges, found {len(lines) - 1}")
    colors = np.zeros(g.m, np.int32)
    seen = np.zeros(g.m, bool)
    for ln_no, ln in enumerate(lines[1:], start=2):
        parts = ln.split()
        if len(parts) != 3:
            raise FormatError(f"line {ln_no}: expected 'u v c', got {ln!r}")
        try:
            u, v, col = int(parts[0]), int(parts[1]), int(parts[2])
        except ValueError as exc:
            raise FormatError(f"line {ln_no}: non-integer field") from exc
        eid = g.edge_id(u, v)
        if eid < 0:
            raise EdgeNotInGraph(f"line {ln_no}: ({u}, {v}) is not an edge")
        if seen[eid]:
            raise FormatError(f"line {ln_no}: edge ({u}, {v}) colored twice")
        if not (1 <= col <= k):
            raise FormatError(f"line {ln_no}: color {col} outside 1..{k}")
        seen[eid] = True
        colors[eid] = col
    if not seen.all():
        raise MissingColor("some edge of the graph is uncolored")
    return EdgeColoring.from_colors(g, k, colors)


def write_text_atomic(path: str, text: str) -> None:
    """Writes text to path atomically (temp file then os.replace)."""
    tmp = f"{path}.tmp.{os.getpid()}"
    with open(tmp, "w", encoding="utf-8") as fh:
        fh.write(text)
    os.replace(tmp, path)
