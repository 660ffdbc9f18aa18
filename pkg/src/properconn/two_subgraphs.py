"""Coloring a graph through two connected spanning subgraphs.

Given two connected spanning subgraphs that overlap in t edges, a palette of
t + 4 colors suffices: every shared edge gets its own color above 4, the
remaining edges of the first subgraph alternate colors 1/2 by the parity of
their breadth-first layer from a root x, the second subgraph's edges
alternate 3/4 on its own layering, and everything else gets color 1.  Any
two vertices are then joined by climbing to x inside the first subgraph and
descending inside the second, with the layer alternation keeping each half
proper.

The module also packs two edge-disjoint spanning trees by matroid-union
augmentation — when they exist the scheme above yields a four-coloring.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import kernels
from .errors import EdgeNotInGraph, GraphDisconnected, NotSpanning, SubgraphDisconnected
from .graph import EdgeColoring, Graph

__all__ = [
    "LayerDecomposition",
    "bfs_layers",
    "color_via_two_subgraphs",
    "find_two_edge_disjoint_spanning_trees",
    "pc_upper_via_trees",
]


def _norm(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


def _normalize_edge_set(edges: Iterable[Sequence[int]]) -> list[tuple[int, int]]:
    return sorted({_norm(int(u), int(v)) for u, v in edges})


@dataclass(frozen=True)
class LayerDecomposition:
    """Breadth-first distance classes from a root vertex.

    ``layers[j]`` holds the vertices at distance exactly j from ``root``;
    layer 0 is the root alone, and every edge of the underlying graph joins
    vertices in the same or adjacent layers.
    """

    root: int
    layers: tuple[tuple[int, ...], ...]

    def depth_of(self, v: int) -> int:
        for j, layer in enumerate(self.layers):
            if v in layer:
                return j
        raise ValueError(f"vertex {v} is in no layer")


def bfs_layers(g: Graph, x: int) -> LayerDecomposition:
    """Groups vertices by breadth-first distance from x.

    Raises:
        ValueError: if x is out of range.
        GraphDisconnected: if some vertex is unreachable from x.
    """
    if not 0 <= x < g.n:
        raise ValueError(f"root {x} out of range for {g.n} vertices")
    dist = kernels.bfs_dist(g.indptr, g.indices, x)
    if np.any(dist < 0):
        missing = int(np.flatnonzero(dist < 0)[0])
        raise GraphDisconnected(f"vertex {missing} is unreachable from {x}")
    layers = []
    for j in range(int(dist.max()) + 1):
        layers.append(tuple(int(v) for v in np.flatnonzero(dist == j)))
    return LayerDecomposition(root=x, layers=tuple(layers))


def _spanning_subgraph(g: Graph, edges: list[tuple[int, int]], name: str) -> Graph:
    """Validates an edge list as a connected spanning subgraph of g."""
    for u, v in edges:
        if not g.has_edge(u, v):
            raise EdgeNotInGraph(f"{name} contains ({u}, {v}) which is not an edge of the graph")
    sub = Graph.from_edges(g.n, edges)
    deg = sub.degrees()
    if g.n > 1 and int(deg.min()) == 0:
        missing = int(np.flatnonzero(deg == 0)[0])
        raise NotSpanning(f"{name} leaves vertex {missing} uncovered")
    reach = kernels.reach_mask(sub.indptr, sub.indices, 0)
    if not bool(reach.all()):
        raise SubgraphDisconnected(f"{name} is not connected")
    return sub


def color_via_two_subgraphs(
    g: Graph,
    e1: Iterable[Sequence[int]],
    e2: Iterable[Sequence[int]],
    x: int = 0,
) -> EdgeColoring:
    """Colors g with t + 4 colors from two connected spanning subgraphs.

    t is the overlap size |e1 ∩ e2|.  Shared edges take the distinct colors
    5..4+t in lexicographic order.  A remaining e1 edge between layers j and
    j+1 of the e1 layering from x gets color 1 when j is odd and 2 when j is
    even (so root edges get 2); same-layer e1 edges get 1.  Remaining e2
    edges follow the same rule on the e2 layering with colors 3/4 and
    same-layer color 3.  Edges in neither subgraph get color 1.

    Raises:
        ValueError: if x is out of range.
        EdgeNotInGraph: if e1 or e2 contains a non-edge of g.
        NotSpanning: if a subgraph leaves some vertex uncovered.
        SubgraphDisconnected: if a subgraph is disconnected.
    """
    if not 0 <= x < g.n:
        raise ValueError(f"root {x} out of range for {g.n} vertices")
    set1 = _normalize_edge_set(e1)
    set2 = _normalize_edge_set(e2)
    sub1 = _spanning_subgraph(g, set1, "first subgraph")
    sub2 = _spanning_subgraph(g, set2, "second subgraph")
    shared = sorted(set(set1) & set(set2))
    shared_color = {e: 5 + i for i, e in enumerate(shared)}
    only1 = set(set1) - shared_color.keys()
    only2 = set(set2) - shared_color.keys()
    d1 = kernels.bfs_dist(sub1.indptr, sub1.indices, x)
    d2 = kernels.bfs_dist(sub2.indptr, sub2.indices, x)

    def layer_color(du: int, dv: int, low: int, high: int, same: int) -> int:
        if du == dv:
            return same
        return low if min(du, dv) % 2 == 1 else high

    colors = np.ones(g.m, np.int32)
    for i, (u, v) in enumerate(g.edges.tolist()):
        e = (u, v)
        if e in shared_color:
            colors[i] = shared_color[e]
        elif e in only1:
            colors[i] = layer_color(int(d1[u]), int(d1[v]), 1, 2, 1)
        elif e in only2:
            colors[i] = layer_color(int(d2[u]), int(d2[v]), 3, 4, 3)
    return EdgeColoring.from_colors(g, len(shared) + 4, colors)


# ---------------------------------------------------------------------------
# edge-disjoint spanning tree packing


class _Forest:
    """Incremental forest over n vertices with tree-path queries."""

    def __init__(self, n: int):
        self.n = n
        self.adj: list[dict[int, tuple[int, int]]] = [dict() for _ in range(n)]
        self.size = 0

    def has(self, e: tuple[int, int]) -> bool:
        u, v = e
        return v in self.adj[u]

    def add(self, e: tuple[int, int]) -> None:
        u, v = e
        self.adj[u][v] = e
        self.adj[v][u] = e
        self.size += 1

    def remove(self, e: tuple[int, int]) -> None:
        u, v = e
        del self.adj[u][v]
        del self.adj[v][u]
        self.size -= 1

    def path_edges(self, s: int, t: int) -> list[tuple[int, int]] | None:
        """Edges of the unique forest path s..t, or None if disconnected."""
        if s == t:
            return []
        prev: dict[int, tuple[int, tuple[int, int]]] = {s: (-1, (-1, -1))}
        queue = deque([s])
        while queue:
            w = queue.popleft()
            for nb, e in self.adj[w].items():
                if nb in prev:
                    continue
                prev[nb] = (w, e)
                if nb == t:
                    path = []
                    cur = t
                    while cur != s:
                        w2, e2 = prev[cur]
                        path.append(e2)
                        cur = w2
                    return path
                queue.append(nb)
        return None

    def edges(self) -> list[tuple[int, int]]:
        out = set()
        for u in range(self.n):
            for e in self.adj[u].values():
                out.add(e)
        return sorted(out)


def find_two_edge_disjoint_spanning_trees(
    g: Graph,
) -> tuple[tuple[tuple[int, int], ...], tuple[tuple[int, int], ...]] | None:
    """Packs two edge-disjoint spanning trees, or returns None.

    Grows two forests by augmentation over the exchange structure: an
    unused edge enters a forest directly when it closes no cycle there;
    otherwise each edge on the cycle it would close may be displaced into
    the other forest, and a breadth-first search over such displacement
    chains finds an augmenting sequence whenever one exists.  The search is
    exhaustive, so None means no pair of edge-disjoint spanning trees
    exists (in particular whenever m < 2(n-1)).
    """
    n = g.n
    target = max(n - 1, 0)
    if g.m < 2 * target:
        return None
    forests = {1: _Forest(n), 2: _Forest(n)}
    all_edges = [_norm(int(u), int(v)) for u, v in g.edges.tolist()]
    in_forest: dict[tuple[int, int], int] = {}

    def try_augment(e: tuple[int, int]) -> bool:
        # Breadth-first search over states (edge, forest index it may enter).
        pred: dict[tuple[tuple[int, int], int], tuple[tuple[int, int], int]] = {}
        queue = deque([(e, 1), (e, 2)])
        seen = {(e, 1), (e, 2)}
        while queue:
            x, i = queue.popleft()
            cyc = forests[i].path_edges(*x)
            if cyc is None:
                # x fits in forest i; replay the displacement chain.
                cur, dest = x, i
                while True:
                    if cur in in_forest:
                        forests[in_forest[cur]].remove(cur)
                    forests[dest].add(cur)
                    in_forest[cur] = dest
                    if (cur, dest) not in pred:
                        break
                    cur, dest = pred[(cur, dest)]
                return True
            for f in cyc:
                state = (f, 3 - i)
                if state not in seen:
                    seen.add(state)
                    pred[state] = (x, i)
                    queue.append(state)
        return False

    total = 0
    progress = True
    while total < 2 * target and progress:
        progress = False
        for e in all_edges:
            if e in in_forest:
                continue
            if try_augment(e):
                total += 1
                progress = True
                if total == 2 * target:
                    break
    if total < 2 * target:
        return None
    t1 = tuple(forests[1].edges())
    t2 = tuple(forests[2].edges())
    return t1, t2


def pc_upper_via_trees(g: Graph) -> tuple[EdgeColoring, int] | None:
    """Four-coloring from an edge-disjoint spanning tree pair, if one exists.

    Returns (coloring, 4) built by color_via_two_subgraphs over the pair
    found by find_two_edge_disjoint_spanning_trees, or None when no pair
    exists.
    """
    pair = find_two_edge_disjoint_spanning_trees(g)
    if pair is None:
        return None
    coloring = color_via_two_subgraphs(g, pair[0], pair[1], 0)
    return coloring, 4
