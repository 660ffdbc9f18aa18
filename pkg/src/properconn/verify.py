"""Deciding proper-path connectivity of an edge-colored graph.

A path is proper when no two consecutive edges share a color; a coloring
properly connects a graph when every pair of distinct vertices is joined by
a proper path.  Walks and paths genuinely differ here: a color-alternating
walk between two vertices can exist while no color-alternating simple path
does, so walk reachability is only a sound negative filter.

The decision procedure is layered and exact:

1. A colored-state BFS from the source finds all color-alternating walks.
   If no walk reaches the target, no proper path exists (complete filter).
2. The shortest walk to each reachable end state is extracted; if any is
   vertex-simple it is itself a proper path (sound certificate).
3. Otherwise a depth-first search over simple paths decides the pair
   exactly, pruning branches whose remaining stretch cannot be completed
   by any alternating walk.  Worst case exponential, reached only on
   adversarial colorings; the sweep over random constructions almost always
   resolves pairs in steps 1-2.

By default the exact search runs to completion, so answers are always
exact.  Callers that must stay responsive on adversarial inputs can pass a
finite dfs_budget; if the bounded search cannot decide a pair within the
budget, BudgetExceeded is raised rather than ever returning a guess.

All functions are pure; results are deterministic, including certificate
paths (ties broken by ascending state and adjacency order).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import BudgetExceeded, EdgeNotInGraph
from .graph import EdgeColoring, Graph


@dataclass(frozen=True)
class PathCertificate:
    """A vertex-simple path, endpoints included."""

    vertices: tuple[int, ...]


@dataclass(frozen=True)
class ConnectivityReport:
    """Outcome of checking every pair of distinct vertices.

    failing_pairs lists, in lexicographic order, the unordered pairs with no
    proper path; properly_connected holds iff it is empty.
    pair_count_checked counts the pairs actually examined (smaller than
    C(n, 2) only when early exit was requested and triggered).
    """

    properly_connected: bool
    failing_pairs: tuple[tuple[int, int], ...]
    pair_count_checked: int


def _require_match(g: Graph, c: EdgeColoring) -> None:
    if not c.matches(g):
        raise EdgeNotInGraph("coloring is not keyed by this graph's edge set")


def is_proper_path(g: Graph, c: EdgeColoring, path: PathCertificate | tuple[int, ...] | list[int]) -> bool:
    """True iff the vertex sequence is a simple path with alternating colors.

    Length-0 and length-1 sequences are proper.  A repeated vertex, a
    non-edge step, or two consecutive edges of equal color yields False.

    Raises:
        ValueError: if a vertex lies outside 0..n-1.
    """
    _require_match(g, c)
    verts = tuple(path.vertices) if isinstance(path, PathCertificate) else tuple(path)
    for v in verts:
        if not (0 <= v < g.n):
            raise ValueError(f"vertex {v} outside 0..{g.n - 1}")
    if len(set(verts)) != len(verts):
        return False
    prev_color = -1
    for a, b in zip(verts, verts[1:]):
        eid = g.edge_id(a, b)
        if eid < 0:
            return False
        col = int(c.colors[eid])
        if col == prev_color:
            return False
        prev_color = col
    return True


def proper_walk_reachable(g: Graph, c: EdgeColoring, u: int) -> frozenset[int]:
    """Vertices reachable from u by a walk whose consecutive edges differ in color.

    Computed by BFS over (vertex, last-edge-color) states with a virtual
    start allowing any first color.  A superset of the proper-path-reachable
    set; u itself is always included.
    """
    _require_match(g, c)
    if not (0 <= u < g.n):
        raise ValueError(f"vertex {u} outside 0..{g.n - 1}")
    k = c.palette_size
    if g.m == 0:
        return frozenset({u})
    dist, _ = kernels.walk_bfs(g.indptr, g.indices, c.adj_colors(g), k, u)
    hit = (dist.reshape(g.n, k) >= 0).any(axis=1)
    hit[u] = True
    return frozenset(int(v) for v in np.flatnonzero(hit))


def _extract_walk(parent: np.ndarray, k: int, src: int, state: int) -> list[int]:
    """Vertex sequence of the BFS walk ending in the given state."""
    out = []
    s = state
    while s != -2:
        out.append(s // k)
        s = int(parent[s])
    out.append(src)
    out.reverse()
    return out


def proper_path_exists(
    g: Graph, c: EdgeColoring, u: int, v: int, *, dfs_budget: int = 0
) -> PathCertificate | None:
    """A certificate proper path from u to v, or None when none exists.

    Path-exact: walk reachability alone never accepts a pair.  The returned
    certificate always satisfies is_proper_path; it is deterministic but not
    necessarily a shortest proper path.

    dfs_budget bounds the steps of the exact path search (0 = unlimited,
    the default).  A bounded search never degrades to a guess: if the
    budget runs out before the pair is decided, BudgetExceeded is raised.

    Raises:
        ValueError: on out-of-range or equal endpoints.
        BudgetExceeded: when a finite dfs_budget was exhausted undecided.
    """
    _require_match(g, c)
    if not (0 <= u < g.n and 0 <= v < g.n):
        raise ValueError("endpoint outside 0..n-1")
    if u == v:
        raise ValueError("endpoints must be distinct")
    if g.m == 0:
        return None
    k = c.palette_size
    adj_color = c.adj_colors(g)
    dist, parent = kernels.walk_bfs(g.indptr, g.indices, adj_color, k, u)
    reachable = False
    for ci in range(k):
        t = v * k + ci
        if dist[t] < 0:
            continue
        reachable = True
        walk = _extract_walk(parent, k, u, t)
        if len(set(walk)) == len(walk):
            return PathCertificate(vertices=tuple(int(x) for x in walk))
    if not reachable:
        return None
    rdist, _ = kernels.walk_bfs(g.indptr, g.indices, adj_color, k, v)
    path = kernels.path_dfs(g.indptr, g.indices, adj_color, k, u, v, rdist, dfs_budget)
    if path.size == 1 and path[0] == -1:
        raise BudgetExceeded(
            f"path search for pair ({u}, {v}) undecided within {dfs_budget} steps"
        )
    if path.size == 0:
        return None
    return PathCertificate(vertices=tuple(int(x) for x in path))


def brute_force_proper_path(g: Graph, c: EdgeColoring, u: int, v: int) -> PathCertificate | None:
    """Independent oracle: plain DFS over all simple u-v paths.

    Prunes only prefixes that repeat a color on consecutive edges; no walk
    filter, no shared kernels.  Intended for n <= 12.
    """
    _require_match(g, c)
    if u == v:
        raise ValueError("endpoints must be distinct")
    if g.n > 12:
        raise ValueError("brute-force oracle is limited to n <= 12")
    adj = {w: [int(x) for x in g.neighbors(w)] for w in range(g.n)}
    colors = {
        (int(a), int(b)): int(col)
        for (a, b), col in zip(g.edges, c.colors)
    }

    def edge_color(a: int, b: int) -> int:
        return colors[(a, b) if a < b else (b, a)]

    stack_path = [u]
    on_path = {u}

    def dfs(last_color: int) -> bool:
        here = stack_path[-1]
        for w in adj[here]:
            if w in on_path:
                continue
            col = edge_color(here, w)
            if col == last_color:
                continue
            stack_path.append(w)
            if w == v:
                return True
            on_path.add(w)
            if dfs(col):
                return True
            on_path.remove(w)
            stack_path.pop()
        return False

    if dfs(-1):
        return PathCertificate(vertices=tuple(stack_path))
    return None


def is_properly_connected(
    g: Graph,
    c: EdgeColoring,
    *,
    early_exit: bool = False,
    restrict_pairs: list[tuple[int, int]] | None = None,
    dfs_budget: int = 0,
) -> ConnectivityReport:
    """Checks proper-path connectivity over all pairs of distinct vertices.

    Sweeps sources in ascending order; for each source the walk BFS settles
    most targets (no walk = failing, simple shortest walk = connected) and
    the exact path search decides the rest.  With early_exit the sweep stops
    at the first failing pair; otherwise the full lexicographic failing-pairs
    list is produced.  restrict_pairs limits the check to the given pairs
    (used by the repair loop to re-test previously failing pairs cheaply).

    dfs_budget bounds each exact path search (0 = unlimited, the default);
    the report is always exact, and BudgetExceeded is raised if a bounded
    search could not decide some pair.
    """
    _require_match(g, c)
    k = c.palette_size
    if g.n <= 1:
        return ConnectivityReport(True, (), 0)
    adj_color = c.adj_colors(g) if g.m else np.zeros(0, np.int32)
    if restrict_pairs is not None:
        failing = []
        checked = 0
        for a, b in restrict_pairs:
            u, v = (a, b) if a < b else (b, a)
            checked += 1
            if proper_path_exists(g, c, u, v, dfs_budget=dfs_budget) is None:
                failing.append((u, v))
                if early_exit:
                    break
        failing.sort()
        return ConnectivityReport(not failing, tuple(failing), checked)
    failing = []
    checked = 0
    stop = False
    for u in range(g.n - 1):
        if g.m == 0:
            pend_src = []
            fail_here = [(u, v) for v in range(u + 1, g.n)]
            checked += g.n - 1 - u
        else:
            dist, parent = kernels.walk_bfs(g.indptr, g.indices, adj_color, k, u)
            status = kernels.certify_targets(g.n, k, u, dist, parent)
            fail_here = []
            pend_src = []
            for v in range(u + 1, g.n):
                checked += 1
                st = status[v]
                if st == 0:
                    fail_here.append((u, v))
                elif st == 2:
                    pend_src.append(v)
                if early_exit and fail_here:
                    break
            if not (early_exit and fail_here):
                for v in pend_src:
                    rdist, _ = kernels.walk_bfs(g.indptr, g.indices, adj_color, k, v)
                    path = kernels.path_dfs(
                        g.indptr, g.indices, adj_color, k, u, v, rdist, dfs_budget
                    )
                    if path.size == 1 and path[0] == -1:
                        raise BudgetExceeded(
                            f"path search for pair ({u}, {v}) undecided"
                            f" within {dfs_budget} steps"
                        )
                    if path.size == 0:
                        fail_here.append((u, v))
        failing.extend(fail_here)
        if early_exit and failing:
            stop = True
        if stop:
            break
    failing.sort()
    return ConnectivityReport(not failing, tuple(failing), checked)
