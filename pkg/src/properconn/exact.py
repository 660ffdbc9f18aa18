"""Exact proper connection number for small graphs by canonical-order search.

The solver enumerates k-colorings in canonical order (the color of edge i
never exceeds 1 + the maximum color among earlier edges), which quotients
away color permutations, and accepts the first coloring under which every
vertex pair has a proper path.  Candidate checking runs against a
precomputed table of all simple paths per pair, equivalent to verifying
each candidate with the connectivity checker pair by pair in lexicographic
order with early exit.

The only closed form used inside the solver is the complete-graph shortcut
(one color suffices iff the graph is complete); star and tree formulas stay
test oracles so the search keeps proving them from scratch.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import BudgetExceeded, GraphDisconnected
from .graph import EdgeColoring, Graph, is_complete, is_connected

# largest edge count the exhaustive search accepts, by palette size
BUDGET_K2 = 16
BUDGET_K3 = 12


@dataclass(frozen=True)
class PcResult:
    """Exact solver outcome.

    witness is a properly connecting coloring with palette_size = value; no
    coloring with value - 1 colors properly connects (guaranteed by the
    ascending search over k).  The recorded bounds bracket the search:
    lower_bound_used is 1 for complete graphs and 2 otherwise (one color
    properly connects exactly the complete graphs); upper_bound_used is m
    (an all-distinct coloring makes every path proper).
    """

    value: int
    witness: EdgeColoring
    lower_bound_used: int
    upper_bound_used: int


def _search_budget(k: int) -> int:
    return BUDGET_K2 if k <= 2 else BUDGET_K3


def simple_path_tables(g: Graph):
    """All simple paths between all vertex pairs, as flat edge-id runs.

    Returns (pair_ptr, path_ptr, path_edges): pair t (the t-th pair in
    lexicographic order over u < v) owns paths path_ptr[pair_ptr[t]] ..
    path_ptr[pair_ptr[t+1]]; each path is a run of edge ids in path_edges.
    Exponential in general; callers enforce the search budget first.
    """
    n = g.n
    adj = [[(int(w), g.edge_id(v, w)) for w in g.neighbors(v)] for v in range(n)]
    per_pair: dict[tuple[int, int], list[list[int]]] = {}

    def dfs(src: int, here: int, on_path: list[bool], edges_used: list[int]):
        for w, eid in adj[here]:
            if on_path[w]:
                continue
            edges_used.append(eid)
            if w > src:
                per_pair.setdefault((src, w), []).append(edges_used.copy())
            on_path[w] = True
            dfs(src, w, on_path, edges_used)
            on_path[w] = False
            edges_used.pop()

    for src in range(n):
        on_path = [False] * n
        on_path[src] = True
        dfs(src, src, on_path, [])

    pair_ptr = [0]
    path_ptr = [0]
    flat: list[int] = []
    for u in range(n):
        for v in range(u + 1, n):
            paths = per_pair.get((u, v), [])
            for p in paths:
                flat.extend(p)
                path_ptr.append(len(flat))
            pair_ptr.append(len(path_ptr) - 1)
    flat_arr = np.asarray(flat, np.int64) if flat else np.zeros(0, np.int64)
    return np.asarray(pair_ptr, np.int64), np.asarray(path_ptr, np.int64), flat_arr


def pc_decision(g: Graph, k: int, budget: int | None = None) -> EdgeColoring | None:
    """First properly connecting k-coloring in canonical order, or None.

    Raises:
        GraphDisconnected: g is not connected.
        BudgetExceeded: m exceeds the exhaustive-search budget for this k.
        ValueError: n < 2 or k < 1.
    """
    if g.n < 2:
        raise ValueError("need at least two vertices")
    if k < 1:
        raise ValueError("palette size must be positive")
    if not is_connected(g):
        raise GraphDisconnected("exact search requires a connected graph")
    cap = budget if budget is not None else _search_budget(k)
    if g.m > cap:
        raise BudgetExceeded(f"m={g.m} exceeds search budget {cap} for k={k}")
    pair_ptr, path_ptr, path_edges = simple_path_tables(g)
    colors = kernels.pc_engine(pair_ptr, path_ptr, path_edges, g.m, k)
    if colors.size == 0 and g.m > 0:
        return None
    return EdgeColoring.from_colors(g, k, colors)


def pc_exact(g: Graph, budget: int | None = None) -> PcResult:
    """Smallest palette size properly connecting g, with a witness coloring.

    Iterates k upward from the lower bound; the complete-graph shortcut
    returns palette 1 without search.

    Raises:
        GraphDisconnected: g is not connected.
        BudgetExceeded: search at some required k exceeds its budget.
        ValueError: n < 2.
    """
    if g.n < 2:
        raise ValueError("need at least two vertices")
    if not is_connected(g):
        raise GraphDisconnected("proper connection number needs a connected graph")
    upper = g.m
    if is_complete(g):
        witness = EdgeColoring.monochromatic(g)
        return PcResult(value=1, witness=witness, lower_bound_used=1, upper_bound_used=upper)
    k = 2
    while True:
        witness = pc_decision(g, k, budget=budget)
        if witness is not None:
            return PcResult(value=k, witness=witness, lower_bound_used=2, upper_bound_used=upper)
        k += 1
        if k > max(upper, 1):
            raise RuntimeError("search exceeded the trivial upper bound")


def chromatic_index_small(g: Graph, budget: int = BUDGET_K2) -> int:
    """Exact chromatic index by canonical-order search over edge colorings.

    Accepts the first k for which some assignment gives incident edges
    distinct colors, iterating k upward from the maximum degree.

    Raises:
        BudgetExceeded: m exceeds the budget.
    """
    if g.m > budget:
        raise BudgetExceeded(f"m={g.m} exceeds search budget {budget}")
    if g.m == 0:
        return 0
    m = g.m
    # incident edge pairs share a vertex
    incident = [[] for _ in range(m)]
    for i in range(m):
        for j in range(i):
            a = set(map(int, g.edges[i]))
            b = set(map(int, g.edges[j]))
            if a & b:
                incident[i].append(j)
    delta = int(g.degrees().max())
    for k in range(max(delta, 1), m + 1):
        colors = [0] * m

        def feasible(i: int) -> bool:
            if i == m:
                return True
            used_cap = max(colors[:i], default=0)
            for col in range(1, min(k, used_cap + 1) + 1):
                ok = True
                for j in incident[i]:
                    if colors[j] == col:
                        ok = False
                        break
                if ok:
                    colors[i] = col
                    if feasible(i + 1):
                        return True
                    colors[i] = 0
            return False

        if feasible(0):
            return k
    return m


def has_hamiltonian_path(g: Graph) -> bool:
    """Exhaustive Hamiltonian-path test by subset dynamic programming (n <= 20)."""
    n = g.n
    if n > 20:
        raise BudgetExceeded("Hamiltonian path search is limited to n <= 20")
    if n <= 1:
        return True
    adjmask = [0] * n
    for u, v in g.edges:
        adjmask[int(u)] |= 1 << int(v)
        adjmask[int(v)] |= 1 << int(u)
    full = (1 << n) - 1
    # reach[mask] = bitmask of possible endpoints of a path covering mask
    reach = [0] * (1 << n)
    for v in range(n):
        reach[1 << v] = 1 << v
    for mask in range(1, full + 1):
        ends = reach[mask]
        if ends == 0:
            continue
        if mask == full:
            return True
        rest = full & ~mask
        e = ends
        while e:
            v = (e & -e).bit_length() - 1
            e &= e - 1
            nxt = adjmask[v] & rest
            while nxt:
                w = (nxt & -nxt).bit_length() - 1
                nxt &= nxt - 1
                reach[mask | (1 << w)] |= 1 << w
    return reach[full] != 0
