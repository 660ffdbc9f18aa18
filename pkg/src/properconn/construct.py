"""Randomized construction of a two-coloring that properly connects a graph.

The pipeline splits vertices by a degree threshold, attaches each low-degree
vertex to a distinct high-degree neighbor by a matching, finds a Hamiltonian
cycle on the remaining (even-sized) vertex set by rotation-extension search,
and colors the cycle alternately with colors 1 and 2.  Attachment edges get
color 1, small leaf trees rooted at the attachment points are colored level
by level, leaf-to-leaf link edges take the color opposite the deepest tree
level, and every remaining edge gets color 1.  A verifier pass follows; if it
reports failing pairs, a bounded repair loop re-randomizes trees, flips link
colors, and re-runs the cycle search before giving up.

Every stage is recorded in a :class:`ConstructionTrace`, and every random
choice is derived from the caller's seed through named SeedSequence streams,
so identical inputs produce identical traces.  The module also provides
sampled structural diagnostics (degree smallness, small-vertex spacing,
local density, cross-edge presence, and neighborhood expansion) that probe
whether a graph looks like a typical near-threshold random graph.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
from numpy.random import SeedSequence, default_rng

from . import kernels
from .errors import (
    BudgetExceeded,
    GraphDisconnected,
    InsufficientNeighbors,
    NoLeafLink,
    NoParityEdge,
    OddCycle,
    SharedNeighborConflict,
    SmallAdjacent,
)
from .graph import EdgeColoring, Graph, induced_subgraph, is_connected
from .verify import ConnectivityReport, is_properly_connected

__all__ = [
    "VertexClassification",
    "AttachmentMatching",
    "TreeGrowthParams",
    "RootedTree",
    "ConstructionParams",
    "ConstructionTrace",
    "DiagnosticsParams",
    "DiagnosticsReport",
    "classify_vertices",
    "small_matching",
    "posa_hamiltonian_cycle",
    "color_cycle_and_matching",
    "grow_leaf_trees",
    "color_trees_and_links",
    "construct_two_coloring",
    "pipeline_classification",
    "lemma_diagnostics",
]

# Named sub-stream indices for seed splitting; parallel and serial runs that
# derive streams by these names agree bit for bit.
_STREAM_CYCLE = 1
_STREAM_TREES = 2
_STREAM_DIAGNOSTICS = 3


def _norm(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


# ---------------------------------------------------------------------------
# classification


@dataclass(frozen=True)
class VertexClassification:
    """Partition of the vertex set by a degree threshold.

    A vertex is small when its degree is strictly below ``tau``; every other
    vertex is large.  ``beta`` records the coefficient used to derive the
    default threshold ``tau = beta * ln(n)``.
    """

    beta: float
    tau: float
    small: tuple[int, ...]
    large: tuple[int, ...]


def classify_vertices(g: Graph, beta: float, *, tau: float | None = None) -> VertexClassification:
    """Splits vertices into small (degree < tau) and large (degree >= tau).

    ``tau`` defaults to ``beta * ln(n)``; passing it explicitly overrides the
    formula while keeping ``beta`` on record.

    Raises:
        ValueError: if g has no vertices.
    """
    if g.n == 0:
        raise ValueError("classification needs a nonempty graph")
    if tau is None:
        tau = beta * math.log(g.n)
    deg = g.degrees()
    small = np.flatnonzero(deg < tau)
    large = np.flatnonzero(deg >= tau)
    return VertexClassification(
        beta=float(beta),
        tau=float(tau),
        small=tuple(int(v) for v in small),
        large=tuple(int(v) for v in large),
    )


# ---------------------------------------------------------------------------
# attachment matching


@dataclass(frozen=True)
class AttachmentMatching:
    """Vertex-disjoint attachment of each small vertex to a large neighbor.

    ``pairs`` lists (x, y) edges with x large and y small; ``parity_edge`` is
    an extra all-large edge added when the large side has odd size, whose
    smaller endpoint is set aside so that ``v1`` — the vertices that carry
    the Hamiltonian cycle — has even size.
    """

    pairs: tuple[tuple[int, int], ...]
    parity_edge: tuple[int, int] | None
    v1: tuple[int, ...]


def small_matching(g: Graph, cls: VertexClassification) -> AttachmentMatching:
    """Greedily matches each small vertex to an unused large neighbor.

    Small vertices are processed in ascending order and each takes its
    smallest large neighbor not claimed by an earlier pair.  When the
    unmatched vertex count ``n - |small|`` is odd, the lexicographically
    smallest edge with both endpoints large and disjoint from the matching
    becomes the parity edge; its smaller endpoint is excluded from ``v1``.

    Raises:
        SmallAdjacent: two small vertices are adjacent.
        SharedNeighborConflict: a small vertex has no unclaimed large neighbor.
        NoParityEdge: a parity edge is required but no eligible edge exists.
    """
    small_set = set(cls.small)
    for y in cls.small:
        for w in g.neighbors(y):
            if int(w) in small_set:
                raise SmallAdjacent(f"small vertices {min(y, int(w))} and {max(y, int(w))} are adjacent")
    taken: set[int] = set()
    pairs: list[tuple[int, int]] = []
    for y in cls.small:
        pick = -1
        for w in g.neighbors(y):
            w = int(w)
            if w not in taken:
                pick = w
                break
        if pick < 0:
            raise SharedNeighborConflict(
                f"small vertex {y} has no large neighbor outside the matching"
            )
        taken.add(pick)
        pairs.append((pick, y))
    matched = taken | small_set
    parity_edge: tuple[int, int] | None = None
    dropped: set[int] = set()
    if (g.n - len(small_set)) % 2 == 1:
        for u, v in g.edges:
            u, v = int(u), int(v)
            if u in matched or v in matched or u in small_set or v in small_set:
                continue
            parity_edge = (u, v)
            dropped.add(u)
            break
        if parity_edge is None:
            raise NoParityEdge("no all-large edge disjoint from the matching is available")
    v1 = tuple(v for v in range(g.n) if v not in small_set and v not in dropped)
    return AttachmentMatching(pairs=tuple(pairs), parity_edge=parity_edge, v1=v1)


# ---------------------------------------------------------------------------
# Hamiltonian cycle search


def _canonical_cycle(seq: Sequence[int]) -> tuple[int, ...]:
    """Rotates/reflects a cyclic sequence so it starts at its smallest vertex
    and proceeds toward that vertex's smaller cycle neighbor."""
    seq = list(seq)
    i = min(range(len(seq)), key=seq.__getitem__)
    rot = seq[i:] + seq[:i]
    if len(rot) > 2 and rot[1] > rot[-1]:
        rot = [rot[0]] + rot[:0:-1]
    return tuple(rot)


def posa_hamiltonian_cycle(
    g: Graph,
    restrict_to: Iterable[int],
    budget: int | None = None,
    seed: int = 0,
) -> tuple[int, ...] | None:
    """Searches for a Hamiltonian cycle of the subgraph induced on restrict_to.

    Runs seeded rotation-extension attempts: a path grows by random unvisited
    neighbors of its endpoint, closes into a cycle when it spans and the
    endpoints are adjacent, re-roots non-spanning cycles at a vertex with an
    exit, and otherwise rotates the path about a random on-path neighbor.
    Attempts restart with fresh randomness until the step budget is spent.

    Returns the cycle as a canonical vertex tuple (smallest vertex first,
    oriented toward its smaller neighbor), or None if no cycle was found
    within the budget.

    Raises:
        ValueError: if restrict_to has fewer than 3 vertices.
    """
    verts = np.asarray(sorted(set(int(v) for v in restrict_to)), dtype=np.int64)
    k = verts.shape[0]
    if k < 3:
        raise ValueError(f"cycle search needs at least 3 vertices, got {k}")
    sub = induced_subgraph(g, verts)
    if int(sub.degrees().min()) < 2 or not is_connected(sub):
        return None
    if budget is None:
        budget = max(80 * k, 8192)
    per_attempt = max(8 * k, 512)
    remaining = int(budget)
    attempt = 0
    while remaining > 0:
        steps = min(per_attempt, remaining)
        rng = default_rng(SeedSequence(entropy=seed, spawn_key=(_STREAM_CYCLE, attempt)))
        start = int(rng.integers(k))
        rand = rng.random(steps)
        cyc = kernels.posa_search(sub.indptr, sub.indices, rand, start, steps)
        if cyc.shape[0] == k:
            return _canonical_cycle(int(verts[v]) for v in cyc)
        remaining -= steps
        attempt += 1
    return None


# ---------------------------------------------------------------------------
# cycle + matching coloring


def _partial_coloring(assign: dict[tuple[int, int], int]) -> EdgeColoring:
    """Materializes an {edge: color} map as a standalone two-color assignment."""
    if assign:
        items = sorted(assign.items())
        edges = np.array([e for e, _ in items], dtype=np.int32)
        colors = np.array([c for _, c in items], dtype=np.int32)
    else:
        edges = np.zeros((0, 2), np.int32)
        colors = np.zeros(0, np.int32)
    edges.setflags(write=False)
    colors.setflags(write=False)
    return EdgeColoring(palette_size=2, edges=edges, colors=colors)


def _coloring_to_assign(c: EdgeColoring) -> dict[tuple[int, int], int]:
    return {
        (int(u), int(v)): int(col)
        for (u, v), col in zip(c.edges.tolist(), c.colors.tolist())
    }


def _cycle_matching_assign(
    cycle: Sequence[int], matching: AttachmentMatching
) -> dict[tuple[int, int], int]:
    cyc = _canonical_cycle(cycle)
    length = len(cyc)
    if len(set(cyc)) != length:
        raise ValueError("cycle sequence repeats a vertex")
    if length % 2 == 1:
        raise OddCycle(f"cannot alternate two colors around an odd cycle of length {length}")
    assign: dict[tuple[int, int], int] = {}
    for i in range(length):
        e = _norm(cyc[i], cyc[(i + 1) % length])
        assign[e] = 1 if i % 2 == 0 else 2
    for x, y in matching.pairs:
        assign[_norm(x, y)] = 1
    if matching.parity_edge is not None:
        assign[_norm(*matching.parity_edge)] = 1
    return assign


def color_cycle_and_matching(
    cycle: Sequence[int], matching: AttachmentMatching
) -> EdgeColoring:
    """Alternately colors an even cycle and gives attachment edges color 1.

    The alternation is anchored at the smallest cycle vertex: after canonical
    reorientation its first outgoing cycle edge gets color 1 and colors
    alternate around the cycle.  Matching pairs and the parity edge all get
    color 1.  The result colors only these edges.

    Raises:
        OddCycle: if the cycle length is odd.
        ValueError: if the cycle repeats a vertex.
    """
    return _partial_coloring(_cycle_matching_assign(cycle, matching))


# ---------------------------------------------------------------------------
# leaf trees


@dataclass(frozen=True)
class TreeGrowthParams:
    """Shape of the leaf trees grown at attachment roots.

    Every non-leaf vertex must supply exactly ``arity`` children, and the
    tree reaches ``depth`` levels below the root.  ``epsilon`` is the slack
    coefficient in the adaptive depth formula.

    Raises:
        ValueError: if arity < 2, depth < 1, or epsilon outside (0, 1).
    """

    arity: int
    depth: int
    epsilon: float = 0.1

    def __post_init__(self):
        if self.arity < 2:
            raise ValueError(f"tree arity must be at least 2, got {self.arity}")
        if self.depth < 1:
            raise ValueError(f"tree depth must be at least 1, got {self.depth}")
        if not 0.0 < self.epsilon < 1.0:
            raise ValueError(f"epsilon must lie in (0, 1), got {self.epsilon}")


@dataclass(frozen=True)
class RootedTree:
    """A rooted tree stored level by level.

    ``levels[d]`` lists the vertices at depth d (``levels[0] == (root,)``)
    and ``edges_by_level[d]`` the (parent, child) edges from depth d to d+1.
    """

    root: int
    levels: tuple[tuple[int, ...], ...]
    edges_by_level: tuple[tuple[tuple[int, int], ...], ...]

    @property
    def depth(self) -> int:
        return len(self.levels) - 1

    @property
    def leaves(self) -> tuple[int, ...]:
        return self.levels[-1]

    def vertices(self) -> tuple[int, ...]:
        return tuple(v for level in self.levels for v in level)

    def edges(self) -> tuple[tuple[int, int], ...]:
        return tuple(e for level in self.edges_by_level for e in level)


def _grow_leaf_trees(
    g: Graph,
    forbidden_edges: set[tuple[int, int]],
    roots: Sequence[int],
    params: TreeGrowthParams,
    seed: int,
    stream_index: int = 0,
) -> tuple[list[RootedTree], list[tuple[int, int]]]:
    """Level-lockstep growth; returns (complete trees, per-root failures).

    A root that cannot supply ``arity`` fresh children at some expanding
    vertex is abandoned and reported as (root, completed_depth); its already
    claimed vertices stay reserved so the surviving trees remain disjoint.
    """
    roots = [int(r) for r in roots]
    if len(set(roots)) != len(roots):
        raise ValueError("tree roots must be distinct")
    forb = {_norm(*e) for e in forbidden_edges}
    rng = default_rng(SeedSequence(entropy=seed, spawn_key=(_STREAM_TREES, stream_index)))
    used = set(roots)
    levels: list[list[list[int]]] = [[[r]] for r in roots]
    edges: list[list[list[tuple[int, int]]]] = [[] for _ in roots]
    alive = [True] * len(roots)
    failures: list[tuple[int, int]] = []
    for d in range(params.depth):
        for i, root in enumerate(roots):
            if not alive[i]:
                continue
            new_level: list[int] = []
            new_edges: list[tuple[int, int]] = []
            for w in levels[i][d]:
                cands = [
                    int(x)
                    for x in g.neighbors(w)
                    if int(x) not in used and _norm(w, int(x)) not in forb
                ]
                if len(cands) < params.arity:
                    alive[i] = False
                    failures.append((root, d))
                    break
                order = rng.permutation(len(cands))[: params.arity]
                children = sorted(cands[j] for j in order)
                for c in children:
                    used.add(c)
                    new_level.append(c)
                    new_edges.append((w, c))
            if alive[i]:
                levels[i].append(new_level)
                edges[i].append(new_edges)
    trees = [
        RootedTree(
            root=roots[i],
            levels=tuple(tuple(level) for level in levels[i]),
            edges_by_level=tuple(tuple(lv) for lv in edges[i]),
        )
        for i in range(len(roots))
        if alive[i]
    ]
    return trees, failures


def grow_leaf_trees(
    g: Graph,
    forbidden_edges: set[tuple[int, int]],
    roots: Sequence[int],
    params: TreeGrowthParams,
    seed: int = 0,
) -> list[RootedTree]:
    """Grows pairwise vertex-disjoint rooted trees, avoiding forbidden edges.

    Trees grow level by level in lockstep over the roots; every expanding
    vertex draws exactly ``params.arity`` children, seeded-uniformly, from
    its neighbors that no tree has claimed and whose connecting edge is not
    forbidden.

    Raises:
        ValueError: if roots repeat.
        InsufficientNeighbors: if some expanding vertex cannot supply
            ``params.arity`` fresh children.
    """
    trees, failures = _grow_leaf_trees(g, forbidden_edges, roots, params, seed)
    if failures:
        raise InsufficientNeighbors(*failures[0])
    return trees


def _level_color(depth_index: int) -> int:
    """Color of tree edges from depth d to d+1: 2 at even d, 1 at odd d."""
    return 2 if depth_index % 2 == 0 else 1


def _color_trees_and_links(
    trees: Sequence[RootedTree],
    coloring: EdgeColoring,
    g: Graph,
) -> tuple[dict[tuple[int, int], int], list[tuple[int, int]], list[tuple[int, int]]]:
    """Returns (assignment incl. tree/link colors, link edges, missing pairs)."""
    assign = _coloring_to_assign(coloring)
    for tree in trees:
        for d, level_edges in enumerate(tree.edges_by_level):
            for p, c in level_edges:
                assign[_norm(p, c)] = _level_color(d)
    links: list[tuple[int, int]] = []
    missing: list[tuple[int, int]] = []
    if len(trees) >= 2:
        deepest = max(t.depth for t in trees)
        link_color = 3 - _level_color(deepest - 1)
        for i in range(len(trees)):
            for j in range(i + 1, len(trees)):
                best: tuple[int, int] | None = None
                for u in trees[i].leaves:
                    for w in trees[j].leaves:
                        e = _norm(u, w)
                        if e in assign or not g.has_edge(*e):
                            continue
                        if best is None or e < best:
                            best = e
                if best is None:
                    missing.append((i, j))
                else:
                    assign[best] = link_color
                    links.append(best)
    return assign, links, missing


def color_trees_and_links(
    trees: Sequence[RootedTree],
    coloring: EdgeColoring,
    g: Graph,
) -> EdgeColoring:
    """Extends a partial coloring with tree levels and leaf-to-leaf links.

    Tree edges alternate down from the root — depth 0 to 1 gets color 2 so
    the first tree edge differs from the color-1 attachment edge, and colors
    alternate below.  For each pair of trees the lexicographically smallest
    uncolored edge between their leaf sets becomes a link, colored opposite
    the deepest tree level.

    Raises:
        NoLeafLink: if some tree pair has no usable edge between leaf sets.
    """
    assign, _, missing = _color_trees_and_links(trees, coloring, g)
    if missing:
        raise NoLeafLink(*missing[0])
    return _partial_coloring(assign)


# ---------------------------------------------------------------------------
# full pipeline


@dataclass(frozen=True)
class ConstructionParams:
    """Tunable constants of the construction pipeline.

    With ``paper_constants`` False (the default) the degree threshold is
    floored at ``tau_floor`` and tree arity/depth use adaptive formulas that
    stay meaningful on small inputs; with it True the raw asymptotic
    formulas apply unchanged (tau = beta ln n, arity = floor(ln n / 101),
    depth = floor((1/2 + epsilon) ln n / ln ln n)) and trees are skipped
    whenever the resulting arity falls below 2.

    ``verify_dfs_budget`` bounds each exact path search inside the
    pipeline's verification calls so a badly broken intermediate coloring
    (the exact search is worst-case exponential) cannot stall the run; a
    coloring whose check exhausts the budget is treated as unverified and
    never returned as a success.  0 means unlimited.
    """

    beta: float = 0.01
    tau_floor: float = 3.0
    epsilon: float = 0.1
    arity: int | None = None
    depth: int | None = None
    posa_budget: int | None = None
    repair_rounds: int = 5
    paper_constants: bool = False
    verify_dfs_budget: int = 200_000


@dataclass
class ConstructionTrace:
    """Staged record of one construction run, for auditing and repair."""

    classification: VertexClassification | None = None
    matching: AttachmentMatching | None = None
    hamiltonian_cycle: tuple[int, ...] | None = None
    trees: tuple[RootedTree, ...] = ()
    leaf_link_edges: tuple[tuple[int, int], ...] = ()
    repair_log: tuple[str, ...] = ()
    stage_reached: str = "started"
    notes: tuple[str, ...] = ()
    failure: str | None = None

    def log(self, message: str) -> None:
        self.repair_log = self.repair_log + (message,)

    def note(self, message: str) -> None:
        self.notes = self.notes + (message,)

    def as_dict(self) -> dict:
        """JSON-ready view of the trace."""
        return {
            "stage_reached": self.stage_reached,
            "failure": self.failure,
            "classification": None
            if self.classification is None
            else {
                "beta": self.classification.beta,
                "tau": self.classification.tau,
                "small": list(self.classification.small),
                "large_count": len(self.classification.large),
            },
            "matching": None
            if self.matching is None
            else {
                "pairs": [list(p) for p in self.matching.pairs],
                "parity_edge": None
                if self.matching.parity_edge is None
                else list(self.matching.parity_edge),
                "v1_count": len(self.matching.v1),
            },
            "hamiltonian_cycle": None
            if self.hamiltonian_cycle is None
            else list(self.hamiltonian_cycle),
            "trees": [
                {
                    "root": t.root,
                    "levels": [list(level) for level in t.levels],
                    "edges": [list(e) for e in t.edges()],
                }
                for t in self.trees
            ],
            "leaf_link_edges": [list(e) for e in self.leaf_link_edges],
            "repair_log": list(self.repair_log),
            "notes": list(self.notes),
        }


def pipeline_classification(
    g: Graph, params: ConstructionParams | None = None
) -> tuple[VertexClassification, bool]:
    """The classification the full pipeline uses, with its floor fallback.

    Applies the tau floor unless ``paper_constants`` is set, then retreats
    to the raw threshold when the floored one marks more than a third of
    the vertices small (regular sparse inputs like cycles).  The flag in
    the returned pair records whether that fallback fired.
    """
    if params is None:
        params = ConstructionParams()
    tau = params.beta * math.log(g.n)
    if not params.paper_constants:
        tau = max(tau, params.tau_floor)
    cls = classify_vertices(g, params.beta, tau=tau)
    if 3 * len(cls.small) > g.n:
        return classify_vertices(g, params.beta), True
    return cls, False


def _tree_params_for(g: Graph, params: ConstructionParams) -> TreeGrowthParams | None:
    """Resolves arity/depth for the pipeline; None means skip trees."""
    logn = math.log(g.n)
    loglogn = math.log(logn) if logn > 1.0 else 0.0
    if params.arity is not None:
        arity = params.arity
    elif params.paper_constants:
        arity = int(logn / 101)
        if arity < 2:
            return None
    else:
        arity = max(2, int(logn / 101))
    if params.depth is not None:
        depth = params.depth
    else:
        raw = (0.5 + params.epsilon) * logn / loglogn if loglogn >= 1.0 else 1.0
        depth = max(1, int(raw))
        if params.paper_constants and loglogn > 0.0:
            depth = max(1, int((0.5 + params.epsilon) * logn / loglogn))
    return TreeGrowthParams(arity=arity, depth=depth, epsilon=params.epsilon)


def _full_coloring(g: Graph, assign: dict[tuple[int, int], int]) -> EdgeColoring:
    """Total coloring: the assignment where set, color 1 everywhere else."""
    colors = np.ones(g.m, np.int32)
    if assign:
        pairs = np.array(sorted(assign.keys()), dtype=np.int64)
        vals = np.array([assign[(int(u), int(v))] for u, v in pairs], dtype=np.int32)
        ids = g.edge_ids(pairs)
        if np.any(ids < 0):
            bad = pairs[ids < 0][0]
            raise ValueError(f"assignment colors ({bad[0]}, {bad[1]}) which is not an edge")
        colors[ids] = vals
    return EdgeColoring.from_colors(g, 2, colors)


def _forbidden_for_trees(
    g: Graph, cycle: Sequence[int], v1: Sequence[int]
) -> set[tuple[int, int]]:
    """Cycle edges plus every edge leaving v1 — trees must avoid both."""
    forb: set[tuple[int, int]] = set()
    length = len(cycle)
    for i in range(length):
        forb.add(_norm(cycle[i], cycle[(i + 1) % length]))
    outside = set(range(g.n)) - set(v1)
    for w in outside:
        for x in g.neighbors(w):
            forb.add(_norm(w, int(x)))
    return forb


def construct_two_coloring(
    g: Graph,
    params: ConstructionParams | None = None,
    seed: int = 0,
) -> tuple[EdgeColoring | None, ConstructionTrace]:
    """Runs the full pipeline and verifies the result.

    Stages: classify vertices, match small vertices to large neighbors (plus
    a parity edge when needed), find a Hamiltonian cycle on the remaining
    vertices, color cycle and matching, grow and color leaf trees with link
    edges, give leftovers color 1, then verify proper connectivity.  If
    verification fails, up to ``params.repair_rounds`` rounds re-randomize
    trees, flip a link color, and re-run the cycle search, adopting a change
    only when it strictly reduces the failing-pair count.  Verification runs
    with a bounded exact path search (``params.verify_dfs_budget``); a
    coloring whose check cannot finish within the budget counts as failing,
    so a returned coloring is always fully verified.

    Returns (coloring, trace) on success — the coloring is total with
    palette {1, 2} — or (None, trace) with ``stage_reached`` set to
    ``failed:<stage>`` when a stage cannot complete.

    Raises:
        ValueError: if g has fewer than 3 vertices.
        GraphDisconnected: if g is not connected.
    """
    if params is None:
        params = ConstructionParams()
    if g.n < 3:
        raise ValueError(f"construction needs at least 3 vertices, got {g.n}")
    if not is_connected(g):
        raise GraphDisconnected("construction requires a connected graph")
    trace = ConstructionTrace()

    cls, floor_fell_back = pipeline_classification(g, params)
    if floor_fell_back:
        trace.note("threshold floor classified over a third of the vertices small; using raw threshold")
    trace.classification = cls
    trace.stage_reached = "classified"

    try:
        matching = small_matching(g, cls)
    except (SmallAdjacent, SharedNeighborConflict, NoParityEdge) as exc:
        trace.failure = f"{type(exc).__name__}: {exc}"
        trace.stage_reached = "failed:match"
        return None, trace
    trace.matching = matching
    trace.stage_reached = "matched"

    if len(matching.v1) < 3:
        trace.failure = f"only {len(matching.v1)} vertices remain for the cycle"
        trace.stage_reached = "failed:cycle"
        return None, trace
    budget = params.posa_budget
    if budget is None:
        budget = max(80 * len(matching.v1), 8192)
    cycle = posa_hamiltonian_cycle(g, matching.v1, budget, seed)
    if cycle is None:
        trace.failure = "no Hamiltonian cycle found within budget"
        trace.stage_reached = "failed:cycle"
        return None, trace
    trace.hamiltonian_cycle = cycle
    trace.stage_reached = "cycle_found"

    base = color_cycle_and_matching(cycle, matching)
    trace.stage_reached = "colored"

    roots = [x for x, _ in matching.pairs]
    if matching.parity_edge is not None:
        roots.append(max(matching.parity_edge))
    tree_params = _tree_params_for(g, params) if roots else None
    if roots and tree_params is None:
        trace.note("tree arity below 2 under raw constants; trees skipped")
    forbidden = _forbidden_for_trees(g, cycle, matching.v1) if tree_params else set()

    def build(tree_seed_index: int) -> tuple[
        EdgeColoring, tuple[RootedTree, ...], tuple[tuple[int, int], ...], dict
    ]:
        if tree_params is None:
            assign = _cycle_matching_assign(cycle, matching)
            return _full_coloring(g, assign), (), (), assign
        trees, failures = _grow_leaf_trees(
            g, forbidden, roots, tree_params, seed, stream_index=tree_seed_index
        )
        for root, depth_reached in failures:
            trace.note(f"tree at root {root} abandoned at depth {depth_reached}")
        assign, links, missing = _color_trees_and_links(trees, base, g)
        for i, j in missing:
            trace.note(f"no free link edge between trees {i} and {j}")
        return _full_coloring(g, assign), tuple(trees), tuple(links), assign

    coloring, trees, links, assign = build(0)
    trace.trees = trees
    trace.leaf_link_edges = links
    if roots:
        trace.stage_reached = "trees_built"

    dfs_budget = params.verify_dfs_budget

    def verify_full(cand: EdgeColoring) -> ConnectivityReport | None:
        """Full check; None when the bounded path search could not decide."""
        try:
            return is_properly_connected(g, cand, dfs_budget=dfs_budget)
        except BudgetExceeded:
            trace.note("verification hit the path-search budget; coloring treated as unverified")
            return None

    report = verify_full(coloring)
    if report is not None and report.properly_connected:
        trace.stage_reached = "verified"
        return coloring, trace

    # Bounded repair: re-randomize trees, flip a link, re-run the cycle
    # search; adopt a candidate only when it fixes every known failing pair
    # or strictly shrinks the failing set.
    def recheck(cand: EdgeColoring, rep: ConnectivityReport | None) -> ConnectivityReport | None:
        if rep is not None:
            try:
                quick = is_properly_connected(
                    g, cand, restrict_pairs=rep.failing_pairs[:50], dfs_budget=dfs_budget
                )
            except BudgetExceeded:
                return None
            if not quick.properly_connected:
                return None
        return verify_full(cand)

    def fail_count(rep: ConnectivityReport | None) -> float:
        return math.inf if rep is None else len(rep.failing_pairs)

    prev_cycle = cycle
    for round_no in range(1, params.repair_rounds + 1):
        # (a) regrow trees with a fresh stream
        if tree_params is not None and roots:
            cand, cand_trees, cand_links, cand_assign = build(round_no)
            full = recheck(cand, report)
            if full is not None:
                if full.properly_connected:
                    trace.log(f"round {round_no}: regrew trees; verified")
                    trace.trees, trace.leaf_link_edges = cand_trees, cand_links
                    trace.stage_reached = "verified"
                    return cand, trace
                if len(full.failing_pairs) < fail_count(report):
                    trace.log(f"round {round_no}: regrew trees; {len(full.failing_pairs)} pairs still failing")
                    coloring, trees, links, assign = cand, cand_trees, cand_links, cand_assign
                    trace.trees, trace.leaf_link_edges = trees, links
                    report = full
        # (b) flip one link color
        if links:
            e = links[(round_no - 1) % len(links)]
            flipped = dict(assign)
            flipped[e] = 3 - flipped[e]
            cand = _full_coloring(g, flipped)
            full = recheck(cand, report)
            if full is not None:
                if full.properly_connected:
                    trace.log(f"round {round_no}: flipped link {e}; verified")
                    trace.stage_reached = "verified"
                    return cand, trace
                if len(full.failing_pairs) < fail_count(report):
                    trace.log(f"round {round_no}: flipped link {e}; {len(full.failing_pairs)} pairs still failing")
                    coloring, assign = cand, flipped
                    report = full
        # (c) re-run the cycle search with a fresh stream
        round_seed = int(
            SeedSequence(entropy=seed, spawn_key=(_STREAM_CYCLE, 1000 + round_no)).generate_state(1)[0]
        )
        new_cycle = posa_hamiltonian_cycle(g, matching.v1, budget, seed=round_seed)
        if new_cycle is not None and new_cycle != prev_cycle:
            prev_cycle = new_cycle
            cycle = new_cycle
            base = color_cycle_and_matching(cycle, matching)
            forbidden = _forbidden_for_trees(g, cycle, matching.v1) if tree_params else set()
            cand, cand_trees, cand_links, cand_assign = build(round_no)
            full = recheck(cand, report)
            if full is not None:
                if full.properly_connected:
                    trace.log(f"round {round_no}: rebuilt cycle; verified")
                    trace.hamiltonian_cycle = cycle
                    trace.trees, trace.leaf_link_edges = cand_trees, cand_links
                    trace.stage_reached = "verified"
                    return cand, trace
                if len(full.failing_pairs) < fail_count(report):
                    trace.log(f"round {round_no}: rebuilt cycle; {len(full.failing_pairs)} pairs still failing")
                    coloring, trees, links, assign = cand, cand_trees, cand_links, cand_assign
                    trace.hamiltonian_cycle = cycle
                    trace.trees, trace.leaf_link_edges = trees, links
                    report = full

    still = (
        "an undecided pair set"
        if report is None
        else f"{len(report.failing_pairs)} pairs"
    )
    trace.failure = (
        f"verification still fails on {still} "
        f"after {params.repair_rounds} repair rounds"
    )
    trace.stage_reached = "failed:verify"
    return None, trace


# ---------------------------------------------------------------------------
# structural diagnostics


@dataclass(frozen=True)
class DiagnosticsParams:
    """Constants and sample counts for the structural diagnostics."""

    smallness_exponent: float = 0.1
    incidence_exponent: float = 0.2
    density_denominator: float = 375.0
    density_factor: float = 250.0
    cross_samples: int = 50
    density_samples: int = 200
    expansion_samples: int = 200
    expansion_denominator: float = 1500.0


@dataclass(frozen=True)
class DiagnosticsReport:
    """Per-clause outcomes of the structural diagnostics.

    A clause whose sampling precondition cannot be met on this input (for
    example, the requested subset size exceeds n) passes vacuously and says
    so in ``details``.
    """

    smallness_ok: bool
    small_distance_ok: bool
    density_ok: bool
    cross_ok: bool
    expansion_ok: bool
    small_incidence_ok: bool
    details: dict

    @property
    def all_ok(self) -> bool:
        return (
            self.smallness_ok
            and self.small_distance_ok
            and self.density_ok
            and self.cross_ok
            and self.expansion_ok
            and self.small_incidence_ok
        )

    def as_dict(self) -> dict:
        return {
            "smallness_ok": self.smallness_ok,
            "small_distance_ok": self.small_distance_ok,
            "density_ok": self.density_ok,
            "cross_ok": self.cross_ok,
            "expansion_ok": self.expansion_ok,
            "small_incidence_ok": self.small_incidence_ok,
            "all_ok": self.all_ok,
            "details": self.details,
        }


def lemma_diagnostics(
    g: Graph,
    cls: VertexClassification,
    p: float | None = None,
    seed: int = 0,
    params: DiagnosticsParams | None = None,
) -> DiagnosticsReport:
    """Sampled checks that a graph has the structure the construction relies on.

    Clauses: the small class stays below ceil(n^0.1); small vertices are
    pairwise at distance >= 3; random subsets S with |S| <= n/375 span fewer
    than |S| n p / 250 edges (needs the generating ``p``); random disjoint
    vertex sets of size ceil(n / ln ln n) always have a crossing edge;
    random subsets U of the large class with |U| <= n/1500 have at least
    2|U| large neighbors outside U; and at most ceil(n^0.2) edges touch a
    small vertex.  Violations are reported, never raised.
    """
    if params is None:
        params = DiagnosticsParams()
    n = g.n
    details: dict = {}
    small = np.asarray(cls.small, dtype=np.int64)
    large = np.asarray(cls.large, dtype=np.int64)

    small_cap = math.ceil(n**params.smallness_exponent)
    smallness_ok = len(small) <= small_cap
    details["smallness"] = {"small": int(len(small)), "cap": small_cap}

    small_distance_ok = True
    closest = None
    nbr_sets = {int(y): set(int(w) for w in g.neighbors(y)) for y in small}
    for a_i in range(len(small)):
        for b_i in range(a_i + 1, len(small)):
            a, b = int(small[a_i]), int(small[b_i])
            if b in nbr_sets[a] or nbr_sets[a] & nbr_sets[b]:
                small_distance_ok = False
                closest = (a, b)
                break
        if not small_distance_ok:
            break
    details["small_distance"] = {"violating_pair": closest}

    rng_density = default_rng(SeedSequence(entropy=seed, spawn_key=(_STREAM_DIAGNOSTICS, 0)))
    density_ok = True
    max_s = int(n / params.density_denominator)
    if p is None or max_s < 1:
        details["density"] = {"checked": 0, "note": "vacuous: no p supplied" if p is None else "vacuous: n too small"}
    else:
        e0 = g.edges[:, 0]
        e1 = g.edges[:, 1]
        worst = 0.0
        for _ in range(params.density_samples):
            s = int(rng_density.integers(1, max_s + 1))
            subset = rng_density.choice(n, size=s, replace=False)
            in_s = np.zeros(n, bool)
            in_s[subset] = True
            spanned = int(np.count_nonzero(in_s[e0] & in_s[e1])) if g.m else 0
            bound = s * n * p / params.density_factor
            worst = max(worst, spanned / bound if bound > 0 else math.inf)
            if not spanned < bound:
                density_ok = False
        details["density"] = {"checked": params.density_samples, "worst_ratio": worst}

    rng_cross = default_rng(SeedSequence(entropy=seed, spawn_key=(_STREAM_DIAGNOSTICS, 1)))
    cross_ok = True
    loglog = math.log(math.log(n)) if n > 2 and math.log(n) > 1.0 else 0.0
    cross_size = math.ceil(n / loglog) if loglog > 0 else n + 1
    if 2 * cross_size > n:
        details["cross"] = {"checked": 0, "note": "vacuous: subset size exceeds n/2"}
    else:
        e0 = g.edges[:, 0]
        e1 = g.edges[:, 1]
        zero_hits = 0
        for _ in range(params.cross_samples):
            perm = rng_cross.permutation(n)
            side = np.zeros(n, np.int8)
            side[perm[:cross_size]] = 1
            side[perm[cross_size : 2 * cross_size]] = 2
            crossing = int(np.count_nonzero(side[e0] + side[e1] == 3)) if g.m else 0
            if crossing == 0:
                cross_ok = False
                zero_hits += 1
        details["cross"] = {"checked": params.cross_samples, "size": cross_size, "empty_cuts": zero_hits}

    rng_exp = default_rng(SeedSequence(entropy=seed, spawn_key=(_STREAM_DIAGNOSTICS, 2)))
    expansion_ok = True
    max_u = int(n / params.expansion_denominator)
    if max_u < 1 or len(large) == 0:
        details["expansion"] = {"checked": 0, "note": "vacuous: n too small"}
    else:
        large_set = np.zeros(n, bool)
        large_set[large] = True
        worst_ratio = math.inf
        for _ in range(params.expansion_samples):
            s = int(rng_exp.integers(1, min(max_u, len(large)) + 1))
            subset = rng_exp.choice(large, size=s, replace=False)
            in_u = np.zeros(n, bool)
            in_u[subset] = True
            nbrs = np.concatenate([g.neighbors(int(v)) for v in subset]) if s else np.zeros(0, np.int64)
            mask = large_set[nbrs] & ~in_u[nbrs]
            count = int(np.unique(nbrs[mask]).shape[0])
            worst_ratio = min(worst_ratio, count / (2 * s))
            if count < 2 * s:
                expansion_ok = False
        details["expansion"] = {"checked": params.expansion_samples, "worst_ratio": worst_ratio}

    incidence_cap = math.ceil(n**params.incidence_exponent)
    if g.m and len(small):
        in_small = np.zeros(n, bool)
        in_small[small] = True
        incident = int(np.count_nonzero(in_small[g.edges[:, 0]] | in_small[g.edges[:, 1]]))
    else:
        incident = 0
    small_incidence_ok = incident <= incidence_cap
    details["small_incidence"] = {"incident_edges": incident, "cap": incidence_cap}

    return DiagnosticsReport(
        smallness_ok=smallness_ok,
        small_distance_ok=small_distance_ok,
        density_ok=density_ok,
        cross_ok=cross_ok,
        expansion_ok=expansion_ok,
        small_incidence_ok=small_incidence_ok,
        details=details,
    )
