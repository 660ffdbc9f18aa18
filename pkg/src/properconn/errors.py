"""Exception hierarchy for domain errors.

Every error that a caller can meaningfully react to derives from
ProperConnError; the CLI maps these to exit code 1 with a JSON error object.
Programming mistakes (bad argument types, out-of-range vertex ids passed to
library functions) raise ValueError as usual.
"""

from __future__ import annotations


class ProperConnError(Exception):
    """Base class for all domain errors raised by this package."""


class FormatError(ProperConnError):
    """A graph or coloring file violates the documented text format."""


class GraphDisconnected(ProperConnError):
    """An operation requiring a connected (sub)graph received a disconnected one."""


class BudgetExceeded(ProperConnError):
    """Input exceeds the configured exhaustive-search budget."""


class EdgeNotInGraph(ProperConnError):
    """An edge was referenced that the graph does not contain."""


class MissingColor(ProperConnError):
    """A coloring does not cover every edge of its graph."""


class NotSpanning(ProperConnError):
    """A subgraph edge set leaves some vertex with no incident edge."""


class SubgraphDisconnected(ProperConnError):
    """A subgraph edge set touches every vertex but is not connected."""


class SmallAdjacent(ProperConnError):
    """Two low-degree vertices are adjacent, breaking the attachment step."""


class SharedNeighborConflict(ProperConnError):
    """A low-degree vertex has no unused high-degree neighbor left to match."""


class NoParityEdge(ProperConnError):
    """No eligible edge exists to fix the parity of the cycle vertex set."""


class OddCycle(ProperConnError):
    """A cycle of odd length cannot be colored alternately with two colors."""


class InsufficientNeighbors(ProperConnError):
    """Tree growth stalled: an expanding vertex cannot supply enough children.

    Attributes:
        root: root vertex of the tree that failed to grow.
        depth_reached: last fully completed depth for that tree.
    """

    def __init__(self, root: int, depth_reached: int):
        self.root = root
        self.depth_reached = depth_reached
        super().__init__(
            f"tree at root {root} stalled after depth {depth_reached}"
        )


class NoLeafLink(ProperConnError):
    """No edge exists between the leaf sets of two trees.

    Attributes:
        i: index of the first tree.
        j: index of the second tree.
    """

    def __init__(self, i: int, j: int):
        self.i = i
        self.j = j
        super().__init__(f"no edge between leaf sets of trees {i} and {j}")
