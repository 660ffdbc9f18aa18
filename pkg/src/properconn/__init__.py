"""Proper connection of graphs: exact solvers, scalable verification, and
two-coloring constructions for sparse random graphs."""

from __future__ import annotations

from .errors import (
    BudgetExceeded,
    EdgeNotInGraph,
    FormatError,
    GraphDisconnected,
    InsufficientNeighbors,
    MissingColor,
    NoLeafLink,
    NoParityEdge,
    NotSpanning,
    OddCycle,
    ProperConnError,
    SharedNeighborConflict,
    SmallAdjacent,
    SubgraphDisconnected,
)
from .graph import (
    EdgeColoring,
    Graph,
    RandomModel,
    bfs_distances,
    complete_graph,
    cycle_graph,
    diameter,
    gnp_sample,
    induced_subgraph,
    is_2_connected,
    is_complete,
    is_connected,
    path_graph,
    read_coloring,
    read_graph,
    star_graph,
    write_coloring,
    write_graph,
)
from .verify import (
    ConnectivityReport,
    PathCertificate,
    brute_force_proper_path,
    is_proper_path,
    is_properly_connected,
    proper_path_exists,
    proper_walk_reachable,
)
from .exact import (
    PcResult,
    chromatic_index_small,
    has_hamiltonian_path,
    pc_decision,
    pc_exact,
)
from .construct import (
    AttachmentMatching,
    ConstructionParams,
    ConstructionTrace,
    DiagnosticsParams,
    DiagnosticsReport,
    RootedTree,
    TreeGrowthParams,
    VertexClassification,
    classify_vertices,
    color_cycle_and_matching,
    color_trees_and_links,
    construct_two_coloring,
    grow_leaf_trees,
    lemma_diagnostics,
    pipeline_classification,
    posa_hamiltonian_cycle,
    small_matching,
)
from .two_subgraphs import (
    LayerDecomposition,
    bfs_layers,
    color_via_two_subgraphs,
    find_two_edge_disjoint_spanning_trees,
    pc_upper_via_trees,
)
from .experiments import (
    TrialRecord,
    TrialReport,
    census_small_graphs,
    connected_labeled_graphs,
    offset_probability,
    run_threshold_experiment,
    trial_csv,
    trial_seed,
)

__version__ = "0.1.0"
