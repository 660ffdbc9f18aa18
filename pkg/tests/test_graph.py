"""Graph container, samplers, structure predicates, and text formats."""

import numpy as np
import pytest

import networkx as nx

from properconn.errors import EdgeNotInGraph, FormatError, MissingColor
from properconn.graph import (
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


def to_nx(g: Graph) -> nx.Graph:
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from((int(u), int(v)) for u, v in g.edges)
    return h


class TestGraphContainer:
    def test_edges_sorted_lexicographically(self):
        g = Graph.from_edges(4, [(2, 3), (0, 1), (1, 3), (0, 2)])
        assert [(int(u), int(v)) for u, v in g.edges] == [(0, 1), (0, 2), (1, 3), (2, 3)]

    def test_edge_order_normalized(self):
        g = Graph.from_edges(3, [(2, 0), (1, 0)])
        assert g.has_edge(0, 2) and g.has_edge(2, 0)
        assert [(int(u), int(v)) for u, v in g.edges] == [(0, 1), (0, 2)]

    def test_duplicate_edge_rejected(self):
        with pytest.raises(ValueError):
            Graph.from_edges(3, [(0, 1), (1, 0)])

    def test_self_loop_rejected(self):
        with pytest.raises(ValueError):
            Graph.from_edges(3, [(1, 1)])

    def test_vertex_out_of_range_rejected(self):
        with pytest.raises(ValueError):
            Graph.from_edges(3, [(0, 3)])

    def test_degrees_and_neighbors(self):
        g = star_graph(4)
        assert g.n == 5 and g.m == 4
        assert g.degrees().tolist() == [4, 1, 1, 1, 1]
        assert g.neighbors(0).tolist() == [1, 2, 3, 4]
        assert g.neighbors(2).tolist() == [0]

    def test_edge_id_roundtrip_and_symmetry(self):
        g = Graph.from_edges(4, [(0, 1), (1, 2), (2, 3), (0, 3)])
        for i, (u, v) in enumerate(g.edges):
            assert g.edge_id(int(u), int(v)) == i
            assert g.edge_id(int(v), int(u)) == i
        assert g.edge_id(0, 2) == -1

    def test_edge_ids_batch_normalizes(self):
        g = cycle_graph(5)
        pairs = np.array([[1, 0], [4, 0]])
        ids = g.edge_ids(pairs)
        assert ids.tolist() == [g.edge_id(0, 1), g.edge_id(0, 4)]

    def test_arrays_frozen(self):
        g = cycle_graph(4)
        with pytest.raises(ValueError):
            g.edges[0, 0] = 9
        with pytest.raises(ValueError):
            g.indptr[0] = 9

    def test_equality_and_hash(self):
        a = Graph.from_edges(3, [(0, 1), (1, 2)])
        b = Graph.from_edges(3, [(1, 2), (0, 1)])
        c = Graph.from_edges(3, [(0, 1)])
        assert a == b and hash(a) == hash(b)
        assert a != c


class TestEdgeColoring:
    def test_from_colors_and_color_of(self):
        g = path_graph(4)
        c = EdgeColoring.from_colors(g, 2, [1, 2, 1])
        assert c.palette_size == 2
        assert c.color_of(0, 1) == 1
        assert c.color_of(2, 1) == 2
        assert c.color_of(2, 3) == 1

    def test_color_out_of_palette_rejected(self):
        g = path_graph(3)
        with pytest.raises(ValueError):
            EdgeColoring.from_colors(g, 2, [1, 3])
        with pytest.raises(ValueError):
            EdgeColoring.from_colors(g, 2, [0, 1])

    def test_wrong_length_rejected(self):
        g = path_graph(3)
        with pytest.raises(ValueError):
            EdgeColoring.from_colors(g, 2, [1])

    def test_monochromatic(self):
        g = complete_graph(4)
        c = EdgeColoring.monochromatic(g)
        assert c.palette_size == 1
        assert set(c.colors.tolist()) == {1}

    def test_matches_tracks_edge_set(self):
        g = path_graph(4)
        h = cycle_graph(4)
        c = EdgeColoring.from_colors(g, 2, [1, 2, 1])
        assert c.matches(g)
        assert not c.matches(h)

    def test_adj_colors_parallel_to_csr(self):
        g = cycle_graph(4)
        c = EdgeColoring.from_colors(g, 2, [1, 2, 2, 1])
        adj = c.adj_colors(g)
        for v in range(g.n):
            for idx in range(int(g.indptr[v]), int(g.indptr[v + 1])):
                w = int(g.indices[idx])
                assert adj[idx] == c.color_of(v, w)


class TestSampler:
    def test_reproducible(self):
        m = RandomModel(n=50, p=0.3, seed=11)
        assert gnp_sample(m) == gnp_sample(m)

    def test_seed_changes_sample(self):
        a = gnp_sample(RandomModel(n=50, p=0.3, seed=1))
        b = gnp_sample(RandomModel(n=50, p=0.3, seed=2))
        assert a != b

    def test_invalid_model_rejected(self):
        with pytest.raises(ValueError):
            RandomModel(n=-1, p=0.5, seed=1)
        with pytest.raises(ValueError):
            RandomModel(n=5, p=1.5, seed=1)
        with pytest.raises(ValueError):
            RandomModel(n=5, p=-0.1, seed=1)

    def test_extreme_probabilities(self):
        assert gnp_sample(RandomModel(n=20, p=0.0, seed=3)).m == 0
        assert gnp_sample(RandomModel(n=20, p=1.0, seed=3)) == complete_graph(20)

    @pytest.mark.parametrize("p", [0.08, 0.5])
    def test_mean_edge_count_within_3_percent(self, p):
        # Covers both sampling regimes (geometric skips and dense rows).
        n, trials = 120, 60
        total = sum(
            gnp_sample(RandomModel(n=n, p=p, seed=s)).m for s in range(trials)
        )
        expected = trials * p * n * (n - 1) / 2
        assert abs(total - expected) / expected < 0.03

    def test_regimes_have_uniform_pair_marginals(self):
        # Every unordered pair should appear with frequency about p in both
        # the sparse and the dense code path.
        n = 30
        for p in (0.1, 0.4):
            counts = np.zeros((n, n))
            trials = 200
            for s in range(trials):
                g = gnp_sample(RandomModel(n=n, p=p, seed=10_000 + s))
                for u, v in g.edges:
                    counts[int(u), int(v)] += 1
            freqs = counts[np.triu_indices(n, 1)] / trials
            assert abs(float(freqs.mean()) - p) < 0.02
            assert float(freqs.max()) < p + 0.2


class TestStructure:
    def test_connectivity_small(self):
        assert is_connected(path_graph(5))
        assert not is_connected(Graph.from_edges(4, [(0, 1), (2, 3)]))
        assert is_connected(Graph.from_edges(1, []))

    def test_connectivity_matches_networkx_on_random(self):
        for s in range(25):
            g = gnp_sample(RandomModel(n=24, p=0.08, seed=300 + s))
            assert is_connected(g) == nx.is_connected(to_nx(g))

    def test_bfs_distances(self):
        g = path_graph(5)
        assert bfs_distances(g, 0).tolist() == [0, 1, 2, 3, 4]
        h = Graph.from_edges(4, [(0, 1), (2, 3)])
        d = bfs_distances(h, 0)
        assert d[1] == 1 and d[2] == -1 and d[3] == -1

    def test_diameter_known_values(self):
        assert diameter(complete_graph(5)) == 1
        assert diameter(path_graph(6)) == 5
        assert diameter(cycle_graph(8)) == 4
        assert diameter(Graph.from_edges(4, [(0, 1), (2, 3)])) == float("inf")

    def test_diameter_matches_networkx_on_random(self):
        for s in range(15):
            g = gnp_sample(RandomModel(n=20, p=0.25, seed=500 + s))
            if is_connected(g):
                assert diameter(g) == nx.diameter(to_nx(g))

    def test_two_connectivity_known_values(self):
        paw = Graph.from_edges(4, [(0, 1), (0, 2), (1, 2), (2, 3)])
        assert not is_2_connected(paw)  # vertex 2 is a cut vertex
        assert is_2_connected(cycle_graph(4))
        assert is_2_connected(complete_graph(4))
        assert not is_2_connected(path_graph(3))
        assert not is_2_connected(Graph.from_edges(2, [(0, 1)]))

    def test_two_connectivity_matches_networkx_on_random(self):
        for s in range(25):
            g = gnp_sample(RandomModel(n=16, p=0.2, seed=700 + s))
            h = to_nx(g)
            expected = g.n >= 3 and nx.is_biconnected(h)
            assert is_2_connected(g) == expected

    def test_induced_subgraph(self):
        g = cycle_graph(6)
        sub = induced_subgraph(g, np.array([0, 1, 2, 4]))
        assert sub.n == 4
        # 0-1 and 1-2 survive with relabeled endpoints; 4 is isolated.
        assert [(int(u), int(v)) for u, v in sub.edges] == [(0, 1), (1, 2)]

    def test_is_complete(self):
        assert is_complete(complete_graph(4))
        assert not is_complete(cycle_graph(4))
        assert is_complete(Graph.from_edges(1, []))


class TestTextFormats:
    def test_graph_roundtrip(self):
        g = gnp_sample(RandomModel(n=18, p=0.3, seed=5))
        assert read_graph(write_graph(g)) == g

    def test_graph_text_shape(self):
        g = Graph.from_edges(3, [(1, 2), (0, 2)])
        assert write_graph(g) == "3 2\n0 2\n1 2\n"

    def test_graph_reads_any_edge_order(self):
        assert read_graph("3 2\n1 2\n0 2\n") == Graph.from_edges(3, [(0, 2), (1, 2)])

    def test_graph_format_errors(self):
        for text in [
            "",
            "3\n",
            "3 2\n0 1\n",  # wrong edge count
            "3 1\n0 3\n",  # vertex out of range
            "3 1\n1 0\n",  # u >= v
            "3 2\n0 1\n0 1\n",  # duplicate
            "3 1\na b\n",
        ]:
            with pytest.raises(FormatError):
                read_graph(text)

    def test_coloring_roundtrip(self):
        g = gnp_sample(RandomModel(n=12, p=0.4, seed=6))
        rng = np.random.default_rng(0)
        c = EdgeColoring.from_colors(g, 3, rng.integers(1, 4, g.m))
        assert read_coloring(g, write_coloring(c)) == c

    def test_coloring_text_shape(self):
        g = path_graph(3)
        c = EdgeColoring.from_colors(g, 2, [1, 2])
        assert write_coloring(c) == "2\n0 1 1\n1 2 2\n"

    def test_coloring_reads_any_line_order(self):
        g = path_graph(3)
        c = read_coloring(g, "2\n1 2 2\n0 1 1\n")
        assert c.color_of(0, 1) == 1 and c.color_of(1, 2) == 2

    def test_coloring_errors(self):
        g = path_graph(3)
        with pytest.raises(MissingColor):
            read_coloring(g, "2\n0 1 1\n")
        with pytest.raises(EdgeNotInGraph):
            read_coloring(g, "2\n0 1 1\n0 2 2\n")
        with pytest.raises(FormatError):
            read_coloring(g, "2\n0 1 1\n1 2 3\n")  # color outside palette
        with pytest.raises(FormatError):
            read_coloring(g, "2\n0 1 1\n0 1 2\n")  # edge colored twice
        with pytest.raises(FormatError):
            read_coloring(g, "0\n")
