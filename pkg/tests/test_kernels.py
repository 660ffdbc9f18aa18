"""Compiled kernels and their pure fallbacks agree on identical inputs."""

import numpy as np
import pytest

from properconn import kernels
from properconn.exact import simple_path_tables
from properconn.graph import EdgeColoring, RandomModel, cycle_graph, gnp_sample, star_graph

BACKEND_PAIRS = {
    "reach_mask": (kernels._reach_jit, kernels._reach_np),
    "bfs_dist": (kernels._bfs_dist_jit, kernels._bfs_dist_np),
    "walk_bfs": (kernels._walk_bfs_jit, kernels._walk_bfs_np),
    "certify_targets": (kernels._certify_jit, kernels._certify_py),
    "path_dfs": (kernels._path_dfs_jit, kernels._path_dfs_py),
    "posa_search": (kernels._posa_jit, kernels._posa_py),
    "pc_engine": (kernels._pc_engine_jit, kernels._pc_engine_py),
}


def random_colored_graph(seed: int, n: int = 14, p: float = 0.3, k: int = 2):
    g = gnp_sample(RandomModel(n=n, p=p, seed=seed))
    rng = np.random.default_rng(seed + 1)
    colors = rng.integers(1, k + 1, g.m)
    c = EdgeColoring.from_colors(g, k, colors) if g.m else EdgeColoring.from_colors(g, k, [])
    return g, c


@pytest.mark.parametrize("seed", range(8))
def test_reach_and_bfs_agree(seed):
    g, _ = random_colored_graph(seed)
    jit_reach, np_reach = BACKEND_PAIRS["reach_mask"]
    jit_bfs, np_bfs = BACKEND_PAIRS["bfs_dist"]
    for src in range(0, g.n, 5):
        assert np.array_equal(
            jit_reach(g.indptr, g.indices, src), np_reach(g.indptr, g.indices, src)
        )
        assert np.array_equal(
            jit_bfs(g.indptr, g.indices, src), np_bfs(g.indptr, g.indices, src)
        )


@pytest.mark.parametrize("seed", range(8))
@pytest.mark.parametrize("k", [2, 3])
def test_walk_bfs_and_certify_agree(seed, k):
    g, c = random_colored_graph(seed, k=k)
    if g.m == 0:
        return
    adj = c.adj_colors(g)
    jit_walk, np_walk = BACKEND_PAIRS["walk_bfs"]
    jit_cert, py_cert = BACKEND_PAIRS["certify_targets"]
    for src in range(0, g.n, 3):
        dj, pj = jit_walk(g.indptr, g.indices, adj, k, src)
        dn, pn = np_walk(g.indptr, g.indices, adj, k, src)
        assert np.array_equal(dj, dn)
        assert np.array_equal(pj, pn)
        assert np.array_equal(
            jit_cert(g.n, k, src, dj, pj), py_cert(g.n, k, src, dn, pn)
        )


@pytest.mark.parametrize("seed", range(8))
def test_path_dfs_agrees_including_budget(seed):
    g, c = random_colored_graph(seed)
    if g.m == 0:
        return
    adj = c.adj_colors(g)
    jit_dfs, py_dfs = BACKEND_PAIRS["path_dfs"]
    jit_walk, _ = BACKEND_PAIRS["walk_bfs"]
    for u, v in [(0, g.n - 1), (1, g.n - 2)]:
        rdist, _ = jit_walk(g.indptr, g.indices, adj, c.palette_size, v)
        for budget in (0, 3, 1_000_000):
            a = jit_dfs(g.indptr, g.indices, adj, c.palette_size, u, v, rdist, budget)
            b = py_dfs(g.indptr, g.indices, adj, c.palette_size, u, v, rdist, budget)
            assert np.array_equal(a, b)


def test_path_dfs_budget_sentinel():
    # A tiny budget cannot decide a pair that needs real search; both
    # backends must report exhaustion as the one-element [-1] array.
    g, c = random_colored_graph(3, n=30, p=0.2)
    adj = c.adj_colors(g)
    jit_dfs, py_dfs = BACKEND_PAIRS["path_dfs"]
    jit_walk, _ = BACKEND_PAIRS["walk_bfs"]
    rdist, _ = jit_walk(g.indptr, g.indices, adj, 2, g.n - 1)
    out_j = jit_dfs(g.indptr, g.indices, adj, 2, 0, g.n - 1, rdist, 1)
    out_p = py_dfs(g.indptr, g.indices, adj, 2, 0, g.n - 1, rdist, 1)
    assert out_j.tolist() == [-1]
    assert out_p.tolist() == [-1]


@pytest.mark.parametrize("seed", range(6))
def test_posa_agrees_and_returns_cycles(seed):
    g = gnp_sample(RandomModel(n=40, p=0.25, seed=seed))
    rng = np.random.default_rng(seed)
    rand = rng.random(6000)
    jit_posa, py_posa = BACKEND_PAIRS["posa_search"]
    a = jit_posa(g.indptr, g.indices, rand, 0, rand.shape[0])
    b = py_posa(g.indptr, g.indices, rand, 0, rand.shape[0])
    assert np.array_equal(a, b)
    if a.size:
        # a Hamiltonian cycle: a permutation whose consecutive pairs are edges
        assert sorted(a.tolist()) == list(range(g.n))
        for i in range(g.n):
            u, v = int(a[i]), int(a[(i + 1) % g.n])
            assert g.has_edge(u, v)


@pytest.mark.parametrize("k", [1, 2, 3])
def test_pc_engine_backends_agree(k):
    for g in (cycle_graph(5), star_graph(3), gnp_sample(RandomModel(7, 0.5, 4))):
        pair_ptr, path_ptr, path_edges = simple_path_tables(g)
        jit_engine, py_engine = BACKEND_PAIRS["pc_engine"]
        a = jit_engine(pair_ptr, path_ptr, path_edges, g.m, k)
        b = py_engine(pair_ptr, path_ptr, path_edges, g.m, k)
        assert np.array_equal(a, b)
        c = kernels._pc2_engine_np(pair_ptr, path_ptr, path_edges, g.m) if k == 2 else None
        if c is not None:
            assert np.array_equal(a, c)


def test_warmup_runs_every_kernel():
    kernels.warmup()
