"""Seeded random-graph generators for the test suite."""

from __future__ import annotations

import numpy as np
from numba import njit

from sparsegraph import Graph, canonicalize


def er_edges(n: int, p: float, rng: np.random.Generator) -> np.ndarray:
    """Erdos-Renyi G(n, p) raw edge pairs (upper triangle sampled)."""
    if n < 2:
        return np.empty((0, 2), dtype=np.int64)
    iu, iv = np.triu_indices(n, 1)
    mask = rng.random(iu.size) < p
    return np.column_stack((iu[mask], iv[mask])).astype(np.int64)


def er_graph(n: int, p: float, rng: np.random.Generator) -> Graph:
    g, _ = canonicalize(er_edges(n, p, rng), n)
    return g


def ba_edges(n: int, m: int, rng: np.random.Generator) -> np.ndarray:
    """Barabasi-Albert preferential attachment via the repeated-nodes trick."""
    if n <= m:
        return np.empty((0, 2), dtype=np.int64)
    edges: list[tuple[int, int]] = []
    repeated: list[int] = []
    for target in range(m):
        edges.append((m, target))
        repeated += [m, target]
    for source in range(m + 1, n):
        picks = rng.integers(0, len(repeated), size=m)
        for pick in picks:
            target = repeated[pick]
            edges.append((source, target))
            repeated += [source, target]
    return np.asarray(edges, dtype=np.int64)


def ba_graph(n: int, m: int, rng: np.random.Generator) -> Graph:
    g, _ = canonicalize(ba_edges(n, m, rng), n)
    return g


def gnm_graph(n: int, m: int, rng: np.random.Generator) -> Graph:
    """Uniform simple graph with exactly m edges (m <= n*(n-1)/2)."""
    total = n * (n - 1) // 2
    assert m <= total
    chosen = rng.choice(total, size=m, replace=False)
    # invert the row-major upper-triangle linearization
    chosen.sort()
    u = np.empty(m, dtype=np.int64)
    v = np.empty(m, dtype=np.int64)
    row = 0
    row_start = 0          # linear index of (row, row+1)
    row_len = n - 1        # entries in this row
    for out, idx in enumerate(chosen):
        while idx >= row_start + row_len:
            row_start += row_len
            row += 1
            row_len = n - 1 - row
        u[out] = row
        v[out] = row + 1 + (idx - row_start)
    g, _ = canonicalize(np.column_stack((u, v)), n)
    assert g.num_edges == m
    return g


def connected_graph(n: int, extra_p: float, rng: np.random.Generator) -> Graph:
    """Random spanning tree plus ER extras; connected by construction."""
    assert n >= 2
    parents = np.array([rng.integers(0, i) for i in range(1, n)], dtype=np.int64)
    tree = np.column_stack((np.arange(1, n, dtype=np.int64), parents))
    raw = np.vstack((tree, er_edges(n, extra_p, rng)))
    g, _ = canonicalize(raw, n)
    return g


@njit(cache=True)
def _ba_fast(n, m, seed):
    num_edges = (n - m) * m
    edges = np.empty((num_edges, 2), np.int64)
    repeated = np.empty(2 * num_edges, np.int64)
    filled = 0
    count = 0
    state = np.uint64(seed)
    golden = np.uint64(0x9E3779B97F4A7C15)
    for target in range(m):
        edges[count, 0] = m
        edges[count, 1] = target
        repeated[filled] = m
        repeated[filled + 1] = target
        filled += 2
        count += 1
    for source in range(m + 1, n):
        for _ in range(m):
            state = state + golden
            z = state
            z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
            z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
            z = z ^ (z >> np.uint64(31))
            target = repeated[np.int64(z % np.uint64(filled))]
            edges[count, 0] = source
            edges[count, 1] = target
            repeated[filled] = source
            repeated[filled + 1] = target
            filled += 2
            count += 1
    return edges


def big_ba_graph(n: int, m: int, seed: int) -> Graph:
    """Large Barabasi-Albert graph, generated in a jitted loop."""
    g, _ = canonicalize(_ba_fast(n, m, seed), n)
    return g
