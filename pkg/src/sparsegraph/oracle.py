"""Naive single-threaded reference implementations of the four sparsifiers.

These transcribe each algorithm literally over Python dicts and lists,
sharing only the seeding scheme (sparsegraph.rng) with the parallel
implementations. They exist so tests can assert exact output equality on
small graphs (|V| up to ~1000); nothing in the library proper calls them.
"""

from __future__ import annotations

import math

from . import rng
from .core import AdjacencyList, DegreeIndex, Graph
from .errors import ValidationError
from .sparsify import (
    METHOD_K_NEIGHBOR,
    METHOD_LOCAL_DEGREE,
    METHOD_RANDOM,
    METHOD_RANK_DEGREE,
    SparsifierConfig,
    default_max_hops,
    retained_count,
)

__all__ = ["reference_oracle"]

Edge = tuple[int, int]


def _neighbor_lists(adj: AdjacencyList) -> list[list[int]]:
    return [[int(j) for j in adj.neighbors(i)] for i in range(adj.num_nodes)]


def _canon(i: int, j: int) -> Edge:
    return (i, j) if i < j else (j, i)


def _oracle_random(g: Graph, cfg: SparsifierConfig) -> set[Edge]:
    edges = [(int(u), int(v)) for u, v in g.edges]
    e = len(edges)
    if cfg.bernoulli:
        threshold = rng.bernoulli_threshold(1.0 - cfg.removal_ratio)
        kept = set()
        for idx, edge in enumerate(edges):
            state = rng.stream_state(cfg.seed, rng.SALT_EDGE_KEYS, idx)
            _, key = rng.next_u64(state)
            if key < threshold:
                kept.add(edge)
        return kept
    keys = []
    for idx in range(e):
        state = rng.stream_state(cfg.seed, rng.SALT_EDGE_KEYS, idx)
        _, key = rng.next_u64(state)
        keys.append((key, idx))
    keys.sort()
    m = retained_count(e, cfg.removal_ratio)
    return {edges[idx] for _, idx in keys[:m]}


def _oracle_k_neighbor(adj: AdjacencyList, cfg: SparsifierConfig) -> set[Edge]:
    k = int(cfg.k)
    nbrs = _neighbor_lists(adj)
    kept: set[Edge] = set()
    for i in range(adj.num_nodes):
        candidates = list(nbrs[i])
        d = len(candidates)
        if d == 0:
            continue
        if d <= k:
            chosen = candidates
        else:
            state = rng.stream_state(cfg.seed, rng.SALT_VERTEX, i)
            for t in range(k):
                state, r = rng.rand_below(state, d - t)
                j = t + r
                candidates[t], candidates[j] = candidates[j], candidates[t]
            chosen = candidates[:k]
        for j in chosen:
            kept.add(_canon(i, j))
    return kept


def _ranked(neighbors: list[int], deg: DegreeIndex) -> list[int]:
    return sorted(neighbors, key=lambda j: (-deg[j], j))


def _oracle_local_degree(adj: AdjacencyList, deg: DegreeIndex, cfg: SparsifierConfig) -> set[Edge]:
    alpha = float(cfg.alpha)
    kept: set[Edge] = set()
    for i in range(adj.num_nodes):
        neighbors = [int(j) for j in adj.neighbors(i)]
        d = len(neighbors)
        if d == 0:
            continue
        ki = max(1, math.floor(float(d) ** alpha))
        for j in _ranked(neighbors, deg)[:ki]:
            kept.add(_canon(i, j))
    return kept


def _oracle_rank_degree(adj: AdjacencyList, deg: DegreeIndex, cfg: SparsifierConfig) -> set[Edge]:
    n = adj.num_nodes
    x = math.ceil(float(cfg.target_node_fraction) * n)
    if x < 1:
        raise ValidationError("rank-degree needs a graph with at least one node")
    max_hops = cfg.max_hops if cfg.max_hops is not None else default_max_hops(n)
    nbrs = _neighbor_lists(adj)

    if cfg.seeds is not None and len(cfg.seeds) > 0:
        frontier = [int(i) for i in cfg.seeds.ids]
    elif cfg.random_seed_count:
        state = rng.stream_state(cfg.seed, rng.SALT_SEED_INIT, 0)
        _, frontier = rng.sample_distinct(state, int(cfg.random_seed_count), n)
    else:
        raise ValidationError("rank-degree needs non-empty seed nodes or random_seed_count")

    initial_count = len(frontier)
    kept: set[Edge] = set()
    covered: set[int] = set()
    hops = 0
    fallbacks = 0
    while len(covered) < x and hops < max_hops:
        new_seeds: set[int] = set()
        for i in frontier:
            d = len(nbrs[i])
            if d == 0:
                continue
            take = max(1, math.floor(float(cfg.rho) * d))
            top = _ranked(nbrs[i], deg)[:take]
            for j in top:
                kept.add(_canon(i, j))
                covered.add(i)
                covered.add(j)
            new_seeds.update(top)
        hops += 1
        frontier = sorted(new_seeds)
        if not frontier and len(covered) < x and hops < max_hops:
            state = rng.stream_state(cfg.seed, rng.SALT_FALLBACK, fallbacks)
            _, frontier = rng.sample_distinct(state, initial_count, n)
            fallbacks += 1
    return kept


def reference_oracle(g: Graph, adj: AdjacencyList, cfg: SparsifierConfig) -> set[Edge]:
    """Edge set the named method must produce for (g, cfg); small graphs only."""
    cfg.validate()
    deg = DegreeIndex(degree_of=adj.degrees)
    if cfg.method == METHOD_RANDOM:
        return _oracle_random(g, cfg)
    if cfg.method == METHOD_K_NEIGHBOR:
        return _oracle_k_neighbor(adj, cfg)
    if cfg.method == METHOD_LOCAL_DEGREE:
        return _oracle_local_degree(adj, deg, cfg)
    if cfg.method == METHOD_RANK_DEGREE:
        return _oracle_rank_degree(adj, deg, cfg)
    raise ValidationError(f"reference oracle does not cover method {cfg.method!r}")
