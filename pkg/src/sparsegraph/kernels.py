"""Numba kernels behind the sparsifiers.

All kernels are parallel over vertices (or edges), nogil, and derive every
random decision from a per-entity splitmix64 stream, so the output is
bitwise identical at any worker count. The uint64 arithmetic here mirrors
sparsegraph.rng exactly (asserted by tests).
"""

from __future__ import annotations

import math
from contextlib import contextmanager

import numba
import numpy as np
from numba import njit, prange

U64 = np.uint64

_GOLDEN = U64(0x9E3779B97F4A7C15)
_SALT_EDGE_KEYS = U64(1)
_SALT_VERTEX = U64(2)
_IDENT_MASK = U64((1 << 56) - 1)

# Widest per-thread shuffle scratch row; wider rows allocate on the fly.
WORKSPACE_CAP = 1 << 20


def max_threads() -> int:
    """Upper bound on usable worker threads in this process."""
    return int(numba.config.NUMBA_NUM_THREADS)


def sampling_workspace(max_degree: int, k: int = 0) -> np.ndarray:
    width = max(1, 3 * int(k), min(int(max_degree), WORKSPACE_CAP))
    return np.empty((max_threads(), width), dtype=np.int64)


@contextmanager
def thread_limit(num_threads: int | None):
    """Temporarily pin the numba worker count; yields the effective count.

    Requests above the hardware/launch limit are clamped, never an error:
    output does not depend on the worker count anyway.
    """
    if num_threads is None:
        yield numba.get_num_threads()
        return
    effective = max(1, min(int(num_threads), max_threads()))
    previous = numba.get_num_threads()
    numba.set_num_threads(effective)
    try:
        yield effective
    finally:
        numba.set_num_threads(previous)


@njit(cache=True, nogil=True, inline="always")
def _mix64(z):
    z = (z ^ (z >> U64(30))) * U64(0xBF58476D1CE4E5B9)
    z = (z ^ (z >> U64(27))) * U64(0x94D049BB133111EB)
    return z ^ (z >> U64(31))


@njit(cache=True, nogil=True, inline="always")
def _stream_state(seed, salt, ident):
    sid = (salt << U64(56)) | (ident & _IDENT_MASK)
    return _mix64(seed ^ _mix64(sid * _GOLDEN))


@njit(cache=True, nogil=True, inline="always")
def _next_u64(state):
    state = state + _GOLDEN
    return state, _mix64(state)


@njit(cache=True, nogil=True, parallel=True)
def edge_keys(num_edges, seed):
    """One uniform uint64 key per edge index (random sparsifier ranking)."""
    keys = np.empty(num_edges, dtype=np.uint64)
    for i in prange(num_edges):
        state = _stream_state(seed, _SALT_EDGE_KEYS, U64(i))
        _, v = _next_u64(state)
        keys[i] = v
    return keys


@njit(cache=True, nogil=True, parallel=True)
def bernoulli_mark(num_edges, seed, threshold, out_mask):
    """Per-edge Bernoulli retention: keep edge i iff its key < threshold."""
    for i in prange(num_edges):
        state = _stream_state(seed, _SALT_EDGE_KEYS, U64(i))
        _, v = _next_u64(state)
        if v < threshold:
            out_mask[i] = 1


def balanced_bounds(indptr: np.ndarray, segments: int = 256) -> np.ndarray:
    """Vertex ranges of roughly equal arc mass for static prange scheduling.

    Splitting by vertex count starves threads on heavy-tailed graphs (hubs
    cluster at low ids); splitting by cumulative degree keeps contiguous
    segments while equalizing work. Scheduling never affects output.
    """
    n = indptr.size - 1
    if n <= segments:
        return np.arange(n + 1, dtype=np.int64)
    targets = np.linspace(0, indptr[-1], segments + 1)
    bounds = np.searchsorted(indptr, targets, side="left").astype(np.int64)
    bounds[0] = 0
    bounds[-1] = n
    np.maximum.accumulate(bounds, out=bounds)
    return bounds


@njit(cache=True, nogil=True, parallel=True)
def k_neighbor_mark(indptr, edge_ids, k, seed, bounds, workspace, out_mask):
    """Mark up to k incident edges per vertex (union across endpoints).

    Vertices with degree <= k mark everything; others mark a uniform
    k-subset of row positions via a partial Fisher-Yates shuffle driven by
    the vertex's own stream. The first t picks are identical for every
    k >= t, which makes retention monotone in k.

    The shuffle state lives in the caller-provided per-thread workspace;
    per-vertex heap allocation in the parallel region serializes on the
    allocator lock. For k*k <= d the shuffle is evaluated lazily: the
    position array starts as the identity and at most 2k entries ever move,
    so only the k-prefix plus a displacement map are materialized, making
    the per-vertex cost O(k^2) instead of O(d). The picks are identical to
    the full-array shuffle either way.
    """
    cap = workspace.shape[1]
    for s in prange(bounds.size - 1):
        tid = numba.get_thread_id()
        for i in range(bounds[s], bounds[s + 1]):
            start = indptr[i]
            d = indptr[i + 1] - start
            if d == 0:
                continue
            if d <= k:
                for p in range(start, start + d):
                    out_mask[edge_ids[p]] = 1
                continue
            state = _stream_state(seed, _SALT_VERTEX, U64(i))
            if k * k <= d and 3 * k <= cap:
                row = workspace[tid]
                prefix = row[:k]
                disp_at = row[k : 2 * k]
                disp_val = row[2 * k : 3 * k]
                for t in range(k):
                    prefix[t] = t
                disp = 0
                for t in range(k):
                    state, v = _next_u64(state)
                    j = t + np.int64(v % U64(d - t))
                    if j < k:
                        vj = prefix[j]
                    else:
                        vj = j
                        for q in range(disp):
                            if disp_at[q] == j:
                                vj = disp_val[q]
                                break
                    vt = prefix[t]
                    prefix[t] = vj
                    if j < k:
                        prefix[j] = vt
                    else:
                        hit = False
                        for q in range(disp):
                            if disp_at[q] == j:
                                disp_val[q] = vt
                                hit = True
                                break
                        if not hit:
                            disp_at[disp] = j
                            disp_val[disp] = vt
                            disp += 1
                    out_mask[edge_ids[start + prefix[t]]] = 1
            else:
                pos = workspace[tid] if d <= cap else np.empty(d, np.int64)
                for t in range(d):
                    pos[t] = t
                for t in range(k):
                    state, v = _next_u64(state)
                    j = t + np.int64(v % U64(d - t))
                    tmp = pos[t]
                    pos[t] = pos[j]
                    pos[j] = tmp
                    out_mask[edge_ids[start + pos[t]]] = 1


@njit(cache=True, nogil=True, inline="always")
def _rank_row(indices, degrees, start, d, base):
    """Order of row positions by (neighbor degree desc, neighbor id asc).

    Keys deg*base - id are unique per row, so quicksort order is total.
    """
    keys = np.empty(d, np.int64)
    for p in range(d):
        j = indices[start + p]
        keys[p] = -(degrees[j] * base - j)
    return np.argsort(keys)


@njit(cache=True, nogil=True, parallel=True)
def local_degree_mark(indptr, indices, edge_ids, degrees, keep_counts, bounds, out_mask):
    """Mark each vertex's edges to its keep_counts[i] highest-degree neighbors."""
    n = indptr.size - 1
    base = np.int64(n) + 1
    for s in prange(bounds.size - 1):
        for i in range(bounds[s], bounds[s + 1]):
            start = indptr[i]
            d = indptr[i + 1] - start
            if d == 0:
                continue
            ki = keep_counts[i]
            if ki >= d:
                for p in range(start, start + d):
                    out_mask[edge_ids[p]] = 1
            else:
                order = _rank_row(indices, degrees, start, d, base)
                for t in range(ki):
                    out_mask[edge_ids[start + order[t]]] = 1


@njit(cache=True, nogil=True, parallel=True)
def rank_degree_hop(indptr, indices, edge_ids, degrees, frontier, rho, out_mask, node_mark, newseed_mark):
    """One rank-degree hop: every frontier seed selects its top-rho neighbors.

    Marks the selected edges and both endpoints, and flags the selected
    neighbors as candidates for the next frontier.
    """
    n = indptr.size - 1
    base = np.int64(n) + 1
    for f in prange(frontier.size):
        i = frontier[f]
        start = indptr[i]
        d = indptr[i + 1] - start
        if d == 0:
            continue
        take = np.int64(math.floor(rho * d))
        if take < 1:
            take = 1
        order = _rank_row(indices, degrees, start, d, base)
        for t in range(take):
            p = start + order[t]
            j = indices[p]
            out_mask[edge_ids[p]] = 1
            node_mark[i] = 1
            node_mark[j] = 1
            newseed_mark[j] = 1


def warmup() -> None:
    """Compile every kernel on a toy input (first call is slow, then cached)."""
    indptr = np.array([0, 2, 3, 5, 6], np.int64)
    indices = np.array([1, 2, 0, 0, 3, 2], np.int64)
    eids = np.array([0, 1, 0, 1, 2, 2], np.int64)
    deg = np.array([2, 1, 2, 1], np.int64)
    bounds = balanced_bounds(indptr)
    mask = np.zeros(3, np.uint8)
    edge_keys(3, U64(0))
    bernoulli_mark(3, U64(0), U64(1 << 63), mask)
    k_neighbor_mark(indptr, eids, 1, U64(0), bounds, sampling_workspace(2), mask)
    local_degree_mark(indptr, indices, eids, deg, np.ones(4, np.int64), bounds, mask)
    rank_degree_hop(
        indptr, indices, eids, deg,
        np.array([0], np.int64), 0.5, mask,
        np.zeros(4, np.uint8), np.zeros(4, np.uint8),
    )
