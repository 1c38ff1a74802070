"""Canonical graph containers and conversions shared by all sparsifiers.

A Graph stores each undirected edge once as (min, max) with no self-loops or
duplicates, sorted lexicographically. An AdjacencyList materializes both arc
directions in CSR layout with per-row neighbors sorted ascending; alongside
each arc it records the index of its canonical edge so per-vertex selections
can be folded into a single edge mask.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import OutOfRangeError, ValidationError

__all__ = [
    "Graph",
    "AdjacencyList",
    "DegreeIndex",
    "CanonicalizeStats",
    "canonicalize",
    "to_adjacency",
    "degree_index",
]


def _freeze(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class Graph:
    """Undirected graph as a canonical edge list plus a node count.

    edges has shape (E, 2) with u < v per row, rows unique and sorted
    lexicographically. num_nodes may exceed the ids present (isolated nodes).
    """

    num_nodes: int
    edges: np.ndarray

    def __post_init__(self):
        edges = np.ascontiguousarray(np.asarray(self.edges, dtype=np.int64))
        if edges.size == 0:
            edges = edges.reshape(0, 2)
        if edges.ndim != 2 or edges.shape[1] != 2:
            raise ValidationError(f"edge array must have shape (E, 2), got {edges.shape}")
        object.__setattr__(self, "edges", _freeze(edges))

    @property
    def num_edges(self) -> int:
        return self.edges.shape[0]

    def edge_set(self) -> set[tuple[int, int]]:
        """Edges as a set of (u, v) tuples; convenient for tests."""
        return {(int(u), int(v)) for u, v in self.edges}

    def __eq__(self, other) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.num_nodes == other.num_nodes and np.array_equal(self.edges, other.edges)


@dataclass(frozen=True, eq=False)
class AdjacencyList:
    """CSR adjacency with both arc directions materialized.

    neighbors of i: indices[indptr[i]:indptr[i+1]], strictly increasing.
    edge_ids maps each arc to the index of its canonical edge in the source
    Graph, so marking edge_ids[arc] selects the undirected edge.
    """

    indptr: np.ndarray
    indices: np.ndarray
    edge_ids: np.ndarray
    degrees: np.ndarray

    @property
    def num_nodes(self) -> int:
        return self.indptr.size - 1

    @property
    def num_edges(self) -> int:
        return self.indices.size // 2

    def neighbors(self, i: int) -> np.ndarray:
        return self.indices[self.indptr[i] : self.indptr[i + 1]]


@dataclass(frozen=True, eq=False)
class DegreeIndex:
    """Per-node degree of the ORIGINAL graph, frozen for ranking.

    Rank-based sparsifiers rank neighbors by these degrees throughout a run,
    regardless of which edges have already been selected.
    """

    degree_of: np.ndarray

    def __getitem__(self, i: int) -> int:
        return int(self.degree_of[i])


class CanonicalizeStats(NamedTuple):
    raw_edges: int
    self_loops_dropped: int
    duplicates_collapsed: int


def canonicalize(raw_edges, num_nodes: int) -> tuple[Graph, CanonicalizeStats]:
    """Build a canonical Graph from arbitrary (u, v) pairs.

    Each pair maps to (min, max); self-loops are dropped and counted,
    duplicates collapse to one. Raises OutOfRangeError if any id falls
    outside [0, num_nodes).
    """
    if num_nodes < 0:
        raise ValidationError("num_nodes must be non-negative")
    arr = np.asarray(raw_edges, dtype=np.int64)
    if arr.size == 0:
        empty = np.empty((0, 2), dtype=np.int64)
        return Graph(num_nodes, empty), CanonicalizeStats(0, 0, 0)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ValidationError(f"raw edges must have shape (E, 2), got {arr.shape}")

    bad = (arr < 0) | (arr >= num_nodes)
    if bad.any():
        row = int(np.nonzero(bad.any(axis=1))[0][0])
        u, v = int(arr[row, 0]), int(arr[row, 1])
        raise OutOfRangeError(
            f"edge ({u}, {v}) out of range for num_nodes={num_nodes}"
        )

    raw_count = arr.shape[0]
    loops = arr[:, 0] == arr[:, 1]
    n_loops = int(np.count_nonzero(loops))
    arr = arr[~loops]

    lo = np.minimum(arr[:, 0], arr[:, 1])
    hi = np.maximum(arr[:, 0], arr[:, 1])
    order = np.lexsort((hi, lo))
    lo, hi = lo[order], hi[order]
    if lo.size:
        keep = np.empty(lo.size, dtype=bool)
        keep[0] = True
        keep[1:] = (lo[1:] != lo[:-1]) | (hi[1:] != hi[:-1])
        n_dups = int(lo.size - np.count_nonzero(keep))
        lo, hi = lo[keep], hi[keep]
    else:
        n_dups = 0

    edges = np.column_stack((lo, hi))
    return Graph(num_nodes, edges), CanonicalizeStats(raw_count, n_loops, n_dups)


def to_adjacency(g: Graph) -> AdjacencyList:
    """Materialize both arc directions of g in CSR form.

    Deterministic for a given g: rows sorted ascending, arc count = 2|E|.
    """
    n = g.num_nodes
    edges = g.edges
    e = edges.shape[0]
    eid = np.arange(e, dtype=np.int64)
    src = np.concatenate((edges[:, 0], edges[:, 1]))
    dst = np.concatenate((edges[:, 1], edges[:, 0]))
    eids = np.concatenate((eid, eid))

    order = np.lexsort((dst, src))
    indices = np.ascontiguousarray(dst[order])
    edge_ids = np.ascontiguousarray(eids[order])

    degrees = np.bincount(src, minlength=n).astype(np.int64) if e else np.zeros(n, np.int64)
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(degrees, out=indptr[1:])

    return AdjacencyList(
        indptr=_freeze(indptr),
        indices=_freeze(indices),
        edge_ids=_freeze(edge_ids),
        degrees=_freeze(degrees),
    )


def degree_index(adj: AdjacencyList) -> DegreeIndex:
    """Snapshot the adjacency degrees for rank-based selection."""
    return DegreeIndex(degree_of=adj.degrees)
