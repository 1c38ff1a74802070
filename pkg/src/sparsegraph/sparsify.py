"""The four sparsification algorithms behind one unified entry point.

Each method computes a retention mask over the canonical edge array:

* random: keep exactly round((1 - removal_ratio) * |E|) edges, chosen by
  ranking per-edge pseudorandom keys (order-independent, exact count). A
  per-edge Bernoulli mode is available behind ``bernoulli=True``.
* k-neighbor: every vertex marks up to k incident edges (all of them when
  its degree is <= k, otherwise a uniform k-subset); an edge survives if
  either endpoint marks it, so each vertex keeps >= min(k, d_i) edges.
* rank-degree: hop-parallel frontier expansion from seed nodes; each seed
  marks the edges to its top max(1, floor(rho * d_i)) neighbors by original
  degree until the output touches x = ceil(target_node_fraction * n) nodes,
  re-seeding randomly if a frontier empties.
* local-degree: every vertex with degree d_i > 0 marks edges to its
  max(1, floor(d_i ** alpha)) highest-degree neighbors; union retention,
  no randomness.

Degree ranking always uses the ORIGINAL graph's degrees, ties broken by
ascending neighbor id. All stochastic choices derive from per-entity
splitmix64 streams (sparsegraph.rng), so results are identical at any
worker count, and sampling is prefix-nested: retention is monotone in k,
alpha, and 1 - removal_ratio on a fixed graph and seed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Callable

import numpy as np

from . import kernels, rng
from .core import AdjacencyList, DegreeIndex, Graph, degree_index, to_adjacency
from .errors import CapacityError, ValidationError
from .io import SeedNodeSet
from .report import PhaseTimer, TimingBreakdown, edge_reduction_pct

__all__ = [
    "METHOD_RANDOM",
    "METHOD_K_NEIGHBOR",
    "METHOD_RANK_DEGREE",
    "METHOD_LOCAL_DEGREE",
    "DEFAULT_REMOVAL_RATIO",
    "DEFAULT_K",
    "DEFAULT_RHO",
    "DEFAULT_TARGET_NODE_FRACTION",
    "DEFAULT_ALPHA",
    "SparsifierConfig",
    "SparsificationResult",
    "summarize_graph",
    "random_sparsify",
    "k_neighbor_sparsify",
    "rank_degree_sparsify",
    "local_degree_sparsify",
    "register_method",
    "method_names",
    "retained_count",
    "default_max_hops",
    "local_degree_keep_counts",
]

METHOD_RANDOM = "random"
METHOD_K_NEIGHBOR = "k-neighbor"
METHOD_RANK_DEGREE = "rank-degree"
METHOD_LOCAL_DEGREE = "local-degree"

# Library-wide default parameters.
DEFAULT_REMOVAL_RATIO = 0.30
DEFAULT_K = 5
DEFAULT_RHO = 0.50
DEFAULT_TARGET_NODE_FRACTION = 0.25
DEFAULT_ALPHA = 0.5


def retained_count(num_edges: int, removal_ratio: float) -> int:
    """Exact retained-edge count: round((1 - r) * |E|), half-to-even."""
    return int(round((1.0 - removal_ratio) * num_edges))


def default_max_hops(num_nodes: int) -> int:
    """Safety bound on rank-degree hops: 10 * ceil(log2(n) + 1)."""
    if num_nodes <= 1:
        return 10
    return 10 * math.ceil(math.log2(num_nodes) + 1)


def local_degree_keep_counts(degrees: np.ndarray, alpha: float) -> np.ndarray:
    """Per-vertex pick count max(1, floor(d ** alpha)); 0 for isolated nodes.

    Computed in double precision; floor of a value one ulp below an integer
    is accepted as-is.
    """
    counts = np.zeros(degrees.size, dtype=np.int64)
    pos = degrees > 0
    if pos.any():
        raw = np.floor(np.power(degrees[pos].astype(np.float64), float(alpha)))
        counts[pos] = np.maximum(1, raw.astype(np.int64))
    return counts


@dataclass(frozen=True)
class SparsifierConfig:
    """Method selection plus its parameters; only the fields of the chosen
    method are consulted. `seed` fully determines all stochastic choices."""

    method: str
    removal_ratio: float | None = None
    bernoulli: bool = False
    k: int | None = None
    rho: float | None = None
    target_node_fraction: float | None = None
    seeds: SeedNodeSet | None = None
    random_seed_count: int | None = None
    alpha: float | None = None
    seed: int = 0
    max_hops: int | None = None

    def validate(self) -> None:
        if self.method not in _REGISTRY:
            raise ValidationError(
                f"unknown method {self.method!r}; registered: {method_names()}"
            )
        if self.method == METHOD_RANDOM:
            r = self.removal_ratio
            if r is None or not (0.0 <= r < 1.0):
                raise ValidationError(f"removal_ratio must be in [0, 1), got {r}")
        elif self.method == METHOD_K_NEIGHBOR:
            if self.k is None or int(self.k) < 1:
                raise ValidationError(f"k must be a positive integer, got {self.k}")
        elif self.method == METHOD_RANK_DEGREE:
            if self.rho is None or not (0.0 < self.rho <= 1.0):
                raise ValidationError(f"rho must be in (0, 1], got {self.rho}")
            f = self.target_node_fraction
            if f is None or not (0.0 < f <= 1.0):
                raise ValidationError(f"target_node_fraction must be in (0, 1], got {f}")
            has_seeds = self.seeds is not None and len(self.seeds) > 0
            wants_random = self.random_seed_count is not None
            if wants_random and int(self.random_seed_count) < 1:
                raise ValidationError("random_seed_count must be >= 1")
            if not has_seeds and not wants_random:
                raise ValidationError(
                    "rank-degree needs non-empty seed nodes or random_seed_count"
                )
            if self.max_hops is not None and int(self.max_hops) < 1:
                raise ValidationError(f"max_hops must be >= 1, got {self.max_hops}")
        elif self.method == METHOD_LOCAL_DEGREE:
            a = self.alpha
            if a is None or not (0.0 <= a <= 1.0):
                raise ValidationError(f"alpha must be in [0, 1], got {a}")

    def echo(self) -> dict[str, Any]:
        """JSON-friendly echo of the consulted fields only."""
        out: dict[str, Any] = {"method": self.method, "seed": int(self.seed)}
        if self.method == METHOD_RANDOM:
            out["removal_ratio"] = float(self.removal_ratio)
            out["bernoulli"] = bool(self.bernoulli)
        elif self.method == METHOD_K_NEIGHBOR:
            out["k"] = int(self.k)
        elif self.method == METHOD_RANK_DEGREE:
            out["rho"] = float(self.rho)
            out["target_node_fraction"] = float(self.target_node_fraction)
            out["seed_node_count"] = len(self.seeds) if self.seeds is not None else 0
            if self.random_seed_count is not None:
                out["random_seed_count"] = int(self.random_seed_count)
            if self.max_hops is not None:
                out["max_hops"] = int(self.max_hops)
        elif self.method == METHOD_LOCAL_DEGREE:
            out["alpha"] = float(self.alpha)
        return out


@dataclass(frozen=True)
class SparsificationResult:
    """Output graph plus compression statistics and the timing breakdown."""

    graph: Graph
    edge_reduction_pct: float
    node_coverage: int
    timing: TimingBreakdown
    config_echo: SparsifierConfig
    threads: int
    method_info: dict[str, Any] = field(default_factory=dict)


def _seed_u64(seed: int) -> np.uint64:
    return np.uint64(seed & rng.MASK64)


def random_sparsify(
    g: Graph,
    removal_ratio: float,
    rng_seed: int,
    bernoulli: bool = False,
    num_threads: int | None = None,
) -> np.ndarray:
    """Retention mask keeping round((1 - removal_ratio) * |E|) edges.

    Each edge gets a pseudorandom key from its index; the smallest keys win.
    In bernoulli mode each edge is kept independently with probability
    1 - removal_ratio instead (no exact-count guarantee).
    """
    if not (0.0 <= removal_ratio < 1.0):
        raise ValidationError(f"removal_ratio must be in [0, 1), got {removal_ratio}")
    e = g.num_edges
    mask = np.zeros(e, dtype=np.uint8)
    if e == 0:
        return mask
    with kernels.thread_limit(num_threads):
        if bernoulli:
            threshold = rng.bernoulli_threshold(1.0 - removal_ratio)
            if threshold > rng.MASK64:
                mask[:] = 1
            elif threshold > 0:
                kernels.bernoulli_mark(e, _seed_u64(rng_seed), np.uint64(threshold), mask)
        else:
            m = retained_count(e, removal_ratio)
            if m >= e:
                mask[:] = 1
            elif m > 0:
                keys = kernels.edge_keys(e, _seed_u64(rng_seed))
                order = np.argsort(keys, kind="stable")
                mask[order[:m]] = 1
    return mask


def k_neighbor_sparsify(
    adj: AdjacencyList,
    k: int,
    rng_seed: int,
    num_threads: int | None = None,
) -> np.ndarray:
    """Union-retention mask of per-vertex uniform k-subsets of neighbors."""
    if int(k) < 1:
        raise ValidationError(f"k must be a positive integer, got {k}")
    mask = np.zeros(adj.num_edges, dtype=np.uint8)
    if adj.num_edges == 0:
        return mask
    bounds = kernels.balanced_bounds(adj.indptr)
    workspace = kernels.sampling_workspace(int(adj.degrees.max()), int(k))
    with kernels.thread_limit(num_threads):
        kernels.k_neighbor_mark(
            adj.indptr, adj.edge_ids, int(k), _seed_u64(rng_seed), bounds, workspace, mask
        )
    return mask


def local_degree_sparsify(
    adj: AdjacencyList,
    deg: DegreeIndex,
    alpha: float,
    num_threads: int | None = None,
) -> np.ndarray:
    """Union-retention mask of per-vertex top-floor(d^alpha) neighbor picks."""
    if not (0.0 <= alpha <= 1.0):
        raise ValidationError(f"alpha must be in [0, 1], got {alpha}")
    mask = np.zeros(adj.num_edges, dtype=np.uint8)
    if adj.num_edges == 0:
        return mask
    _check_rank_capacity(adj.num_nodes, deg.degree_of)
    counts = local_degree_keep_counts(deg.degree_of, alpha)
    bounds = kernels.balanced_bounds(adj.indptr)
    with kernels.thread_limit(num_threads):
        kernels.local_degree_mark(
            adj.indptr, adj.indices, adj.edge_ids, deg.degree_of, counts, bounds, mask
        )
    return mask


def rank_degree_sparsify(
    adj: AdjacencyList,
    deg: DegreeIndex,
    seeds: SeedNodeSet | None,
    rho: float,
    target_node_fraction: float,
    rng_seed: int,
    max_hops: int | None = None,
    random_seed_count: int | None = None,
    num_threads: int | None = None,
) -> tuple[np.ndarray, dict[str, Any]]:
    """Hop-parallel rank-degree expansion; returns (mask, run info).

    The node target x = ceil(target_node_fraction * n) is checked between
    hops, so the final hop may overshoot. An emptied frontier triggers a
    re-seed with |initial seeds| uniform random nodes. Execution always
    halts within max_hops; falling short of x sets info["truncated"].
    """
    if not (0.0 < rho <= 1.0):
        raise ValidationError(f"rho must be in (0, 1], got {rho}")
    if not (0.0 < target_node_fraction <= 1.0):
        raise ValidationError(
            f"target_node_fraction must be in (0, 1], got {target_node_fraction}"
        )
    n = adj.num_nodes
    x = math.ceil(target_node_fraction * n)
    if x < 1:
        raise ValidationError("rank-degree needs a graph with at least one node")
    if max_hops is None:
        max_hops = default_max_hops(n)
    if max_hops < 1:
        raise ValidationError(f"max_hops must be >= 1, got {max_hops}")
    _check_rank_capacity(n, deg.degree_of)

    if seeds is not None and len(seeds) > 0:
        seeds.validate_against(n)
        frontier = np.asarray(seeds.ids, dtype=np.int64)
    elif random_seed_count is not None and int(random_seed_count) >= 1:
        state = rng.stream_state(rng_seed, rng.SALT_SEED_INIT, 0)
        _, ids = rng.sample_distinct(state, int(random_seed_count), n)
        frontier = np.asarray(ids, dtype=np.int64)
    else:
        raise ValidationError("rank-degree needs non-empty seed nodes or random_seed_count")

    initial_seed_count = int(frontier.size)
    mask = np.zeros(adj.num_edges, dtype=np.uint8)
    node_mark = np.zeros(n, dtype=np.uint8)
    newseed_mark = np.zeros(n, dtype=np.uint8)

    hops = 0
    fallbacks = 0
    covered = 0
    with kernels.thread_limit(num_threads):
        while covered < x and hops < max_hops:
            newseed_mark[:] = 0
            kernels.rank_degree_hop(
                adj.indptr, adj.indices, adj.edge_ids, deg.degree_of,
                frontier, float(rho), mask, node_mark, newseed_mark,
            )
            hops += 1
            covered = int(np.count_nonzero(node_mark))
            frontier = np.nonzero(newseed_mark)[0].astype(np.int64)
            if frontier.size == 0 and covered < x and hops < max_hops:
                state = rng.stream_state(rng_seed, rng.SALT_FALLBACK, fallbacks)
                _, ids = rng.sample_distinct(state, initial_seed_count, n)
                frontier = np.asarray(ids, dtype=np.int64)
                fallbacks += 1

    info = {
        "hops": hops,
        "fallback_reseeds": fallbacks,
        "target_nodes": x,
        "covered_nodes": covered,
        "truncated": covered < x,
    }
    return mask, info


def _check_rank_capacity(num_nodes: int, degrees: np.ndarray) -> None:
    # Ranking keys pack (degree, id) into one int64: degree * (n+1) - id.
    if num_nodes and degrees.size and int(degrees.max()) * (num_nodes + 1) >= 2**62:
        raise CapacityError(
            f"graph too large for int64 ranking keys (num_nodes={num_nodes})"
        )


# --- method registry ---------------------------------------------------------

_RunFn = Callable[..., tuple[np.ndarray, dict[str, Any]]]


@dataclass(frozen=True)
class _Method:
    name: str
    run: _RunFn
    needs_adjacency: bool


_REGISTRY: dict[str, _Method] = {}


def register_method(name: str, run: _RunFn, needs_adjacency: bool = True) -> None:
    """Register a sparsifier under `name` for summarize_graph dispatch.

    `run(g, adj, deg, cfg, num_threads)` must return (edge retention mask,
    info dict). Re-registering a name replaces the previous entry.
    """
    _REGISTRY[name] = _Method(name=name, run=run, needs_adjacency=needs_adjacency)


def method_names() -> tuple[str, ...]:
    return tuple(sorted(_REGISTRY))


def _run_random(g, adj, deg, cfg, num_threads):
    mask = random_sparsify(
        g, cfg.removal_ratio, cfg.seed, bernoulli=cfg.bernoulli, num_threads=num_threads
    )
    return mask, {}


def _run_k_neighbor(g, adj, deg, cfg, num_threads):
    return k_neighbor_sparsify(adj, cfg.k, cfg.seed, num_threads=num_threads), {}


def _run_rank_degree(g, adj, deg, cfg, num_threads):
    return rank_degree_sparsify(
        adj, deg, cfg.seeds, cfg.rho, cfg.target_node_fraction, cfg.seed,
        max_hops=cfg.max_hops, random_seed_count=cfg.random_seed_count,
        num_threads=num_threads,
    )


def _run_local_degree(g, adj, deg, cfg, num_threads):
    return local_degree_sparsify(adj, deg, cfg.alpha, num_threads=num_threads), {}


register_method(METHOD_RANDOM, _run_random, needs_adjacency=False)
register_method(METHOD_K_NEIGHBOR, _run_k_neighbor)
register_method(METHOD_RANK_DEGREE, _run_rank_degree)
register_method(METHOD_LOCAL_DEGREE, _run_local_degree)


def summarize_graph(
    g: Graph,
    adj: AdjacencyList | None,
    cfg: SparsifierConfig,
    num_threads: int | None = None,
) -> SparsificationResult:
    """Unified entry point: dispatch cfg.method and assemble the result.

    Pass adj=None to let structure-aware methods build (and time) the
    adjacency conversion themselves; a pre-built adj must derive from g.
    """
    cfg.validate()
    method = _REGISTRY[cfg.method]

    if adj is not None and (adj.num_nodes != g.num_nodes or adj.num_edges != g.num_edges):
        raise ValidationError("adjacency does not match the graph it claims to derive from")

    timer = PhaseTimer()
    deg = None
    if method.needs_adjacency and adj is None:
        with timer.phase("edge_to_adjacency"):
            adj = to_adjacency(g)
            deg = degree_index(adj)
    elif adj is not None:
        deg = degree_index(adj)

    with kernels.thread_limit(num_threads) as threads:
        with timer.phase("sparsification"):
            mask, info = method.run(g, adj, deg, cfg, num_threads)
            out_edges = g.edges[mask.view(np.bool_)]
            out_graph = Graph(g.num_nodes, out_edges)

    coverage = int(np.unique(out_edges).size) if out_edges.size else 0
    return SparsificationResult(
        graph=out_graph,
        edge_reduction_pct=edge_reduction_pct(g.num_edges, out_graph.num_edges),
        node_coverage=coverage,
        timing=timer.finish(),
        config_echo=cfg,
        threads=threads,
        method_info=info,
    )
