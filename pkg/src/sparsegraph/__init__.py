"""sparsegraph: parallel graph sparsification for graph-ML preprocessing.

Reduce an undirected graph's edge set with one of four methods (random,
k-neighbor, rank-degree, local-degree), deterministically for a given seed
at any worker count. Ships a library API, a `sparsify` CLI with per-phase
timing reports and parameter sweeps, and simple on-disk formats for moving
graphs in and out.
"""

from .core import (
    AdjacencyList,
    CanonicalizeStats,
    DegreeIndex,
    Graph,
    canonicalize,
    degree_index,
    to_adjacency,
)
from .errors import (
    CapacityError,
    FileError,
    FormatError,
    OutOfRangeError,
    ParseError,
    SparseGraphError,
    ValidationError,
)
from .io import (
    CSV_EDGE_LIST,
    FORMATS,
    NATIVE_EDGE_LIST,
    PAIRED_BINARY_ARRAYS,
    InputSpec,
    LoadStats,
    SeedNodeSet,
    load_graph,
    load_seed_nodes,
    save_graph,
)
from .report import (
    OutputStats,
    PhaseTimer,
    RunReport,
    TimingBreakdown,
    compute_stats,
    emit_report,
    load_report,
)
from .sparsify import (
    DEFAULT_ALPHA,
    DEFAULT_K,
    DEFAULT_REMOVAL_RATIO,
    DEFAULT_RHO,
    DEFAULT_TARGET_NODE_FRACTION,
    METHOD_K_NEIGHBOR,
    METHOD_LOCAL_DEGREE,
    METHOD_RANDOM,
    METHOD_RANK_DEGREE,
    SparsificationResult,
    SparsifierConfig,
    k_neighbor_sparsify,
    local_degree_sparsify,
    method_names,
    random_sparsify,
    rank_degree_sparsify,
    register_method,
    summarize_graph,
)

__version__ = "0.1.0"
