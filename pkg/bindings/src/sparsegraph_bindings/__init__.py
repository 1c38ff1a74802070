"""Array-interchange bindings for sparsegraph.

Graph-ML pipelines hand over two integer id arrays (source, destination),
get back the sparsified edge list as two arrays plus the run report as a
plain dict, no files involved. The boundary stays framework-agnostic: build
the arrays from whatever graph object your stack uses and rebuild it from
the returned pair.

Boundary conversion costs appear in the report as their own phases:
``to_internal`` (arrays in) and ``export`` (arrays out), next to
``edge_to_adjacency`` and ``sparsification`` from the core. The core's
parallel kernels run with the GIL released, so host threads keep going
during sparsification.

Every toolkit failure surfaces as BindingError, with the original error as
``__cause__``.
"""

from __future__ import annotations

from typing import Any, Mapping

import numpy as np

from sparsegraph import (
    RunReport,
    SeedNodeSet,
    SparsifierConfig,
    canonicalize,
    compute_stats,
    summarize_graph,
)
from sparsegraph import __version__ as _core_version
from sparsegraph.errors import SparseGraphError
from sparsegraph.report import PhaseTimer

__all__ = ["summarize", "BindingError", "__version__", "core_version"]

__version__ = "0.1.0"


def core_version() -> str:
    """Version of the sparsegraph core this binding talks to."""
    return _core_version


class BindingError(Exception):
    """Single exception surface wrapping the core error taxonomy."""


_PARAM_KEYS = {
    "removal_ratio",
    "bernoulli",
    "k",
    "rho",
    "target_node_fraction",
    "random_seed_count",
    "alpha",
    "max_hops",
}


def _ingress_array(name: str, values) -> np.ndarray:
    arr = np.asarray(values)
    if arr.ndim != 1:
        raise BindingError(f"{name} must be a 1-D array, got shape {arr.shape}")
    if arr.size == 0:
        return np.empty(0, dtype=np.int64)
    if arr.dtype.kind not in "iu":
        raise BindingError(f"{name} must hold integers, got dtype {arr.dtype}")
    return np.ascontiguousarray(arr, dtype=np.int64)


def summarize(
    src,
    dst,
    num_nodes: int,
    method: str,
    params: Mapping[str, Any] | None = None,
    seed: int = 0,
    threads: int | None = None,
) -> tuple[np.ndarray, np.ndarray, dict[str, Any]]:
    """Sparsify the graph given as (src, dst) id arrays.

    params carries the method-specific knobs (e.g. {"k": 5},
    {"removal_ratio": 0.3}, {"alpha": 0.5}, {"rho": ...,
    "target_node_fraction": ..., "seed_nodes": [...]}). Returns the canonical
    undirected output edge list as two int64 arrays plus the run report as a
    plain dict.
    """
    opts = dict(params or {})
    seed_nodes = opts.pop("seed_nodes", None)
    unknown = set(opts) - _PARAM_KEYS
    if unknown:
        raise BindingError(f"unknown parameter(s) {sorted(unknown)} for method {method!r}")

    timer = PhaseTimer()
    try:
        with timer.phase("to_internal"):
            src_arr = _ingress_array("src", src)
            dst_arr = _ingress_array("dst", dst)
            if src_arr.size != dst_arr.size:
                raise BindingError(
                    f"src and dst disagree on length: {src_arr.size} vs {dst_arr.size}"
                )
            graph, _ = canonicalize(np.column_stack((src_arr, dst_arr)), int(num_nodes))

        if seed_nodes is not None:
            opts["seeds"] = SeedNodeSet(ids=_ingress_array("seed_nodes", seed_nodes))
        cfg = SparsifierConfig(method=method, seed=int(seed), **opts)
        result = summarize_graph(graph, None, cfg, num_threads=threads)

        with timer.phase("export"):
            out_src = np.ascontiguousarray(result.graph.edges[:, 0])
            out_dst = np.ascontiguousarray(result.graph.edges[:, 1])

        for name, seconds in result.timing.phases:
            if name != "other":
                timer.record(name, seconds)
        report = RunReport(
            toolkit_version=core_version(),
            seed=int(cfg.seed),
            threads=result.threads,
            config=cfg.echo(),
            input_nodes=graph.num_nodes,
            input_edges=graph.num_edges,
            output=compute_stats(graph, result.graph),
            timing=timer.finish(),
            method_info=dict(result.method_info),
        )
        return out_src, out_dst, report.to_dict()
    except BindingError:
        raise
    except SparseGraphError as exc:
        raise BindingError(f"{type(exc).__name__}: {exc}") from exc
    except TypeError as exc:
        raise BindingError(f"bad parameters for method {method!r}: {exc}") from exc
