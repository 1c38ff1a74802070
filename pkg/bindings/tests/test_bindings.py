"""Binding-boundary tests, including cross-interface equivalence with the CLI."""

import json

import numpy as np
import pytest

import sparsegraph as sg
from sparsegraph.cli import main as cli_main
from sparsegraph.report import RunReport

from sparsegraph_bindings import BindingError, core_version, summarize


def test_identity_case():
    src_out, dst_out, report = summarize(
        [0, 0], [1, 2], 3, "local-degree", {"alpha": 1.0}
    )
    assert src_out.tolist() == [0, 0]
    assert dst_out.tolist() == [1, 2]
    assert report["output"]["edge_reduction_pct"] == 0.0
    assert report["toolkit_version"] == core_version()


def test_canonicalizes_on_entry():
    # reversed direction, duplicate, self-loop: all normalized at the boundary
    src_out, dst_out, report = summarize(
        [1, 2, 0, 2], [0, 0, 1, 2], 3, "local-degree", {"alpha": 1.0}
    )
    assert list(zip(src_out.tolist(), dst_out.tolist())) == [(0, 1), (0, 2)]
    assert report["input"]["num_edges"] == 2


def test_mismatched_lengths_raise():
    with pytest.raises(BindingError, match="length"):
        summarize([0, 1, 2], [1, 2], 4, "random", {"removal_ratio": 0.3})


def test_empty_graph_passes_through():
    src_out, dst_out, report = summarize([], [], 5, "random", {"removal_ratio": 0.5})
    assert src_out.size == dst_out.size == 0
    assert report["input"]["num_nodes"] == 5
    assert report["output"]["edge_reduction_pct"] == 0.0


def test_rejects_float_ids_and_2d():
    with pytest.raises(BindingError, match="integers"):
        summarize([0.5, 1.0], [1, 2], 3, "random", {"removal_ratio": 0.3})
    with pytest.raises(BindingError, match="1-D"):
        summarize([[0], [1]], [[1], [2]], 3, "random", {"removal_ratio": 0.3})


def test_core_errors_wrapped():
    with pytest.raises(BindingError) as excinfo:
        summarize([0], [1], 2, "random", {"removal_ratio": 1.5})
    assert isinstance(excinfo.value.__cause__, sg.ValidationError)
    with pytest.raises(BindingError):
        summarize([0], [5], 2, "random", {"removal_ratio": 0.5})  # id out of range
    with pytest.raises(BindingError, match="unknown parameter"):
        summarize([0], [1], 2, "random", {"ratio": 0.5})
    with pytest.raises(BindingError):
        summarize([0], [1], 2, "pagerank", {})


def test_boundary_phases_reported():
    _, _, report = summarize([0, 1, 2], [1, 2, 3], 4, "k-neighbor", {"k": 2}, seed=5)
    names = [p["name"] for p in report["timing"]["phases"]]
    assert "to_internal" in names  # arrays -> graph (ingress)
    assert "export" in names  # graph -> arrays (egress)
    assert "edge_to_adjacency" in names
    assert "sparsification" in names
    assert names[-1] == "other"
    assert sum(p["seconds"] for p in report["timing"]["phases"]) == report["timing"]["total_seconds"]
    # the report dict is schema-compatible with the core reader
    parsed = RunReport.from_dict(report)
    assert parsed.config["k"] == 2


def test_seed_nodes_parameter():
    src = [0, 1, 2, 3, 0]
    dst = [1, 2, 3, 4, 2]
    _, _, report = summarize(
        src, dst, 5, "rank-degree",
        {"rho": 1.0, "target_node_fraction": 0.5, "seed_nodes": [0]},
        seed=3,
    )
    assert report["config"]["seed_node_count"] == 1
    assert "hops" in report["method_info"]


def _random_raw_graph(rng, n):
    m = int(rng.integers(1, max(2, n * 2)))
    return rng.integers(0, n, size=m), rng.integers(0, n, size=m)


def _triple_config(rng):
    method = rng.choice(["random", "k-neighbor", "rank-degree", "local-degree"])
    if method == "random":
        return method, {"removal_ratio": float(rng.choice([0.25, 0.5, 0.75]))}, ["--removal-ratio"]
    if method == "k-neighbor":
        return method, {"k": int(rng.choice([1, 3, 5]))}, ["--k"]
    if method == "rank-degree":
        return (
            method,
            {"rho": 0.5, "target_node_fraction": 0.5, "random_seed_count": 2},
            None,
        )
    return method, {"alpha": float(rng.choice([0.25, 0.5, 0.9]))}, ["--alpha"]


def test_cli_equivalence_50_triples(tmp_path):
    """Bindings and CLI produce identical edge sets for 50 random triples."""
    rng = np.random.default_rng(2025)
    for trial in range(50):
        n = int(rng.integers(5, 50))
        src, dst = _random_raw_graph(rng, n)
        seed = int(rng.integers(0, 1000))
        method, params, _ = _triple_config(rng)

        b_src, b_dst, report = summarize(src, dst, n, method, params, seed=seed)

        src_path = str(tmp_path / f"{trial}.src.npy")
        dst_path = str(tmp_path / f"{trial}.dst.npy")
        np.save(src_path, src.astype(np.int64))
        np.save(dst_path, dst.astype(np.int64))
        out_path = str(tmp_path / f"{trial}.out.bin")

        argv = [
            "run", "--input", src_path, dst_path, "--num-nodes", str(n),
            "--method", method, "--seed", str(seed), "--out", out_path,
        ]
        for key, value in params.items():
            if key == "random_seed_count":
                argv += ["--random-seeds", str(value)]
            else:
                argv += [f"--{key.replace('_', '-').replace('target-node-fraction', 'target-fraction')}", str(value)]
        assert cli_main(argv) == 0

        cli_graph, _ = sg.load_graph(sg.InputSpec(sg.NATIVE_EDGE_LIST, (out_path,)))
        binding_edges = set(zip(b_src.tolist(), b_dst.tolist()))
        assert binding_edges == cli_graph.edge_set(), (trial, method, params, seed)
        assert report["output"]["num_edges"] == cli_graph.num_edges
    print("\nACCEPTANCE bindings-cli-equivalence: PASS (50 triples)")


def test_conversion_cost_bounded_at_desk_scale():
    """One ingress and one egress conversion, nothing quadratic hiding."""
    rng = np.random.default_rng(4)
    n, m = 50_000, 200_000
    src = rng.integers(0, n, size=m)
    dst = rng.integers(0, n, size=m)
    src_out, dst_out, report = summarize(src, dst, n, "random", {"removal_ratio": 0.5})
    phases = {p["name"]: p["seconds"] for p in report["timing"]["phases"]}
    assert phases["to_internal"] < 1.0
    assert phases["export"] < 1.0
    # egress hands back exactly the output edge list, one int64 array each way
    assert src_out.nbytes == dst_out.nbytes == report["output"]["num_edges"] * 8
    assert src_out.flags.c_contiguous and dst_out.flags.c_contiguous


def test_threads_do_not_change_output():
    rng = np.random.default_rng(9)
    src, dst = _random_raw_graph(rng, 40)
    outs = [
        summarize(src, dst, 40, "k-neighbor", {"k": 3}, seed=1, threads=t)[:2]
        for t in (1, 2, 8)
    ]
    for s, d in outs[1:]:
        assert np.array_equal(s, outs[0][0])
        assert np.array_equal(d, outs[0][1])
