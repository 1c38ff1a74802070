"""CLI driver tests (in-process through sparsegraph.cli.main)."""

import json

import numpy as np
import pytest

import sparsegraph as sg
from sparsegraph.cli import DEFAULT_GRIDS, cell_name, main

import gen_graphs


@pytest.fixture
def csv_graph(tmp_path):
    """A seeded BA graph with hubs well above degree 10, saved as CSV."""
    g = gen_graphs.ba_graph(120, 4, np.random.default_rng(0))
    assert int(sg.to_adjacency(g).degrees.max()) > 10
    path = tmp_path / "graph.csv"
    sg.save_graph(g, str(path), sg.CSV_EDGE_LIST)
    return g, str(path)


def test_run_k_neighbor(tmp_path, csv_graph, capsys):
    g, path = csv_graph
    out = str(tmp_path / "g.bin")
    report_path = str(tmp_path / "r.json")
    code = main([
        "run", "--input", path, "--method", "k-neighbor", "--k", "5",
        "--seed", "7", "--out", out, "--report", report_path,
    ])
    assert code == 0
    loaded, _ = sg.load_graph(sg.InputSpec(sg.NATIVE_EDGE_LIST, (out,)))
    assert loaded.num_nodes == g.num_nodes
    assert loaded.edge_set() <= g.edge_set()
    report = sg.load_report(report_path)
    assert report.config["method"] == "k-neighbor"
    assert report.config["k"] == 5
    assert report.seed == 7
    assert report.threads >= 1
    assert {"dataset_load", "to_internal", "edge_to_adjacency", "sparsification", "export", "other"} == set(report.timing.phase_names())
    assert "total" in capsys.readouterr().out


def test_run_rank_degree_requires_seeds(tmp_path, csv_graph, capsys):
    _, path = csv_graph
    code = main([
        "run", "--input", path, "--method", "rank-degree",
        "--out", str(tmp_path / "g.bin"),
    ])
    assert code == 2
    err = capsys.readouterr().err
    assert err.startswith("error: ValidationError:")
    assert "\n" not in err.strip()


def test_run_rejects_removal_ratio_one(tmp_path, csv_graph, capsys):
    _, path = csv_graph
    code = main([
        "run", "--input", path, "--method", "random", "--removal-ratio", "1.0",
        "--out", str(tmp_path / "g.bin"),
    ])
    assert code == 2
    assert "ValidationError" in capsys.readouterr().err


def test_run_missing_input_file(tmp_path, capsys):
    code = main([
        "run", "--input", str(tmp_path / "nope.csv"), "--method", "random",
        "--out", str(tmp_path / "g.bin"),
    ])
    assert code == 2
    assert "error:" in capsys.readouterr().err


def test_rerun_is_byte_identical(tmp_path, csv_graph):
    _, path = csv_graph
    outs = []
    for name in ("a.bin", "b.bin"):
        out = str(tmp_path / name)
        code = main([
            "run", "--input", path, "--method", "random",
            "--removal-ratio", "0.5", "--seed", "3", "--out", out,
        ])
        assert code == 0
        outs.append(open(out, "rb").read())
    assert outs[0] == outs[1]


def test_run_with_rank_degree_seed_file(tmp_path, csv_graph):
    _, path = csv_graph
    seed_file = tmp_path / "seeds.txt"
    seed_file.write_text("0\n1\n2\n3\n")
    report_path = str(tmp_path / "r.json")
    code = main([
        "run", "--input", path, "--method", "rank-degree",
        "--seeds", str(seed_file), "--out", str(tmp_path / "g.bin"),
        "--report", report_path,
    ])
    assert code == 0
    report = sg.load_report(report_path)
    assert report.config["rho"] == 0.5  # library default
    assert report.config["seed_node_count"] == 4
    assert "hops" in report.method_info


def test_run_npy_pair_in_and_out(tmp_path):
    g = gen_graphs.er_graph(40, 0.2, np.random.default_rng(2))
    base = str(tmp_path / "g")
    sg.save_graph(g, base, sg.PAIRED_BINARY_ARRAYS)
    src, dst = sg.io.paired_array_paths(base)
    out = str(tmp_path / "out")
    code = main([
        "run", "--input", src, dst, "--num-nodes", str(g.num_nodes),
        "--method", "local-degree", "--alpha", "1.0",
        "--out", out, "--out-format", "npy-pair",
    ])
    assert code == 0
    out_src, out_dst = sg.io.paired_array_paths(out)
    g2, _ = sg.load_graph(
        sg.InputSpec(sg.PAIRED_BINARY_ARRAYS, (out_src, out_dst), num_nodes=g.num_nodes)
    )
    assert g2 == g  # alpha=1 keeps everything


def test_config_file_supplies_flags_cli_wins(tmp_path, csv_graph):
    _, path = csv_graph
    cfg_file = tmp_path / "cfg.json"
    cfg_file.write_text(json.dumps({"method": "k-neighbor", "k": 3, "seed": 9}))
    report_path = str(tmp_path / "r.json")
    code = main([
        "run", "--config", str(cfg_file), "--input", path,
        "--k", "7", "--out", str(tmp_path / "g.bin"), "--report", report_path,
    ])
    assert code == 0
    report = sg.load_report(report_path)
    assert report.config["k"] == 7  # CLI beats config file
    assert report.seed == 9  # config fills the gap


def test_config_file_rejects_unknown_key(tmp_path, csv_graph, capsys):
    _, path = csv_graph
    cfg_file = tmp_path / "cfg.json"
    cfg_file.write_text(json.dumps({"mehtod": "random"}))
    code = main([
        "run", "--config", str(cfg_file), "--input", path, "--method", "random",
        "--out", str(tmp_path / "g.bin"),
    ])
    assert code == 2
    assert "unknown option" in capsys.readouterr().err


def test_sweep_k_neighbor_monotone(tmp_path, csv_graph):
    _, path = csv_graph
    outdir = tmp_path / "sweep"
    code = main([
        "sweep", "--input", path, "--method", "k-neighbor",
        "--seed", "5", "--outdir", str(outdir),
    ])
    assert code == 0
    summary = json.loads((outdir / "sweep_summary.json").read_text())
    cells = summary["cells"]
    assert [c["cell"] for c in cells] == [
        cell_name("k-neighbor", {"k": k}, 5) for k in DEFAULT_GRIDS["k-neighbor"]["k"]
    ]
    reductions = [c["edge_reduction_pct"] for c in cells]
    assert reductions[0] > reductions[1] > reductions[2]  # k=3 > k=5 > k=10
    for c in cells:
        assert sg.load_report(c["report_path"]).output.num_edges == c["num_edges"]
    assert (outdir / "sweep_summary.csv").read_text().count("\n") == len(cells) + 1


def test_sweep_rank_degree_nine_cells(tmp_path, csv_graph):
    _, path = csv_graph
    outdir = tmp_path / "rd"
    code = main([
        "sweep", "--input", path, "--method", "rank-degree",
        "--random-seeds", "8", "--outdir", str(outdir),
    ])
    assert code == 0
    summary = json.loads((outdir / "sweep_summary.json").read_text())
    assert len(summary["cells"]) == 9
    assert all(c["status"] == "ok" for c in summary["cells"])


def test_sweep_empty_grid_rejected(tmp_path, csv_graph, capsys):
    _, path = csv_graph
    code = main([
        "sweep", "--input", path, "--method", "k-neighbor",
        "--grid", "k=", "--outdir", str(tmp_path / "s"),
    ])
    assert code == 2
    assert "ValidationError" in capsys.readouterr().err


def test_sweep_wrong_param_rejected(tmp_path, csv_graph, capsys):
    _, path = csv_graph
    code = main([
        "sweep", "--input", path, "--method", "k-neighbor",
        "--grid", "alpha=0.5", "--outdir", str(tmp_path / "s"),
    ])
    assert code == 2


def test_sweep_failing_cell_recorded(tmp_path, csv_graph):
    _, path = csv_graph
    outdir = tmp_path / "mix"
    code = main([
        "sweep", "--input", path, "--method", "random",
        "--grid", "removal-ratio=0.5,1.5", "--outdir", str(outdir),
    ])
    assert code == 1  # one cell fails
    summary = json.loads((outdir / "sweep_summary.json").read_text())
    # table rows == grid cardinality - recorded failures
    assert len(summary["cells"]) == 1
    assert len(summary["failures"]) == 1
    assert summary["failures"][0]["error_class"] == "ValidationError"
    csv_lines = (outdir / "sweep_summary.csv").read_text().strip().splitlines()
    assert len(csv_lines) == 1 + len(summary["cells"])


def test_sweep_per_cell_seeds_differ(tmp_path, csv_graph):
    _, path = csv_graph
    outdir = tmp_path / "seeds"
    code = main([
        "sweep", "--input", path, "--method", "random",
        "--grid", "removal-ratio=0.5", "--seed", "10", "--seed-policy", "per-cell",
        "--outdir", str(outdir),
    ])
    assert code == 0
    summary = json.loads((outdir / "sweep_summary.json").read_text())
    assert summary["cells"][0]["cell"].endswith("seed=10")


def test_sweep_parallel_cells_match_sequential(tmp_path, csv_graph):
    _, path = csv_graph
    seq_dir, par_dir = tmp_path / "seq", tmp_path / "par"
    for outdir, extra in ((seq_dir, []), (par_dir, ["--parallel-cells", "2"])):
        code = main([
            "sweep", "--input", path, "--method", "local-degree",
            "--outdir", str(outdir), *extra,
        ])
        assert code == 0
    for name in ("local-degree__alpha=0.25__seed=0", "local-degree__alpha=0.9__seed=0"):
        seq_bytes = (seq_dir / f"{name}.bin").read_bytes()
        par_bytes = (par_dir / f"{name}.bin").read_bytes()
        assert seq_bytes == par_bytes
