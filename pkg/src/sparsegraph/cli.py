"""Batch CLI: sparsify one graph, or run a parameter sweep over one method.

All behavior is controlled by flags; an optional JSON config file can supply
any flag's value, with the command line winning. Re-running with the same
inputs, flags and seed reproduces byte-identical summarized graphs.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from . import __version__
from .errors import SparseGraphError, ValidationError
from .io import (
    CSV_EDGE_LIST,
    NATIVE_EDGE_LIST,
    PAIRED_BINARY_ARRAYS,
    InputSpec,
    load_graph,
    load_seed_nodes,
    normalize_format,
    paired_array_paths,
    save_graph,
)
from .report import PhaseTimer, RunReport, compute_stats, emit_report
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
    SparsifierConfig,
    summarize_graph,
)

# Sweep grids used when --grid is not given.
DEFAULT_GRIDS = {
    METHOD_RANDOM: {"removal-ratio": [0.25, 0.5, 0.75]},
    METHOD_K_NEIGHBOR: {"k": [3, 5, 10]},
    METHOD_RANK_DEGREE: {
        "rho": [0.25, 0.5, 0.75],
        "target-fraction": [0.25, 0.5, 0.75],
    },
    METHOD_LOCAL_DEGREE: {"alpha": [0.25, 0.5, 0.9]},
}

_GRID_PARAMS = {
    METHOD_RANDOM: ("removal-ratio",),
    METHOD_K_NEIGHBOR: ("k",),
    METHOD_RANK_DEGREE: ("rho", "target-fraction"),
    METHOD_LOCAL_DEGREE: ("alpha",),
}


@dataclass(frozen=True)
class SweepSpec:
    """One method, a parameter grid, one shared input, and a seed policy."""

    method: str
    grid: dict[str, list]
    base_seed: int
    seed_policy: str  # "fixed" or "per-cell"

    def validate(self) -> None:
        params = _GRID_PARAMS.get(self.method)
        if params is None:
            raise ValidationError(f"unknown sweep method {self.method!r}")
        for name in self.grid:
            if name not in params:
                raise ValidationError(
                    f"parameter {name!r} does not apply to {self.method}; expected {params}"
                )
        for name in params:
            if not self.grid.get(name):
                raise ValidationError(f"sweep grid for {name!r} is empty")
        if self.seed_policy not in ("fixed", "per-cell"):
            raise ValidationError(f"seed policy must be fixed or per-cell, got {self.seed_policy}")

    def cells(self) -> list[dict]:
        """Expand the grid into ordered cells of {param: value}."""
        params = _GRID_PARAMS[self.method]
        out: list[dict] = [{}]
        for name in params:
            out = [dict(cell, **{name: value}) for cell in out for value in self.grid[name]]
        return out


def _fmt_value(v) -> str:
    return format(v, "g") if isinstance(v, float) else str(v)


def cell_name(method: str, cell: dict, seed: int) -> str:
    parts = [method]
    parts += [f"{k}={_fmt_value(v)}" for k, v in cell.items()]
    parts.append(f"seed={seed}")
    return "__".join(parts)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sparsify",
        description="Sparsify a graph's edge set with random, k-neighbor, "
        "rank-degree or local-degree pruning.",
    )
    parser.add_argument("--version", action="version", version=f"sparsify {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--config", help="JSON file supplying defaults for any flag")
        p.add_argument("--input", nargs="+", help="input file(s); two for npy-pair")
        p.add_argument("--format", help="csv | npy-pair | native (inferred when omitted)")
        p.add_argument("--num-nodes", type=int, help="explicit node count (else max id + 1)")
        p.add_argument(
            "--method",
            choices=[METHOD_RANDOM, METHOD_K_NEIGHBOR, METHOD_RANK_DEGREE, METHOD_LOCAL_DEGREE],
        )
        p.add_argument("--seed", type=int, help="global RNG seed (default 0)")
        p.add_argument("--threads", type=int, help="worker threads (default: all cores)")
        p.add_argument("--seeds", help="rank-degree seed-node file, one id per line")
        p.add_argument("--random-seeds", type=int, help="rank-degree: draw N random seed nodes")
        p.add_argument("--max-hops", type=int, help="rank-degree hop bound")
        p.add_argument("--out-format", help="native | csv | npy-pair (default native)")

    run_p = sub.add_parser("run", help="sparsify once with one configuration")
    add_common(run_p)
    run_p.add_argument("--removal-ratio", type=float, help="random: fraction of edges to remove")
    run_p.add_argument("--bernoulli", action="store_true", help="random: per-edge coin flips instead of exact count")
    run_p.add_argument("--k", type=int, help="k-neighbor: edges kept per vertex")
    run_p.add_argument("--rho", type=float, help="rank-degree: neighbor fraction per seed")
    run_p.add_argument("--target-fraction", type=float, help="rank-degree: node-coverage target")
    run_p.add_argument("--alpha", type=float, help="local-degree: exponent on vertex degree")
    run_p.add_argument("--out", help="output graph path")
    run_p.add_argument("--report", help="write the run report JSON here")

    sweep_p = sub.add_parser("sweep", help="run a parameter grid, one output per cell")
    add_common(sweep_p)
    sweep_p.add_argument(
        "--grid",
        action="append",
        metavar="PARAM=V1,V2,...",
        help="grid values, e.g. k=3,5,10 (repeatable; default: built-in sweep)",
    )
    sweep_p.add_argument("--outdir", help="directory for per-cell graphs, reports and the summary")
    sweep_p.add_argument(
        "--seed-policy", choices=["fixed", "per-cell"], help="same seed everywhere or seed+index"
    )
    sweep_p.add_argument("--parallel-cells", type=int, help="run up to N cells concurrently")
    return parser


def _merge_config_file(args: argparse.Namespace) -> None:
    """Fill unset flags from the optional JSON config; CLI always wins."""
    if not args.config:
        return
    try:
        with open(args.config, "r", encoding="utf-8") as fh:
            loaded = json.load(fh)
    except OSError as exc:
        raise ValidationError(f"cannot read config file {args.config}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ValidationError(f"config file {args.config} is not valid JSON: {exc}") from exc
    if not isinstance(loaded, dict):
        raise ValidationError(f"config file {args.config} must hold a JSON object")
    for key, value in loaded.items():
        attr = key.replace("-", "_")
        if not hasattr(args, attr):
            raise ValidationError(f"config file {args.config}: unknown option {key!r}")
        if getattr(args, attr) in (None, False):
            setattr(args, attr, value)


def _infer_format(paths: list[str]) -> str:
    if len(paths) == 2:
        return PAIRED_BINARY_ARRAYS
    suffix = Path(paths[0]).suffix.lower()
    if suffix == ".csv":
        return CSV_EDGE_LIST
    if suffix == ".npy":
        raise ValidationError("npy-pair input needs two paths: --input src.npy dst.npy")
    return NATIVE_EDGE_LIST


def _input_spec(args) -> InputSpec:
    if not args.input:
        raise ValidationError("--input is required")
    paths = [str(p) for p in args.input]
    fmt = normalize_format(args.format) if args.format else _infer_format(paths)
    return InputSpec(format=fmt, paths=tuple(paths), num_nodes=args.num_nodes)


def _config_from_args(args, graph_nodes: int) -> SparsifierConfig:
    if not args.method:
        raise ValidationError("--method is required")
    seed = args.seed if args.seed is not None else 0
    seeds = None
    if args.method == METHOD_RANK_DEGREE and args.seeds:
        seeds = load_seed_nodes(args.seeds, graph_nodes)
    method_defaults = {
        METHOD_RANDOM: {"removal_ratio": DEFAULT_REMOVAL_RATIO},
        METHOD_K_NEIGHBOR: {"k": DEFAULT_K},
        METHOD_RANK_DEGREE: {
            "rho": DEFAULT_RHO,
            "target_node_fraction": DEFAULT_TARGET_NODE_FRACTION,
        },
        METHOD_LOCAL_DEGREE: {"alpha": DEFAULT_ALPHA},
    }[args.method]
    cfg = SparsifierConfig(
        method=args.method,
        removal_ratio=_first(getattr(args, "removal_ratio", None), method_defaults.get("removal_ratio")),
        bernoulli=bool(getattr(args, "bernoulli", False)),
        k=_first(getattr(args, "k", None), method_defaults.get("k")),
        rho=_first(getattr(args, "rho", None), method_defaults.get("rho")),
        target_node_fraction=_first(
            getattr(args, "target_fraction", None), method_defaults.get("target_node_fraction")
        ),
        seeds=seeds,
        random_seed_count=args.random_seeds,
        alpha=_first(getattr(args, "alpha", None), method_defaults.get("alpha")),
        seed=seed,
        max_hops=args.max_hops,
    )
    cfg.validate()
    return cfg


def _first(*values):
    for v in values:
        if v is not None:
            return v
    return None


def _assemble_report(cfg, result, input_graph, timer) -> RunReport:
    for name, seconds in result.timing.phases:
        if name != "other":
            timer.record(name, seconds)
    stats = compute_stats(input_graph, result.graph)
    return RunReport(
        toolkit_version=__version__,
        seed=int(cfg.seed),
        threads=result.threads,
        config=cfg.echo(),
        input_nodes=input_graph.num_nodes,
        input_edges=input_graph.num_edges,
        output=stats,
        timing=timer.finish(),
        method_info=dict(result.method_info),
    )


def _print_report(report: RunReport) -> None:
    print(f"nodes={report.input_nodes} edges={report.input_edges} -> "
          f"edges={report.output.num_edges} "
          f"reduction={report.output.edge_reduction_pct}% "
          f"coverage={report.output.node_coverage}")
    for name, seconds in report.timing.phases:
        print(f"  {name:<18} {seconds:.3f}s")
    print(f"  {'total':<18} {report.timing.total:.3f}s")


def run_once(args) -> int:
    """Load, sparsify, persist the summarized graph, emit the report."""
    spec = _input_spec(args)
    if not args.out:
        raise ValidationError("--out is required")
    out_format = normalize_format(args.out_format) if args.out_format else NATIVE_EDGE_LIST

    timer = PhaseTimer()
    graph, _ = load_graph(spec, timer=timer)
    cfg = _config_from_args(args, graph.num_nodes)
    result = summarize_graph(graph, None, cfg, num_threads=args.threads)
    with timer.phase("export"):
        save_graph(result.graph, args.out, out_format)

    report = _assemble_report(cfg, result, graph, timer)
    if args.report:
        emit_report(report, args.report)
    _print_report(report)
    return 0


def _grid_from_args(args) -> dict[str, list]:
    if not args.grid:
        return {k: list(v) for k, v in DEFAULT_GRIDS[args.method].items()}
    grid: dict[str, list] = {}
    for item in args.grid:
        if "=" not in item:
            raise ValidationError(f"bad --grid entry {item!r}, expected PARAM=V1,V2,...")
        name, _, values = item.partition("=")
        name = name.strip()
        tokens = [tok for tok in values.split(",") if tok.strip()]
        if not tokens:
            raise ValidationError(f"empty value list for grid parameter {name!r}")
        parsed = [int(tok) if name == "k" else float(tok) for tok in tokens]
        grid[name] = parsed
    return grid


_CELL_PARAM_FIELDS = {
    "removal-ratio": "removal_ratio",
    "k": "k",
    "rho": "rho",
    "target-fraction": "target_fraction",
    "alpha": "alpha",
}


def run_sweep(args) -> int:
    """One run per grid cell; failures are recorded and skipped."""
    if not args.method:
        raise ValidationError("--method is required")
    if not args.outdir:
        raise ValidationError("--outdir is required")
    spec = _input_spec(args)
    out_format = normalize_format(args.out_format) if args.out_format else NATIVE_EDGE_LIST
    base_seed = args.seed if args.seed is not None else 0
    sweep = SweepSpec(
        method=args.method,
        grid=_grid_from_args(args),
        base_seed=base_seed,
        seed_policy=args.seed_policy or "fixed",
    )
    sweep.validate()

    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    graph, _ = load_graph(spec)
    ext = {NATIVE_EDGE_LIST: ".bin", CSV_EDGE_LIST: ".csv", PAIRED_BINARY_ARRAYS: ""}[out_format]

    def run_cell(index_cell):
        index, cell = index_cell
        seed = base_seed + index if sweep.seed_policy == "per-cell" else base_seed
        name = cell_name(args.method, cell, seed)
        row = {"cell": name, "status": "ok"}
        try:
            cell_args = argparse.Namespace(**vars(args))
            cell_args.seed = seed
            for param, value in cell.items():
                setattr(cell_args, _CELL_PARAM_FIELDS[param], value)
            for field_name in _CELL_PARAM_FIELDS.values():
                if not hasattr(cell_args, field_name):
                    setattr(cell_args, field_name, None)
            cfg = _config_from_args(cell_args, graph.num_nodes)
            timer = PhaseTimer()
            result = summarize_graph(graph, None, cfg, num_threads=args.threads)
            graph_path = outdir / f"{name}{ext}"
            with timer.phase("export"):
                save_graph(result.graph, str(graph_path), out_format)
            report = _assemble_report(cfg, result, graph, timer)
            emit_report(report, str(outdir / f"{name}.report.json"))
            row.update(
                num_edges=result.graph.num_edges,
                edge_reduction_pct=report.output.edge_reduction_pct,
                sparsification_seconds=result.timing.seconds("sparsification"),
                graph_path=str(graph_path),
                report_path=str(outdir / f"{name}.report.json"),
            )
        except SparseGraphError as exc:
            row.update(status="error", error_class=type(exc).__name__, error=str(exc))
        return row

    cells = list(enumerate(sweep.cells()))
    workers = args.parallel_cells or 1
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(run_cell, cells))
    else:
        rows = [run_cell(c) for c in cells]

    # summary table holds the cells that produced results; failures are
    # recorded separately, so table rows == grid cardinality - failures
    succeeded = [r for r in rows if r["status"] == "ok"]
    failures = [r for r in rows if r["status"] != "ok"]
    summary = {
        "method": args.method,
        "seed_policy": sweep.seed_policy,
        "base_seed": base_seed,
        "cells": succeeded,
        "failures": failures,
    }
    with open(outdir / "sweep_summary.json", "w", encoding="utf-8") as fh:
        json.dump(summary, fh, indent=2)
        fh.write("\n")
    _write_summary_csv(outdir / "sweep_summary.csv", succeeded)

    for row in succeeded:
        print(f"{row['cell']}: edges={row['num_edges']} "
              f"reduction={row['edge_reduction_pct']}% "
              f"sparsify={row['sparsification_seconds']:.3f}s")
    for row in failures:
        print(f"{row['cell']}: FAILED {row['error_class']}: {row['error']}")
    print(f"{len(succeeded)}/{len(rows)} cells succeeded; summary in {outdir}")
    return 1 if failures else 0


def _write_summary_csv(path: Path, rows: list[dict]) -> None:
    import csv as _csv

    columns = [
        "cell", "num_edges", "edge_reduction_pct",
        "sparsification_seconds", "graph_path", "report_path",
    ]
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = _csv.DictWriter(fh, fieldnames=columns)
        writer.writeheader()
        for row in rows:
            writer.writerow({c: row.get(c, "") for c in columns})


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        _merge_config_file(args)
        if args.command == "run":
            return run_once(args)
        return run_sweep(args)
    except SparseGraphError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: OSError: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
