"""Phase-level timing capture and machine-readable run reports.

The timing breakdown mirrors the overhead decomposition used throughout the
toolkit: dataset_load, to_internal (raw arrays -> Graph), edge_to_adjacency,
sparsification, export, and a residual "other" bucket so the phases always
sum exactly to the total. Durations are monotonic wall clock, rounded to
milliseconds and reported in seconds.

Reports are JSON with a fixed key order; docs/formats.md documents the
schema. emit_report followed by load_report yields a field-identical
RunReport.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .core import Graph
from .errors import FileError, FormatError, ValidationError

__all__ = [
    "PHASE_NAMES",
    "TimingBreakdown",
    "OutputStats",
    "RunReport",
    "PhaseTimer",
    "compute_stats",
    "emit_report",
    "load_report",
]

PHASE_NAMES = (
    "dataset_load",
    "to_internal",
    "edge_to_adjacency",
    "sparsification",
    "export",
    "other",
)


@dataclass(frozen=True)
class TimingBreakdown:
    """Ordered (phase, seconds) pairs, ending with "other"; sums to total."""

    phases: tuple[tuple[str, float], ...]
    total: float

    def __post_init__(self):
        for name, seconds in self.phases:
            if name not in PHASE_NAMES:
                raise ValidationError(f"unknown phase name {name!r}")
            if seconds < 0:
                raise ValidationError(f"phase {name} has negative duration {seconds}")

    def seconds(self, name: str) -> float:
        for phase, value in self.phases:
            if phase == name:
                return value
        return 0.0

    def phase_names(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self.phases)

    def to_dict(self) -> dict[str, Any]:
        return {
            "phases": [{"name": n, "seconds": s} for n, s in self.phases],
            "total_seconds": self.total,
        }

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "TimingBreakdown":
        phases = tuple((p["name"], float(p["seconds"])) for p in d["phases"])
        return cls(phases=phases, total=float(d["total_seconds"]))


class PhaseTimer:
    """Collects non-overlapping named phases against one wall-clock span.

    Phases must not nest: opening a phase while another is running raises
    immediately (that is a bug in the caller, not a runtime condition).
    """

    def __init__(self):
        self._t0 = time.perf_counter()
        self._open: str | None = None
        self._measured: list[tuple[str, float]] = []

    def phase(self, name: str):
        if name not in PHASE_NAMES or name == "other":
            raise ValidationError(f"unknown phase name {name!r}")
        return _PhaseCtx(self, name)

    def record(self, name: str, seconds: float) -> None:
        """Inject an externally measured duration (e.g. from a sub-report)."""
        if name not in PHASE_NAMES or name == "other":
            raise ValidationError(f"unknown phase name {name!r}")
        if seconds < 0:
            raise ValidationError(f"negative duration for phase {name}")
        self._measured.append((name, float(seconds)))

    def finish(self) -> TimingBreakdown:
        """Close the span and fold the residual into the "other" phase.

        Phases come out in pipeline order (PHASE_NAMES), not recording order.
        """
        if self._open is not None:
            raise RuntimeError(f"phase {self._open!r} still open at finish()")
        total_raw = time.perf_counter() - self._t0
        measured = [(n, round(s, 3)) for n, s in self._measured]
        measured.sort(key=lambda item: PHASE_NAMES.index(item[0]))
        other = max(0.0, round(total_raw - sum(s for _, s in self._measured), 3))
        phases = tuple(measured) + (("other", other),)
        total = 0.0
        for _, s in phases:
            total += s
        return TimingBreakdown(phases=phases, total=total)


class _PhaseCtx:
    def __init__(self, timer: PhaseTimer, name: str):
        self._timer = timer
        self._name = name

    def __enter__(self):
        if self._timer._open is not None:
            raise RuntimeError(
                f"cannot start phase {self._name!r}: phase {self._timer._open!r} is open"
            )
        self._timer._open = self._name
        self._start = time.perf_counter()
        return self

    def __exit__(self, exc_type, exc, tb):
        elapsed = time.perf_counter() - self._start
        self._timer._open = None
        if exc_type is None:
            self._timer._measured.append((self._name, elapsed))
        return False


@dataclass(frozen=True)
class OutputStats:
    num_edges: int
    edge_reduction_pct: float
    node_coverage: int
    degree_min: int
    degree_median: float
    degree_mean: float
    degree_max: int

    def to_dict(self) -> dict[str, Any]:
        return {
            "num_edges": self.num_edges,
            "edge_reduction_pct": self.edge_reduction_pct,
            "node_coverage": self.node_coverage,
            "degree_summary": {
                "min": self.degree_min,
                "median": self.degree_median,
                "mean": self.degree_mean,
                "max": self.degree_max,
            },
        }

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "OutputStats":
        ds = d["degree_summary"]
        return cls(
            num_edges=int(d["num_edges"]),
            edge_reduction_pct=float(d["edge_reduction_pct"]),
            node_coverage=int(d["node_coverage"]),
            degree_min=int(ds["min"]),
            degree_median=float(ds["median"]),
            degree_mean=float(ds["mean"]),
            degree_max=int(ds["max"]),
        )


def edge_reduction_pct(in_edges: int, out_edges: int) -> float:
    """100 * (1 - out/in), one decimal; 0.0 for an empty input."""
    if in_edges <= 0:
        return 0.0
    return round(100.0 * (1.0 - out_edges / in_edges), 1)


def compute_stats(input_graph: Graph, output_graph: Graph) -> OutputStats:
    """Compression and degree statistics of a sparsification output."""
    out_edges = output_graph.num_edges
    n = output_graph.num_nodes
    if n > 0:
        degrees = np.bincount(output_graph.edges.ravel(), minlength=n) if out_edges else np.zeros(n, np.int64)
        dmin, dmax = int(degrees.min()), int(degrees.max())
        dmed, dmean = float(np.median(degrees)), float(degrees.mean())
        coverage = int(np.count_nonzero(degrees))
    else:
        dmin = dmax = 0
        dmed = dmean = 0.0
        coverage = 0
    return OutputStats(
        num_edges=out_edges,
        edge_reduction_pct=edge_reduction_pct(input_graph.num_edges, out_edges),
        node_coverage=coverage,
        degree_min=dmin,
        degree_median=dmed,
        degree_mean=dmean,
        degree_max=dmax,
    )


@dataclass(frozen=True)
class RunReport:
    """Everything one sparsification run produced, ready for JSON."""

    toolkit_version: str
    seed: int
    threads: int
    config: dict[str, Any]
    input_nodes: int
    input_edges: int
    output: OutputStats
    timing: TimingBreakdown
    method_info: dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        return {
            "toolkit_version": self.toolkit_version,
            "seed": self.seed,
            "threads": self.threads,
            "config": self.config,
            "input": {"num_nodes": self.input_nodes, "num_edges": self.input_edges},
            "output": self.output.to_dict(),
            "timing": self.timing.to_dict(),
            "method_info": self.method_info,
        }

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "RunReport":
        return cls(
            toolkit_version=str(d["toolkit_version"]),
            seed=int(d["seed"]),
            threads=int(d["threads"]),
            config=dict(d["config"]),
            input_nodes=int(d["input"]["num_nodes"]),
            input_edges=int(d["input"]["num_edges"]),
            output=OutputStats.from_dict(d["output"]),
            timing=TimingBreakdown.from_dict(d["timing"]),
            method_info=dict(d.get("method_info", {})),
        )


def emit_report(report: RunReport, path: str) -> None:
    """Write the report as JSON with a stable key order."""
    try:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(report.to_dict(), fh, indent=2)
            fh.write("\n")
    except OSError as exc:
        raise FileError(f"failed to write {path}: {exc}") from exc
    except (TypeError, ValueError) as exc:
        raise FormatError(f"report for {path} is not JSON-serializable: {exc}") from exc


def load_report(path: str) -> RunReport:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise FileError(f"failed to read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: invalid report JSON: {exc}") from exc
    try:
        return RunReport.from_dict(data)
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"{path}: report schema mismatch: {exc}") from exc
