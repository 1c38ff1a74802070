"""Graph loading and persistence.

Three on-disk formats, documented bit-exactly in docs/formats.md:

* ``csv-edge-list``: two integer columns, comma or tab separated, optional
  single header line (auto-detected by a non-numeric first token).
* ``paired-binary-arrays``: two .npy v1.0 files holding 1-D little-endian
  int32/int64 source and destination arrays (the OGB raw layout).
* ``native-edge-list``: a small self-describing binary container that also
  records num_nodes, so summarized graphs round-trip exactly.

CSV and paired arrays carry no node count; load infers max id + 1 unless the
InputSpec supplies one explicitly (explicit counts win and may exceed the
ids present, pinning isolated nodes).
"""

from __future__ import annotations

import struct
import time
from dataclasses import dataclass
from pathlib import Path
from typing import NamedTuple

import numpy as np

from .core import Graph, canonicalize
from .errors import (
    CapacityError,
    FileError,
    FormatError,
    OutOfRangeError,
    ParseError,
    ValidationError,
)

__all__ = [
    "CSV_EDGE_LIST",
    "PAIRED_BINARY_ARRAYS",
    "NATIVE_EDGE_LIST",
    "FORMATS",
    "InputSpec",
    "SeedNodeSet",
    "LoadStats",
    "load_graph",
    "save_graph",
    "load_seed_nodes",
    "paired_array_paths",
    "normalize_format",
]

CSV_EDGE_LIST = "csv-edge-list"
PAIRED_BINARY_ARRAYS = "paired-binary-arrays"
NATIVE_EDGE_LIST = "native-edge-list"
FORMATS = (CSV_EDGE_LIST, PAIRED_BINARY_ARRAYS, NATIVE_EDGE_LIST)

_FORMAT_ALIASES = {
    "csv": CSV_EDGE_LIST,
    "npy-pair": PAIRED_BINARY_ARRAYS,
    "npy": PAIRED_BINARY_ARRAYS,
    "native": NATIVE_EDGE_LIST,
    "bin": NATIVE_EDGE_LIST,
}

_NATIVE_MAGIC = b"SPGRAPH1"


def normalize_format(fmt: str) -> str:
    fmt = fmt.strip().lower()
    fmt = _FORMAT_ALIASES.get(fmt, fmt)
    if fmt not in FORMATS:
        raise ValidationError(f"unknown graph format {fmt!r}; expected one of {FORMATS}")
    return fmt


@dataclass(frozen=True)
class InputSpec:
    """Where and how to read a graph.

    paths holds one file for csv/native, exactly two (source array,
    destination array) for paired-binary-arrays.
    """

    format: str
    paths: tuple[str, ...]
    num_nodes: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "format", normalize_format(self.format))
        object.__setattr__(self, "paths", tuple(str(p) for p in self.paths))
        expected = 2 if self.format == PAIRED_BINARY_ARRAYS else 1
        if len(self.paths) != expected:
            raise ValidationError(
                f"{self.format} takes exactly {expected} path(s), got {len(self.paths)}"
            )


@dataclass(frozen=True)
class SeedNodeSet:
    """Sorted, deduplicated node ids used to start rank-degree expansion."""

    ids: np.ndarray

    def __post_init__(self):
        ids = np.unique(np.asarray(self.ids, dtype=np.int64))
        ids.setflags(write=False)
        object.__setattr__(self, "ids", ids)

    def __len__(self) -> int:
        return int(self.ids.size)

    def validate_against(self, num_nodes: int) -> None:
        if len(self) and (int(self.ids[0]) < 0 or int(self.ids[-1]) >= num_nodes):
            bad = self.ids[(self.ids < 0) | (self.ids >= num_nodes)][0]
            raise OutOfRangeError(f"seed node {int(bad)} out of range for num_nodes={num_nodes}")


class LoadStats(NamedTuple):
    raw_edges: int
    self_loops_dropped: int
    duplicates_collapsed: int
    load_seconds: float


def _token_is_int(tok: str) -> bool:
    tok = tok.strip()
    if tok.startswith(("-", "+")):
        tok = tok[1:]
    return tok.isdigit()


def _read_csv_edges(path: str) -> np.ndarray:
    rows_u: list[int] = []
    rows_v: list[int] = []
    try:
        with open(path, "r", encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, start=1):
                line = line.strip()
                if not line:
                    continue
                sep = "\t" if "\t" in line else ","
                parts = [p.strip() for p in line.split(sep)]
                if lineno == 1 and parts and not _token_is_int(parts[0]):
                    continue  # header line
                if len(parts) != 2:
                    raise ParseError(f"{path}:{lineno}: expected 2 columns, got {len(parts)}")
                try:
                    rows_u.append(int(parts[0]))
                    rows_v.append(int(parts[1]))
                except ValueError:
                    raise ParseError(f"{path}:{lineno}: non-integer token in {line!r}") from None
    except UnicodeDecodeError as exc:
        raise ParseError(f"{path}: not valid UTF-8 text: {exc}") from exc
    except OSError as exc:
        raise FileError(f"failed to read {path}: {exc}") from exc
    if not rows_u:
        return np.empty((0, 2), dtype=np.int64)
    try:
        return np.column_stack(
            (np.asarray(rows_u, dtype=np.int64), np.asarray(rows_v, dtype=np.int64))
        )
    except OverflowError as exc:
        raise CapacityError(f"{path}: node id exceeds 64-bit index range") from exc


def _load_npy_int_array(path: str) -> np.ndarray:
    try:
        arr = np.load(path, allow_pickle=False)
    except OSError as exc:
        raise FileError(f"failed to read {path}: {exc}") from exc
    except Exception as exc:
        # np.load's header parser raises assorted types on corrupt bytes
        raise FormatError(f"{path}: not a valid .npy array: {exc}") from exc
    if arr.ndim != 1:
        raise FormatError(f"{path}: expected a 1-D array, got shape {arr.shape}")
    if arr.dtype.kind != "i" or arr.dtype.itemsize not in (4, 8):
        raise FormatError(
            f"{path}: expected int32/int64 node ids, got dtype {arr.dtype}"
        )
    if arr.dtype.byteorder == ">":
        raise FormatError(f"{path}: big-endian arrays are not supported")
    return arr.astype(np.int64, copy=False)


def _read_paired_edges(src_path: str, dst_path: str) -> np.ndarray:
    src = _load_npy_int_array(src_path)
    dst = _load_npy_int_array(dst_path)
    if src.size != dst.size:
        raise FormatError(
            f"paired arrays disagree on length: {src_path} has {src.size}, "
            f"{dst_path} has {dst.size}"
        )
    if src.size == 0:
        return np.empty((0, 2), dtype=np.int64)
    return np.column_stack((src, dst))


def _read_native(path: str) -> tuple[np.ndarray, int]:
    try:
        with open(path, "rb") as fh:
            header = fh.read(24)
            if len(header) < 24 or header[:8] != _NATIVE_MAGIC:
                raise FormatError(f"{path}: bad magic, not a native edge-list file")
            num_nodes, num_edges = struct.unpack("<QQ", header[8:24])
            payload = fh.read()
    except OSError as exc:
        raise FileError(f"failed to read {path}: {exc}") from exc
    expected = 16 * num_edges
    if len(payload) != expected:
        raise FormatError(
            f"{path}: truncated payload, expected {expected} bytes, got {len(payload)}"
        )
    if num_nodes > np.iinfo(np.int64).max:
        raise FormatError(f"{path}: num_nodes {num_nodes} exceeds index capacity")
    flat = np.frombuffer(payload, dtype="<i8")
    u = flat[:num_edges]
    v = flat[num_edges:]
    if num_edges == 0:
        return np.empty((0, 2), dtype=np.int64), int(num_nodes)
    return np.column_stack((u, v)).astype(np.int64, copy=False), int(num_nodes)


def load_graph(spec: InputSpec, timer=None) -> tuple[Graph, LoadStats]:
    """Read and canonicalize a graph per the InputSpec.

    If a report.PhaseTimer is supplied, file reading is recorded as the
    dataset_load phase and canonicalization as to_internal.
    """
    t0 = time.perf_counter()

    def _phase(name):
        return timer.phase(name) if timer is not None else _null_ctx()

    explicit_n = spec.num_nodes
    with _phase("dataset_load"):
        if spec.format == CSV_EDGE_LIST:
            raw = _read_csv_edges(spec.paths[0])
        elif spec.format == PAIRED_BINARY_ARRAYS:
            raw = _read_paired_edges(spec.paths[0], spec.paths[1])
        else:
            raw, native_n = _read_native(spec.paths[0])
            if explicit_n is None:
                explicit_n = native_n

    with _phase("to_internal"):
        if explicit_n is None:
            num_nodes = int(raw.max()) + 1 if raw.size else 0
        else:
            num_nodes = int(explicit_n)
        graph, cstats = canonicalize(raw, num_nodes)

    elapsed = time.perf_counter() - t0
    stats = LoadStats(
        raw_edges=cstats.raw_edges,
        self_loops_dropped=cstats.self_loops_dropped,
        duplicates_collapsed=cstats.duplicates_collapsed,
        load_seconds=elapsed,
    )
    return graph, stats


class _null_ctx:
    def __enter__(self):
        return self

    def __exit__(self, *exc):
        return False


def paired_array_paths(path: str) -> tuple[str, str]:
    """Derive the (source, destination) file names for paired-array output."""
    return f"{path}.src.npy", f"{path}.dst.npy"


def save_graph(g: Graph, path: str, fmt: str) -> None:
    """Persist g so that load_graph reproduces it (see module docstring)."""
    fmt = normalize_format(fmt)
    path = str(path)
    try:
        if fmt == CSV_EDGE_LIST:
            with open(path, "w", encoding="utf-8") as fh:
                fh.write("src,dst\n")
                for u, v in g.edges:
                    fh.write(f"{u},{v}\n")
        elif fmt == PAIRED_BINARY_ARRAYS:
            src_path, dst_path = paired_array_paths(path)
            np.save(src_path, np.ascontiguousarray(g.edges[:, 0]))
            np.save(dst_path, np.ascontiguousarray(g.edges[:, 1]))
        else:
            with open(path, "wb") as fh:
                fh.write(_NATIVE_MAGIC)
                fh.write(struct.pack("<QQ", g.num_nodes, g.num_edges))
                fh.write(np.ascontiguousarray(g.edges[:, 0], dtype="<i8").tobytes())
                fh.write(np.ascontiguousarray(g.edges[:, 1], dtype="<i8").tobytes())
    except OSError as exc:
        raise FileError(f"failed to write {path}: {exc}") from exc


def load_seed_nodes(path: str, num_nodes: int) -> SeedNodeSet:
    """Read one node id per line; sort, dedup, validate against num_nodes."""
    ids: list[int] = []
    try:
        with open(path, "r", encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, start=1):
                line = line.strip()
                if not line:
                    continue
                try:
                    ids.append(int(line))
                except ValueError:
                    raise ParseError(f"{path}:{lineno}: non-integer seed id {line!r}") from None
    except UnicodeDecodeError as exc:
        raise ParseError(f"{path}: not valid UTF-8 text: {exc}") from exc
    except OSError as exc:
        raise FileError(f"failed to read {path}: {exc}") from exc
    try:
        id_array = np.asarray(ids, dtype=np.int64)
    except OverflowError as exc:
        raise CapacityError(f"{path}: seed id exceeds 64-bit index range") from exc
    seeds = SeedNodeSet(ids=id_array)
    seeds.validate_against(num_nodes)
    return seeds
