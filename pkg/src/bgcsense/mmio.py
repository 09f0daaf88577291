"""Matrix Market reading and writing for graphs and sensing matrices.

Graphs use the ``coordinate pattern general`` layout with rows = checks and
columns = variables, 1-indexed.  Binary and ternary matrices use
``coordinate real``; Gaussian matrices use ``array real`` (column-major).
An optional run manifest is embedded as a single JSON comment line.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from .graph import BipartiteGraph
from .matrix import SensingMatrix

MANIFEST_PREFIX = "% manifest: "


class MatrixMarketError(ValueError):
    """Malformed Matrix Market input; ``line`` is 1-based."""

    def __init__(self, message: str, line: Optional[int] = None, path=None):
        where = f"{path}:" if path is not None else ""
        where += f"line {line}: " if line is not None else ""
        super().__init__(where + message)
        self.line = line
        self.path = path


@dataclass
class MMContent:
    layout: str  # "pattern", "coordinate" or "array"
    shape: tuple[int, int]
    rows: np.ndarray
    cols: np.ndarray
    values: Optional[np.ndarray]
    manifest: Optional[dict] = None
    comments: list = field(default_factory=list)

    def dense(self) -> np.ndarray:
        out = np.zeros(self.shape)
        vals = np.ones(len(self.rows)) if self.values is None else self.values
        out[self.rows, self.cols] = vals
        return out


def _fmt(v: float) -> str:
    return format(float(v), ".17g")


def _header(banner: str, manifest: Optional[dict]) -> list[str]:
    lines = [banner]
    if manifest is not None:
        lines.append(MANIFEST_PREFIX + json.dumps(manifest, sort_keys=True, separators=(",", ":")))
    return lines


def format_graph(graph: BipartiteGraph, manifest: Optional[dict] = None) -> str:
    lines = _header("%%MatrixMarket matrix coordinate pattern general", manifest)
    lines.append(f"{graph.num_checks} {graph.num_vars} {graph.num_edges}")
    lines.extend(f"{c + 1} {v + 1}" for v, c in graph.edges())
    return "\n".join(lines) + "\n"


def format_matrix(matrix: SensingMatrix, manifest: Optional[dict] = None) -> str:
    a = matrix.entries
    m, n = a.shape
    if matrix.kind == "gaussian":
        lines = _header("%%MatrixMarket matrix array real general", manifest)
        lines.append(f"{m} {n}")
        lines.extend(_fmt(v) for v in a.T.ravel())
    else:
        lines = _header("%%MatrixMarket matrix coordinate real general", manifest)
        cols, rows = np.nonzero(a.T)
        lines.append(f"{m} {n} {len(rows)}")
        lines.extend(f"{r + 1} {c + 1} {_fmt(a[r, c])}" for r, c in zip(rows, cols))
    return "\n".join(lines) + "\n"


def write_graph(path, graph: BipartiteGraph, manifest: Optional[dict] = None) -> None:
    Path(path).write_text(format_graph(graph, manifest))


def write_matrix(path, matrix: SensingMatrix, manifest: Optional[dict] = None) -> None:
    Path(path).write_text(format_matrix(matrix, manifest))


def parse_mm(text: str, path=None) -> MMContent:
    """Parse Matrix Market text (coordinate pattern/real/integer, array real)."""
    lines = text.splitlines()
    if not lines or not lines[0].lower().startswith("%%matrixmarket"):
        raise MatrixMarketError("missing %%MatrixMarket banner", 1, path)
    banner = lines[0].lower().split()
    if len(banner) != 5 or banner[1] != "matrix":
        raise MatrixMarketError(f"unsupported banner {lines[0]!r}", 1, path)
    fmt, fieldtype, symmetry = banner[2:]
    if symmetry != "general":
        raise MatrixMarketError(f"unsupported symmetry {symmetry!r}", 1, path)
    if fmt == "coordinate" and fieldtype not in ("pattern", "real", "integer"):
        raise MatrixMarketError(f"unsupported field {fieldtype!r}", 1, path)
    if fmt == "array" and fieldtype not in ("real", "integer"):
        raise MatrixMarketError(f"unsupported field {fieldtype!r}", 1, path)
    if fmt not in ("coordinate", "array"):
        raise MatrixMarketError(f"unsupported format {fmt!r}", 1, path)

    manifest, comments = None, []
    body: list[tuple[int, list[str]]] = []
    for lineno, line in enumerate(lines[1:], start=2):
        if line.startswith("%"):
            if line.startswith(MANIFEST_PREFIX):
                try:
                    manifest = json.loads(line[len(MANIFEST_PREFIX):])
                except json.JSONDecodeError as exc:
                    raise MatrixMarketError(f"bad manifest: {exc}", lineno, path) from None
            else:
                comments.append(line)
            continue
        if line.strip():
            body.append((lineno, line.split()))
    if not body:
        raise MatrixMarketError("missing size line", len(lines), path)

    size_line, size = body[0]
    want = 3 if fmt == "coordinate" else 2
    if len(size) != want:
        raise MatrixMarketError(f"size line needs {want} integers", size_line, path)
    try:
        dims = [int(t) for t in size]
    except ValueError:
        raise MatrixMarketError("non-integer size line", size_line, path) from None
    m, n = dims[0], dims[1]
    if m < 1 or n < 1:
        raise MatrixMarketError(f"bad dimensions {m} x {n}", size_line, path)
    entries = body[1:]

    if fmt == "array":
        if len(entries) != m * n:
            raise MatrixMarketError(f"expected {m * n} values, found {len(entries)}",
                                    entries[-1][0] if entries else size_line, path)
        vals = np.empty(m * n)
        for i, (lineno, toks) in enumerate(entries):
            if len(toks) != 1:
                raise MatrixMarketError("expected one value", lineno, path)
            try:
                vals[i] = float(toks[0])
            except ValueError:
                raise MatrixMarketError(f"bad value {toks[0]!r}", lineno, path) from None
        grid = vals.reshape(n, m).T  # stored column-major
        rows, cols = np.indices((m, n))
        return MMContent("array", (m, n), rows.ravel(), cols.ravel(), grid.ravel(),
                         manifest, comments)

    nnz = dims[2]
    if len(entries) != nnz:
        raise MatrixMarketError(f"header declares {nnz} entries, found {len(entries)}",
                                entries[-1][0] if entries else size_line, path)
    pattern = fieldtype == "pattern"
    rows = np.empty(nnz, dtype=np.int64)
    cols = np.empty(nnz, dtype=np.int64)
    vals = None if pattern else np.empty(nnz)
    seen = set()
    for i, (lineno, toks) in enumerate(entries):
        if len(toks) != (2 if pattern else 3):
            raise MatrixMarketError(f"expected {2 if pattern else 3} fields", lineno, path)
        try:
            r, c = int(toks[0]), int(toks[1])
            if not pattern:
                vals[i] = float(toks[2])
        except ValueError:
            raise MatrixMarketError(f"bad entry {' '.join(toks)!r}", lineno, path) from None
        if not (1 <= r <= m and 1 <= c <= n):
            raise MatrixMarketError(f"entry ({r}, {c}) outside {m} x {n}", lineno, path)
        if (r, c) in seen:
            raise MatrixMarketError(f"duplicate entry ({r}, {c})", lineno, path)
        seen.add((r, c))
        rows[i], cols[i] = r - 1, c - 1
    return MMContent("pattern" if pattern else "coordinate", (m, n), rows, cols, vals,
                     manifest, comments)


def read_mm(path) -> MMContent:
    try:
        text = Path(path).read_text()
    except UnicodeDecodeError as exc:
        raise MatrixMarketError(f"not a text file: {exc}", None, path) from None
    return parse_mm(text, path)


def graph_from_content(content: MMContent) -> BipartiteGraph:
    m, n = content.shape
    if content.layout == "array":
        return BipartiteGraph.from_biadjacency(content.dense())
    keep = np.ones(len(content.rows), dtype=bool)
    if content.values is not None:
        keep = content.values != 0
    adj: list[list[int]] = [[] for _ in range(n)]
    for r, c in zip(content.rows[keep].tolist(), content.cols[keep].tolist()):
        adj[c].append(r)
    return BipartiteGraph(m, n, adj)


def read_graph(path) -> tuple[BipartiteGraph, Optional[dict]]:
    """Graph from a pattern file, or the support of a matrix file."""
    content = read_mm(path)
    return graph_from_content(content), content.manifest


def _infer_kind(content: MMContent) -> str:
    if content.layout == "array":
        return "gaussian"
    vals = content.values if content.values is not None else np.ones(1)
    nz = vals[vals != 0]
    if np.all(nz == 1):
        return "binary"
    if np.all(np.abs(nz) == 1):
        return "ternary"
    return "gaussian"


def read_matrix(path) -> tuple[SensingMatrix, Optional[dict]]:
    content = read_mm(path)
    kind = None
    seed = None
    if content.manifest:
        kind = content.manifest.get("params", {}).get("type")
        seed = content.manifest.get("params", {}).get("seed")
    if kind not in ("binary", "ternary", "gaussian"):
        kind = _infer_kind(content)
    return SensingMatrix(content.dense(), kind, seed), content.manifest
