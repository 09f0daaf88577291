"""Sensing matrices realized from graphs, Gaussian baselines, and coherence."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .graph import BipartiteGraph
from .rng import Stream

KINDS = ("binary", "ternary", "gaussian")


class ZeroColumnError(ValueError):
    def __init__(self, column: int):
        super().__init__(f"column {column} is all zero")
        self.column = column


@dataclass(frozen=True, eq=False)
class SensingMatrix:
    """Dense ``m x n`` sensing matrix with its provenance.

    Columns are stored unnormalized.  ``support`` lists the nonzero row
    indices of each column for the graph-derived kinds.
    """

    entries: np.ndarray
    kind: str
    source_seed: Optional[int] = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown matrix kind {self.kind!r}")
        a = np.asarray(self.entries, dtype=np.float64)
        if a.ndim != 2:
            raise ValueError("entries must be a two-dimensional array")
        a.setflags(write=False)
        object.__setattr__(self, "entries", a)

    @property
    def rows(self) -> int:
        return self.entries.shape[0]

    @property
    def cols(self) -> int:
        return self.entries.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.entries.shape

    @property
    def support(self) -> list[np.ndarray]:
        return [np.flatnonzero(self.entries[:, j]) for j in range(self.cols)]

    def zero_columns(self) -> np.ndarray:
        return np.flatnonzero(~self.entries.any(axis=0))

    def require_nonzero_columns(self) -> None:
        zero = self.zero_columns()
        if zero.size:
            raise ZeroColumnError(int(zero[0]))

    def normalized(self) -> np.ndarray:
        """Copy of the entries with unit-norm columns."""
        self.require_nonzero_columns()
        return self.entries / np.linalg.norm(self.entries, axis=0)

    def to_graph(self) -> BipartiteGraph:
        return BipartiteGraph.from_biadjacency(self.entries)


def realize_binary(graph: BipartiteGraph) -> SensingMatrix:
    return SensingMatrix(graph.biadjacency(dtype=np.float64), "binary")


def realize_ternary(graph: BipartiteGraph, seed: int) -> SensingMatrix:
    """Graph pattern with an independent fair sign on every nonzero.

    Signs are assigned in variable-major edge order.
    """
    return realize_ternary_from(graph, Stream(seed), source_seed=seed)


def realize_ternary_from(graph: BipartiteGraph, stream: Stream,
                         source_seed: Optional[int] = None) -> SensingMatrix:
    a = np.zeros(graph.shape)
    edges = graph.edges()
    if edges:
        vs, cs = np.array(edges).T
        a[cs, vs] = stream.signs(len(edges))
    return SensingMatrix(a, "ternary", source_seed)


def sample_gaussian(m: int, n: int, seed: int) -> SensingMatrix:
    if m < 1 or n < 1:
        raise ValueError(f"m and n must be positive, got {m}, {n}")
    return SensingMatrix(Stream(seed).normal((m, n)), "gaussian", seed)


@dataclass(frozen=True)
class CoherenceReport:
    mu: float
    k_bound: int
    argmax_pair: Optional[tuple[int, int]]


def k_bound_for(mu: float, m: int) -> int:
    """Largest integer ``k`` with ``k < (1/mu + 1) / 2``; ``m`` when ``mu == 0``."""
    if mu <= 0:
        return m
    bound = 0.5 * (1.0 / mu + 1.0)
    # strict inequality; the slack absorbs rounding in mu (e.g. 1/3 -> bound 2)
    return max(0, math.ceil(bound - 1e-9) - 1)


def coherence(matrix) -> CoherenceReport:
    """Mutual coherence and the sparsity level it guarantees.

    Parameters
    ----------
    matrix : SensingMatrix or array_like
        Must have no all-zero column.

    Returns
    -------
    CoherenceReport
        ``mu`` is the largest absolute correlation between distinct
        normalized columns, ``argmax_pair`` the first column pair (in
        row-major order) attaining it.
    """
    a = matrix.entries if isinstance(matrix, SensingMatrix) else np.asarray(matrix, dtype=float)
    m, n = a.shape
    norms = np.linalg.norm(a, axis=0)
    zero = np.flatnonzero(norms == 0)
    if zero.size:
        raise ZeroColumnError(int(zero[0]))
    if n < 2:
        return CoherenceReport(0.0, m, None)
    g = np.abs((a / norms).T @ (a / norms))
    np.fill_diagonal(g, -1.0)
    i, j = divmod(int(np.argmax(g)), n)
    mu = float(min(g[i, j], 1.0))
    if mu < 1e-12:
        mu = 0.0
    return CoherenceReport(mu, k_bound_for(mu, m), (min(i, j), max(i, j)))


def max_support_overlap(matrix) -> int:
    """Largest number of rows shared by the supports of two distinct columns."""
    a = matrix.entries if isinstance(matrix, SensingMatrix) else np.asarray(matrix)
    b = (a != 0).astype(np.int64)
    g = b.T @ b
    np.fill_diagonal(g, 0)
    return int(g.max()) if g.size else 0
