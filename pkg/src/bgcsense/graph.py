"""Bipartite graphs, floor-wise subgraph expansion, and girth analysis.

Variable nodes are matrix columns, check nodes are matrix rows.  A
:class:`BipartiteGraph` is immutable; edges are added through a
:class:`GraphBuilder` and frozen with :meth:`GraphBuilder.freeze`.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Optional

import numpy as np


class BipartiteGraph:
    """Immutable bipartite graph with ``num_checks`` rows and ``num_vars`` columns.

    Adjacency is stored variable-major (sorted check indices per variable)
    with a mirrored check-major index.
    """

    __slots__ = ("num_checks", "num_vars", "_var_adj", "_check_adj")

    def __init__(self, num_checks: int, num_vars: int, adjacency: Iterable[Iterable[int]]):
        if num_checks < 1 or num_vars < 1:
            raise ValueError(f"graph needs m >= 1 and n >= 1, got m={num_checks}, n={num_vars}")
        var_adj = []
        check_adj: list[list[int]] = [[] for _ in range(num_checks)]
        for v, checks in enumerate(adjacency):
            checks = [int(c) for c in checks]
            row = sorted(set(checks))
            if len(row) != len(checks):
                raise ValueError(f"duplicate edge at variable {v}")
            for c in row:
                if not 0 <= c < num_checks:
                    raise IndexError(f"check index {c} out of range [0, {num_checks}) at variable {v}")
                check_adj[c].append(v)
            var_adj.append(tuple(row))
        if len(var_adj) != num_vars:
            raise ValueError(f"adjacency has {len(var_adj)} variables, expected {num_vars}")
        self.num_checks = int(num_checks)
        self.num_vars = int(num_vars)
        self._var_adj = tuple(var_adj)
        self._check_adj = tuple(tuple(vs) for vs in check_adj)

    @classmethod
    def from_edges(cls, num_checks: int, num_vars: int, edges: Iterable[tuple[int, int]]):
        """Build from ``(variable, check)`` pairs; duplicates are rejected."""
        builder = GraphBuilder(num_checks, num_vars)
        for v, c in edges:
            builder.add_edge(v, c)
        return builder.freeze()

    @classmethod
    def from_biadjacency(cls, matrix) -> "BipartiteGraph":
        """Graph whose edges are the nonzero entries of an ``m x n`` array."""
        a = np.asarray(matrix)
        if a.ndim != 2:
            raise ValueError("biadjacency must be two-dimensional")
        m, n = a.shape
        nz = a != 0
        return cls(m, n, [np.flatnonzero(nz[:, j]).tolist() for j in range(n)])

    @property
    def shape(self) -> tuple[int, int]:
        return self.num_checks, self.num_vars

    @property
    def num_edges(self) -> int:
        return sum(len(a) for a in self._var_adj)

    def checks_of(self, v: int) -> tuple[int, ...]:
        return self._var_adj[v]

    def vars_of(self, c: int) -> tuple[int, ...]:
        return self._check_adj[c]

    @property
    def adjacency(self) -> tuple[tuple[int, ...], ...]:
        return self._var_adj

    def edges(self) -> list[tuple[int, int]]:
        """All ``(variable, check)`` pairs in variable-major order."""
        return [(v, c) for v, cs in enumerate(self._var_adj) for c in cs]

    def has_edge(self, v: int, c: int) -> bool:
        return c in self._var_adj[v]

    def var_degrees(self) -> np.ndarray:
        return np.array([len(a) for a in self._var_adj], dtype=np.int64)

    def check_degrees(self) -> np.ndarray:
        return np.array([len(a) for a in self._check_adj], dtype=np.int64)

    def biadjacency(self, dtype=np.int64) -> np.ndarray:
        """Dense ``m x n`` 0/1 matrix, rows = checks, columns = variables."""
        out = np.zeros((self.num_checks, self.num_vars), dtype=dtype)
        for v, cs in enumerate(self._var_adj):
            out[list(cs), v] = 1
        return out

    def with_edge(self, v: int, c: int) -> "BipartiteGraph":
        """Copy of the graph with edge ``(v, c)`` added."""
        if self.has_edge(v, c):
            raise ValueError(f"edge ({v}, {c}) already present")
        adj = list(self._var_adj)
        adj[v] = adj[v] + (c,)
        return BipartiteGraph(self.num_checks, self.num_vars, adj)

    def __eq__(self, other) -> bool:
        if not isinstance(other, BipartiteGraph):
            return NotImplemented
        return self.shape == other.shape and self._var_adj == other._var_adj

    def __hash__(self) -> int:
        return hash((self.shape, self._var_adj))

    def __repr__(self) -> str:
        return f"BipartiteGraph(m={self.num_checks}, n={self.num_vars}, edges={self.num_edges})"


class GraphBuilder:
    """Single-owner mutable edge set that freezes into a :class:`BipartiteGraph`."""

    def __init__(self, num_checks: int, num_vars: int):
        if num_checks < 1 or num_vars < 1:
            raise ValueError(f"graph needs m >= 1 and n >= 1, got m={num_checks}, n={num_vars}")
        self.num_checks = num_checks
        self.num_vars = num_vars
        self._var_adj: list[set[int]] = [set() for _ in range(num_vars)]
        self._check_adj: list[set[int]] = [set() for _ in range(num_checks)]

    def add_edge(self, v: int, c: int) -> None:
        if not 0 <= v < self.num_vars:
            raise IndexError(f"variable index {v} out of range [0, {self.num_vars})")
        if not 0 <= c < self.num_checks:
            raise IndexError(f"check index {c} out of range [0, {self.num_checks})")
        if c in self._var_adj[v]:
            raise ValueError(f"duplicate edge ({v}, {c})")
        self._var_adj[v].add(c)
        self._check_adj[c].add(v)

    def checks_of(self, v: int) -> set[int]:
        return self._var_adj[v]

    def vars_of(self, c: int) -> set[int]:
        return self._check_adj[c]

    def freeze(self) -> BipartiteGraph:
        return BipartiteGraph(self.num_checks, self.num_vars, self._var_adj)


@dataclass(frozen=True)
class SubgraphFloors:
    """Check nodes reachable from ``root`` at floors 1-3 (minimal distance 1, 3, 5)."""

    root: int
    c1: frozenset
    c2: frozenset
    c3: frozenset

    def floor(self, i: int) -> frozenset:
        return (self.c1, self.c2, self.c3)[i - 1]

    @property
    def reached(self) -> frozenset:
        return self.c1 | self.c2 | self.c3


@dataclass(frozen=True)
class GirthReport:
    has_four_cycle: bool
    girth: Optional[int] = None
    four_cycle_witness: Optional[tuple[int, int]] = None
    exact: bool = field(default=True, compare=False)

    @property
    def acyclic(self) -> bool:
        # reports from has_four_cycle alone (exact=False) say nothing about longer cycles
        return self.exact and self.girth is None

    def describe(self) -> str:
        return "acyclic" if self.girth is None else str(self.girth)


def expand_floors(graph, root: int, max_floor: int = 3) -> SubgraphFloors:
    """Layer the check nodes around variable ``root`` by minimal distance.

    Floor ``i`` holds the checks at graph distance ``2i - 1`` from the root.
    Floors beyond ``max_floor`` come back empty.  ``graph`` may be a
    :class:`BipartiteGraph` or a :class:`GraphBuilder`.
    """
    if not 0 <= root < graph.num_vars:
        raise IndexError(f"root {root} out of range [0, {graph.num_vars})")
    if max_floor not in (1, 2, 3):
        raise ValueError(f"max_floor must be 1, 2 or 3, got {max_floor}")
    floors: list[set[int]] = []
    seen_checks: set[int] = set()
    seen_vars = {root}
    frontier_vars = {root}
    for _ in range(max_floor):
        layer = set()
        for v in frontier_vars:
            layer.update(graph.checks_of(v))
        layer -= seen_checks
        seen_checks |= layer
        floors.append(layer)
        nxt = set()
        for c in layer:
            nxt.update(graph.vars_of(c))
        nxt -= seen_vars
        seen_vars |= nxt
        frontier_vars = nxt
    while len(floors) < 3:
        floors.append(set())
    return SubgraphFloors(root, frozenset(floors[0]), frozenset(floors[1]), frozenset(floors[2]))


def overlap_matrix(graph: BipartiteGraph) -> np.ndarray:
    """Column co-occupancy counts ``B^T B`` of the 0/1 biadjacency ``B``."""
    b = graph.biadjacency(dtype=np.int64)
    return b.T @ b


def has_four_cycle(graph: BipartiteGraph) -> GirthReport:
    """Detect a 4-cycle: two variables sharing at least two checks."""
    if graph.num_vars < 2 or graph.num_edges < 4:
        return GirthReport(False, girth=None, exact=False)
    gram = overlap_matrix(graph)
    np.fill_diagonal(gram, 0)
    flat = int(np.argmax(gram))
    i, j = divmod(flat, graph.num_vars)
    if gram[i, j] > 1:
        return GirthReport(True, girth=4, four_cycle_witness=(min(i, j), max(i, j)))
    return GirthReport(False, girth=None, exact=False)


def _is_forest(graph: BipartiteGraph) -> bool:
    parent = list(range(graph.num_checks + graph.num_vars))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for v, c in graph.edges():
        a, b = find(v), find(graph.num_vars + c)
        if a == b:
            return False
        parent[a] = b
    return True


def _count_six_cycles(graph: BipartiteGraph, gram: np.ndarray) -> int:
    # Valid only without 4-cycles: every adjacent variable pair then shares
    # exactly one check, and a triangle in the variable-sharing graph is a
    # 6-cycle unless all three pairs share the same check.
    adj = (gram > 0).astype(np.int64)
    np.fill_diagonal(adj, 0)
    triangles = int(np.einsum("ij,ji->", adj @ adj, adj)) // 6
    degs = graph.check_degrees()
    same_check = int(sum(d * (d - 1) * (d - 2) // 6 for d in degs.tolist()))
    return triangles - same_check


def _bfs_girth(graph: BipartiteGraph, lower: int) -> Optional[int]:
    # variables are vertices 0..n-1, checks are n..n+m-1
    n = graph.num_vars
    nbrs = [[n + c for c in graph.checks_of(v)] for v in range(n)]
    nbrs += [list(graph.vars_of(c)) for c in range(graph.num_checks)]
    best = None
    for root in range(n):
        if not nbrs[root]:
            continue
        dist = {root: 0}
        parent = {root: -1}
        queue = deque([root])
        while queue:
            u = queue.popleft()
            if best is not None and 2 * dist[u] + 1 >= best:
                break
            for w in nbrs[u]:
                if w == parent[u]:
                    continue
                if w in dist:
                    length = dist[u] + dist[w] + 1
                    if best is None or length < best:
                        best = length
                else:
                    dist[w] = dist[u] + 1
                    parent[w] = u
                    queue.append(w)
        if best == lower:
            break
    return best


def girth(graph: BipartiteGraph) -> GirthReport:
    """Exact girth, or ``girth=None`` for an acyclic graph."""
    four = has_four_cycle(graph)
    if four.has_four_cycle:
        return four
    if _is_forest(graph):
        return GirthReport(False, girth=None)
    gram = overlap_matrix(graph)
    if _count_six_cycles(graph, gram) > 0:
        return GirthReport(False, girth=6)
    return GirthReport(False, girth=_bfs_girth(graph, lower=8))


def adding_creates_four_cycle(graph, v: int, c: int) -> bool:
    """Whether inserting absent edge ``(v, c)`` closes a 4-cycle."""
    floors = expand_floors(graph, v, max_floor=2)
    return c in floors.c2


def is_maximal(graph: BipartiteGraph) -> bool:
    """True iff every absent edge would create a 4-cycle.

    Equivalently, each variable's two-floor subgraph reaches every check.
    Variables of degree zero are never saturated.
    """
    b = graph.biadjacency(dtype=np.int64)
    gram = b.T @ b
    reach = b @ (gram > 0).astype(np.int64)
    return bool(np.all(reach > 0))


def unsaturated_pairs(graph: BipartiteGraph) -> list[tuple[int, int]]:
    """Absent ``(variable, check)`` pairs that could be added without a 4-cycle."""
    b = graph.biadjacency(dtype=np.int64)
    gram = b.T @ b
    reach = b @ (gram > 0).astype(np.int64)
    cs, vs = np.nonzero(reach == 0)
    return sorted(zip(vs.tolist(), cs.tolist()))
