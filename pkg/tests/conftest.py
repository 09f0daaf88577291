import numpy as np
import pytest

from bgcsense.graph import BipartiteGraph


def random_graph(m, n, density, rng):
    """Erdos-Renyi style bipartite graph on a numpy Generator."""
    return BipartiteGraph.from_biadjacency(rng.random((m, n)) < density)


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


def bfs_distances(graph, root):
    """Shortest distances from variable ``root`` to every vertex.

    Vertices are ("v", i) and ("c", j).  Independent of the floor code.
    """
    dist = {("v", root): 0}
    queue = [("v", root)]
    while queue:
        nxt = []
        for kind, i in queue:
            if kind == "v":
                nbrs = [("c", c) for c in graph.checks_of(i)]
            else:
                nbrs = [("v", v) for v in graph.vars_of(i)]
            for w in nbrs:
                if w not in dist:
                    dist[w] = dist[(kind, i)] + 1
                    nxt.append(w)
        queue = nxt
    return dist


def shortest_cycle_bruteforce(graph, limit):
    """Length of the shortest simple cycle up to ``limit`` edges, else None.

    Enumerates simple paths by DFS from every vertex, only through vertices
    with a larger label than the start so each cycle is seen from its
    smallest vertex.
    """
    n = graph.num_vars
    adj = [[n + c for c in graph.checks_of(v)] for v in range(n)]
    adj += [list(graph.vars_of(c)) for c in range(graph.num_checks)]
    best = None

    def dfs(start, u, depth, on_path):
        nonlocal best
        for w in adj[u]:
            if w == start and depth >= 3:
                if best is None or depth + 1 < best:
                    best = depth + 1
            elif w > start and w not in on_path and depth + 1 < limit:
                if best is not None and depth + 2 >= best:
                    continue
                on_path.add(w)
                dfs(start, w, depth + 1, on_path)
                on_path.discard(w)

    for s in range(len(adj)):
        dfs(s, s, 0, {s})
    return best


_ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def criterion():
    """Report one acceptance criterion: prints a PASS/FAIL line, then asserts."""

    def report(number, title, ok, detail=""):
        line = f"criterion {number} [{'PASS' if ok else 'FAIL'}] {title}"
        if detail:
            line += f" | {detail}"
        _ACCEPTANCE_LINES.append(line)
        print(line)
        assert ok, line

    return report


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
