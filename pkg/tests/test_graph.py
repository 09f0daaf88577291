import itertools

import numpy as np
import pytest
import scipy.io
from hypothesis import given, settings
from hypothesis import strategies as st

from bgcsense.graph import (BipartiteGraph, GraphBuilder, adding_creates_four_cycle,
                            expand_floors, girth, has_four_cycle, is_maximal)
from bgcsense.mmio import (MatrixMarketError, format_graph, graph_from_content, parse_mm,
                          read_graph, write_graph)

from conftest import bfs_distances, random_graph, shortest_cycle_bruteforce


def hexagon():
    # v0-c0-v1-c1-v2-c2-v0
    return BipartiteGraph(3, 3, [[0, 2], [0, 1], [1, 2]])


class TestBipartiteGraph:
    def test_edge_counts_agree(self, rng):
        g = random_graph(7, 9, 0.4, rng)
        assert g.num_edges == g.var_degrees().sum() == g.check_degrees().sum()

    def test_rejects_duplicate_edge(self):
        with pytest.raises(ValueError):
            BipartiteGraph(3, 1, [[0, 0]])
        b = GraphBuilder(3, 2)
        b.add_edge(1, 2)
        with pytest.raises(ValueError):
            b.add_edge(1, 2)

    def test_rejects_out_of_range(self):
        with pytest.raises(IndexError):
            BipartiteGraph(2, 1, [[2]])
        with pytest.raises(IndexError):
            GraphBuilder(2, 2).add_edge(2, 0)

    def test_adjacency_sorted_and_mirrored(self):
        g = BipartiteGraph(4, 2, [[3, 0, 2], [2]])
        assert g.checks_of(0) == (0, 2, 3)
        assert g.vars_of(2) == (0, 1)

    def test_biadjacency_roundtrip(self, rng):
        g = random_graph(6, 5, 0.5, rng)
        assert BipartiteGraph.from_biadjacency(g.biadjacency()) == g


class TestExpandFloors:
    def test_single_variable(self):
        g = BipartiteGraph(2, 1, [[0, 1]])
        f = expand_floors(g, 0, 3)
        assert (f.c1, f.c2, f.c3) == ({0, 1}, set(), set())

    def test_path(self):
        # v0 - c0 - v1 - c1
        g = BipartiteGraph(2, 2, [[0], [0, 1]])
        f = expand_floors(g, 0, 3)
        assert (f.c1, f.c2, f.c3) == ({0}, {1}, set())

    def test_max_floor_truncates(self):
        g = BipartiteGraph(3, 3, [[0], [0, 1], [1, 2]])
        assert expand_floors(g, 0, 3).c3 == {2}
        f = expand_floors(g, 0, 2)
        assert f.c2 == {1} and f.c3 == set()
        assert expand_floors(g, 0, 1).c2 == set()

    def test_root_out_of_range(self):
        with pytest.raises(IndexError):
            expand_floors(hexagon(), 3)

    @pytest.mark.parametrize("trial", range(20))
    def test_matches_bfs_buckets(self, trial):
        rng = np.random.default_rng(trial)
        g = random_graph(8, 10, 0.3, rng)
        for root in range(g.num_vars):
            dist = bfs_distances(g, root)
            f = expand_floors(g, root, 3)
            for i, d in ((1, 1), (2, 3), (3, 5)):
                expected = {c for (kind, c), dd in dist.items() if kind == "c" and dd == d}
                assert f.floor(i) == expected

    def test_floors_disjoint(self, rng):
        for _ in range(10):
            g = random_graph(10, 12, 0.25, rng)
            f = expand_floors(g, 0)
            assert not (f.c1 & f.c2) and not (f.c1 & f.c3) and not (f.c2 & f.c3)


def _has_closed_path_of_length_4(g):
    """DFS for a closed walk v-c-v'-c'-v with four distinct vertices."""
    n = g.num_vars
    adj = [[n + c for c in g.checks_of(v)] for v in range(n)]
    adj += [list(g.vars_of(c)) for c in range(g.num_checks)]

    def dfs(path):
        if len(path) == 4:
            return path[0] in adj[path[-1]]
        return any(dfs(path + [w]) for w in adj[path[-1]] if w not in path)

    return any(dfs([s]) for s in range(n))


class TestFourCycle:
    def test_identity_pattern(self):
        g = BipartiteGraph(4, 4, [[i] for i in range(4)])
        assert not has_four_cycle(g).has_four_cycle

    def test_complete_2x2(self):
        rep = has_four_cycle(BipartiteGraph(2, 2, [[0, 1], [0, 1]]))
        assert rep.has_four_cycle and rep.four_cycle_witness == (0, 1)
        assert rep.girth == 4

    def test_witness_shares_two_checks(self, rng):
        for _ in range(20):
            g = random_graph(6, 6, 0.5, rng)
            rep = has_four_cycle(g)
            if rep.has_four_cycle:
                a, b = rep.four_cycle_witness
                assert len(set(g.checks_of(a)) & set(g.checks_of(b))) >= 2

    def test_exhaustive_4x4(self):
        cells = [(v, c) for v in range(4) for c in range(4)]
        checked = 0
        for size in range(9):
            for edges in itertools.combinations(cells, size):
                g = BipartiteGraph.from_edges(4, 4, edges)
                assert has_four_cycle(g).has_four_cycle == _has_closed_path_of_length_4(g)
                checked += 1
        assert checked == sum(len(list(itertools.combinations(range(16), s))) for s in range(9))

    @settings(max_examples=60, deadline=None)
    @given(m=st.integers(1, 50), n=st.integers(1, 50), density=st.floats(0.0, 0.3),
           seed=st.integers(0, 2**32 - 1))
    def test_gram_equivalence(self, m, n, density, seed):
        g = random_graph(m, n, density, np.random.default_rng(seed))
        b = g.biadjacency()
        gram = b.T @ b
        np.fill_diagonal(gram, 0)
        assert has_four_cycle(g).has_four_cycle == bool(gram.size and gram.max() > 1)


class TestGirth:
    def test_forest(self):
        # a star plus a path; no cycles
        g = BipartiteGraph(4, 3, [[0, 1, 2], [2, 3], []])
        rep = girth(g)
        assert rep.acyclic and rep.describe() == "acyclic"

    def test_empty(self):
        assert girth(BipartiteGraph(3, 3, [[], [], []])).acyclic

    def test_hexagon(self):
        assert girth(hexagon()).girth == 6

    def test_long_cycle(self):
        # 10-cycle: v_i adjacent to c_i and c_{i+1 mod 5}
        g = BipartiteGraph(5, 5, [[i, (i + 1) % 5] for i in range(5)])
        assert girth(g).girth == 10

    def test_star_of_checks_is_not_a_cycle(self):
        # three variables on one check plus a pendant: no cycle even though
        # the variables pairwise share a check
        g = BipartiteGraph(2, 3, [[0], [0], [0, 1]])
        assert girth(g).acyclic

    @pytest.mark.parametrize("trial", range(25))
    def test_matches_bruteforce(self, trial):
        rng = np.random.default_rng(1000 + trial)
        g = random_graph(8, 8, rng.uniform(0.12, 0.35), rng)
        expected = shortest_cycle_bruteforce(g, 12)
        rep = girth(g)
        if expected is None:
            # no cycle up to 12; on 16 vertices a longer one is still possible
            assert rep.girth is None or rep.girth > 12
        else:
            assert rep.girth == expected

    @pytest.mark.parametrize("trial", range(10))
    def test_four_cycle_iff_girth_four(self, trial):
        rng = np.random.default_rng(trial)
        g = random_graph(10, 10, 0.25, rng)
        assert has_four_cycle(g).has_four_cycle == (girth(g).girth == 4)


class TestMaximality:
    def test_adding_edge_detection(self):
        g = hexagon()
        # v0 has checks {0, 2}; c1 is on its second floor
        assert adding_creates_four_cycle(g, 0, 1)
        assert has_four_cycle(g.with_edge(0, 1)).has_four_cycle

    def test_is_maximal_matches_edge_insertion(self, rng):
        for _ in range(15):
            g = random_graph(5, 6, 0.35, rng)
            if has_four_cycle(g).has_four_cycle:
                continue
            brute = all(has_four_cycle(g.with_edge(v, c)).has_four_cycle
                        for v in range(g.num_vars) for c in range(g.num_checks)
                        if not g.has_edge(v, c))
            assert is_maximal(g) == brute


class TestMatrixMarket:
    def test_roundtrip(self, tmp_path, rng):
        g = random_graph(7, 11, 0.3, rng)
        path = tmp_path / "g.mtx"
        write_graph(path, g, {"tool": "x"})
        back, manifest = read_graph(path)
        assert back == g and manifest == {"tool": "x"}

    def test_order_insensitive(self):
        text = "%%MatrixMarket matrix coordinate pattern general\n3 2 3\n3 2\n1 1\n2 2\n"
        g = graph_from_content(parse_mm(text))
        assert g.adjacency == ((0,), (1, 2))

    def test_scipy_reads_our_files(self, tmp_path, rng):
        g = random_graph(6, 9, 0.4, rng)
        path = tmp_path / "g.mtx"
        write_graph(path, g)
        dense = scipy.io.mmread(str(path))
        dense = dense.toarray() if hasattr(dense, "toarray") else dense
        np.testing.assert_array_equal(dense != 0, g.biadjacency() != 0)

    def test_header_line(self):
        text = format_graph(BipartiteGraph(2, 2, [[0], [1]]))
        assert text.splitlines()[:2] == ["%%MatrixMarket matrix coordinate pattern general", "2 2 2"]

    @pytest.mark.parametrize("text,line", [
        ("%%MatrixMarket matrix coordinate pattern general\n2 2 2\n1 1\n3 1\n", 4),
        ("%%MatrixMarket matrix coordinate pattern general\n2 2 1\n1 x\n", 3),
        ("%%MatrixMarket matrix coordinate pattern general\n2 2\n", 2),
        ("hello\n", 1),
        ("%%MatrixMarket matrix coordinate pattern general\n2 2 2\n1 1\n1 1\n", 4),
    ])
    def test_parse_errors_carry_line(self, text, line):
        with pytest.raises(MatrixMarketError) as exc:
            parse_mm(text)
        assert exc.value.line == line

