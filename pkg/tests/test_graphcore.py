import itertools
from collections import deque

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from qnetsim.errors import InvalidParameterError
from qnetsim.graph import Graph
from qnetsim.graphcore import (UNREACHABLE, bfs_distances, components, hop_distance_summary,
                               min_edge_cut)

from conftest import complete_graph, graph_from, path_graph, random_graph


@st.composite
def small_graphs(draw, max_n=64, max_edges=None):
    n = draw(st.integers(1, max_n))
    pairs = list(itertools.combinations(range(n), 2))
    if not pairs:
        return graph_from(n, [])
    limit = len(pairs) if max_edges is None else min(max_edges, len(pairs))
    k = draw(st.integers(0, min(limit, 4 * n)))
    idx = draw(st.lists(st.integers(0, len(pairs) - 1), min_size=k, max_size=k, unique=True))
    return graph_from(n, [pairs[i] for i in idx])


def bfs_labels(g):
    """Reference component labelling by plain BFS from the lowest unlabelled node."""
    label = [-1] * g.n
    c = 0
    for s in range(g.n):
        if label[s] >= 0:
            continue
        label[s] = c
        q = deque([s])
        while q:
            u = q.popleft()
            for w in g.neighbors(u):
                if label[w] < 0:
                    label[w] = c
                    q.append(w)
        c += 1
    return label


def connected_after_removal(n, edges, drop, s, t):
    adj = {i: [] for i in range(n)}
    for k, (u, v) in enumerate(edges):
        if k not in drop:
            adj[u].append(v)
            adj[v].append(u)
    seen, q = {s}, deque([s])
    while q:
        u = q.popleft()
        for w in adj[u]:
            if w not in seen:
                seen.add(w)
                q.append(w)
    return t in seen


def exhaustive_min_cut(n, edges, s, t):
    for size in range(len(edges) + 1):
        for drop in itertools.combinations(range(len(edges)), size):
            if not connected_after_removal(n, edges, set(drop), s, t):
                return size
    raise AssertionError("unreachable")


class TestComponents:
    def test_examples(self):
        p = components(graph_from(4, [(0, 1), (1, 2), (0, 2)]))
        assert p.sizes.tolist() == [3, 1] and p.giant_size == 3
        p = components(Graph.empty(5))
        assert p.sizes.tolist() == [1] * 5 and p.giant_size == 1
        p = components(graph_from(4, [(0, 1), (2, 3)]))
        assert p.sizes.tolist() == [2, 2] and p.giant_size == 2

    def test_tie_goes_to_smallest_id(self):
        p = components(graph_from(5, [(3, 4), (1, 2)]))
        assert p.giant_id == p.component_id[1]
        assert p.component_id.tolist() == [0, 1, 1, 2, 2]

    @given(small_graphs())
    def test_matches_bfs_labelling(self, g):
        p = components(g)
        assert p.component_id.tolist() == bfs_labels(g)
        assert p.sizes.sum() == g.n
        assert p.giant_size == p.sizes[0] == max(np.bincount(p.component_id))
        assert np.all(np.diff(p.sizes) <= 0)

    def test_active_mask(self):
        g = path_graph(5)
        p = components(g, active=[True, True, False, True, True])
        assert p.component_id.tolist() == [0, 0, -1, 1, 1]
        assert p.sizes.tolist() == [2, 2]


class TestBFS:
    def test_examples(self):
        assert bfs_distances(path_graph(3), 0).tolist() == [0, 1, 2]
        d = bfs_distances(graph_from(3, [(0, 1)]), 0)
        assert d[2] == UNREACHABLE and UNREACHABLE < 0
        assert bfs_distances(complete_graph(4), 2).tolist() == [1, 1, 0, 1]

    def test_invalid_node(self):
        with pytest.raises(InvalidParameterError):
            bfs_distances(path_graph(3), 3)

    @given(small_graphs(max_n=30), st.data())
    def test_triangle_inequality(self, g, data):
        D = np.array([bfs_distances(g, s) for s in range(g.n)])
        assert np.all(np.diag(D) == 0)
        assert np.array_equal(D, D.T)
        INF = 10 ** 6
        Dm = np.where(D == UNREACHABLE, INF, D)
        for k in range(g.n):
            assert np.all(Dm <= Dm[:, [k]] + Dm[[k], :])

    @given(small_graphs(max_n=40))
    def test_edges_are_distance_one(self, g):
        for u, v in g.edges():
            assert bfs_distances(g, int(u))[v] == 1


class TestHopSummary:
    @given(small_graphs(max_n=64))
    def test_matches_per_source_bfs(self, g):
        nodes = components(g).giant_nodes()
        D = np.array([bfs_distances(g, int(s))[nodes] for s in nodes])
        total, longest = hop_distance_summary(g, nodes)
        assert total == int(D.sum())
        assert longest == int(D.max())

    def test_blocking_does_not_change_result(self, rng):
        g = random_graph(rng, 300, 0.03)
        nodes = components(g).giant_nodes()
        assert hop_distance_summary(g, nodes, max_cells=1) == hop_distance_summary(g, nodes)

    def test_disconnected_rejected(self):
        with pytest.raises(InvalidParameterError):
            hop_distance_summary(graph_from(4, [(0, 1), (2, 3)]), [0, 1, 2, 3])


class TestMinCut:
    def test_examples(self):
        assert min_edge_cut(path_graph(3), 0, 2) == (1, [(0, 1)])
        for s, t in itertools.combinations(range(4), 2):
            size, cut = min_edge_cut(complete_graph(4), s, t)
            assert size == 3 and len(cut) == 3
        barbell = graph_from(6, [(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (4, 5), (3, 5)])
        assert min_edge_cut(barbell, 0, 5) == (1, [(2, 3)])

    def test_disconnected_pair(self):
        assert min_edge_cut(graph_from(4, [(0, 1), (2, 3)]), 0, 3) == (0, [])

    @pytest.mark.parametrize("s,t", [(1, 1), (0, 9), (-1, 2)])
    def test_invalid(self, s, t):
        with pytest.raises(InvalidParameterError):
            min_edge_cut(path_graph(4), s, t)

    @given(small_graphs(max_n=8, max_edges=10), st.data())
    def test_matches_exhaustive_minimum(self, g, data):
        if g.n < 2:
            return
        s, t = data.draw(st.lists(st.integers(0, g.n - 1), min_size=2, max_size=2, unique=True))
        edges = [tuple(e) for e in g.edges().tolist()]
        size, cut = min_edge_cut(g, s, t)
        assert size == exhaustive_min_cut(g.n, edges, s, t) == len(cut)
        drop = {edges.index(e) for e in cut}
        assert not connected_after_removal(g.n, edges, drop, s, t)
