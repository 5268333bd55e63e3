"""Connected components, hop distances and minimum s-t edge cuts."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np
from scipy.sparse.csgraph import connected_components

from .errors import InvalidParameterError

# hop-distance marker for unreachable nodes; never a valid hop count
UNREACHABLE = -1


@dataclass
class ComponentPartition:
    """Component labels (numbered by smallest member node) and sizes, largest first.

    ``giant_id`` is the label of the largest component, ties going to the
    smallest label. Inactive nodes, when a mask was given, carry label -1.
    """

    component_id: np.ndarray
    sizes: np.ndarray
    giant_id: int

    @property
    def giant_size(self):
        return int(self.sizes[0]) if len(self.sizes) else 0

    @property
    def n_components(self):
        return len(self.sizes)

    def giant_nodes(self):
        return np.flatnonzero(self.component_id == self.giant_id)


def components(g, active=None) -> ComponentPartition:
    """Exact connected components, optionally restricted to ``active`` nodes."""
    if active is None:
        h = g
    else:
        active = np.asarray(active, dtype=bool)
        h = g.subgraph_mask(active)
    _, labels = connected_components(h.to_sparse(), directed=False)
    if active is not None:
        labels = np.where(active, labels, -1)
    live = labels >= 0
    uniq, first = np.unique(labels[live], return_index=True)
    # renumber so that component ids follow the smallest member index
    nodes = np.flatnonzero(live)
    rank = np.empty(len(uniq), dtype=np.int64)
    rank[np.argsort(nodes[first], kind="stable")] = np.arange(len(uniq))
    lookup = np.full(uniq.max() + 1 if len(uniq) else 1, -1, dtype=np.int64)
    lookup[uniq] = rank
    comp = np.full(g.n, -1, dtype=np.int64)
    comp[live] = lookup[labels[live]]
    counts = np.bincount(comp[live], minlength=len(uniq))
    order = np.lexsort((np.arange(len(counts)), -counts))
    giant = int(order[0]) if len(order) else -1
    return ComponentPartition(comp, counts[order], giant)


def bfs_distances(g, source):
    """Hop distance from ``source`` to every node; ``UNREACHABLE`` where no path exists."""
    if not 0 <= source < g.n:
        raise InvalidParameterError(f"node {source} not in graph of size {g.n}")
    indptr, indices = g.indptr, g.indices
    dist = np.full(g.n, UNREACHABLE, dtype=np.int64)
    dist[source] = 0
    frontier = np.array([source])
    level = 0
    while frontier.size:
        level += 1
        nbrs = np.concatenate([indices[indptr[u]:indptr[u + 1]] for u in frontier])
        nbrs = np.unique(nbrs)
        nbrs = nbrs[dist[nbrs] == UNREACHABLE]
        dist[nbrs] = level
        frontier = nbrs
    return dist


def hop_distance_summary(g, nodes, max_cells=1 << 22):
    """Sum over ordered pairs and maximum of hop distances among ``nodes``.

    ``nodes`` must induce a connected subgraph. Runs BFS from every source at
    once: each node keeps a bitset of the sources already within ``level``
    hops, and one level is an OR over neighbour bitsets. Sources are handled in
    blocks so the gathered array stays below ``max_cells`` 64-bit words.
    Sums are exact integers.
    """
    nodes = np.asarray(nodes, dtype=np.int64)
    n = len(nodes)
    sub = g.to_sparse()[nodes][:, nodes].tocsr()
    indptr, indices = sub.indptr, sub.indices
    starts = indptr[:-1]
    isolated = np.diff(indptr) == 0
    if n > 1 and isolated.any():
        raise InvalidParameterError("nodes do not form a connected set")
    words_total = (n + 63) // 64
    block = max(1, min(words_total, max_cells // max(1, len(indices))))
    rows = np.arange(n)
    total = 0
    longest = 0
    for w0 in range(0, words_total, block):
        w1 = min(words_total, w0 + block)
        src = rows[w0 * 64:min(n, w1 * 64)]
        reach = np.zeros((n, w1 - w0), dtype=np.uint64)
        reach[src, (src - w0 * 64) // 64] = np.left_shift(np.uint64(1), ((src - w0 * 64) % 64).astype(np.uint64))
        reached = len(src)
        level = 0
        while reached < len(src) * n:
            level += 1
            grown = np.bitwise_or.reduceat(reach[indices], starts, axis=0)
            grown |= reach
            now = int(np.bitwise_count(grown).sum())
            if now == reached:
                raise InvalidParameterError("nodes do not form a connected set")
            total += level * (now - reached)
            reached = now
            reach = grown
        longest = max(longest, level)
    return total, longest


def max_flow_unit(adj, s, t):
    """Unit-capacity max flow between ``s`` and ``t`` on an undirected adjacency.

    ``adj`` maps each node to an iterable of neighbours. Uses shortest
    augmenting paths. Returns ``(value, source_side)`` where ``source_side`` is
    the set of nodes reachable from ``s`` in the final residual graph.
    """
    flow = {}  # flow[(u, v)] in {-1, 0, 1}, antisymmetric
    value = 0
    while True:
        parent = {s: None}
        queue = deque([s])
        found = False
        while queue and not found:
            u = queue.popleft()
            for w in adj[u]:
                if w not in parent and flow.get((u, w), 0) < 1:
                    parent[w] = u
                    if w == t:
                        found = True
                        break
                    queue.append(w)
        if not found:
            return value, set(parent)
        w = t
        while parent[w] is not None:
            u = parent[w]
            f = flow.get((u, w), 0) + 1
            if f:
                flow[(u, w)] = f
                flow[(w, u)] = -f
            else:
                del flow[(u, w)]
                del flow[(w, u)]
            w = u
        value += 1


def min_edge_cut(g, s, t):
    """Minimum-cardinality edge set separating ``s`` from ``t``.

    Returns ``(cut_size, cut_edges)`` with edges as ``(u, v)``, ``u < v``,
    sorted. Nodes already in different components give ``(0, [])``.
    """
    if s == t:
        raise InvalidParameterError("s and t must differ")
    for x in (s, t):
        if not 0 <= x < g.n:
            raise InvalidParameterError(f"node {x} not in graph of size {g.n}")
    return min_edge_cut_adj(g.adjacency_lists(), s, t)


def min_edge_cut_adj(adj, s, t):
    """:func:`min_edge_cut` on an adjacency list/set structure."""
    value, side = max_flow_unit(adj, s, t)
    if t in side:
        raise AssertionError("residual search reached the sink after termination")
    cut = sorted((min(u, w), max(u, w)) for u in side for w in adj[u] if w not in side)
    if len(cut) != value:
        raise AssertionError("cut size differs from max-flow value")
    return value, cut
