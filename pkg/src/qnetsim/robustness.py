"""Node and link removal protocols and critical-threshold extraction.

Node and random-link protocols fix a removal order first and then replay it
backwards with a union-find (nodes or edges are added in reverse), which yields
the exact giant-cluster size and component count after every single removal.
"""
from __future__ import annotations

import heapq
import logging
from dataclasses import dataclass

import numpy as np

from .errors import NoPeakError
from .graph import Graph
from .graphcore import ComponentPartition, components, min_edge_cut_adj

log = logging.getLogger(__name__)

BREAKDOWN_LEVEL = 0.05
TARGETED_MODES = ("adaptive", "initial-degree")


@dataclass
class RobustnessCurve:
    """Giant-cluster ratio and mean isolated-cluster size versus removed fraction."""

    f_grid: np.ndarray
    n_g: np.ndarray
    n_iso: np.ndarray
    f_c: float | None = None
    n_g_stderr: np.ndarray | None = None
    n_iso_stderr: np.ndarray | None = None
    f_c_stderr: float | None = None

    CSV_COLUMNS = ("f", "n_g_mean", "n_g_stderr", "n_iso_mean", "n_iso_stderr")

    def rows(self):
        zeros = np.zeros(len(self.f_grid))
        g_err = self.n_g_stderr if self.n_g_stderr is not None else zeros
        i_err = self.n_iso_stderr if self.n_iso_stderr is not None else zeros
        return [list(r) for r in zip(self.f_grid, self.n_g, g_err, self.n_iso, i_err)]


def removal_grid(step=0.01):
    """Evenly spaced fractions from 0 to 1 inclusive."""
    count = int(round(1.0 / step))
    return np.round(np.linspace(0.0, 1.0, count + 1), 12)


def refine_grid(grid, center, halfwidth=0.03, step=0.002):
    """Merge ``grid`` with a finer sub-grid around ``center``."""
    lo, hi = max(0.0, center - halfwidth), min(1.0, center + halfwidth)
    fine = np.round(np.arange(lo, hi + step / 2, step), 12)
    return np.unique(np.concatenate([grid, fine[(fine >= 0) & (fine <= 1)]]))


def n_iso(partition: ComponentPartition) -> float:
    """Mean size of every component except the giant; 0 for a single component."""
    sizes = partition.sizes
    if len(sizes) < 2:
        return 0.0
    return float(sizes[1:].sum() / (len(sizes) - 1))


class _UnionFind:
    def __init__(self, n):
        self.parent = list(range(n))
        self.size = [1] * n

    def find(self, a):
        parent = self.parent
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    def union(self, a, b):
        """Merge the sets of a and b; return the merged size, or 0 if already joined."""
        a, b = self.find(a), self.find(b)
        if a == b:
            return 0
        if self.size[a] < self.size[b]:
            a, b = b, a
        self.parent[b] = a
        self.size[a] += self.size[b]
        return self.size[a]


@dataclass
class RemovalProfile:
    """Exact observables after each of ``total`` sequential removals.

    Index ``k`` of ``giant``, ``n_components`` and ``active`` refers to the
    state after ``k`` removals.
    """

    total: int
    giant: np.ndarray
    n_components: np.ndarray
    active: np.ndarray

    def observables(self, f_grid):
        k = np.rint(np.asarray(f_grid) * self.total).astype(np.int64)
        giant = self.giant[k].astype(float)
        comps = self.n_components[k]
        g0 = float(self.giant[0])
        n_g = giant / g0 if g0 > 0 else np.zeros(len(k))
        with np.errstate(invalid="ignore", divide="ignore"):
            iso = np.where(comps > 1, (self.active[k] - giant) / (comps - 1), 0.0)
        return n_g, iso

    def curve(self, f_grid):
        f_grid = np.asarray(f_grid, dtype=float)
        n_g, iso = self.observables(f_grid)
        return RobustnessCurve(f_grid, n_g, iso)


def node_removal_profile(g: Graph, order) -> RemovalProfile:
    """Replay a full node-removal order backwards with union-find."""
    n = g.n
    order = [int(v) for v in order]
    if sorted(order) != list(range(n)):
        raise ValueError("order must be a permutation of the nodes")
    adj = g.adjacency_lists()
    uf = _UnionFind(n)
    present = [False] * n
    giant = np.zeros(n + 1, dtype=np.int64)
    comps = np.zeros(n + 1, dtype=np.int64)
    best = 0
    count = 0
    for k in range(n - 1, -1, -1):
        v = order[k]
        present[v] = True
        count += 1
        best = max(best, 1)
        for u in adj[v]:
            if present[u]:
                merged = uf.union(v, u)
                if merged:
                    count -= 1
                    if merged > best:
                        best = merged
        giant[k] = best
        comps[k] = count
    return RemovalProfile(n, giant, comps, n - np.arange(n + 1))


def edge_removal_profile(g: Graph, order) -> RemovalProfile:
    """Replay an edge-removal order (indices into ``g.edges()``) backwards."""
    edges = g.edges()
    m = len(edges)
    order = np.asarray(order, dtype=np.int64)
    if m and not np.array_equal(np.sort(order), np.arange(m)):
        raise ValueError("order must be a permutation of the edge indices")
    uf = _UnionFind(g.n)
    giant = np.zeros(m + 1, dtype=np.int64)
    comps = np.zeros(m + 1, dtype=np.int64)
    best = 1 if g.n else 0
    count = g.n
    giant[m], comps[m] = best, count
    us = edges[order, 0].tolist()
    vs = edges[order, 1].tolist()
    for k in range(m - 1, -1, -1):
        merged = uf.union(us[k], vs[k])
        if merged:
            count -= 1
            if merged > best:
                best = merged
        giant[k] = best
        comps[k] = count
    return RemovalProfile(m, giant, comps, np.full(m + 1, g.n, dtype=np.int64))


def adaptive_attack_order(g: Graph):
    """Repeatedly remove the node of highest current degree (lowest index on ties)."""
    deg = g.degrees().astype(np.int64).tolist()
    adj = g.adjacency_lists()
    heap = [(-d, i) for i, d in enumerate(deg)]
    heapq.heapify(heap)
    removed = [False] * g.n
    order = []
    while heap:
        d, i = heapq.heappop(heap)
        if removed[i] or -d != deg[i]:
            continue
        removed[i] = True
        order.append(i)
        for u in adj[i]:
            if not removed[u]:
                deg[u] -= 1
                heapq.heappush(heap, (-deg[u], u))
    return order


def initial_degree_order(g: Graph):
    """Nodes by descending initial degree, ties by index."""
    return np.lexsort((np.arange(g.n), -g.degrees())).tolist()


def attack_order(g, mode="adaptive"):
    if mode == "adaptive":
        return adaptive_attack_order(g)
    if mode == "initial-degree":
        return initial_degree_order(g)
    raise ValueError(f"unknown targeted-attack mode {mode!r}; expected one of {TARGETED_MODES}")


def random_node_failure(g, f_grid, rng) -> RobustnessCurve:
    return node_removal_profile(g, rng.permutation(g.n)).curve(f_grid)


def targeted_attack(g, f_grid, mode="adaptive") -> RobustnessCurve:
    return node_removal_profile(g, attack_order(g, mode)).curve(f_grid)


def random_link_failure(g, f_grid, rng) -> RobustnessCurve:
    return edge_removal_profile(g, rng.permutation(g.n_edges)).curve(f_grid)


def edge_cut_attack(g, rng, pair_budget=500) -> RobustnessCurve:
    """Iterated minimum s-t edge cuts between random giant-cluster pairs.

    Each round draws ``(s, t)`` uniformly from the current giant cluster and
    deletes a minimum edge cut between them. The returned curve holds one point
    per round (plus the initial state): the cumulative fraction of the original
    links removed, ``N_G / N`` and the mean isolated-cluster size. Stops after
    ``pair_budget`` rounds or once the giant has fewer than two nodes.
    """
    edges = g.edges()
    m0 = len(edges)
    adj = [set(a) for a in g.adjacency_lists()]
    index = {(int(u), int(v)): e for e, (u, v) in enumerate(edges)}
    alive = np.ones(m0, dtype=bool)
    part = components(g)
    f = [0.0]
    ng = [part.giant_size / g.n]
    iso = [n_iso(part)]
    removed = 0
    for _ in range(pair_budget):
        if part.giant_size < 2:
            break
        s, t = (int(x) for x in rng.choice(part.giant_nodes(), 2, replace=False))
        size, cut = min_edge_cut_adj(adj, s, t)
        for u, v in cut:
            adj[u].discard(v)
            adj[v].discard(u)
            alive[index[(u, v)]] = False
        removed += size
        part = components(g.without_edges(~alive))
        if part.component_id[s] == part.component_id[t]:
            raise AssertionError("minimum cut left the pair connected")
        f.append(removed / m0)
        ng.append(part.giant_size / g.n)
        iso.append(n_iso(part))
    return RobustnessCurve(np.array(f), np.array(ng), np.array(iso))


def breakdown_fraction(curve, level=BREAKDOWN_LEVEL):
    """First grid fraction where the giant ratio drops below ``level`` (NaN if never)."""
    below = np.flatnonzero(np.asarray(curve.n_g) < level)
    return float(curve.f_grid[below[0]]) if len(below) else float("nan")


def critical_threshold(curve: RobustnessCurve) -> float:
    """Fraction at which the mean isolated-cluster size peaks (smallest on ties)."""
    if len(curve.f_grid) < 3:
        raise ValueError("need at least three grid points")
    iso = np.asarray(curve.n_iso)
    if not np.any(iso > 0):
        raise NoPeakError("isolated-cluster size is zero on the whole grid")
    idx = int(np.argmax(iso))
    f_c = float(curve.f_grid[idx])
    if curve.n_g[idx] >= BREAKDOWN_LEVEL:
        log.info("n_g(f_c=%.3f) = %.3f is not below %.2f", f_c, curve.n_g[idx], BREAKDOWN_LEVEL)
    return f_c
