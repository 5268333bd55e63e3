"""Undirected simple graph in compressed sparse row form, plus edge-list I/O.

Edge-list format::

    # <model> <n> <seed>
    # pos <i> <x> <y>        (optional, one per node)
    <u> <v>                  (0-based, u < v, one per edge, sorted)
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp


@dataclass(eq=False)
class Graph:
    """Adjacency of an undirected simple graph on nodes ``0..n-1``.

    ``indices[indptr[i]:indptr[i+1]]`` are the sorted neighbours of ``i``.
    ``positions`` is an ``(n, 2)`` array in km for geometric models, else None.
    """

    n: int
    indptr: np.ndarray
    indices: np.ndarray
    positions: np.ndarray | None = None
    model: str = "graph"
    seed: int = 0

    @classmethod
    def from_edges(cls, n, u, v, positions=None, model="graph", seed=0):
        u = np.asarray(u, dtype=np.int64).ravel()
        v = np.asarray(v, dtype=np.int64).ravel()
        if u.shape != v.shape:
            raise ValueError("edge endpoint arrays differ in length")
        if u.size:
            if np.any(u == v):
                raise ValueError("self-loops are not allowed")
            if min(u.min(), v.min()) < 0 or max(u.max(), v.max()) >= n:
                raise ValueError("edge endpoint out of range")
        lo, hi = np.minimum(u, v), np.maximum(u, v)
        key = np.unique(lo * n + hi)
        lo, hi = key // n, key % n
        src = np.concatenate([lo, hi])
        dst = np.concatenate([hi, lo])
        order = np.lexsort((dst, src))
        src, dst = src[order], dst[order]
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(np.bincount(src, minlength=n), out=indptr[1:])
        if positions is not None:
            positions = np.asarray(positions, dtype=float).reshape(n, 2)
        return cls(n, indptr, dst.astype(np.int64), positions, model, seed)

    @classmethod
    def empty(cls, n, **kw):
        return cls.from_edges(n, [], [], **kw)

    @property
    def n_edges(self):
        return len(self.indices) // 2

    def degrees(self):
        return np.diff(self.indptr)

    def neighbors(self, i):
        return self.indices[self.indptr[i]:self.indptr[i + 1]]

    def edges(self):
        """``(m, 2)`` array of edges with ``u < v``, lexicographically sorted."""
        src = np.repeat(np.arange(self.n, dtype=np.int64), self.degrees())
        keep = src < self.indices
        return np.column_stack([src[keep], self.indices[keep]])

    def adjacency_lists(self):
        return [self.indices[self.indptr[i]:self.indptr[i + 1]].tolist() for i in range(self.n)]

    def to_sparse(self):
        data = np.ones(len(self.indices), dtype=np.int8)
        return sp.csr_matrix((data, self.indices, self.indptr), shape=(self.n, self.n))

    def subgraph_mask(self, active):
        """Graph on the same node set with every edge touching an inactive node dropped."""
        active = np.asarray(active, dtype=bool)
        e = self.edges()
        keep = active[e[:, 0]] & active[e[:, 1]]
        return self.without_edges(~keep)

    def without_edges(self, drop):
        """Copy with the edges flagged in the boolean mask ``drop`` (indexed like :meth:`edges`) removed."""
        e = self.edges()[~np.asarray(drop, dtype=bool)]
        return Graph.from_edges(self.n, e[:, 0], e[:, 1], self.positions, self.model, self.seed)

    def same_as(self, other):
        return (self.n == other.n and np.array_equal(self.indptr, other.indptr)
                and np.array_equal(self.indices, other.indices))


def write_edgelist(g, fh, with_positions=True):
    fh.write(f"# {g.model} {g.n} {g.seed}\n")
    if with_positions and g.positions is not None:
        for i, (x, y) in enumerate(g.positions.tolist()):
            fh.write(f"# pos {i} {x!r} {y!r}\n")
    for u, v in g.edges():
        fh.write(f"{u} {v}\n")


def read_edgelist(fh):
    """Parse the edge-list format written by :func:`write_edgelist`."""
    header = None
    pos = {}
    us, vs = [], []
    for lineno, line in enumerate(fh, 1):
        line = line.strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "#":
            if header is None:
                if len(parts) != 4:
                    raise ValueError(f"line {lineno}: header must read '# model n seed'")
                header = (parts[1], int(parts[2]), int(parts[3]))
            elif len(parts) == 5 and parts[1] == "pos":
                pos[int(parts[2])] = (float(parts[3]), float(parts[4]))
            continue
        if header is None:
            raise ValueError(f"line {lineno}: edge before header")
        if len(parts) != 2:
            raise ValueError(f"line {lineno}: expected 'u v'")
        us.append(int(parts[0]))
        vs.append(int(parts[1]))
    if header is None:
        raise ValueError("missing header line")
    model, n, seed = header
    positions = None
    if pos:
        if sorted(pos) != list(range(n)):
            raise ValueError("position lines must cover every node exactly once")
        positions = np.array([pos[i] for i in range(n)])
    return Graph.from_edges(n, us, vs, positions, model, seed)
