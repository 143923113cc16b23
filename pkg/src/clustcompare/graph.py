"""Edge clusterings induced from vertex clusterings, and back.

Edges of a simple undirected graph are numbered ``0..m-1`` in canonical order
(sorted by ``(min(u, v), max(u, v))``), so an edge clustering is an ordinary
:class:`~clustcompare.model.Clustering` over that id space and every
similarity measure applies unchanged.

Induction can produce empty or repeated sets.  Those are dropped or merged
(first occurrence kept) and counted in :class:`InductionStats`.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ClusteringError, UniverseMismatch
from .model import Clustering

__all__ = [
    "Graph",
    "InductionStats",
    "induce_edge_clustering",
    "induce_vertex_clustering",
    "edge_closure",
]


class Graph:
    """Simple undirected graph with canonically numbered edges."""

    __slots__ = ("n", "edges", "_adj_ptr", "_adj_nbr", "_adj_eid")

    def __init__(self, n: int, edges):
        edges = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
        lo = np.minimum(edges[:, 0], edges[:, 1])
        hi = np.maximum(edges[:, 0], edges[:, 1])
        if np.any(lo == hi):
            raise ClusteringError("self-loops are not allowed")
        if len(edges) and (lo.min() < 0 or hi.max() >= n):
            raise ClusteringError(f"edge endpoint outside [0, {n})")
        order = np.lexsort((hi, lo))
        lo, hi = lo[order], hi[order]
        if np.any((lo[1:] == lo[:-1]) & (hi[1:] == hi[:-1])):
            raise ClusteringError("duplicate edges are not allowed")
        self.n = int(n)
        self.edges = np.column_stack((lo, hi))
        self.edges.setflags(write=False)

        m = len(lo)
        eid = np.arange(m, dtype=np.int64)
        src = np.concatenate((lo, hi))
        dst = np.concatenate((hi, lo))
        ids = np.concatenate((eid, eid))
        adj = np.lexsort((dst, src))
        self._adj_nbr = dst[adj]
        self._adj_eid = ids[adj]
        self._adj_ptr = np.zeros(self.n + 1, dtype=np.int64)
        np.cumsum(np.bincount(src, minlength=self.n), out=self._adj_ptr[1:])

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def edge_id(self, u: int, v: int) -> int:
        lo, hi = min(u, v), max(u, v)
        nbr = self._adj_nbr[self._adj_ptr[lo]:self._adj_ptr[lo + 1]]
        k = int(np.searchsorted(nbr, hi))
        if k == len(nbr) or nbr[k] != hi:
            raise KeyError((u, v))
        return int(self._adj_eid[self._adj_ptr[lo] + k])

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.n_edges})"


@dataclass(frozen=True)
class InductionStats:
    dropped_empty: int
    collapsed_duplicates: int
    outliers: int


def _finalize(sets: list[np.ndarray], n: int):
    kept = []
    seen = set()
    dropped = collapsed = 0
    for s in sets:
        if len(s) == 0:
            dropped += 1
            continue
        key = s.tobytes()
        if key in seen:
            collapsed += 1
            continue
        seen.add(key)
        kept.append(s)
    if kept:
        c = Clustering.from_pairs(
            np.concatenate(kept), np.repeat(np.arange(len(kept)), [len(s) for s in kept]), n
        )
    else:
        c = Clustering.from_pairs(np.zeros(0, np.int64), np.zeros(0, np.int64), n)
    return c, InductionStats(dropped, collapsed, int(len(c.outliers())))


def induce_edge_clustering(g: Graph, c: Clustering, with_stats: bool = False):
    """Per vertex cluster, the edges with both endpoints inside it."""
    if c.n != g.n:
        raise UniverseMismatch(f"clustering has {c.n} objects, graph has {g.n} vertices")
    inside = np.zeros(g.n, dtype=bool)
    sets = []
    for members in c:
        inside[members] = True
        deg = g._adj_ptr[members + 1] - g._adj_ptr[members]
        pos = np.repeat(g._adj_ptr[members], deg) + (
            np.arange(int(deg.sum())) - np.repeat(np.cumsum(deg) - deg, deg)
        )
        src = np.repeat(members, deg)
        nbr = g._adj_nbr[pos]
        keep = inside[nbr] & (src < nbr)
        sets.append(np.sort(g._adj_eid[pos[keep]]))
        inside[members] = False
    out, stats = _finalize(sets, g.n_edges)
    return (out, stats) if with_stats else out


def induce_vertex_clustering(g: Graph, e: Clustering, with_stats: bool = False):
    """Per edge cluster, every endpoint of its edges."""
    if e.n != g.n_edges:
        raise UniverseMismatch(f"edge clustering has {e.n} objects, graph has {g.n_edges} edges")
    sets = [np.unique(g.edges[members].ravel()) for members in e]
    out, stats = _finalize(sets, g.n)
    return (out, stats) if with_stats else out


def edge_closure(g: Graph, e: Clustering) -> Clustering:
    return induce_edge_clustering(g, induce_vertex_clustering(g, e))
