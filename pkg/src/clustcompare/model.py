"""Clusterings over a dense integer universe.

A clustering is a collection of distinct, non-empty subsets of the objects
``0..n-1``.  Clusters may overlap and need not cover the universe; objects in
no cluster are the outliers of that clustering.

Storage is compressed-row: ``indptr`` (length ``k + 1``) and ``indices``
(member ids, ascending inside every cluster).  Both arrays are read-only, so a
:class:`Clustering` can be shared freely between threads or processes.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    DuplicateCluster,
    DuplicateIdInCluster,
    EmptyCluster,
    OutOfRangeId,
    UniverseMismatch,
)

__all__ = [
    "Clustering",
    "MembershipIndex",
    "validate",
    "outliers",
    "build_index",
    "check_same_universe",
]

_ID = np.int64


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr = np.ascontiguousarray(arr, dtype=_ID)
    arr.setflags(write=False)
    return arr


class Clustering:
    """Validated, immutable clustering.  Build with :func:`validate` or the
    ``from_*`` constructors; the raw ``__init__`` trusts its arguments."""

    __slots__ = ("n", "indptr", "indices")

    def __init__(self, n: int, indptr: np.ndarray, indices: np.ndarray):
        self.n = int(n)
        self.indptr = _frozen(indptr)
        self.indices = _frozen(indices)

    # -- constructors -----------------------------------------------------

    @classmethod
    def from_sets(cls, clusters: Iterable[Iterable[int]], n: int) -> "Clustering":
        return validate(clusters, n)

    @classmethod
    def from_labels(cls, labels: Sequence[int] | np.ndarray, n: int | None = None) -> "Clustering":
        """Partition-style input: ``labels[x]`` is the cluster of object ``x``;
        negative labels mark outliers.  Clusters are ordered by label value and
        labels without members are skipped."""
        labels = np.asarray(labels, dtype=_ID)
        if n is None:
            n = len(labels)
        if len(labels) != n:
            raise UniverseMismatch(f"{len(labels)} labels for a universe of {n}")
        objs = np.flatnonzero(labels >= 0)
        return cls.from_pairs(objs, labels[objs], n)

    @classmethod
    def from_pairs(cls, objects: np.ndarray, cluster_ids: np.ndarray, n: int) -> "Clustering":
        """Build from (object, cluster label) membership pairs.

        Cluster order follows ascending label.  Labels need not be dense.
        Full validation is applied.
        """
        objects = np.asarray(objects, dtype=_ID)
        cluster_ids = np.asarray(cluster_ids, dtype=_ID)
        if objects.shape != cluster_ids.shape:
            raise ValueError("objects and cluster_ids must have the same shape")
        _, dense = np.unique(cluster_ids, return_inverse=True)
        dense = dense.reshape(-1)
        k = int(dense.max()) + 1 if len(dense) else 0
        return _from_dense_pairs(objects, dense, k, n)

    # -- accessors --------------------------------------------------------

    def __len__(self) -> int:
        return len(self.indptr) - 1

    @property
    def sizes(self) -> np.ndarray:
        return np.diff(self.indptr)

    @property
    def total_membership(self) -> int:
        return int(len(self.indices))

    def cluster(self, i: int) -> np.ndarray:
        return self.indices[self.indptr[i]:self.indptr[i + 1]]

    def __iter__(self):
        for i in range(len(self)):
            yield self.cluster(i)

    def to_sets(self) -> list[frozenset[int]]:
        return [frozenset(c.tolist()) for c in self]

    def covered(self) -> np.ndarray:
        """Boolean mask of objects that belong to at least one cluster."""
        mask = np.zeros(self.n, dtype=bool)
        mask[self.indices] = True
        return mask

    def outliers(self) -> np.ndarray:
        return np.flatnonzero(~self.covered())

    def cluster_labels(self) -> np.ndarray:
        """Cluster index for every entry of ``indices``."""
        return np.repeat(np.arange(len(self), dtype=_ID), self.sizes)

    def key(self) -> frozenset[bytes]:
        """Order-free identity of the clustering as a set of sets."""
        return frozenset(c.tobytes() for c in self)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Clustering):
            return NotImplemented
        return (
            self.n == other.n
            and len(self) == len(other)
            and self.total_membership == other.total_membership
            and self.key() == other.key()
        )

    def __hash__(self) -> int:
        return hash((self.n, self.key()))

    def __repr__(self) -> str:
        return f"Clustering(n={self.n}, clusters={len(self)}, memberships={self.total_membership})"


@dataclass(frozen=True)
class MembershipIndex:
    """Inverted index: the clusters containing each object.

    ``clusters[indptr[x]:indptr[x+1]]`` lists, in ascending order, the indices
    of the clusters that contain object ``x``.
    """

    indptr: np.ndarray
    clusters: np.ndarray

    @property
    def n(self) -> int:
        return len(self.indptr) - 1

    @property
    def degrees(self) -> np.ndarray:
        return np.diff(self.indptr)

    @property
    def total_membership(self) -> int:
        return int(len(self.clusters))

    def clusters_of(self, x: int) -> np.ndarray:
        return self.clusters[self.indptr[x]:self.indptr[x + 1]]


def _from_dense_pairs(objects: np.ndarray, labels: np.ndarray, k: int, n: int) -> Clustering:
    """Shared validation path: pairs with dense cluster labels ``0..k-1``."""
    if n < 0:
        raise ValueError(f"universe size must be non-negative, got {n}")
    sizes = np.bincount(labels, minlength=k) if len(labels) else np.zeros(k, dtype=_ID)
    empty = np.flatnonzero(sizes == 0)
    if len(empty):
        i = int(empty[0])
        raise EmptyCluster(f"cluster {i} is empty", index=i)

    bad = (objects < 0) | (objects >= n)
    if bad.any():
        pos = np.flatnonzero(bad)
        i = int(labels[pos].min())
        x = int(objects[pos[labels[pos] == i][0]])
        raise OutOfRangeId(f"object id {x} in cluster {i} is outside [0, {n})", index=i)

    order = np.lexsort((objects, labels))
    objects = objects[order]
    labels = labels[order]
    dup = (objects[1:] == objects[:-1]) & (labels[1:] == labels[:-1])
    if dup.any():
        pos = np.flatnonzero(dup)
        i = int(labels[pos].min())
        x = int(objects[pos[labels[pos] == i][0]])
        raise DuplicateIdInCluster(f"object id {x} listed twice in cluster {i}", index=i)

    indptr = np.zeros(k + 1, dtype=_ID)
    np.cumsum(sizes, out=indptr[1:])
    seen: dict[bytes, int] = {}
    for i in range(k):
        b = objects[indptr[i]:indptr[i + 1]].tobytes()
        first = seen.setdefault(b, i)
        if first != i:
            raise DuplicateCluster(f"cluster {i} repeats cluster {first}", index=i)
    return Clustering(n, indptr, objects)


def validate(raw: Iterable[Iterable[int]], n: int) -> Clustering:
    """Check raw clusters against the clustering invariants and freeze them.

    Raises the specific :class:`~clustcompare.errors.ClusteringError`
    subclass for the first (lowest-index) offending cluster.  Duplicate
    clusters are rejected, never merged.
    """
    parts = [np.fromiter(c, dtype=_ID) if not isinstance(c, np.ndarray) else c.astype(_ID)
             for c in raw]
    k = len(parts)
    if k == 0:
        return Clustering(n, np.zeros(1, dtype=_ID), np.zeros(0, dtype=_ID))
    objects = np.concatenate(parts)
    labels = np.repeat(np.arange(k, dtype=_ID), [len(p) for p in parts])
    return _from_dense_pairs(objects, labels, k, n)


def outliers(c: Clustering) -> frozenset[int]:
    return frozenset(c.outliers().tolist())


def build_index(c: Clustering) -> MembershipIndex:
    labels = c.cluster_labels()
    order = np.argsort(c.indices, kind="stable")
    deg = np.bincount(c.indices, minlength=c.n) if c.n else np.zeros(0, dtype=_ID)
    indptr = np.zeros(c.n + 1, dtype=_ID)
    np.cumsum(deg, out=indptr[1:])
    return MembershipIndex(_frozen(indptr), _frozen(labels[order]))


def check_same_universe(a: Clustering, b: Clustering) -> None:
    if a.n != b.n:
        raise UniverseMismatch(f"universe sizes differ: {a.n} vs {b.n}")
