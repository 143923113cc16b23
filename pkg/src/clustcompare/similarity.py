"""Best-match Jaccard (F*) similarity between clusterings.

Every cluster is matched to its most similar cluster on the other side, the
match scores are averaged with cluster-size weights, and the two directions
are averaged.  The outlier-aware score additionally compares the two outlier
sets and mixes that comparison in proportion to the outlier mass.

Intersection sizes are accumulated through the inverted index of the second
clustering, so only cluster pairs that share at least one object are ever
visited.  The work is proportional to ``sum_x d_a(x) * d_b(x)`` plus the
number of clusters and objects, where ``d(x)`` is the number of clusters
containing ``x``.

Weighted sums use :func:`math.fsum`, which is exactly rounded and therefore
independent of cluster order; scores are bit-identical under relabelling of
clusters or objects.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import BadIndex, EmptyInput, EmptyUniverse, OutOfRangeId
from .model import Clustering, MembershipIndex, build_index, check_same_universe

__all__ = [
    "PairScores",
    "MatchRecord",
    "MatchReport",
    "PerturbationStats",
    "pair_scores",
    "best_match",
    "fstar_w_asym",
    "fstar_w",
    "fstar_wo_asym",
    "fstar_wo",
    "match_report",
    "perturbation_stats",
    "intersection_table",
]


@dataclass(frozen=True)
class PairScores:
    precision: float
    recall: float
    f1: float
    fstar: float


def pair_scores(ci, cj) -> PairScores:
    """Precision, recall, F1 and F* (Jaccard) of two non-empty sets."""
    ci, cj = set(ci), set(cj)
    if not ci or not cj:
        raise EmptyInput("precision and recall need two non-empty sets")
    inter = len(ci & cj)
    p = inter / len(ci)
    r = inter / len(cj)
    f1 = 2 * inter / (len(ci) + len(cj))
    return PairScores(p, r, f1, inter / len(ci | cj))


def best_match(ci, other: Clustering, index: MembershipIndex | None = None):
    """Best F* of ``ci`` against ``other`` and the lowest index attaining it.

    Returns ``(0.0, None)`` when no cluster of ``other`` intersects ``ci``
    (including the empty clustering).
    """
    ci = np.unique(np.fromiter(ci, dtype=np.int64))
    if len(ci) == 0:
        raise EmptyInput("cannot match an empty cluster")
    if ci[0] < 0 or ci[-1] >= other.n:
        raise OutOfRangeId(f"cluster ids must lie in [0, {other.n})")
    if len(other) == 0:
        return 0.0, None
    if index is None:
        index = build_index(other)
    hits = np.concatenate([index.clusters_of(int(x)) for x in ci])
    if len(hits) == 0:
        return 0.0, None
    cand, inter = np.unique(hits, return_counts=True)
    size_ci = len(ci)
    jac = inter / (size_ci + other.sizes[cand] - inter)
    j = int(np.argmax(jac))
    return float(jac[j]), int(cand[j])


def intersection_table(a: Clustering, b: Clustering, b_index: MembershipIndex | None = None):
    """All intersecting cluster pairs ``(i, j, |A_i & B_j|)``, sorted by
    ``(i, j)``.  Pairs with empty intersection are omitted."""
    if b_index is None:
        b_index = build_index(b)
    obj = a.indices
    row = a.cluster_labels()
    deg = b_index.degrees[obj]
    total = int(deg.sum())
    if total == 0:
        empty = np.zeros(0, dtype=np.int64)
        return empty, empty, empty
    # expand every (i, x) membership of a into (i, j) for each cluster j of b holding x
    starts = np.repeat(b_index.indptr[obj], deg)
    offsets = np.arange(total, dtype=np.int64) - np.repeat(np.cumsum(deg) - deg, deg)
    cols = b_index.clusters[starts + offsets]
    rows = np.repeat(row, deg)
    kb = max(len(b), 1)
    keys, counts = np.unique(rows * kb + cols, return_counts=True)
    return keys // kb, keys % kb, counts.astype(np.int64)


def _best_per_row(rows: np.ndarray, cols: np.ndarray, vals: np.ndarray, k: int):
    """Row-wise maximum and its lowest column; entries must be sorted by
    ``(row, col)``.  Rows without entries get ``(0.0, -1)``."""
    best = np.zeros(k, dtype=np.float64)
    arg = np.full(k, -1, dtype=np.int64)
    if len(rows) == 0:
        return best, arg
    starts = np.flatnonzero(np.r_[True, rows[1:] != rows[:-1]])
    present = rows[starts]
    best[present] = np.maximum.reduceat(vals, starts)
    hit = vals == best[rows]
    first_rows, first_pos = np.unique(rows[hit], return_index=True)
    arg[first_rows] = cols[hit][first_pos]
    return best, arg


@dataclass(frozen=True)
class _Matches:
    """Best matches in both directions for one pair of clusterings."""

    best_ab: np.ndarray
    arg_ab: np.ndarray
    best_ba: np.ndarray
    arg_ba: np.ndarray


def _matches(a: Clustering, b: Clustering) -> _Matches:
    rows, cols, inter = intersection_table(a, b)
    jac = inter / (a.sizes[rows] + b.sizes[cols] - inter)
    best_ab, arg_ab = _best_per_row(rows, cols, jac, len(a))
    order = np.lexsort((rows, cols))
    best_ba, arg_ba = _best_per_row(cols[order], rows[order], jac[order], len(b))
    return _Matches(best_ab, arg_ab, best_ba, arg_ba)


def _weighted(sizes: np.ndarray, best: np.ndarray) -> float:
    total = int(sizes.sum())
    if total == 0:
        return 0.0
    return math.fsum((sizes * best).tolist()) / total


def _outlier_counts(a: Clustering, b: Clustering):
    ca, cb = a.covered(), b.covered()
    n_out_a = int(a.n - ca.sum())
    n_out_b = int(b.n - cb.sum())
    both = int(np.count_nonzero(~ca & ~cb))
    return n_out_a, n_out_b, both


def _outlier_jaccard(n_out_a: int, n_out_b: int, both: int) -> float | None:
    union = n_out_a + n_out_b - both
    return both / union if union else None


def _mix(n: int, n_out: int, f_out: float | None, fw: float) -> float:
    # outlier-set term has zero weight when there are no outliers on this side
    out_term = n_out * f_out if n_out else 0.0
    return (out_term + (n - n_out) * fw) / n


def fstar_w_asym(a: Clustering, b: Clustering) -> float:
    """Size-weighted mean best-match F* of the clusters of ``a`` in ``b``.
    Zero when ``a`` has no clusters."""
    check_same_universe(a, b)
    rows, cols, inter = intersection_table(a, b)
    jac = inter / (a.sizes[rows] + b.sizes[cols] - inter)
    best, _ = _best_per_row(rows, cols, jac, len(a))
    return _weighted(a.sizes, best)


def fstar_w(a: Clustering, b: Clustering) -> float:
    check_same_universe(a, b)
    m = _matches(a, b)
    return 0.5 * _weighted(a.sizes, m.best_ab) + 0.5 * _weighted(b.sizes, m.best_ba)


def _wo_pair(a: Clustering, b: Clustering) -> tuple[float, float]:
    check_same_universe(a, b)
    if a.n == 0:
        raise EmptyUniverse("outlier-aware scores need a non-empty universe")
    m = _matches(a, b)
    n_out_a, n_out_b, both = _outlier_counts(a, b)
    f_out = _outlier_jaccard(n_out_a, n_out_b, both)
    ab = _mix(a.n, n_out_a, f_out, _weighted(a.sizes, m.best_ab))
    ba = _mix(a.n, n_out_b, f_out, _weighted(b.sizes, m.best_ba))
    return ab, ba


def fstar_wo_asym(a: Clustering, b: Clustering) -> float:
    return _wo_pair(a, b)[0]


def fstar_wo(a: Clustering, b: Clustering) -> float:
    """Symmetric outlier-aware similarity in ``[0, 1]``; 1 iff ``a == b``."""
    ab, ba = _wo_pair(a, b)
    return 0.5 * ab + 0.5 * ba


@dataclass(frozen=True)
class MatchRecord:
    cluster: int
    size: int
    match: int | None
    fstar: float
    weight: float


@dataclass(frozen=True)
class MatchReport:
    """Per-cluster best matches in both directions.

    ``outlier_jaccard`` is ``None`` when neither clustering has outliers; the
    outlier term then carries no weight.
    """

    n: int
    forward: tuple[MatchRecord, ...]
    backward: tuple[MatchRecord, ...]
    n_outliers_a: int
    n_outliers_b: int
    outlier_jaccard: float | None

    def _side(self, records, n_out) -> float:
        sizes = np.array([r.size for r in records], dtype=np.int64)
        best = np.array([r.fstar for r in records], dtype=np.float64)
        return _mix(self.n, n_out, self.outlier_jaccard, _weighted(sizes, best))

    def fstar_wo(self) -> float:
        """Re-aggregate the records into the symmetric outlier-aware score."""
        ab = self._side(self.forward, self.n_outliers_a)
        ba = self._side(self.backward, self.n_outliers_b)
        return 0.5 * ab + 0.5 * ba


def _records(sizes: np.ndarray, best: np.ndarray, arg: np.ndarray) -> tuple[MatchRecord, ...]:
    total = int(sizes.sum())
    return tuple(
        MatchRecord(i, int(s), None if m < 0 else int(m), float(f), int(s) / total)
        for i, (s, f, m) in enumerate(zip(sizes.tolist(), best.tolist(), arg.tolist()))
    )


def match_report(a: Clustering, b: Clustering) -> MatchReport:
    check_same_universe(a, b)
    if a.n == 0:
        raise EmptyUniverse("outlier-aware scores need a non-empty universe")
    m = _matches(a, b)
    n_out_a, n_out_b, both = _outlier_counts(a, b)
    return MatchReport(
        n=a.n,
        forward=_records(a.sizes, m.best_ab, m.arg_ab),
        backward=_records(b.sizes, m.best_ba, m.arg_ba),
        n_outliers_a=n_out_a,
        n_outliers_b=n_out_b,
        outlier_jaccard=_outlier_jaccard(n_out_a, n_out_b, both),
    )


@dataclass(frozen=True)
class PerturbationStats:
    """Quantities governing how far one membership move can shift the score.

    ``A`` and ``B`` are total memberships of the two clusterings, ``gamma``
    counts clusters of ``b`` whose best match in ``a`` is the modified
    cluster or that contain the moved object, ``Gamma`` counts clusters of
    ``b`` containing the moved object.  ``gamma`` is ``None`` when no
    existing cluster is modified (a singleton is created or destroyed).
    """

    A: int
    B: int
    gamma: int | None
    Gamma: int


def perturbation_stats(a: Clustering, b: Clustering, x: int, cluster: int | None) -> PerturbationStats:
    """Bound inputs for moving object ``x`` into or out of ``a``'s cluster
    ``cluster``.  Match relations are read on ``a`` as given, so callers
    should pass the clustering in which the modified cluster lacks ``x``."""
    check_same_universe(a, b)
    if not 0 <= x < a.n:
        raise BadIndex(f"object {x} outside [0, {a.n})")
    if cluster is not None and not 0 <= cluster < len(a):
        raise BadIndex(f"cluster index {cluster} outside [0, {len(a)})")
    b_index = build_index(b)
    holds_x = np.zeros(len(b), dtype=bool)
    holds_x[b_index.clusters_of(x)] = True
    gamma = None
    if cluster is not None:
        m = _matches(a, b)
        matched = m.arg_ba == cluster
        gamma = int(np.count_nonzero(matched | holds_x))
    return PerturbationStats(a.total_membership, b.total_membership, gamma, int(holds_x.sum()))
