"""Reference measures for overlapping clusterings.

Omega index (Collins & Dent, 1988)
    For every unordered object pair count the clusters containing both
    objects.  ``t_j(C)`` is the number of pairs sharing exactly ``j``
    clusters of ``C``.  With ``N = n(n-1)/2``::

        observed = (1/N)   * #pairs sharing the same number of clusters in both
        expected = (1/N^2) * sum_j t_j(a) * t_j(b)
        omega    = (observed - expected) / (1 - expected)

    On partitions this equals the adjusted Rand index.  When
    ``expected == 1`` the index is 1 if ``observed == 1`` and 0 otherwise.

Overlapping NMI (Lancichinetti, Fortunato & Kertesz 2009; McDaid, Greene &
Hurley 2011)
    Each cluster is a binary variable over the objects.  For clusters
    ``X_k`` and ``Y_l`` the joint counts are ``a`` (in neither), ``b`` (only
    ``Y_l``), ``c`` (only ``X_k``) and ``d`` (both).  ``Y_l`` may explain
    ``X_k`` only if ``h(a) + h(d) >= h(b) + h(c)`` with ``h(p) = -p log2 p``;
    then ``H(X_k | Y_l) = H(X_k, Y_l) - H(Y_l)``.  ``H(X_k | Y)`` is the
    minimum over admissible ``l`` and falls back to ``H(X_k)``.

    LFK:  ``1 - (<H(X_k|Y)/H(X_k)>_k + <H(Y_l|X)/H(Y_l)>_l) / 2``
    MGH:  ``I(X:Y) / max(H(X), H(Y))`` with
          ``I = (H(X) - sum_k H(X_k|Y) + H(Y) - sum_l H(Y_l|X)) / 2``.

    A cluster covering the whole universe has zero entropy; its normalized
    conditional entropy is taken as 0 in LFK, and MGH is 1 when both total
    entropies vanish.

Neither family has a notion of outliers: an uncovered object simply shares
zero clusters with everyone and sits outside every binary variable.
"""

from __future__ import annotations

import math
from enum import Enum

import numpy as np

from .errors import ClusteringError, EmptyClustering
from .model import Clustering, check_same_universe
from .similarity import intersection_table

__all__ = ["OnmiVariant", "pair_coverage_histogram", "omega_index", "onmi", "onmi_lfk", "onmi_mgh"]


class OnmiVariant(str, Enum):
    LFK = "lfk"
    MGH = "mgh"


def _cooccurrence(c: Clustering):
    """Upper-triangle pair keys (``u * n + v``, u < v) with their shared
    cluster counts, for pairs sharing at least one cluster."""
    n = c.n
    chunks = []
    for members in c:
        if len(members) < 2:
            continue
        u, v = np.triu_indices(len(members), k=1)
        chunks.append(members[u] * n + members[v])
    if not chunks:
        empty = np.zeros(0, dtype=np.int64)
        return empty, empty
    keys, counts = np.unique(np.concatenate(chunks), return_counts=True)
    return keys, counts


def pair_coverage_histogram(c: Clustering) -> np.ndarray:
    """``t[j]`` = number of object pairs that share exactly ``j`` clusters."""
    _, counts = _cooccurrence(c)
    total = c.n * (c.n - 1) // 2
    hist = np.bincount(counts, minlength=1).astype(np.int64)
    hist[0] = total - len(counts)
    return hist


def omega_index(a: Clustering, b: Clustering) -> float:
    check_same_universe(a, b)
    if a.n < 2:
        raise ClusteringError("Omega index needs at least two objects")
    n_pairs = a.n * (a.n - 1) // 2
    keys_a, cnt_a = _cooccurrence(a)
    keys_b, cnt_b = _cooccurrence(b)
    _, ia, ib = np.intersect1d(keys_a, keys_b, assume_unique=True, return_indices=True)
    agree_shared = int(np.count_nonzero(cnt_a[ia] == cnt_b[ib]))
    both_zero = n_pairs - (len(keys_a) + len(keys_b) - len(ia))
    agree = agree_shared + both_zero

    ta = pair_coverage_histogram(a)
    tb = pair_coverage_histogram(b)
    depth = min(len(ta), len(tb))
    # integer products, exact up to the final divisions
    expected_num = int(sum(int(x) * int(y) for x, y in zip(ta[:depth], tb[:depth])))
    if expected_num == n_pairs * n_pairs:
        return 1.0 if agree == n_pairs else 0.0
    observed = agree / n_pairs
    expected = expected_num / (n_pairs * n_pairs)
    return (observed - expected) / (1.0 - expected)


def _h(p: np.ndarray) -> np.ndarray:
    p = np.asarray(p, dtype=np.float64)
    out = np.zeros_like(p)
    pos = p > 0
    out[pos] = -p[pos] * np.log2(p[pos])
    return out


def _binary_entropy(sizes: np.ndarray, n: int) -> np.ndarray:
    return _h(sizes / n) + _h((n - sizes) / n)


def _conditional(x_sizes, y_sizes, inter, n):
    """``H(X_k | Y)`` for every cluster of X under the admissibility rule."""
    sx = x_sizes[:, None].astype(np.float64)
    sy = y_sizes[None, :].astype(np.float64)
    d = inter.astype(np.float64)
    c = sx - d
    b = sy - d
    a = n - sx - sy + d
    ha, hb, hc, hd = _h(a / n), _h(b / n), _h(c / n), _h(d / n)
    joint = ha + hb + hc + hd
    hy = _binary_entropy(y_sizes, n)[None, :]
    cond = np.maximum(joint - hy, 0.0)
    admissible = ha + hd >= hb + hc
    hx = _binary_entropy(x_sizes, n)
    cond = np.where(admissible, cond, hx[:, None])
    return np.minimum(cond.min(axis=1), hx), hx


def _onmi_parts(a: Clustering, b: Clustering):
    check_same_universe(a, b)
    if len(a) == 0 or len(b) == 0:
        raise EmptyClustering("overlapping NMI needs two non-empty clusterings")
    rows, cols, counts = intersection_table(a, b)
    inter = np.zeros((len(a), len(b)), dtype=np.int64)
    inter[rows, cols] = counts
    n = a.n
    h_a_given_b, h_a = _conditional(a.sizes, b.sizes, inter, n)
    h_b_given_a, h_b = _conditional(b.sizes, a.sizes, inter.T, n)
    return h_a_given_b, h_a, h_b_given_a, h_b


def _normalized_mean(cond: np.ndarray, h: np.ndarray) -> float:
    ratio = np.divide(cond, h, out=np.zeros_like(cond), where=h > 0)
    return math.fsum(ratio.tolist()) / len(ratio)


def onmi_lfk(a: Clustering, b: Clustering) -> float:
    ha_b, ha, hb_a, hb = _onmi_parts(a, b)
    return 1.0 - 0.5 * (_normalized_mean(ha_b, ha) + _normalized_mean(hb_a, hb))


def onmi_mgh(a: Clustering, b: Clustering) -> float:
    ha_b, ha, hb_a, hb = _onmi_parts(a, b)
    hx = math.fsum(ha.tolist())
    hy = math.fsum(hb.tolist())
    denom = max(hx, hy)
    if denom == 0.0:
        return 1.0
    mutual = 0.5 * ((hx - math.fsum(ha_b.tolist())) + (hy - math.fsum(hb_a.tolist())))
    return min(max(mutual / denom, 0.0), 1.0)


def onmi(a: Clustering, b: Clustering, variant: OnmiVariant | str = OnmiVariant.LFK) -> float:
    variant = OnmiVariant(variant)
    if variant is OnmiVariant.LFK:
        return onmi_lfk(a, b)
    return onmi_mgh(a, b)
