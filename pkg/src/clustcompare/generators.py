"""Synthetic clustering pairs for bias audits.

Scenarios 1-3 are partitions of 1024 objects:

* ``shuffle``: a fixed 32 x 32 partition against a copy in which a random
  fraction of the objects draw a fresh uniform label among the 32 clusters.
* ``skew``: the fixed partition against a random equal partition that is
  evolved by preferential reassignments, making sizes heterogeneous.
* ``kclusters``: 8 clusters of 128 against a random equal partition into k.

Scenarios 4 and 5 use a geometric layer: objects are uniform points in the
unit disk, a base partition is grown greedily from the outermost unassigned
point, and each part is then grown (``eta > 1``, overlaps) or shrunk
(``eta < 1``, outliers) around its fixed centroid.

Randomness comes from :class:`numpy.random.Generator` over ``PCG64``; pass a
generator, or an integer seed via :func:`make_rng`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import BadEta, BadK, BadSizes
from .model import Clustering

N_OBJECTS = 1024
N_PARTS = 32

__all__ = [
    "N_OBJECTS",
    "GeometricLayer",
    "make_rng",
    "equal_partition",
    "random_equal_partition",
    "scenario_shuffle",
    "scenario_skew",
    "scenario_kclusters",
    "build_layer",
    "geometric_clustering",
    "round_half_up",
]


def make_rng(seed: int | np.random.Generator) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.Generator(np.random.PCG64(int(seed)))


def equal_partition(n: int, k: int) -> np.ndarray:
    """Labels of the contiguous partition of ``range(n)`` into ``k`` blocks."""
    return np.arange(n) // (n // k)


def random_equal_partition(n: int, k: int, rng: np.random.Generator) -> np.ndarray:
    labels = np.empty(n, dtype=np.int64)
    labels[rng.permutation(n)] = equal_partition(n, k)
    return labels


def scenario_shuffle(fraction: float, rng, n: int = N_OBJECTS, k: int = N_PARTS):
    if not 0.0 <= fraction <= 1.0:
        raise ValueError(f"fraction must lie in [0, 1], got {fraction}")
    rng = make_rng(rng)
    base = equal_partition(n, k)
    moved = base.copy()
    chosen = rng.choice(n, size=math.floor(fraction * n), replace=False)
    moved[chosen] = rng.integers(0, k, size=len(chosen))
    return Clustering.from_labels(base), Clustering.from_labels(moved)


def scenario_skew(steps: int, rng, n: int = N_OBJECTS, k: int = N_PARTS):
    """Each step moves a uniform random object to a cluster drawn with
    probability proportional to its size (sampled as the cluster of a uniform
    random object).  Emptied clusters disappear."""
    if steps < 0:
        raise ValueError("steps must be non-negative")
    rng = make_rng(rng)
    labels = random_equal_partition(n, k, rng)
    movers = rng.integers(0, n, size=steps).tolist()
    targets = rng.integers(0, n, size=steps).tolist()
    lab = labels.tolist()
    for x, y in zip(movers, targets):
        lab[x] = lab[y]
    return Clustering.from_labels(equal_partition(n, k)), Clustering.from_labels(lab)


def scenario_kclusters(k: int, rng, n: int = N_OBJECTS, reference_k: int = 8):
    if k < 1 or n % k:
        raise BadK(f"k={k} does not divide {n}")
    rng = make_rng(rng)
    return (
        Clustering.from_labels(equal_partition(n, reference_k)),
        Clustering.from_labels(random_equal_partition(n, k, rng)),
    )


@dataclass(frozen=True)
class GeometricLayer:
    points: np.ndarray  # (n, 2) coordinates in the unit disk
    sizes: tuple[int, ...]
    parts: tuple[np.ndarray, ...]  # sorted member ids of each base part

    @property
    def n(self) -> int:
        return len(self.points)


def _nearest(points: np.ndarray, candidates: np.ndarray, centre: np.ndarray, count: int) -> np.ndarray:
    """The ``count`` candidates closest to ``centre``; ties go to lower ids."""
    d = np.sum((points[candidates] - centre) ** 2, axis=1)
    order = np.lexsort((candidates, d))
    return candidates[order[:count]]


def build_layer(sizes: Sequence[int], rng, n: int | None = None) -> GeometricLayer:
    sizes = tuple(int(s) for s in sizes)
    if not sizes or any(s < 1 for s in sizes):
        raise BadSizes("part sizes must be positive")
    total = sum(sizes)
    if n is not None and n != total:
        raise BadSizes(f"part sizes sum to {total}, expected {n}")
    rng = make_rng(rng)
    radius = np.sqrt(rng.random(total))
    theta = 2.0 * np.pi * rng.random(total)
    points = np.column_stack((radius * np.cos(theta), radius * np.sin(theta)))

    norm2 = np.sum(points**2, axis=1)
    free = np.ones(total, dtype=bool)
    parts = []
    for size in sizes:
        cand = np.flatnonzero(free)
        # outermost unassigned point seeds the part; ties go to lower ids
        seed = cand[np.lexsort((cand, -norm2[cand]))[0]]
        members = _nearest(points, cand, points[seed], size)
        members = np.sort(members)
        free[members] = False
        parts.append(members)
    points.setflags(write=False)
    return GeometricLayer(points, sizes, tuple(parts))


def round_half_up(x: float) -> int:
    return math.floor(x + 0.5)


def geometric_clustering(layer: GeometricLayer, eta: float) -> Clustering:
    """Grow or shrink every base part around its centroid to ``p_i * eta``.

    Growth may take any object, so clusters overlap; shrinking keeps only
    base members, leaving outliers.  Identical clusters produced by extreme
    growth are merged into one.
    """
    if not eta > 0:
        raise BadEta(f"eta must be positive, got {eta}")
    n = layer.n
    everyone = np.arange(n)
    clusters = []
    seen = set()
    for part, size in zip(layer.parts, layer.sizes):
        target = round_half_up(size * eta)
        if target < 1 or target > n:
            raise BadEta(f"eta={eta} gives a cluster of size {target} (universe {n})")
        centre = layer.points[part].mean(axis=0)
        if target >= size:
            outside = np.setdiff1d(everyone, part, assume_unique=True)
            extra = _nearest(layer.points, outside, centre, target - size)
            members = np.sort(np.concatenate((part, extra)))
        else:
            members = np.sort(_nearest(layer.points, part, centre, target))
        key = members.tobytes()
        if key not in seen:
            seen.add(key)
            clusters.append(members)
    return Clustering.from_pairs(
        np.concatenate(clusters),
        np.repeat(np.arange(len(clusters)), [len(c) for c in clusters]),
        n,
    )
