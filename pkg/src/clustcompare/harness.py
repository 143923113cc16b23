"""Seeded scenario sweeps with CSV output.

Each repetition gets its own generator seeded from
``SeedSequence(master_seed, spawn_key=keys)``: ``keys = (grid_index, rep)``
for the partition scenarios and ``keys = (rep,)`` for the geometric ones,
where a single layer per repetition is shared by the whole eta grid.  The
derived 64-bit seed is written next to every row, so any single row can be
regenerated on its own.

Raw CSV columns: ``scenario,param,rep,seed,measure,value``.
Aggregate CSV columns: ``scenario,param,measure,mean,std,reps`` (sample
standard deviation).
"""

from __future__ import annotations

import csv
import io
import math
import statistics
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from . import baselines, generators, similarity
from .errors import BadEta, BadK, ClusteringError

__all__ = [
    "MEASURES",
    "SCENARIOS",
    "ScenarioResult",
    "default_grid",
    "derive_seed",
    "run_experiment",
    "fmt",
]

MEASURES: dict[str, Callable] = {
    "fstar_wo": similarity.fstar_wo,
    "fstar_w": similarity.fstar_w,
    "fstar_wo_asym": similarity.fstar_wo_asym,
    "fstar_w_asym": similarity.fstar_w_asym,
    "omega": baselines.omega_index,
    "onmi_lfk": baselines.onmi_lfk,
    "onmi_mgh": baselines.onmi_mgh,
}

SCENARIOS = ("shuffle", "skew", "kclusters", "overlap", "outliers")
GEOMETRIC = {"overlap": 3.0, "outliers": 0.5}
RAW_HEADER = ("scenario", "param", "rep", "seed", "measure", "value")
AGG_HEADER = ("scenario", "param", "measure", "mean", "std", "reps")


def fmt(v) -> str:
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return format(float(v), ".12g")


def default_grid(scenario: str, n: int = generators.N_OBJECTS) -> list:
    if scenario == "shuffle":
        return [i / 10 for i in range(11)]
    if scenario == "skew":
        return [0, n // 4, n // 2, n, 2 * n, 4 * n, 6 * n, 8 * n, 10 * n]
    if scenario == "kclusters":
        return [2**i for i in range(11)]
    if scenario == "overlap":
        return [1 + i / 2 for i in range(9)]
    if scenario == "outliers":
        return [i / 10 for i in range(1, 11)]
    raise ValueError(f"unknown scenario {scenario!r}")


def derive_seed(master: int, *keys: int) -> int:
    ss = np.random.SeedSequence(int(master), spawn_key=tuple(int(k) for k in keys))
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def _check_grid(scenario: str, grid: Sequence) -> list:
    out = []
    for p in grid:
        if scenario == "shuffle":
            p = float(p)
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"shuffle fraction {p} outside [0, 1]")
        elif scenario in ("skew", "kclusters"):
            if float(p) != int(float(p)):
                raise ValueError(f"{scenario} parameter must be an integer, got {p}")
            p = int(float(p))
            if scenario == "kclusters" and (p < 1 or generators.N_OBJECTS % p):
                raise BadK(f"k={p} does not divide {generators.N_OBJECTS}")
            if scenario == "skew" and p < 0:
                raise ValueError("skew steps must be non-negative")
        else:
            p = float(p)
            if p <= 0:
                raise BadEta(f"eta must be positive, got {p}")
        out.append(p)
    return out


def _score(measures: Sequence[str], a, b) -> list[float]:
    vals = []
    for m in measures:
        try:
            vals.append(float(MEASURES[m](a, b)))
        except ClusteringError:
            vals.append(math.nan)
    return vals


@dataclass(frozen=True)
class _Task:
    scenario: str
    grid: tuple
    grid_index: int | None  # None: all grid points share one layer
    rep: int
    master: int
    measures: tuple[str, ...]
    sizes: tuple[int, ...]
    ref_eta: float


def _pair(scenario: str, param, rng):
    if scenario == "shuffle":
        return generators.scenario_shuffle(param, rng)
    if scenario == "skew":
        return generators.scenario_skew(param, rng)
    return generators.scenario_kclusters(param, rng)


def _run_task(t: _Task) -> list[tuple]:
    if t.grid_index is not None:
        seed = derive_seed(t.master, t.grid_index, t.rep)
        param = t.grid[t.grid_index]
        a, b = _pair(t.scenario, param, generators.make_rng(seed))
        vals = _score(t.measures, a, b)
        return [(t.grid_index, t.rep, seed, m, v) for m, v in zip(t.measures, vals)]
    seed = derive_seed(t.master, t.rep)
    layer = generators.build_layer(t.sizes, generators.make_rng(seed))
    ref = generators.geometric_clustering(layer, t.ref_eta)
    rows = []
    for gi, eta in enumerate(t.grid):
        vals = _score(t.measures, ref, generators.geometric_clustering(layer, eta))
        rows.extend((gi, t.rep, seed, m, v) for m, v in zip(t.measures, vals))
    return rows


@dataclass
class ScenarioResult:
    scenario: str
    grid: list
    reps: int
    measures: tuple[str, ...]
    rows: list[tuple] = field(default_factory=list)  # (grid_index, rep, seed, measure, value)

    def values(self, measure: str, grid_index: int) -> list[float]:
        return [r[4] for r in self.rows if r[0] == grid_index and r[3] == measure]

    def means(self, measure: str = "fstar_wo") -> list[float]:
        return [statistics.fmean(self.values(measure, i)) for i in range(len(self.grid))]

    def stds(self, measure: str = "fstar_wo") -> list[float]:
        out = []
        for i in range(len(self.grid)):
            v = self.values(measure, i)
            out.append(statistics.stdev(v) if len(v) > 1 else math.nan)
        return out

    def raw_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(RAW_HEADER)
        for gi, rep, seed, m, v in self.rows:
            w.writerow((self.scenario, fmt(self.grid[gi]), rep, seed, m, fmt(v)))
        return buf.getvalue()

    def aggregate_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(AGG_HEADER)
        for gi, param in enumerate(self.grid):
            for m in self.measures:
                v = self.values(m, gi)
                mean = statistics.fmean(v) if v else math.nan
                std = statistics.stdev(v) if len(v) > 1 else math.nan
                w.writerow((self.scenario, fmt(param), m, fmt(mean), fmt(std), len(v)))
        return buf.getvalue()


def run_experiment(
    scenario: str,
    grid: Sequence | None = None,
    reps: int = 100,
    seed: int = 0,
    measures: Sequence[str] = ("fstar_wo",),
    jobs: int = 1,
    sizes: Sequence[int] | None = None,
    ref_eta: float | None = None,
) -> ScenarioResult:
    if scenario not in SCENARIOS:
        raise ValueError(f"unknown scenario {scenario!r}; choose from {', '.join(SCENARIOS)}")
    unknown = [m for m in measures if m not in MEASURES]
    if unknown:
        raise ValueError(f"unknown measures: {', '.join(unknown)}")
    grid = _check_grid(scenario, default_grid(scenario) if grid is None else grid)
    measures = tuple(measures)
    sizes = tuple(sizes) if sizes else (generators.N_OBJECTS // generators.N_PARTS,) * generators.N_PARTS
    ref = GEOMETRIC.get(scenario, 0.0) if ref_eta is None else float(ref_eta)

    if scenario in GEOMETRIC:
        n = sum(sizes)
        for eta in [*grid, ref]:
            for s in sizes:
                t = generators.round_half_up(s * eta)
                if t < 1 or t > n:
                    raise BadEta(f"eta={eta} gives a cluster of size {t} (universe {n})")
        tasks = [_Task(scenario, tuple(grid), None, r, seed, measures, sizes, ref) for r in range(reps)]
    else:
        tasks = [
            _Task(scenario, tuple(grid), gi, r, seed, measures, sizes, ref)
            for gi in range(len(grid))
            for r in range(reps)
        ]

    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            chunks = list(pool.map(_run_task, tasks, chunksize=max(1, len(tasks) // (4 * jobs))))
    else:
        chunks = [_run_task(t) for t in tasks]
    order = {m: i for i, m in enumerate(measures)}
    rows = sorted((r for c in chunks for r in c), key=lambda r: (r[0], r[1], order[r[3]]))
    return ScenarioResult(scenario, grid, reps, measures, rows)
