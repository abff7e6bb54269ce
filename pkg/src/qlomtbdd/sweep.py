"""Query-count sweeps over generated targets."""

from __future__ import annotations

import csv
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from statistics import mean
from typing import IO, Sequence

from .core import equivalent
from .generator import GenParams, generate
from .learner import QLearner, query_bounds
from .oracles import oracles_from_target

AXES = {"n": "n", "nodes": "n", "m": "m", "vars": "m", "k": "k", "leaves": "k"}
COLUMNS = ["axis_value", "trial", "seed", "n", "m", "k", "mq", "eq", "mq_bound", "eq_bound", "wall_ms"]


@dataclass(frozen=True)
class SweepSpec:
    axis: str
    grid: tuple[int, ...]
    n: int = 100
    m: int = 512
    k: int = 8
    trials: int = 10
    seed: int = 0
    timing: bool = False

    def __post_init__(self):
        if self.axis.lower() not in AXES:
            raise ValueError(f"unknown axis {self.axis!r}; use one of n, m, k")
        object.__setattr__(self, "axis", AXES[self.axis.lower()])
        object.__setattr__(self, "grid", tuple(self.grid))
        if not self.grid:
            raise ValueError("grid must not be empty")
        if self.trials < 1:
            raise ValueError("trials must be at least 1")

    def cells(self) -> list[tuple[int, int, int, int]]:
        """``(axis value, n, m, k)`` per grid point."""
        out = []
        for value in self.grid:
            params = {"n": self.n, "m": self.m, "k": self.k, self.axis: value}
            out.append((value, params["n"], params["m"], params["k"]))
        return out

    def jobs(self) -> list[tuple]:
        return [(value, t, trial_seed(self.seed, value, t), n, m, k, self.timing)
                for value, n, m, k in self.cells() for t in range(self.trials)]


def trial_seed(base: int, axis_value: int, trial: int) -> int:
    return (base * 1_000_003 + axis_value * 10_007 + trial) % (1 << 63)


def run_trial(job: tuple) -> dict:
    value, trial, seed, n, m, k, timing = job
    target = generate(GenParams(n, m, k, seed))
    mq, eq = oracles_from_target(target)
    start = time.perf_counter()
    learner = QLearner(m, mq, eq, k_hint=k)
    result = learner.run()
    wall = (time.perf_counter() - start) * 1000.0
    if not equivalent(result, target).equal:
        raise AssertionError(f"learned diagram differs from the target (seed {seed})")
    mq_bound, eq_bound = query_bounds(len(target), m)
    return {
        "axis_value": value, "trial": trial, "seed": seed, "n": len(target), "m": m, "k": k,
        "mq": learner.mq_count, "eq": learner.eq_count, "mq_bound": mq_bound, "eq_bound": eq_bound,
        "wall_ms": round(wall, 3) if timing else 0,
        "within_bounds": learner.mq_count <= mq_bound and learner.eq_count <= eq_bound,
    }


def default_jobs() -> int:
    try:
        return max(1, int(os.environ.get("QLOMTBDD_JOBS", "1")))
    except ValueError:
        return 1


def run_sweep(spec: SweepSpec, jobs: int | None = None) -> list[dict]:
    """One row per (grid value, trial), in grid order whatever the completion order."""
    work = spec.jobs()
    jobs = default_jobs() if jobs is None else jobs
    if jobs <= 1:
        return [run_trial(j) for j in work]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(run_trial, work))


def write_csv(rows: Sequence[dict], out: IO[str]) -> None:
    w = csv.DictWriter(out, fieldnames=COLUMNS, extrasaction="ignore", lineterminator="\n")
    w.writeheader()
    w.writerows(rows)


def cell_means(rows: Sequence[dict]) -> list[tuple[int, float, float]]:
    """``(axis value, mean mq, mean eq)`` in first-seen order."""
    groups: dict[int, list[dict]] = {}
    for r in rows:
        groups.setdefault(r["axis_value"], []).append(r)
    return [(v, mean(r["mq"] for r in g), mean(r["eq"] for r in g)) for v, g in groups.items()]
