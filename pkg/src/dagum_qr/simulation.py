"""Monte Carlo coverage study of the quantile-ratio confidence interval.

Every replication draws from its own random substream keyed by
``(seed, a index, r index, replication)``, so results do not depend on how
work is split across workers.
"""

from __future__ import annotations

import io
import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from .dagum import DagumParams
from .estimation import EstimationError, Method, fit, summarize
from .ratio import (
    QUINTILES,
    DegenerateRatioError,
    QuantilePair,
    confidence_interval,
    sample_ratio,
    true_ratio,
    v_from_ratio,
)

__all__ = [
    "DEFAULT_A_GRID",
    "DEFAULT_R_GRID",
    "SimConfig",
    "Cell",
    "CoverageReport",
    "replication_rng",
    "run_replications",
    "run_cell",
    "run_study",
    "default_workers",
]

DEFAULT_A_GRID = (0.1, 0.5, 1.0, 1.5, 2.0)
DEFAULT_R_GRID = (1.2, 1.6, 2.0)
THREADS_ENV = "DAGUM_QR_THREADS"
_CHUNK = 250


@dataclass(frozen=True)
class SimConfig:
    a_grid: tuple[float, ...] = DEFAULT_A_GRID
    r_grid: tuple[float, ...] = DEFAULT_R_GRID
    n: int = 1000
    reps: int = 10000
    qp: QuantilePair = QUINTILES
    level: float = 0.95
    method: Method = Method.PWM
    seed: int = 20180101

    def __post_init__(self):
        object.__setattr__(self, "a_grid", tuple(float(a) for a in self.a_grid))
        object.__setattr__(self, "r_grid", tuple(float(r) for r in self.r_grid))
        object.__setattr__(self, "method", Method(self.method))
        if self.reps < 1:
            raise ValueError("reps must be >= 1")
        if self.n < 10:
            raise ValueError("n must be >= 10")
        if not self.a_grid or not self.r_grid:
            raise ValueError("grids must be nonempty")
        if any(a <= 0 for a in self.a_grid):
            raise ValueError("a_grid values must be positive")
        if any(r <= 1 for r in self.r_grid):
            raise ValueError("r_grid values must exceed 1")
        if not (0.0 < self.level < 1.0):
            raise ValueError("level must lie in (0, 1)")
        if self.seed < 0:
            raise ValueError("seed must be non-negative")

    def to_dict(self) -> dict:
        d = asdict(self)
        d["method"] = self.method.value
        d["qp"] = {"alpha": self.qp.alpha, "beta": self.qp.beta}
        return d


@dataclass(frozen=True)
class Cell:
    a: float
    r: float
    coverage: float
    avg_length: float
    failures: int


@dataclass
class CoverageReport:
    config: SimConfig
    cells: list[Cell] = field(default_factory=list)

    def cell(self, a: float, r: float) -> Cell:
        for c in self.cells:
            if c.a == a and c.r == r:
                return c
        raise KeyError((a, r))

    def to_tsv(self) -> str:
        buf = io.StringIO()
        buf.write("a\tr\tcoverage\tavg_length\tfailures\n")
        for c in self.cells:
            buf.write(f"{c.a!r}\t{c.r!r}\t{c.coverage!r}\t{c.avg_length!r}\t{c.failures}\n")
        return buf.getvalue()

    def to_json(self) -> str:
        payload = {"config": self.config.to_dict(), "cells": [asdict(c) for c in self.cells]}
        return json.dumps(payload, indent=2)

    def format_tables(self) -> str:
        """Coverage and average-length grids laid out with a down the rows and r across the columns."""
        cfg = self.config
        lines = []
        for title, attr, fmt in (("Coverage probability", "coverage", "{:.4f}"),
                                 ("Average length", "avg_length", "{:.5f}")):
            lines.append(f"{title} ({cfg.method.value.upper()}, n={cfg.n}, reps={cfg.reps})")
            lines.append("a     | " + "  ".join(f"{r:>8g}" for r in cfg.r_grid))
            lines.append("------+" + "-" * (10 * len(cfg.r_grid)))
            for a in cfg.a_grid:
                vals = [fmt.format(getattr(self.cell(a, r), attr)) for r in cfg.r_grid]
                lines.append(f"{a:<5.1f} | " + "  ".join(f"{v:>8}" for v in vals))
            lines.append("")
        return "\n".join(lines)


def replication_rng(seed: int, a_index: int, r_index: int, rep: int) -> np.random.Generator:
    ss = np.random.SeedSequence(seed, spawn_key=(a_index, r_index, rep))
    return np.random.Generator(np.random.PCG64(ss))


def run_replications(a: float, r: float, cfg: SimConfig, index: tuple[int, int], reps: range):
    """Outcomes for a block of replications: (covered, length, failed) arrays.

    Failed replications carry ``covered=False`` and ``length=nan``.
    """
    v = v_from_ratio(a, r, cfg.qp)
    p = DagumParams(a, v, 1.0)
    r_true = true_ratio(p, cfg.qp)
    covered = np.zeros(len(reps), dtype=bool)
    length = np.full(len(reps), np.nan)
    failed = np.zeros(len(reps), dtype=bool)
    for k, rep in enumerate(reps):
        rng = replication_rng(cfg.seed, index[0], index[1], rep)
        s = summarize(p.sample(rng, cfg.n))
        try:
            a_hat = fit(s, cfg.method).params.a
            ci = confidence_interval(sample_ratio(s.sorted, cfg.qp), cfg.n, a_hat, cfg.qp, cfg.level)
        except (EstimationError, DegenerateRatioError, ValueError):
            failed[k] = True
            continue
        covered[k] = ci.covers(r_true)
        length[k] = ci.length
    return covered, length, failed


def _task(args):
    a, r, cfg, index, start, stop = args
    return run_replications(a, r, cfg, index, range(start, stop))


def _aggregate(a, r, covered, length, failed) -> Cell:
    ok = ~failed
    good = int(ok.sum())
    return Cell(
        a=a,
        r=r,
        coverage=float(covered[ok].sum() / good) if good else math.nan,
        avg_length=float(np.mean(length[ok])) if good else math.nan,
        failures=int(failed.sum()),
    )


def default_workers() -> int:
    env = os.environ.get(THREADS_ENV)
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def run_cell(a: float, r: float, cfg: SimConfig, index: tuple[int, int] | None = None) -> Cell:
    """One (a, r) cell on a single worker.  ``index`` selects the substream
    family; by default it is the cell's position in the config grids."""
    if index is None:
        index = (
            cfg.a_grid.index(a) if a in cfg.a_grid else 0,
            cfg.r_grid.index(r) if r in cfg.r_grid else 0,
        )
    covered, length, failed = run_replications(a, r, cfg, index, range(cfg.reps))
    return _aggregate(a, r, covered, length, failed)


def run_study(cfg: SimConfig, workers: int | None = None, progress=None) -> CoverageReport:
    """All grid cells, with replications spread over ``workers`` processes.

    Per-replication outcomes are reassembled in replication order before
    averaging, so the report is identical for any worker count.
    """
    workers = default_workers() if workers is None else max(1, int(workers))
    tasks = []
    for i, a in enumerate(cfg.a_grid):
        for j, r in enumerate(cfg.r_grid):
            for start in range(0, cfg.reps, _CHUNK):
                tasks.append((a, r, cfg, (i, j), start, min(start + _CHUNK, cfg.reps)))
    if workers == 1:
        results = []
        for t in tasks:
            results.append(_task(t))
            if progress:
                progress(len(results), len(tasks))
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_task, tasks))
    report = CoverageReport(cfg)
    pos = 0
    for i, a in enumerate(cfg.a_grid):
        for j, r in enumerate(cfg.r_grid):
            parts = []
            while pos < len(tasks) and tasks[pos][3] == (i, j):
                parts.append(results[pos])
                pos += 1
            covered, length, failed = (np.concatenate(x) for x in zip(*parts))
            report.cells.append(_aggregate(a, r, covered, length, failed))
    return report
