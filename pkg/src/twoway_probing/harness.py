"""Seeded experiment protocol: simulations grouped into iterations.

One simulation inserts ``floor(alpha * n)`` keys into a fresh table, then
searches for every key once the table is built.  An iteration averages the
per-simulation averages and the per-simulation maxima; the report averages
those over iterations.
"""

from __future__ import annotations

import csv
import io
import json
import math
import statistics
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction

import numpy as np

from .blocking import BlockLayout, BlockPolicy, block_size, recount_loads
from .core_table import TableState, cluster_census
from .errors import InvalidParamsError, KeyNotFoundError
from .metrics import RunMetrics, summarize_run
from .rng import simulation_inputs
from .strategies import Strategy, _build, _search_all, _unsuccessful_all


@dataclass(frozen=True)
class ExperimentConfig:
    strategy: Strategy
    n: int
    alpha: float
    block_policy: BlockPolicy = field(default_factory=BlockPolicy)
    iterations: int = 10
    sims_per_iteration: int = 100
    master_seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "strategy", Strategy(self.strategy))
        if not 0 < self.alpha < 1:
            raise InvalidParamsError(f"alpha must lie in (0, 1), got {self.alpha}")
        if self.iterations < 1 or self.sims_per_iteration < 1:
            raise InvalidParamsError("iterations and sims_per_iteration must be >= 1")
        if self.n < 1:
            raise InvalidParamsError("n must be positive")
        if not 0 <= self.master_seed < 2**64:
            raise InvalidParamsError("master_seed must be an unsigned 64-bit integer")
        self.beta  # validates the block policy early

    @property
    def m(self) -> int:
        return math.floor(Fraction(repr(self.alpha)) * self.n)

    @property
    def beta(self) -> int:
        """Block size, or 0 for strategies without blocks."""
        if not self.strategy.blocked:
            return 0
        return block_size(self.block_policy, self.n, self.alpha)

    def to_dict(self) -> dict:
        return {"strategy": self.strategy.name.lower(), "n": self.n, "alpha": self.alpha,
                "block_policy": self.block_policy.to_dict(), "iterations": self.iterations,
                "sims_per_iteration": self.sims_per_iteration,
                "master_seed": self.master_seed}

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentConfig":
        return cls(Strategy.parse(d["strategy"]), d["n"], d["alpha"],
                   BlockPolicy.from_dict(d["block_policy"]), d["iterations"],
                   d["sims_per_iteration"], d["master_seed"])


class SimulationResult:
    """Everything one simulation produced, kept for invariant checks."""

    def __init__(self, config, first, second, ties, cells, counters, outcomes,
                 search_times, bits_used):
        self.config = config
        self.first = first
        self.second = second
        self.ties = ties
        self.table = TableState(config.n)
        self.table.cells[:] = cells
        self.beta = config.beta
        self.layout = None
        if config.strategy.blocked:
            self.layout = BlockLayout(config.n, self.beta, config.strategy.counter_kind)
            self.layout.counters[:] = counters
        self.outcomes = outcomes  # columns: cell, total, winning, landing, start
        self.search_times = search_times
        self.bits_used = bits_used
        self.census = cluster_census(self.table)

    @property
    def insert_times(self) -> np.ndarray:
        return self.outcomes[:, 1]

    @property
    def winning_times(self) -> np.ndarray:
        return self.outcomes[:, 2]

    @property
    def final_cells(self) -> np.ndarray:
        return self.outcomes[:, 0]

    def block_loads(self) -> np.ndarray:
        return recount_loads(self.table.cells, self.beta or self.config.n)

    def full_blocks(self) -> int:
        loads = self.block_loads()
        beta = self.beta or self.config.n
        lengths = np.minimum(beta, self.config.n - beta * np.arange(len(loads)))
        return int(np.count_nonzero(loads >= lengths))

    def overflows(self) -> int:
        """Keys placed outside the block their walk was assigned to (LOCALLYLINEAR)."""
        if self.config.strategy is not Strategy.LOCALLYLINEAR:
            return 0
        return int(np.count_nonzero(self.final_cells // self.beta != self.outcomes[:, 3]))

    def unsuccessful_searches(self, first, second) -> np.ndarray:
        code = int(self.config.strategy)
        beta = self.beta or self.config.n
        return _unsuccessful_all(code, self.table.cells, beta,
                                 np.asarray(first, dtype=np.int64),
                                 np.asarray(second, dtype=np.int64))

    def metrics(self) -> RunMetrics:
        cfg = self.config
        return summarize_run(self.insert_times, self.search_times, self.census,
                             strategy=cfg.strategy.name.lower(), n=cfg.n, beta=self.beta,
                             seed=cfg.master_seed, winning_times=self.winning_times)


def simulate(config: ExperimentConfig, iteration: int, simulation: int) -> SimulationResult:
    n, m = config.n, config.m
    beta = config.beta or n
    first, second, ties = simulation_inputs(config.master_seed, iteration, simulation, n, m)
    code = int(config.strategy)
    cells, counters, outcomes, bits_used = _build(code, n, beta, first, second, ties.bits)
    search_times = _search_all(code, cells, beta, first, second)
    if m and search_times.min() < 0:
        lost = int(np.flatnonzero(search_times < 0)[0])
        raise KeyNotFoundError(f"key {lost} unreachable after construction")
    return SimulationResult(config, first, second, ties, cells, counters, outcomes,
                            search_times, int(bits_used))


def run_simulation(config: ExperimentConfig, iteration_index: int,
                   simulation_index: int) -> RunMetrics:
    return simulate(config, iteration_index, simulation_index).metrics()


STAT_FIELDS = ("insert_avg", "insert_max", "search_avg", "search_max",
               "cluster_avg", "cluster_max", "unsuccessful_bound",
               "insert_winning_avg", "insert_winning_max")


@dataclass(frozen=True)
class IterationSummary:
    index: int | None  # None for the grand total
    insert_avg: float
    insert_max: float
    search_avg: float
    search_max: float
    cluster_avg: float
    cluster_max: float
    unsuccessful_bound: float
    insert_winning_avg: float
    insert_winning_max: float


@dataclass(frozen=True)
class ExperimentReport:
    config: ExperimentConfig
    iterations: tuple
    grand: IterationSummary
    std: IterationSummary

    def to_dict(self) -> dict:
        return {"config": self.config.to_dict(),
                "beta": self.config.beta,
                "iterations": [asdict(s) for s in self.iterations],
                "grand": asdict(self.grand),
                "std": asdict(self.std)}

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentReport":
        return cls(ExperimentConfig.from_dict(d["config"]),
                   tuple(IterationSummary(**s) for s in d["iterations"]),
                   IterationSummary(**d["grand"]), IterationSummary(**d["std"]))


def _mean(values) -> float:
    return math.fsum(values) / len(values)


def _summarize(index, runs) -> IterationSummary:
    return IterationSummary(index, *(_mean([getattr(r, f) for r in runs]) for f in STAT_FIELDS))


def aggregate(config: ExperimentConfig, runs: list) -> ExperimentReport:
    """``runs`` is indexed ``[iteration][simulation]``."""
    per_iter = tuple(_summarize(i, sims) for i, sims in enumerate(runs))
    grand = IterationSummary(None, *(_mean([getattr(s, f) for s in per_iter])
                                     for f in STAT_FIELDS))
    if len(per_iter) > 1:
        std = IterationSummary(None, *(statistics.stdev([getattr(s, f) for s in per_iter])
                                       for f in STAT_FIELDS))
    else:
        std = IterationSummary(None, *([0.0] * len(STAT_FIELDS)))
    return ExperimentReport(config, per_iter, grand, std)


def run_experiment(config: ExperimentConfig, workers: int = 1) -> ExperimentReport:
    """Run ``iterations x sims_per_iteration`` simulations and aggregate them.

    Each simulation is seeded from its own (iteration, simulation) index, so
    the report does not depend on ``workers``.
    """
    jobs = [(i, s) for i in range(config.iterations)
            for s in range(config.sims_per_iteration)]
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            flat = list(pool.map(lambda job: run_simulation(config, *job), jobs))
    else:
        flat = [run_simulation(config, i, s) for i, s in jobs]
    k = config.sims_per_iteration
    runs = [flat[i * k:(i + 1) * k] for i in range(config.iterations)]
    return aggregate(config, runs)


CSV_HEADER = ("strategy", "n", "alpha", "block_size", "iteration", "insert_avg",
              "insert_max", "search_avg", "search_max", "cluster_avg", "cluster_max",
              "unsuccessful_bound", "seed")


def _g6(x) -> str:
    return f"{x:.6g}"


def emit_report(report: ExperimentReport, format: str = "csv") -> bytes:
    """Serialize a report as CSV (one row per iteration plus ``all``) or JSON."""
    if format == "csv":
        cfg = report.config
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_HEADER)
        for s in (*report.iterations, report.grand):
            w.writerow([cfg.strategy.name.lower(), cfg.n, _g6(cfg.alpha), cfg.beta,
                        "all" if s.index is None else s.index,
                        *(_g6(getattr(s, f)) for f in CSV_HEADER[5:12]),
                        cfg.master_seed])
        return buf.getvalue().encode()
    if format in ("json", "json-like"):
        return (json.dumps(report.to_dict(), indent=2, sort_keys=True) + "\n").encode()
    raise InvalidParamsError(f"unknown report format {format!r}")


def parse_report(data: bytes) -> ExperimentReport:
    """Inverse of ``emit_report(..., "json")``."""
    return ExperimentReport.from_dict(json.loads(data))


def parse_csv(data: bytes) -> list[dict]:
    return list(csv.DictReader(io.StringIO(data.decode())))
