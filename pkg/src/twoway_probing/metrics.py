"""Per-run statistics over one constructed table."""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from .core_table import ClusterCensus
from .errors import EmptyRunError


@dataclass(frozen=True)
class RunMetrics:
    strategy: str
    n: int
    m: int
    beta: int
    seed: int
    insert_avg: float
    insert_max: int
    search_avg: float
    search_max: int
    cluster_avg: float
    cluster_max: int
    unsuccessful_bound: int
    # Probes along the winning walk only; differs from insert_* for
    # SMALLCLUSTER, SHORTSEQ and WALKFIRST.
    insert_winning_avg: float = 0.0
    insert_winning_max: int = 0

    def to_dict(self) -> dict:
        return asdict(self)


def _mean(values: np.ndarray) -> float:
    # Integer sum then one true division: exact up to the final rounding.
    return int(np.asarray(values, dtype=np.int64).sum()) / len(values)


def summarize_run(insert_times, search_times, census: ClusterCensus, *,
                  strategy: str = "", n: int = 0, beta: int = 0, seed: int = 0,
                  winning_times=None) -> RunMetrics:
    insert_times = np.asarray(insert_times, dtype=np.int64)
    search_times = np.asarray(search_times, dtype=np.int64)
    m = len(insert_times)
    if m == 0 or len(search_times) == 0:
        raise EmptyRunError("a run needs at least one key")
    if len(search_times) != m:
        raise ValueError("insert and search sequences differ in length")
    if winning_times is None:
        winning_times = insert_times
    winning_times = np.asarray(winning_times, dtype=np.int64)
    return RunMetrics(
        strategy=strategy, n=n, m=m, beta=beta, seed=seed,
        insert_avg=_mean(insert_times), insert_max=int(insert_times.max()),
        search_avg=_mean(search_times), search_max=int(search_times.max()),
        cluster_avg=census.mean_size, cluster_max=census.max_size,
        unsuccessful_bound=2 * census.max_size + 2,
        insert_winning_avg=_mean(winning_times),
        insert_winning_max=int(winning_times.max()),
    )
