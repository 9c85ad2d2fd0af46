"""Cell array with cyclic linear probing and a cluster census.

Cells hold key ids (non-negative integers) or ``EMPTY``.  Keys are never
removed, so a cell that becomes occupied stays occupied.
"""

from __future__ import annotations

from dataclasses import dataclass

import numba
import numpy as np

from .errors import FullTableError

EMPTY = -1


class TableState:
    """A table of ``n`` cells, cells numbered ``0 .. n-1``."""

    def __init__(self, n: int):
        if n < 1:
            raise ValueError(f"table size must be positive, got {n}")
        self.n = int(n)
        self.cells = np.full(self.n, EMPTY, dtype=np.int64)

    @classmethod
    def from_occupied(cls, n: int, occupied) -> "TableState":
        """Build a table whose listed cells hold key ids 0, 1, 2, ... in order."""
        table = cls(n)
        for key_id, cell in enumerate(occupied):
            table.place(cell, key_id)
        return table

    @property
    def occupied_count(self) -> int:
        return int(np.count_nonzero(self.cells != EMPTY))

    @property
    def is_full(self) -> bool:
        return bool((self.cells != EMPTY).all())

    def is_empty(self, cell: int) -> bool:
        return self.cells[cell] == EMPTY

    def occupied(self) -> frozenset:
        return frozenset(np.flatnonzero(self.cells != EMPTY).tolist())

    def place(self, cell: int, key_id: int) -> None:
        if key_id < 0:
            raise ValueError("key ids must be non-negative")
        if self.cells[cell] != EMPTY:
            raise ValueError(f"cell {cell} already holds key {self.cells[cell]}")
        self.cells[cell] = key_id

    def copy(self) -> "TableState":
        other = TableState(self.n)
        other.cells[:] = self.cells
        return other

    def __repr__(self):
        return f"TableState(n={self.n}, occupied={self.occupied_count})"


@dataclass(frozen=True)
class ClusterSpan:
    start: int
    size: int


@dataclass(frozen=True)
class ClusterCensus:
    sizes: tuple
    degenerate: bool = False

    @property
    def cluster_count(self) -> int:
        return len(self.sizes)

    @property
    def max_size(self) -> int:
        return max(self.sizes, default=0)

    @property
    def mean_size(self) -> float:
        if not self.sizes:
            return 0.0
        return sum(self.sizes) / len(self.sizes)


# -- compiled primitives (shared by the strategy kernels) ----------------------

@numba.njit(cache=True, nogil=True)
def _probe_forward(cells, start):
    n = cells.shape[0]
    k = start
    probes = 1
    while cells[k] != EMPTY:
        k += 1
        if k == n:
            k = 0
        probes += 1
    return k, probes


@numba.njit(cache=True, nogil=True)
def _cluster_at(cells, cell):
    """Return (start, size, probes); probes counts every cell inspected."""
    n = cells.shape[0]
    if cells[cell] == EMPTY:
        return cell, 0, 1
    probes = 1
    left = cell
    while True:
        k = left - 1 if left > 0 else n - 1
        probes += 1
        if cells[k] == EMPTY:
            break
        left = k
    right = cell
    while True:
        k = right + 1 if right < n - 1 else 0
        probes += 1
        if cells[k] == EMPTY:
            break
        right = k
    size = right - left + 1 if right >= left else right + n - left + 1
    return left, size, probes


@numba.njit(cache=True, nogil=True)
def _cluster_sizes(cells):
    n = cells.shape[0]
    first_empty = -1
    for k in range(n):
        if cells[k] == EMPTY:
            first_empty = k
            break
    if first_empty < 0:
        out = np.empty(1, dtype=np.int64)
        out[0] = n
        return out
    sizes = np.empty(n // 2 + 1, dtype=np.int64)
    count = 0
    run = 0
    k = first_empty
    for _ in range(n):
        k += 1
        if k == n:
            k = 0
        if cells[k] != EMPTY:
            run += 1
        elif run > 0:
            sizes[count] = run
            count += 1
            run = 0
    return sizes[:count]


# -- public operations ---------------------------------------------------------

def _require_space(table: TableState) -> None:
    if table.is_full:
        raise FullTableError(f"all {table.n} cells are occupied")


def probe_forward(table: TableState, start: int) -> tuple[int, int]:
    """First empty cell at or cyclically after ``start`` and the probes spent.

    The returned cell is counted as a probe, so the result is at least 1.
    """
    _require_space(table)
    cell, probes = _probe_forward(table.cells, start)
    return int(cell), int(probes)


def cluster_at(table: TableState, cell: int) -> ClusterSpan:
    """Maximal cyclic run of occupied cells containing ``cell``.

    An empty ``cell`` gives a span of size 0 starting at ``cell``.
    """
    _require_space(table)
    start, size, _ = _cluster_at(table.cells, cell)
    return ClusterSpan(int(start), int(size))


def cluster_census(table: TableState) -> ClusterCensus:
    """Sizes of all clusters.  A full table is reported as one degenerate cluster."""
    sizes = _cluster_sizes(table.cells)
    return ClusterCensus(tuple(int(s) for s in sizes), degenerate=table.is_full)
