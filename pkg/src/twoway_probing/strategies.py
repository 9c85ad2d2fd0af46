"""The six FCFS insertion strategies and their search procedures.

Every strategy draws two initial cells ``i`` and ``j`` per key (classic
linear probing ignores ``j``).  Conventions fixed here:

* every cell inspection is one probe, the final empty/target cell included;
* when two sequences alternate, the ``i`` sequence goes first at each rank;
* when ``i == j`` the two sequences coincide and are walked once;
* a random tie-break consumes exactly one bit from a :class:`TieBits`
  stream, and only when there is a real choice between two distinct
  outcomes;
* reading a block counter costs no probes;
* blocked strategies prefer the block with more spare room
  (``length - counter``), which for equal-length blocks is the smaller
  counter and keeps a short last block from soaking up keys.

SMALLCLUSTER inspects ``i`` then ``j`` and stops at the first empty one;
only when both are occupied does it scan the two clusters in both
directions, and its insertion time counts those scans.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numba
import numpy as np

from .blocking import BlockLayout, CounterKind
from .core_table import EMPTY, TableState, _cluster_at, _probe_forward
from .errors import FullTableError, InvalidParamsError, KeyNotFoundError


class Strategy(enum.IntEnum):
    CLASSIC = 0
    SHORTSEQ = 1
    SMALLCLUSTER = 2
    LOCALLYLINEAR = 3
    DECIDEFIRST = 4
    WALKFIRST = 5

    @property
    def blocked(self) -> bool:
        return self >= Strategy.LOCALLYLINEAR

    @property
    def counter_kind(self) -> CounterKind | None:
        if not self.blocked:
            return None
        return CounterKind.WEIGHT if self is Strategy.DECIDEFIRST else CounterKind.LOAD

    @classmethod
    def parse(cls, name: str) -> "Strategy":
        try:
            return cls[name.upper()]
        except KeyError:
            raise InvalidParamsError(f"unknown strategy {name!r}") from None


@dataclass(frozen=True)
class KeyChoices:
    key_id: int
    i: int
    j: int


@dataclass(frozen=True)
class InsertOutcome:
    cell: int
    probes_total: int
    probes_winning: int
    landing_block: int | None
    start_cell: int


class TieBits:
    """A finite stream of tie-break bits, consumed front to back."""

    def __init__(self, bits):
        self.bits = np.ascontiguousarray(bits, dtype=np.uint8)
        self.pos = 0

    def next(self) -> int:
        if self.pos >= len(self.bits):
            raise IndexError("tie-bit stream exhausted")
        b = int(self.bits[self.pos])
        self.pos += 1
        return b

    @property
    def consumed(self) -> int:
        return self.pos


# -- compiled insertion kernels ------------------------------------------------
# Each returns (cell, probes_total, probes_winning, landing_block, start_cell,
# new_bit_pos) and writes the key into ``cells``.

@numba.njit(cache=True, nogil=True)
def _take_bit(bits, pos):
    if pos >= bits.shape[0]:
        raise IndexError("tie-bit stream exhausted")
    return bits[pos], pos + 1


@numba.njit(cache=True, nogil=True)
def _block_len(n, beta, b):
    return min(beta, n - b * beta)


@numba.njit(cache=True, nogil=True)
def _spare(counters, n, beta, b):
    # Room left in block b.  With equal-length blocks, more room means a
    # smaller counter; the short last block is compared by what it can hold.
    return _block_len(n, beta, b) - counters[b]


@numba.njit(cache=True, nogil=True)
def _ins_classic(cells, key, i):
    c, p = _probe_forward(cells, i)
    cells[c] = key
    return c, p, p, -1, i


@numba.njit(cache=True, nogil=True)
def _ins_shortseq(cells, key, i, j):
    if i == j:
        return _ins_classic(cells, key, i)
    n = cells.shape[0]
    a = i
    b = j
    rank = 0
    while True:
        rank += 1
        if cells[a] == EMPTY:
            cells[a] = key
            return a, 2 * rank - 1, rank, -1, i
        if cells[b] == EMPTY:
            cells[b] = key
            return b, 2 * rank, rank, -1, j
        a = a + 1 if a < n - 1 else 0
        b = b + 1 if b < n - 1 else 0


@numba.njit(cache=True, nogil=True)
def _ins_smallcluster(cells, key, i, j, bits, pos):
    n = cells.shape[0]
    if i == j:
        if cells[i] == EMPTY:
            cells[i] = key
            return i, 1, 1, -1, i, pos
        s, size, p = _cluster_at(cells, i)
        c = (s + size) % n
        cells[c] = key
        return c, p, (c - i) % n + 1, -1, i, pos

    if cells[i] == EMPTY:
        cells[i] = key
        return i, 1, 1, -1, i, pos
    if cells[j] == EMPTY:
        cells[j] = key
        return j, 2, 1, -1, j, pos

    si, size_i, pi = _cluster_at(cells, i)
    total = pi + 1  # j's own inspection
    if (j - si) % n < size_i:
        # Same cluster: both forward walks end at the same cell.
        start = i
        c = (si + size_i) % n
    else:
        sj, size_j, pj = _cluster_at(cells, j)
        total += pj - 1
        if size_i < size_j:
            pick_j = False
        elif size_j < size_i:
            pick_j = True
        else:
            bit, pos = _take_bit(bits, pos)
            pick_j = bit == 1
        if pick_j:
            start = j
            c = (sj + size_j) % n
        else:
            start = i
            c = (si + size_i) % n
    cells[c] = key
    return c, total, (c - start) % n + 1, -1, start, pos


@numba.njit(cache=True, nogil=True)
def _ins_walkfirst(cells, loads, beta, key, i, j, bits, pos):
    u, pu = _probe_forward(cells, i)
    if i == j:
        c, total, win, start = u, pu, pu, i
    else:
        v, pv = _probe_forward(cells, j)
        total = pu + pv
        if u == v:
            c, win, start = u, pu, i
        else:
            n = cells.shape[0]
            fu = _spare(loads, n, beta, u // beta)
            fv = _spare(loads, n, beta, v // beta)
            if fu > fv:
                pick_v = False
            elif fv > fu:
                pick_v = True
            else:
                bit, pos = _take_bit(bits, pos)
                pick_v = bit == 1
            if pick_v:
                c, win, start = v, pv, j
            else:
                c, win, start = u, pu, i
    cells[c] = key
    blk = c // beta
    loads[blk] += 1
    return c, total, win, blk, start, pos


@numba.njit(cache=True, nogil=True)
def _pick_lighter(counters, n, beta, i, j, bits, pos):
    """Choose between the blocks of i and j by spare room; returns (start, block, pos)."""
    bi = i // beta
    bj = j // beta
    if bi == bj:
        return i, bi, pos
    fi = _spare(counters, n, beta, bi)
    fj = _spare(counters, n, beta, bj)
    if fi > fj:
        return i, bi, pos
    if fj > fi:
        return j, bj, pos
    bit, pos = _take_bit(bits, pos)
    if bit == 0:
        return i, bi, pos
    return j, bj, pos


@numba.njit(cache=True, nogil=True)
def _ins_decidefirst(cells, weights, beta, key, i, j, bits, pos):
    start, land, pos = _pick_lighter(weights, cells.shape[0], beta, i, j, bits, pos)
    weights[land] += 1
    c, p = _probe_forward(cells, start)
    cells[c] = key
    return c, p, p, land, start, pos


@numba.njit(cache=True, nogil=True)
def _ins_locallylinear(cells, loads, beta, key, i, j, bits, pos):
    n = cells.shape[0]
    nb = loads.shape[0]
    start, land, pos = _pick_lighter(loads, n, beta, i, j, bits, pos)
    b = land
    off = start - b * beta
    for _ in range(nb):
        if loads[b] < _block_len(n, beta, b):
            break
        b = b + 1 if b < nb - 1 else 0
        off = 0
    else:
        raise RuntimeError("every block is full")
    base = b * beta
    length = _block_len(n, beta, b)
    probes = 0
    for t in range(length):
        probes += 1
        c = base + (off + t) % length
        if cells[c] == EMPTY:
            cells[c] = key
            loads[b] += 1
            return c, probes, probes, land, start, pos
    raise RuntimeError("block load counter out of sync with cells")


@numba.njit(cache=True, nogil=True)
def _insert_key(code, cells, counters, beta, key, i, j, bits, pos):
    if code == 0:
        c, pt, pw, lb, st = _ins_classic(cells, key, i)
        return c, pt, pw, lb, st, pos
    if code == 1:
        c, pt, pw, lb, st = _ins_shortseq(cells, key, i, j)
        return c, pt, pw, lb, st, pos
    if code == 2:
        return _ins_smallcluster(cells, key, i, j, bits, pos)
    if code == 3:
        return _ins_locallylinear(cells, counters, beta, key, i, j, bits, pos)
    if code == 4:
        return _ins_decidefirst(cells, counters, beta, key, i, j, bits, pos)
    return _ins_walkfirst(cells, counters, beta, key, i, j, bits, pos)


@numba.njit(cache=True, nogil=True)
def _build(code, n, beta, first, second, bits):
    """Insert keys 0..m-1 into a fresh table; returns cells, counters, outcomes."""
    m = first.shape[0]
    cells = np.full(n, EMPTY, dtype=np.int64)
    counters = np.zeros(-(-n // beta), dtype=np.int64)
    out = np.empty((m, 5), dtype=np.int64)
    pos = 0
    for k in range(m):
        c, pt, pw, lb, st, pos = _insert_key(
            code, cells, counters, beta, k, first[k], second[k], bits, pos)
        out[k, 0] = c
        out[k, 1] = pt
        out[k, 2] = pw
        out[k, 3] = lb
        out[k, 4] = st
    return cells, counters, out, pos


# -- compiled search kernels ---------------------------------------------------
# Successful searches return -1 when the key is not reached.

@numba.njit(cache=True, nogil=True)
def _search_single(cells, i, key):
    n = cells.shape[0]
    a = i
    for probes in range(1, n + 1):
        v = cells[a]
        if v == key:
            return probes
        if v == EMPTY:
            return -1
        a = a + 1 if a < n - 1 else 0
    return -1


@numba.njit(cache=True, nogil=True)
def _search_alternating(cells, i, j, key):
    if i == j:
        return _search_single(cells, i, key)
    n = cells.shape[0]
    a = i
    b = j
    alive_a = True
    alive_b = True
    probes = 0
    for _ in range(n):
        if alive_a:
            probes += 1
            v = cells[a]
            if v == key:
                return probes
            if v == EMPTY:
                alive_a = False
            a = a + 1 if a < n - 1 else 0
        if alive_b:
            probes += 1
            v = cells[b]
            if v == key:
                return probes
            if v == EMPTY:
                alive_b = False
            b = b + 1 if b < n - 1 else 0
        if not (alive_a or alive_b):
            break
    return -1


@numba.njit(cache=True, nogil=True)
def _ll_advance(n, beta, nb, blk, off, t):
    """Next (block, offset, step) of a within-block sequence; full blocks spill right."""
    t += 1
    if t == _block_len(n, beta, blk):
        blk = blk + 1 if blk < nb - 1 else 0
        off = 0
        t = 0
    return blk, off, t


@numba.njit(cache=True, nogil=True)
def _ll_cell(n, beta, blk, off, t):
    return blk * beta + (off + t) % _block_len(n, beta, blk)


@numba.njit(cache=True, nogil=True)
def _search_locallylinear(cells, beta, i, j, key):
    n = cells.shape[0]
    nb = -(-n // beta)
    ba, oa, ta = i // beta, i % beta, 0
    bb, ob, tb = j // beta, j % beta, 0
    alive_a = True
    alive_b = i != j
    probes = 0
    for _ in range(n):
        if alive_a:
            probes += 1
            v = cells[_ll_cell(n, beta, ba, oa, ta)]
            if v == key:
                return probes
            if v == EMPTY:
                alive_a = False
            ba, oa, ta = _ll_advance(n, beta, nb, ba, oa, ta)
        if alive_b:
            probes += 1
            v = cells[_ll_cell(n, beta, bb, ob, tb)]
            if v == key:
                return probes
            if v == EMPTY:
                alive_b = False
            bb, ob, tb = _ll_advance(n, beta, nb, bb, ob, tb)
        if not (alive_a or alive_b):
            break
    return -1


@numba.njit(cache=True, nogil=True)
def _search_key(code, cells, beta, i, j, key):
    if code == 0:
        return _search_single(cells, i, key)
    if code == 3:
        return _search_locallylinear(cells, beta, i, j, key)
    return _search_alternating(cells, i, j, key)


@numba.njit(cache=True, nogil=True)
def _search_all(code, cells, beta, first, second):
    m = first.shape[0]
    out = np.empty(m, dtype=np.int64)
    for k in range(m):
        out[k] = _search_key(code, cells, beta, first[k], second[k], k)
    return out


@numba.njit(cache=True, nogil=True)
def _ll_walk_to_empty(cells, beta, i):
    n = cells.shape[0]
    nb = -(-n // beta)
    blk, off, t = i // beta, i % beta, 0
    for probes in range(1, n + 1):
        if cells[_ll_cell(n, beta, blk, off, t)] == EMPTY:
            return probes
        blk, off, t = _ll_advance(n, beta, nb, blk, off, t)
    return -1


@numba.njit(cache=True, nogil=True)
def _unsuccessful_key(code, cells, beta, i, j):
    if code == 3:
        p = _ll_walk_to_empty(cells, beta, i)
        if j != i:
            p += _ll_walk_to_empty(cells, beta, j)
        return p
    _, p = _probe_forward(cells, i)
    if code != 0 and j != i:
        _, q = _probe_forward(cells, j)
        p += q
    return p


@numba.njit(cache=True, nogil=True)
def _unsuccessful_all(code, cells, beta, first, second):
    out = np.empty(first.shape[0], dtype=np.int64)
    for k in range(first.shape[0]):
        out[k] = _unsuccessful_key(code, cells, beta, first[k], second[k])
    return out


# -- public operations ---------------------------------------------------------

def _check_layout(strategy: Strategy, layout: BlockLayout | None, n: int):
    if not strategy.blocked:
        return np.zeros(1, dtype=np.int64), n
    if layout is None:
        raise InvalidParamsError(f"{strategy.name} needs a block layout")
    if layout.kind is not strategy.counter_kind:
        raise InvalidParamsError(
            f"{strategy.name} needs {strategy.counter_kind.value} counters, "
            f"got {layout.kind.value}")
    if layout.n != n:
        raise InvalidParamsError("layout and table sizes differ")
    return layout.counters, layout.beta


def insert(strategy: Strategy, table: TableState, choices: KeyChoices,
           layout: BlockLayout | None = None, ties: TieBits | None = None) -> InsertOutcome:
    """Insert one key with ``strategy``, mutating ``table`` (and ``layout``)."""
    strategy = Strategy(strategy)
    if table.is_full:
        raise FullTableError(f"all {table.n} cells are occupied")
    counters, beta = _check_layout(strategy, layout, table.n)
    if ties is None:
        ties = TieBits(np.zeros(0, dtype=np.uint8))
    c, pt, pw, lb, st, pos = _insert_key(
        int(strategy), table.cells, counters, beta, choices.key_id,
        choices.i, choices.j, ties.bits, ties.pos)
    ties.pos = int(pos)
    return InsertOutcome(int(c), int(pt), int(pw), None if lb < 0 else int(lb), int(st))


def insert_classic(table, choices):
    return insert(Strategy.CLASSIC, table, choices)


def insert_shortseq(table, choices):
    return insert(Strategy.SHORTSEQ, table, choices)


def insert_smallcluster(table, choices, ties):
    return insert(Strategy.SMALLCLUSTER, table, choices, ties=ties)


def insert_walkfirst(table, layout, choices, ties):
    return insert(Strategy.WALKFIRST, table, choices, layout, ties)


def insert_decidefirst(table, layout, choices, ties):
    return insert(Strategy.DECIDEFIRST, table, choices, layout, ties)


def insert_locallylinear(table, layout, choices, ties):
    return insert(Strategy.LOCALLYLINEAR, table, choices, layout, ties)


def search_successful(strategy: Strategy, table: TableState, record: KeyChoices,
                      layout: BlockLayout | None = None) -> int:
    """Probes needed to find a previously inserted key."""
    strategy = Strategy(strategy)
    beta = layout.beta if (strategy.blocked and layout is not None) else table.n
    if strategy is Strategy.LOCALLYLINEAR and layout is None:
        raise InvalidParamsError("LOCALLYLINEAR search needs the block layout")
    probes = _search_key(int(strategy), table.cells, beta, record.i, record.j, record.key_id)
    if probes < 0:
        raise KeyNotFoundError(f"key {record.key_id} not reachable from ({record.i}, {record.j})")
    return int(probes)


def search_unsuccessful(strategy: Strategy, table: TableState, choices: KeyChoices,
                        layout: BlockLayout | None = None) -> int:
    """Probes until both sequences of ``choices`` have reached an empty cell."""
    strategy = Strategy(strategy)
    if table.is_full:
        raise FullTableError(f"all {table.n} cells are occupied")
    beta = table.n
    if strategy is Strategy.LOCALLYLINEAR:
        if layout is None:
            raise InvalidParamsError("LOCALLYLINEAR search needs the block layout")
        beta = layout.beta
    return int(_unsuccessful_key(int(strategy), table.cells, beta, choices.i, choices.j))
