"""Slow, independent reference implementations.

:func:`naive_replay` re-implements every strategy with plain Python lists
and recounts block loads and weights from scratch at each insertion; it
shares only the random-input derivation with the compiled path.
:func:`greedy_mc` is the balls-into-bins process that LOCALLYLINEAR
reduces to while no block overflows.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .core_table import ClusterCensus
from .metrics import RunMetrics, summarize_run
from .rng import RngStream, simulation_inputs
from .strategies import InsertOutcome, Strategy, TieBits


@dataclass(frozen=True)
class GreedyMcOutcome:
    loads: tuple
    max_load: int


def greedy_mc(s: int, r: int, d: int, choices, ties: TieBits | None = None) -> GreedyMcOutcome:
    """Throw ``r`` balls into ``s`` bins, each into the least loaded of its ``d`` bins.

    ``choices[k]`` lists ball k's bins.  Candidates are compared left to
    right; an equal load between two *different* bins costs one tie bit,
    and bit 1 moves the ball to the later candidate.
    """
    if s < 1:
        raise ValueError("need at least one bin")
    if ties is None:
        ties = TieBits([])
    loads = [0] * s
    for k in range(r):
        bins = list(choices[k])
        if len(bins) != d:
            raise ValueError(f"ball {k} has {len(bins)} choices, expected {d}")
        best = bins[0]
        for b in bins[1:]:
            if b == best:
                continue
            if loads[b] < loads[best]:
                best = b
            elif loads[b] == loads[best] and ties.next() == 1:
                best = b
        loads[best] += 1
    return GreedyMcOutcome(tuple(loads), max(loads, default=0))


def greedy_mc_seeded(s: int, r: int, d: int, seed: int) -> GreedyMcOutcome:
    draws = RngStream(seed).cells(s, r * d)
    choices = [draws[k * d:(k + 1) * d].tolist() for k in range(r)]
    ties = TieBits(RngStream(seed ^ 0x5A5A5A5A5A5A5A5A).bits(max(r * (d - 1), 1)))
    return greedy_mc(s, r, d, choices, ties)


# -- naive strategy replay -----------------------------------------------------

class _Table:
    def __init__(self, n, beta):
        self.n = n
        self.cells = [None] * n
        self.beta = beta
        self.landings = []  # landing block of each key, for weights

    def blocks(self):
        return math.ceil(self.n / self.beta)

    def block_cells(self, b):
        return list(range(b * self.beta, min((b + 1) * self.beta, self.n)))

    def load(self, b):
        return sum(1 for c in self.block_cells(b) if self.cells[c] is not None)

    def weight(self, b):
        return sum(1 for x in self.landings if x == b)

    def terminal(self, start):
        c, probes = start, 1
        while self.cells[c] is not None:
            c = (c + 1) % self.n
            probes += 1
        return c, probes

    def cluster(self, c):
        """(first cell, size, probes) of the cluster holding occupied cell c."""
        probes = 1
        left = c
        while True:
            probes += 1
            if self.cells[(left - 1) % self.n] is None:
                break
            left = (left - 1) % self.n
        right = c
        while True:
            probes += 1
            if self.cells[(right + 1) % self.n] is None:
                break
            right = (right + 1) % self.n
        return left, (right - left) % self.n + 1, probes


def _choose(spare_i, spare_j, ties):
    """True when the j side wins."""
    if spare_i != spare_j:
        return spare_j > spare_i
    return ties.next() == 1


def _insert(strategy, t: _Table, key, i, j, ties) -> InsertOutcome:
    n = t.n
    if strategy is Strategy.CLASSIC:
        c, p = t.terminal(i)
        t.cells[c] = key
        return InsertOutcome(c, p, p, None, i)

    if strategy is Strategy.SHORTSEQ:
        f = [(i + r) % n for r in range(n)]
        g = f if i == j else [(j + r) % n for r in range(n)]
        probes = 0
        for rank in range(n):
            probes += 1
            if t.cells[f[rank]] is None:
                t.cells[f[rank]] = key
                return InsertOutcome(f[rank], probes, rank + 1, None, i)
            if i == j:
                continue
            probes += 1
            if t.cells[g[rank]] is None:
                t.cells[g[rank]] = key
                return InsertOutcome(g[rank], probes, rank + 1, None, j)

    if strategy is Strategy.SMALLCLUSTER:
        if t.cells[i] is None:
            t.cells[i] = key
            return InsertOutcome(i, 1, 1, None, i)
        if i == j:
            left, size, p = t.cluster(i)
            c = (left + size) % n
            t.cells[c] = key
            return InsertOutcome(c, p, (c - i) % n + 1, None, i)
        if t.cells[j] is None:
            t.cells[j] = key
            return InsertOutcome(j, 2, 1, None, j)
        li, si, pi = t.cluster(i)
        members = {(li + k) % n for k in range(si)}
        if j in members:
            start, c, total = i, (li + si) % n, pi + 1
        else:
            lj, sj, pj = t.cluster(j)
            total = pi + pj
            take_j = sj < si or (sj == si and ties.next() == 1)
            start, c = (j, (lj + sj) % n) if take_j else (i, (li + si) % n)
        t.cells[c] = key
        return InsertOutcome(c, total, (c - start) % n + 1, None, start)

    beta = t.beta

    def length(b):
        return len(t.block_cells(b))

    if strategy is Strategy.WALKFIRST:
        u, pu = t.terminal(i)
        if i == j:
            c, total, win, start = u, pu, pu, i
        else:
            v, pv = t.terminal(j)
            total = pu + pv
            if u == v:
                c, win, start = u, pu, i
            else:
                bu, bv = u // beta, v // beta
                if _choose(length(bu) - t.load(bu), length(bv) - t.load(bv), ties):
                    c, win, start = v, pv, j
                else:
                    c, win, start = u, pu, i
        t.cells[c] = key
        return InsertOutcome(c, total, win, c // beta, start)

    bi, bj = i // beta, j // beta
    count = t.weight if strategy is Strategy.DECIDEFIRST else t.load
    if bi == bj:
        start, land = i, bi
    elif _choose(length(bi) - count(bi), length(bj) - count(bj), ties):
        start, land = j, bj
    else:
        start, land = i, bi

    if strategy is Strategy.DECIDEFIRST:
        t.landings.append(land)
        c, p = t.terminal(start)
        t.cells[c] = key
        return InsertOutcome(c, p, p, land, start)

    # LOCALLYLINEAR
    b = land
    order = t.block_cells(b)
    k = order.index(start)
    order = order[k:] + order[:k]
    while all(t.cells[x] is not None for x in order):
        b = (b + 1) % t.blocks()
        order = t.block_cells(b)
    for probes, c in enumerate(order, start=1):
        if t.cells[c] is None:
            t.cells[c] = key
            return InsertOutcome(c, probes, probes, land, start)
    raise AssertionError("unreachable")


def _forward(n, start):
    for r in range(n):
        yield (start + r) % n


def _within_blocks(t: _Table, start):
    b = start // t.beta
    order = t.block_cells(b)
    k = order.index(start)
    order = order[k:] + order[:k]
    emitted = 0
    while emitted < t.n:
        for c in order:
            yield c
            emitted += 1
        b = (b + 1) % t.blocks()
        order = t.block_cells(b)


def _sequences(strategy, t, i, j):
    if strategy is Strategy.CLASSIC:
        return [_forward(t.n, i)]
    make = (lambda s: _within_blocks(t, s)) if strategy is Strategy.LOCALLYLINEAR \
        else (lambda s: _forward(t.n, s))
    return [make(i)] if i == j else [make(i), make(j)]


def _search(strategy, t, i, j, key):
    """Alternate one probe per live sequence until ``key`` (or only empties) is seen."""
    live = _sequences(strategy, t, i, j)
    probes = 0
    while live:
        still = []
        for seq in live:
            c = next(seq, None)
            if c is None:
                continue
            probes += 1
            if key is not None and t.cells[c] == key:
                return probes
            if t.cells[c] is not None:
                still.append(seq)
        live = still
    return probes if key is None else -1


def _census(cells):
    n = len(cells)
    if all(c is not None for c in cells):
        return ClusterCensus((n,), degenerate=True)
    e = cells.index(None)
    sizes, run = [], 0
    for r in range(1, n + 1):
        if cells[(e + r) % n] is not None:
            run += 1
        elif run:
            sizes.append(run)
            run = 0
    return ClusterCensus(tuple(sizes))


@dataclass
class NaiveRun:
    occupied: frozenset
    cells: list
    outcomes: list
    search_times: list
    metrics: RunMetrics
    counters: list


def naive_replay(strategy: Strategy, n: int, alpha: float, beta: int, seed: int,
                 iteration: int = 0, simulation: int = 0, m: int | None = None) -> NaiveRun:
    strategy = Strategy(strategy)
    if m is None:
        m = math.floor(Fraction(repr(alpha)) * n)
    beta = beta if strategy.blocked else n
    first, second, ties = simulation_inputs(seed, iteration, simulation, n, m)
    t = _Table(n, beta)
    outcomes = [_insert(strategy, t, k, int(first[k]), int(second[k]), ties)
                for k in range(m)]
    search_times = [_search(strategy, t, int(first[k]), int(second[k]), k) for k in range(m)]
    if strategy is Strategy.DECIDEFIRST:
        counters = [t.weight(b) for b in range(t.blocks())]
    elif strategy.blocked:
        counters = [t.load(b) for b in range(t.blocks())]
    else:
        counters = []
    metrics = summarize_run([o.probes_total for o in outcomes], search_times, _census(t.cells),
                            strategy=strategy.name.lower(), n=n,
                            beta=beta if strategy.blocked else 0, seed=seed,
                            winning_times=[o.probes_winning for o in outcomes])
    occupied = frozenset(c for c in range(n) if t.cells[c] is not None)
    return NaiveRun(occupied, list(t.cells), outcomes, search_times, metrics, counters)


def naive_unsuccessful(strategy: Strategy, cells: list, beta: int, i: int, j: int) -> int:
    t = _Table(len(cells), beta if Strategy(strategy).blocked else len(cells))
    t.cells = list(cells)
    return _search(Strategy(strategy), t, i, j, None)


# -- comparisons against the compiled path -------------------------------------

def compare_replay(config, iteration: int = 0, simulation: int = 0) -> list[str]:
    """Differences between :func:`naive_replay` and the compiled run; empty when equal."""
    from .harness import simulate

    fast = simulate(config, iteration, simulation)
    slow = naive_replay(config.strategy, config.n, config.alpha, config.beta,
                        config.master_seed, iteration, simulation)
    problems = []
    if fast.table.occupied() != slow.occupied:
        problems.append("occupied cell sets differ")
    if fast.table.cells.tolist() != [-1 if c is None else c for c in slow.cells]:
        problems.append("cell contents differ")
    for k, (row, o) in enumerate(zip(fast.outcomes.tolist(), slow.outcomes)):
        expect = [o.cell, o.probes_total, o.probes_winning,
                  -1 if o.landing_block is None else o.landing_block, o.start_cell]
        if row != expect:
            problems.append(f"key {k}: outcome {row} != {expect}")
            break
    if fast.search_times.tolist() != slow.search_times:
        problems.append("successful search times differ")
    if config.strategy.blocked and fast.layout.counters.tolist() != slow.counters:
        problems.append("block counters differ")
    if fast.metrics() != slow.metrics:
        problems.append("run metrics differ")
    return problems


def compare_greedy_mc(config, iteration: int = 0, simulation: int = 0):
    """LOCALLYLINEAR block loads versus GreedyMC driven by the same choices.

    Returns ``None`` when the equivalence does not apply (the block size
    does not divide ``n``, or some block overflowed), else a list of
    differences.
    """
    from .harness import simulate

    if config.strategy is not Strategy.LOCALLYLINEAR:
        raise ValueError("the GreedyMC equivalence concerns LOCALLYLINEAR only")
    beta = config.beta
    if config.n % beta:
        return None
    run = simulate(config, iteration, simulation)
    if run.overflows():
        return None
    bins = [(int(a) // beta, int(b) // beta) for a, b in zip(run.first, run.second)]
    outcome = greedy_mc(config.n // beta, config.m, 2, bins, TieBits(run.ties.bits))
    loads = run.layout.counters.tolist()
    if list(outcome.loads) != loads:
        return [f"block loads {loads[:8]}... != bin loads {list(outcome.loads)[:8]}..."]
    return []
