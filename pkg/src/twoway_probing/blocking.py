"""Block partition of the table, per-block counters and block-size policies.

All logarithms in the block-size formulas are base 2, the inner one
included: ``log2(log2(n))``.  ``Policy.SIMULATION_LN`` takes the inner
logarithm natural, ``floor(log2(ln n) / (1 - alpha))``; at ``n = 2**16``,
``alpha = 0.9`` that gives blocks of 34 cells instead of 40.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidParamsError, TableTooSmallError


class CounterKind(enum.Enum):
    LOAD = "load"      # occupied cells in the block
    WEIGHT = "weight"  # keys whose insertion walk started in the block


class BlockLayout:
    """``ceil(n / beta)`` blocks of ``beta`` cells; the last one may be shorter."""

    def __init__(self, n: int, beta: int, kind: CounterKind = CounterKind.LOAD):
        if beta < 1:
            raise InvalidParamsError(f"block size must be positive, got {beta}")
        if n < 1:
            raise InvalidParamsError(f"table size must be positive, got {n}")
        self.n = int(n)
        self.beta = int(min(beta, n))
        self.num_blocks = -(-self.n // self.beta)
        self.kind = CounterKind(kind)
        self.counters = np.zeros(self.num_blocks, dtype=np.int64)

    def block_of(self, cell: int) -> int:
        return cell // self.beta

    def block_start(self, block: int) -> int:
        return block * self.beta

    def block_length(self, block: int) -> int:
        return min(self.beta, self.n - block * self.beta)

    def bump(self, block: int) -> None:
        self.counters[block] += 1

    def is_full(self, block: int) -> bool:
        """Meaningful for LOAD counters only."""
        return self.counters[block] >= self.block_length(block)

    def full_blocks(self) -> int:
        lengths = np.minimum(self.beta, self.n - self.beta * np.arange(self.num_blocks))
        return int(np.count_nonzero(self.counters >= lengths))

    def copy(self) -> "BlockLayout":
        other = BlockLayout(self.n, self.beta, self.kind)
        other.counters[:] = self.counters
        return other

    def __repr__(self):
        return (f"BlockLayout(n={self.n}, beta={self.beta}, "
                f"blocks={self.num_blocks}, kind={self.kind.value})")


def block_of(layout: BlockLayout, cell: int) -> int:
    return layout.block_of(cell)


def bump(layout: BlockLayout, block: int) -> None:
    layout.bump(block)


def recount_loads(cells: np.ndarray, beta: int) -> np.ndarray:
    """Occupied cells per block, counted from scratch."""
    from .core_table import EMPTY

    n = cells.shape[0]
    occupied = (cells != EMPTY).astype(np.int64)
    return np.add.reduceat(occupied, np.arange(0, n, beta))


class Policy(enum.Enum):
    SIMULATION = "simulation"
    SIMULATION_LN = "simulation-ln"  # same formula, natural inner log
    THEOREM_B1 = "b1"
    THEOREM_B2 = "b2"
    THEOREM_B3 = "b3"
    EXPLICIT = "explicit"


@dataclass(frozen=True)
class BlockPolicy:
    """How the block size is chosen.

    ``c`` and ``eta`` are the unspecified additive constants of the
    locally-linear and decide-first formulas; ``delta`` must lie in
    ``(2*alpha, 1)`` for the walk-first formula.
    """

    policy: Policy = Policy.SIMULATION
    beta: int | None = None
    c: float = 0.0
    eta: float = 1.0
    delta: float | None = None

    def to_dict(self) -> dict:
        return {"policy": self.policy.value, "beta": self.beta, "c": self.c,
                "eta": self.eta, "delta": self.delta}

    @classmethod
    def from_dict(cls, d: dict) -> "BlockPolicy":
        return cls(Policy(d["policy"]), d.get("beta"), d.get("c", 0.0),
                   d.get("eta", 1.0), d.get("delta"))


def _snap(x: float) -> float:
    # Quotients like 4 / (1 - 0.9) land a few ulps off an integer.
    r = round(x)
    return float(r) if abs(x - r) < 1e-9 else x


def block_size(policy: BlockPolicy, n: int, alpha: float) -> int:
    """Block size for a table of ``n`` cells at load factor ``alpha``.

    >>> block_size(BlockPolicy(Policy.SIMULATION), 2**16, 0.9)
    40
    >>> block_size(BlockPolicy(Policy.THEOREM_B3, delta=0.9), 2**20, 0.4)
    124
    """
    p = policy.policy
    if p is Policy.EXPLICIT:
        if policy.beta is None or policy.beta < 1:
            raise InvalidParamsError("explicit block policy needs a positive beta")
        return int(policy.beta)
    if n < 4:
        raise TableTooSmallError(f"n must be at least 4, got {n}")
    if not 0 < alpha < 1:
        raise InvalidParamsError(f"alpha must lie in (0, 1), got {alpha}")
    loglog = math.log2(math.log2(n))

    if p is Policy.SIMULATION:
        beta = math.floor(_snap(loglog / (1 - alpha)))
    elif p is Policy.SIMULATION_LN:
        beta = math.floor(_snap(math.log2(math.log(n)) / (1 - alpha)))
    elif p is Policy.THEOREM_B1:
        beta = math.floor(_snap((loglog + policy.c) / (1 - alpha) + 1))
    elif p is Policy.THEOREM_B2:
        r = math.sqrt(2 - alpha)
        beta = math.ceil(_snap((1 + r) / (r * (1 - alpha)) * (loglog + policy.eta)))
    elif p is Policy.THEOREM_B3:
        delta = policy.delta
        if delta is None or not 2 * alpha < delta < 1:
            raise InvalidParamsError(
                f"delta must lie in (2*alpha, 1) = ({2 * alpha}, 1), got {delta}")
        beta = math.ceil(_snap((loglog + 8) / (1 - delta)))
    else:  # pragma: no cover
        raise InvalidParamsError(f"unknown policy {p}")
    if beta < 1:
        raise InvalidParamsError(f"policy {p.value} gives block size {beta} < 1")
    return int(beta)
