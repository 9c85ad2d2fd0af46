"""Blocks, their sizes, and the balls-into-bins view of locally-linear probing.

When the block size divides n and no block overflows, the block loads of a
locally-linear table are exactly the bin loads of greedy two-choice
allocation fed with the blocks of the same initial cells.
"""

from twoway_probing import (BlockPolicy, ExperimentConfig, Policy, Strategy, TieBits,
                            block_size, greedy_mc, simulate)

n = 2**16
for alpha in (0.4, 0.9):
    sizes = {p.value: block_size(BlockPolicy(p, delta=0.95), n, alpha)
             for p in (Policy.SIMULATION, Policy.SIMULATION_LN, Policy.THEOREM_B1,
                       Policy.THEOREM_B2)}
    print(f"n=2^16 alpha={alpha}: {sizes}")
print("b3 with delta=0.9 at alpha=0.4:",
      block_size(BlockPolicy(Policy.THEOREM_B3, delta=0.9), n, 0.4))

cfg = ExperimentConfig(Strategy.LOCALLYLINEAR, 2**12, 0.6,
                       BlockPolicy(Policy.EXPLICIT, beta=16), master_seed=7)
run = simulate(cfg, 0, 0)
print(f"\nlocally-linear, n={cfg.n}, beta=16, {cfg.m} keys, overflows: {run.overflows()}")

bins = [(int(i) // 16, int(j) // 16) for i, j in zip(run.first, run.second)]
balls = greedy_mc(cfg.n // 16, cfg.m, 2, bins, TieBits(run.ties.bits))
loads = run.layout.counters.tolist()
print("first block loads:", loads[:12])
print("first bin loads:  ", list(balls.loads[:12]))
print("identical:", loads == list(balls.loads), "| heaviest block:", max(loads), "of 16")
