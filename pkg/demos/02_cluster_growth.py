"""How the largest cluster grows with the table size.

Unblocked strategies keep growing with log n, while the blocked walk-first
rule grows far more slowly.  Small run counts keep this quick; the acceptance tests repeat
the comparison at full strength.
"""

import numpy as np

from twoway_probing import ExperimentConfig, Strategy, run_experiment

SIZES = [2**k for k in (8, 10, 12, 14)]
ALPHA = 0.9

print(f"mean largest cluster at alpha={ALPHA} (2 x 10 runs per point)")
print("strategy      " + "".join(f"{'2^%d' % int(np.log2(n)):>9}" for n in SIZES))
for s in Strategy:
    row = []
    for n in SIZES:
        cfg = ExperimentConfig(s, n, ALPHA, iterations=2, sims_per_iteration=10, master_seed=1)
        row.append(run_experiment(cfg).grand.cluster_max)
    print(f"{s.name.lower():14}" + "".join(f"{v:9.1f}" for v in row))

# Least-squares slope against log2(n).
for s in (Strategy.CLASSIC, Strategy.WALKFIRST):
    y = [run_experiment(ExperimentConfig(s, n, ALPHA, iterations=2, sims_per_iteration=10,
                                         master_seed=1)).grand.cluster_max for n in SIZES]
    slope = np.polyfit(np.log2(SIZES), y, 1)[0]
    print(f"{s.name.lower()}: about {slope:.1f} cells more per extra bit of n")
