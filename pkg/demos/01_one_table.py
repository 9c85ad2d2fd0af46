"""Build one small table by hand and watch where keys land.

Two keys, two strategies.  Classic linear probing walks from its single
starting cell; the shortest-sequence rule alternates between two walks and
stops at whichever hits an empty cell first.
"""

from twoway_probing import (KeyChoices, Strategy, TableState, cluster_census,
                            insert_classic, insert_shortseq, search_successful)

# A table of 16 cells with one long cluster at 3..8.
t = TableState.from_occupied(16, range(3, 9))
print("start:", t)

# Classic probing from cell 4 walks to the end of the cluster.
classic = t.copy()
out = insert_classic(classic, KeyChoices(100, 4, 12))
print(f"classic   -> cell {out.cell}, {out.probes_total} probes")

# The two-way rule also looks at cell 12, which is free.
twoway = t.copy()
out = insert_shortseq(twoway, KeyChoices(100, 4, 12))
print(f"shortseq  -> cell {out.cell}, {out.probes_total} probes "
      f"({out.probes_winning} along the winning walk)")

# A successful search replays the same alternation.
print("search    ->", search_successful(Strategy.SHORTSEQ, twoway, KeyChoices(100, 4, 12)),
      "probes")

for name, table in (("classic", classic), ("shortseq", twoway)):
    c = cluster_census(table)
    print(f"{name:9} clusters {sorted(c.sizes, reverse=True)}, largest {c.max_size}")
