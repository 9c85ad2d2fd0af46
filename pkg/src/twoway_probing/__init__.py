"""Two-way linear probing: six FCFS open-addressing insertion strategies and
the seeded simulation harness used to compare their probe counts and
cluster sizes."""

from .blocking import BlockLayout, BlockPolicy, CounterKind, Policy, block_size
from .core_table import (EMPTY, ClusterCensus, ClusterSpan, TableState, cluster_at,
                         cluster_census, probe_forward)
from .errors import (EmptyRunError, FullTableError, InvalidParamsError, KeyNotFoundError,
                     TableTooSmallError)
from .harness import (ExperimentConfig, ExperimentReport, emit_report, parse_report,
                      run_experiment, run_simulation, simulate)
from .metrics import RunMetrics, summarize_run
from .oracles import greedy_mc, naive_replay
from .strategies import (InsertOutcome, KeyChoices, Strategy, TieBits, insert,
                         insert_classic, insert_decidefirst, insert_locallylinear,
                         insert_shortseq, insert_smallcluster, insert_walkfirst,
                         search_successful, search_unsuccessful)

__version__ = "0.1.0"
