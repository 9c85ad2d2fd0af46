import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from twoway_probing import (BlockLayout, CounterKind, FullTableError, InvalidParamsError,
                            KeyChoices, KeyNotFoundError, Strategy, TableState, TieBits,
                            cluster_census, insert, insert_classic, insert_decidefirst,
                            insert_locallylinear, insert_shortseq, insert_smallcluster,
                            insert_walkfirst, search_successful, search_unsuccessful)

K = KeyChoices


def table(n, occupied):
    return TableState.from_occupied(n, occupied)


def layout(n, beta, counters, kind=CounterKind.LOAD):
    lay = BlockLayout(n, beta, kind)
    lay.counters[:] = counters
    return lay


def bits(*b):
    return TieBits(np.array(b, dtype=np.uint8))


# -- classic ------------------------------------------------------------------

@pytest.mark.parametrize("occupied,i,cell,probes", [
    (set(), 5, 5, 1),
    ({5}, 5, 6, 2),
    ({6, 7}, 6, 0, 3),
])
def test_classic(occupied, i, cell, probes):
    out = insert_classic(table(8, occupied), K(99, i, 0))
    assert (out.cell, out.probes_total, out.probes_winning) == (cell, probes, probes)


# -- shortseq -----------------------------------------------------------------

def test_shortseq_second_choice_wins():
    out = insert_shortseq(table(8, {3}), K(9, 3, 5))
    assert (out.cell, out.probes_total) == (5, 2)


def test_shortseq_first_inspection():
    out = insert_shortseq(TableState(8), K(9, 2, 6))
    assert (out.cell, out.probes_total) == (2, 1)


def test_shortseq_alternates():
    out = insert_shortseq(table(8, {2, 3, 6}), K(9, 2, 6))
    assert (out.cell, out.probes_total, out.probes_winning) == (7, 4, 2)


def test_shortseq_identical_choices_walk_once():
    out = insert_shortseq(table(8, {2, 3}), K(9, 2, 2))
    assert (out.cell, out.probes_total) == (4, 3)


# -- smallcluster -------------------------------------------------------------

def test_smallcluster_smaller_cluster_wins():
    out = insert_smallcluster(table(8, {1, 2, 3, 6}), K(9, 2, 6), bits())
    assert out.cell == 7 and out.start_cell == 6
    assert out.probes_winning == 2


def test_smallcluster_empty_initial_cell():
    t = table(8, {5})
    out = insert_smallcluster(t, K(9, 2, 5), bits())
    assert out.cell == 2 and out.probes_total == 1
    out = insert_smallcluster(t, K(10, 5, 3), bits())
    assert out.cell == 3 and out.probes_total == 2


@pytest.mark.parametrize("bit,cell", [(0, 2), (1, 6)])
def test_smallcluster_tie(bit, cell):
    ties = bits(bit)
    out = insert_smallcluster(table(8, {1, 5}), K(9, 1, 5), ties)
    assert out.cell == cell and ties.consumed == 1


def test_smallcluster_shared_cluster_uses_no_bit():
    ties = bits(1)
    out = insert_smallcluster(table(8, {1, 2, 3}), K(9, 1, 3), ties)
    assert out.cell == 4 and ties.consumed == 0


# -- walkfirst ----------------------------------------------------------------

def test_walkfirst_lighter_block():
    t = table(8, {0, 1, 4})
    lay = layout(8, 4, [2, 1])
    out = insert_walkfirst(t, lay, K(9, 0, 4), bits())
    assert (out.cell, out.probes_total, out.probes_winning) == (5, 5, 2)
    assert lay.counters.tolist() == [2, 2]


def test_walkfirst_identical_choices():
    t = table(8, {0, 1})
    out = insert_walkfirst(t, layout(8, 4, [2, 0]), K(9, 0, 0), bits())
    assert (out.cell, out.probes_total) == (2, 3)


@pytest.mark.parametrize("bit,cell", [(0, 1), (1, 5)])
def test_walkfirst_tie(bit, cell):
    ties = bits(bit)
    out = insert_walkfirst(table(8, {0, 4}), layout(8, 4, [1, 1]), K(9, 0, 4), ties)
    assert out.cell == cell and ties.consumed == 1


def test_walkfirst_same_terminal_cell_uses_no_bit():
    ties = bits(1)
    out = insert_walkfirst(table(8, {0, 1, 2}), layout(8, 4, [3, 0]), K(9, 0, 2), ties)
    assert out.cell == 3 and ties.consumed == 0


# -- decidefirst --------------------------------------------------------------

def test_decidefirst_lighter_weight():
    t = table(8, {6})
    lay = layout(8, 4, [3, 1], CounterKind.WEIGHT)
    out = insert_decidefirst(t, lay, K(9, 1, 6), bits())
    assert out.cell == 7 and out.landing_block == 1
    assert lay.counters.tolist() == [3, 2]


def test_decidefirst_same_block_starts_from_i():
    ties = bits(1)
    out = insert_decidefirst(TableState(8), layout(8, 4, [0, 0], CounterKind.WEIGHT),
                             K(9, 2, 1), ties)
    assert out.cell == 2 and out.start_cell == 2 and ties.consumed == 0


def test_decidefirst_tie():
    out = insert_decidefirst(TableState(8), layout(8, 4, [0, 0], CounterKind.WEIGHT),
                             K(9, 1, 6), bits(0))
    assert (out.cell, out.probes_total) == (1, 1)


# -- locallylinear ------------------------------------------------------------

def test_locallylinear_walks_inside_block():
    t = table(8, {0, 4, 5, 6})
    lay = layout(8, 4, [1, 3])
    out = insert_locallylinear(t, lay, K(9, 0, 5), bits())
    assert (out.cell, out.probes_total) == (1, 2)
    assert lay.counters.tolist() == [2, 3]


def test_locallylinear_wraps_within_block():
    t = table(8, {3})
    out = insert_locallylinear(t, layout(8, 4, [1, 2]), K(9, 3, 5), bits())
    assert (out.cell, out.probes_total) == (0, 2)


def test_locallylinear_overflow():
    t = table(8, {0, 1, 2, 3})
    lay = layout(8, 4, [4, 0])
    out = insert_locallylinear(t, lay, K(9, 1, 2), bits())
    assert out.cell == 4 and out.landing_block == 0
    assert lay.counters.tolist() == [4, 1]


def test_locallylinear_tie():
    out = insert_locallylinear(TableState(8), layout(8, 4, [0, 0]), K(9, 1, 5), bits(0))
    assert (out.cell, out.probes_total) == (1, 1)


def test_short_last_block_judged_by_room():
    # block 2 holds two cells and has one key; block 0 has one key in three
    lay = layout(8, 3, [1, 0, 1])
    t = table(8, {0, 6})
    out = insert_locallylinear(t, lay, K(9, 1, 7), bits())
    assert out.cell == 1


# -- argument checks ----------------------------------------------------------

def test_blocked_strategy_needs_layout():
    with pytest.raises(InvalidParamsError):
        insert(Strategy.WALKFIRST, TableState(8), K(0, 1, 2))


def test_counter_kind_checked():
    with pytest.raises(InvalidParamsError):
        insert(Strategy.DECIDEFIRST, TableState(8), K(0, 1, 2), layout(8, 4, [0, 0]))


def test_insert_into_full_table():
    with pytest.raises(FullTableError):
        insert_classic(table(4, range(4)), K(9, 0, 0))


def test_tie_stream_exhaustion():
    with pytest.raises(IndexError):
        insert_smallcluster(table(8, {1, 5}), K(9, 1, 5), bits())


def test_parse():
    assert Strategy.parse("WalkFirst") is Strategy.WALKFIRST
    with pytest.raises(InvalidParamsError):
        Strategy.parse("cuckoo")


# -- searches -----------------------------------------------------------------

def test_search_shortseq():
    t = table(8, {3})
    insert_shortseq(t, K(7, 3, 5))
    assert search_successful(Strategy.SHORTSEQ, t, K(7, 3, 5)) == 2


def test_search_classic_at_home():
    t = TableState(8)
    insert_classic(t, K(0, 4, 1))
    assert search_successful(Strategy.CLASSIC, t, K(0, 4, 1)) == 1


def test_search_walkfirst():
    t = table(8, {0, 1, 2, 4})
    t.place(5, 9)
    lay = layout(8, 4, [3, 2])
    assert search_successful(Strategy.WALKFIRST, t, K(9, 0, 4), lay) == 4


def test_search_missing_key():
    with pytest.raises(KeyNotFoundError):
        search_successful(Strategy.SHORTSEQ, table(8, {3}), K(9, 3, 5))


@pytest.mark.parametrize("strategy", [Strategy.SHORTSEQ, Strategy.SMALLCLUSTER,
                                      Strategy.WALKFIRST, Strategy.DECIDEFIRST])
def test_unsuccessful_both_empty(strategy):
    assert search_unsuccessful(strategy, TableState(8), K(0, 1, 5)) == 2
    assert search_unsuccessful(strategy, TableState(8), K(0, 3, 3)) == 1


def test_unsuccessful_bound_instance():
    t = table(8, {0, 1, 2, 4, 5})
    assert cluster_census(t).max_size == 3
    for i in range(8):
        for j in range(8):
            assert search_unsuccessful(Strategy.SHORTSEQ, t, K(0, i, j)) <= 8


# -- properties over random builds --------------------------------------------

def build(strategy, n, beta, pairs, tie_bits):
    t = TableState(n)
    lay = BlockLayout(n, beta, strategy.counter_kind) if strategy.blocked else None
    ties = TieBits(tie_bits)
    outs = [insert(strategy, t, K(k, i, j), lay, ties) for k, (i, j) in enumerate(pairs)]
    return t, lay, ties, outs


cases = st.tuples(
    st.sampled_from(list(Strategy)),
    st.integers(4, 48),
    st.integers(1, 9),
    st.data())


@settings(max_examples=300, deadline=None)
@given(cases)
def test_every_key_findable_and_counters_consistent(case):
    strategy, n, beta, data = case
    beta = min(beta, n)
    m = data.draw(st.integers(1, n - 1))
    pairs = data.draw(st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)),
                               min_size=m, max_size=m))
    tie_bits = data.draw(st.lists(st.integers(0, 1), min_size=m, max_size=m))
    t, lay, ties, outs = build(strategy, n, beta, pairs, tie_bits)

    assert t.occupied_count == m
    assert ties.consumed <= m
    assert sorted(o.cell for o in outs) == sorted(t.occupied())
    for k, (i, j) in enumerate(pairs):
        assert t.cells[outs[k].cell] == k
        assert search_successful(strategy, t, K(k, i, j), lay) >= 1
        assert outs[k].probes_total >= outs[k].probes_winning >= 1
    if strategy.counter_kind is CounterKind.LOAD:
        from twoway_probing.blocking import recount_loads
        assert lay.counters.tolist() == recount_loads(t.cells, lay.beta).tolist()
    elif strategy is Strategy.DECIDEFIRST:
        assert lay.counters.sum() == m
    bound = 2 * cluster_census(t).max_size + 2
    i, j = data.draw(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)))
    if strategy is not Strategy.LOCALLYLINEAR:
        assert search_unsuccessful(strategy, t, K(0, i, j), lay) <= bound


@settings(max_examples=100, deadline=None)
@given(st.integers(4, 40).flatmap(lambda n: st.tuples(
    st.just(n), st.lists(st.integers(0, n - 1), min_size=1, max_size=n - 1))), st.randoms())
def test_classic_occupancy_ignores_order(case, rnd):
    n, starts = case
    t, *_ = build(Strategy.CLASSIC, n, n, [(s, 0) for s in starts], [])
    shuffled = list(starts)
    rnd.shuffle(shuffled)
    u, *_ = build(Strategy.CLASSIC, n, n, [(s, 0) for s in shuffled], [])
    assert t.occupied() == u.occupied()
