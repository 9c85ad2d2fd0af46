import pytest

from twoway_probing import (BlockPolicy, ExperimentConfig, Policy, Strategy, TieBits,
                            greedy_mc, naive_replay, simulate)
from twoway_probing.oracles import (compare_greedy_mc, compare_replay, greedy_mc_seeded,
                                    naive_unsuccessful)


def test_greedy_mc_hand_example():
    out = greedy_mc(4, 4, 2, [(0, 1), (0, 1), (2, 3), (2, 3)], TieBits([0, 1, 0, 1]))
    assert out.loads == (1, 1, 1, 1) and out.max_load == 1


def test_greedy_mc_no_balls():
    out = greedy_mc(5, 0, 2, [])
    assert out.loads == (0,) * 5 and out.max_load == 0


def test_greedy_mc_single_choice_piles_up():
    assert greedy_mc(3, 4, 1, [(0,)] * 4).max_load == 4


def test_greedy_mc_same_bin_twice_costs_no_bit():
    ties = TieBits([1])
    greedy_mc(2, 1, 2, [(1, 1)], ties)
    assert ties.consumed == 0


def test_greedy_mc_seeded_is_reproducible():
    a = greedy_mc_seeded(16, 40, 2, 5)
    assert a == greedy_mc_seeded(16, 40, 2, 5)
    assert sum(a.loads) == 40


@pytest.mark.parametrize("strategy", list(Strategy))
@pytest.mark.parametrize("alpha", [0.4, 0.9])
def test_naive_replay_matches_compiled(strategy, alpha):
    for seed in range(3):
        cfg = ExperimentConfig(strategy, 2**10, alpha, master_seed=seed)
        assert compare_replay(cfg) == []


@pytest.mark.parametrize("strategy", list(Strategy))
def test_single_key_run(strategy):
    cfg = ExperimentConfig(strategy, 2**10, 0.0009765625, master_seed=3)
    assert cfg.m == 1
    slow = naive_replay(strategy, cfg.n, cfg.alpha, cfg.beta, 3)
    fast = simulate(cfg, 0, 0)
    assert fast.final_cells.tolist() == [slow.outcomes[0].cell]


def test_walkfirst_outcome_streams():
    cfg = ExperimentConfig(Strategy.WALKFIRST, 2**10, 0.9, master_seed=11)
    fast = simulate(cfg, 0, 0)
    slow = naive_replay(cfg.strategy, cfg.n, cfg.alpha, cfg.beta, 11)
    assert [o.cell for o in slow.outcomes] == fast.final_cells.tolist()
    assert [o.probes_total for o in slow.outcomes] == fast.insert_times.tolist()
    assert slow.metrics == fast.metrics()


def test_short_last_block_differential():
    # beta = 33 does not divide 1024
    policy = BlockPolicy(Policy.EXPLICIT, beta=33)
    for s in (Strategy.LOCALLYLINEAR, Strategy.WALKFIRST, Strategy.DECIDEFIRST):
        assert compare_replay(ExperimentConfig(s, 2**10, 0.9, policy, master_seed=2)) == []


@pytest.mark.parametrize("strategy", list(Strategy))
def test_unsuccessful_search_matches_naive(strategy):
    cfg = ExperimentConfig(strategy, 256, 0.9, master_seed=4)
    run = simulate(cfg, 0, 0)
    i = list(range(0, 256, 7))
    j = list(range(3, 256, 7))[:len(i)]
    i = i[:len(j)]
    fast = run.unsuccessful_searches(i, j).tolist()
    cells = [None if c < 0 else int(c) for c in run.table.cells]
    slow = [naive_unsuccessful(strategy, cells, cfg.beta or 256, a, b) for a, b in zip(i, j)]
    assert fast == slow


def test_greedy_mc_equivalence():
    cfg = ExperimentConfig(Strategy.LOCALLYLINEAR, 2**10, 0.4,
                           BlockPolicy(Policy.EXPLICIT, beta=16), master_seed=9)
    assert compare_greedy_mc(cfg) == []


def test_greedy_mc_equivalence_not_applicable():
    cfg = ExperimentConfig(Strategy.LOCALLYLINEAR, 2**10, 0.4,
                           BlockPolicy(Policy.EXPLICIT, beta=33))
    assert compare_greedy_mc(cfg) is None
    # tiny blocks overflow at high load
    cfg = ExperimentConfig(Strategy.LOCALLYLINEAR, 2**10, 0.9,
                           BlockPolicy(Policy.EXPLICIT, beta=2))
    assert compare_greedy_mc(cfg) is None


def test_greedy_mc_rejects_other_strategies():
    with pytest.raises(ValueError):
        compare_greedy_mc(ExperimentConfig(Strategy.WALKFIRST, 2**10, 0.4))
