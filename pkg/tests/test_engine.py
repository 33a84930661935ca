import numpy as np
import pytest
from pydantic import ValidationError

from scalepop.core.exceptions import ContractViolation
from scalepop.engine import (
    AgentState,
    Population,
    SettlementRing,
    SimConfig,
    Simulation,
    discretize,
    kill_and_respawn,
    settle,
    simulate,
    spawn_uniform,
    step,
    tf_decision,
    tf_decisions,
)
from scalepop.tickdata import MidSeries, synth_series


def test_tf_decision():
    assert tf_decision(1.2003, 1.2001) == 1
    assert tf_decision(1.2001, 1.2001) == -1
    assert tf_decision(1.2000, 1.2001) == -1


def test_tf_decisions_abstain_during_warmup():
    prices = np.array([1.0, 2.0, 1.5, 3.0])
    scales = np.array([1, 2, 4], dtype=np.int64)

    decisions = tf_decisions(prices, 3, scales)

    assert decisions.tolist() == [1, 1, 0]
    assert decisions.dtype == np.int8


def test_discretize_and_settle():
    assert discretize(1.0, 1.0) == 1
    assert discretize(1.0, 0.5) == -1
    assert settle(10, 1, 1) == 11
    assert settle(1, 1, -1) == 0
    assert settle(5, 0, -1) == 5


def test_spawn_uniform_degenerate_range():
    rng = np.random.default_rng(0)

    assert {spawn_uniform(rng, 5, 5) for _ in range(100)} == {5}


def test_spawn_uniform_is_seeded():
    a = np.random.default_rng(9)
    b = np.random.default_rng(9)

    assert [spawn_uniform(a, 1, 100_000) for _ in range(50)] == [spawn_uniform(b, 1, 100_000) for _ in range(50)]


def test_spawn_uniform_decade_mass():
    rng = np.random.default_rng(2024)
    n = 1_000_000
    draws = np.array([spawn_uniform(rng, 1, 100_000) for _ in range(n)])

    assert draws.min() >= 1 and draws.max() <= 100_000
    for lo, hi in ((1, 9), (10, 99), (100, 999), (1000, 9999), (10_000, 100_000)):
        p = (hi - lo + 1) / 100_000
        observed = np.count_nonzero((draws >= lo) & (draws <= hi))
        sigma = np.sqrt(n * p * (1 - p))
        assert abs(observed - n * p) <= 4 * sigma, (lo, hi)


def test_kill_and_respawn():
    agent = AgentState(id=3, generation=0, scale=1000, utility=0, birth_tick=100)

    event, successor = kill_and_respawn(agent, 350, 777, 10)

    assert event.lifetime == 250
    assert (event.tick, event.scale, event.agent_id, event.generation) == (350, 1000, 3, 0)
    assert successor == AgentState(id=3, generation=1, scale=777, utility=10, birth_tick=350)


def test_kill_and_respawn_refuses_living_agent():
    with pytest.raises(ContractViolation):
        kill_and_respawn(AgentState(id=0, generation=2, scale=5, utility=1, birth_tick=0), 10, 5, 10)


def test_population_store_and_read_back():
    population = Population(np.array([4, 8, 16]), u_born=10)

    population.store(AgentState(id=1, generation=3, scale=42, utility=7, birth_tick=12))

    assert population.agent(1) == AgentState(id=1, generation=3, scale=42, utility=7, birth_tick=12)
    assert population.ages(20).tolist() == [20, 8, 20]
    assert [a.utility for a in population.agents()] == [10, 7, 10]


def test_settlement_ring_due_only_after_h_ticks():
    ring = SettlementRing(h=3, n_agents=2)
    ring.push(5, np.array([1, -1], dtype=np.int8), np.array([0, 4]))

    assert ring.due(6) is None
    decisions, generations = ring.due(8)
    assert decisions.tolist() == [1, -1]
    assert generations.tolist() == [0, 4]

    pending = ring.pending()
    assert [(p.agent_id, p.decision, p.issued_tick, p.due_tick) for p in pending] == [(0, 1, 5, 8), (1, -1, 5, 8)]

    ring.clear(8)
    assert ring.due(8) is None
    assert ring.pending() == []


def test_sim_config_validation():
    with pytest.raises(ValidationError):
        SimConfig(h=0)
    with pytest.raises(ValidationError):
        SimConfig(l_min=10, l_max=5)
    with pytest.raises(ValidationError):
        SimConfig(strategy="momentum")
    with pytest.raises(ValidationError):
        SimConfig(unknown=1)


def test_single_agent_hand_trace():
    series = MidSeries(np.array([1.0, 2.0, 3.0]))
    config = SimConfig(n_tf=1, u_born=10, h=1, l_min=1, l_max=1, sample_every=1)

    result = simulate(series, config)

    assert result.population.utility.tolist() == [11]
    assert result.audit.settled == 1
    assert result.audit.correct == 1
    assert result.audit.issued == 1
    assert [s.tick for s in result.samples] == [0, 1, 2]
    assert result.samples[-1].mean_utility == 11.0


def test_long_scale_agents_stay_passive_during_warmup():
    series = synth_series(50_000, seed=1)
    config = SimConfig(n_tf=3, u_born=10, h=1, l_min=100_000, l_max=100_000)

    result = simulate(series, config)

    assert result.deaths == []
    assert result.population.utility.tolist() == [10, 10, 10]
    assert result.audit.issued == 0
    assert result.audit.abstained == 3 * 50_000


def test_identical_scales_give_identical_trajectories(coin_series):
    config = SimConfig(n_tf=2, u_born=3, h=1, l_min=5, l_max=5)
    world = Simulation(coin_series, config)

    for t in range(coin_series.length):
        step(world, t)
        assert world.population.utility[0] == world.population.utility[1]

    assert len(world.deaths) % 2 == 0


def test_utility_moves_by_at_most_one_per_tick(coin_series, make_config):
    world = Simulation(coin_series, make_config(h=3, u_born=4))
    previous = world.population.utility.copy()
    generation = world.population.generation.copy()

    for t in range(coin_series.length):
        world.step(t)
        pop = world.population
        same = pop.generation == generation
        assert np.all(np.abs(pop.utility[same] - previous[same]) <= 1)
        assert np.all(pop.utility > 0)
        previous = pop.utility.copy()
        generation = pop.generation.copy()


def test_newborn_is_not_paid_for_predecessor_decisions(coin_series, make_config):
    h = 5
    world = Simulation(coin_series, make_config(h=h, u_born=1, n_tf=40, l_max=50))

    for t in range(coin_series.length):
        world.step(t)
        pop = world.population
        fresh = (pop.generation > 0) & (t - pop.birth_tick < h)
        assert np.all(pop.utility[fresh] == 1)

    assert len(world.deaths) > 0
    assert world.audit.discarded > 0


def test_no_settlements_remain_after_run(coin_series, make_config):
    world = Simulation(coin_series, make_config(h=7))

    world.run()

    assert world.ring.pending() == []


def test_pending_settlements_are_h_ticks_ahead(coin_series, make_config):
    world = Simulation(coin_series, make_config(h=4))

    for t in range(100):
        world.step(t)

    pending = world.ring.pending()
    assert pending
    assert all(p.due_tick - p.issued_tick == 4 for p in pending)
    assert {p.issued_tick for p in pending} <= {96, 97, 98, 99}


@pytest.mark.parametrize("strategy", ["independent", "bm", "rm", "bm_rm"])
def test_utility_conservation(coin_series, make_config, strategy):
    config = make_config(strategy=strategy, h=2, mutation_sigma=20.0)

    result = simulate(coin_series, config)

    audit = result.audit
    assert audit.settled == audit.correct + audit.wrong
    assert audit.delta_sum == audit.correct - audit.wrong
    expected = config.n_tf * config.u_born + audit.delta_sum + config.u_born * len(result.deaths)
    assert int(result.population.utility.sum()) == expected


@pytest.mark.parametrize("strategy", ["independent", "bm", "rm", "bm_rm"])
def test_runs_are_deterministic(coin_series, make_config, strategy):
    config = make_config(strategy=strategy, mutation_sigma=20.0)

    a = simulate(coin_series, config)
    b = simulate(coin_series, config)

    assert a.deaths == b.deaths
    assert a.samples == b.samples
    np.testing.assert_array_equal(a.population.scale, b.population.scale)


def test_merchant_not_consulted_for_independent_strategy(coin_series, make_config):
    def merchant(*args):
        raise AssertionError("торговец вызван в независимой стратегии")

    simulate(coin_series, make_config(), merchant=merchant)


def test_merchant_births_follow_pinned_merchant_scale(coin_series, make_config):
    from scalepop.interaction import MerchantState

    def pinned(population, s_pr, previous, config):
        return MerchantState(decision=1, source_agent=0, source_scale=50)

    config = make_config(strategy="bm", u_born=2, l_min=1, l_max=100, mutation_sigma=2.0)
    result = simulate(coin_series, config, merchant=pinned)

    newborn = result.population.generation > 0
    assert len(result.deaths) > 0
    assert np.all(np.abs(result.population.scale[newborn] - 50) <= 10)


def test_sampling_includes_last_tick(coin_series, make_config):
    result = simulate(coin_series, make_config(sample_every=3000))

    ticks = [s.tick for s in result.samples]
    assert ticks[0] == 0
    assert ticks[-1] == coin_series.length - 1
    assert all(t % 3000 == 0 for t in ticks[:-1])
    assert [s.deaths_so_far for s in result.samples] == sorted(s.deaths_so_far for s in result.samples)
