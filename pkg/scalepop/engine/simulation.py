# scalepop/engine/simulation.py
import logging
from dataclasses import dataclass, field
from typing import Callable, Iterable

import numpy as np

from scalepop.interaction import MerchantState, bm_birth_scale, merchant_decide_arrays, rm_gate_arrays
from scalepop.stats.models import DeathEvent, TransientSample
from scalepop.stats.transient import sample_transient
from scalepop.tickdata.models import MidSeries
from .models import SimConfig
from .population import Population, kill_and_respawn
from .rules import discretize, spawn_uniform, tf_decisions
from .settlements import SettlementRing

logger = logging.getLogger(__name__)

# (популяция, s_pr, предыдущее состояние торговца, конфигурация) -> новое состояние
MerchantFn = Callable[[Population, np.ndarray, MerchantState, SimConfig], MerchantState]


def default_merchant(population: Population, s_pr: np.ndarray, previous: MerchantState, config: SimConfig) -> MerchantState:
    return merchant_decide_arrays(population.utility, population.scale, s_pr, config.merchant_mode, previous)


@dataclass
class AuditCounters:
    """Счётчики для проверки баланса полезности."""
    issued: int = 0
    settled: int = 0
    correct: int = 0
    wrong: int = 0
    delta_sum: int = 0
    discarded: int = 0
    passive: int = 0
    abstained: int = 0


@dataclass
class SimulationResult:
    config: SimConfig
    length: int
    population: Population
    merchant: MerchantState
    samples: list[TransientSample] = field(default_factory=list)
    deaths: list[DeathEvent] = field(default_factory=list)
    audit: AuditCounters = field(default_factory=AuditCounters)

    @property
    def final_sample(self) -> TransientSample:
        return self.samples[-1]

    @property
    def survivors(self) -> int:
        """Агенты исходного поколения, дожившие до конца данных."""
        return int(np.count_nonzero(self.population.generation == 0))

    @property
    def censored_ages(self) -> np.ndarray:
        """Возрасты живых воплощений на последнем тике (цензурированные времена жизни)."""
        return self.population.ages(self.length - 1)


class Simulation:
    """
    Мир симуляции: ряд цен, популяция, отложенные расчёты, торговец.

    Порядок внутри тика фиксирован: расчёт → смерти/рождения → решения →
    торговец → фильтр RM → постановка расчётов → статистика.
    """

    def __init__(
        self,
        series: MidSeries,
        config: SimConfig,
        merchant: MerchantFn | None = None,
        sample_at: Iterable[int] = (),
    ):
        self.config = config
        self.prices = series.prices
        self.length = series.length
        self.rng = np.random.default_rng(config.seed)

        scales = np.array(
            [spawn_uniform(self.rng, config.l_min, config.l_max) for _ in range(config.n_tf)],
            dtype=np.int64,
        )
        self.population = Population(scales, config.u_born)
        self.ring = SettlementRing(config.h, config.n_tf)
        self.merchant = MerchantState.initial(config.l_min, config.l_max)
        self._merchant_fn = (merchant or default_merchant) if config.interacting else None

        self.samples: list[TransientSample] = []
        self.deaths: list[DeathEvent] = []
        self.audit = AuditCounters()
        self._last_death = -1
        self._sample_at = frozenset(sample_at)

    def step(self, t: int) -> None:
        cfg = self.config
        pop = self.population
        prices = self.prices
        audit = self.audit

        # 1. расчёт решений, выданных на t − h
        due = self.ring.due(t)
        if due is not None:
            decisions, generations = due
            delta = decisions * discretize(prices[t - cfg.h], prices[t])
            if self._last_death > t - cfg.h:
                # умершие после выдачи решения: их расчёты отбрасываются
                stale = (generations != pop.generation) & (delta != 0)
                if stale.any():
                    audit.discarded += int(np.count_nonzero(stale))
                    delta = np.where(stale, 0, delta).astype(np.int8)

            settled = int(np.count_nonzero(delta))
            if settled:
                balance = int(delta.sum())
                pop.utility += delta
                audit.settled += settled
                audit.correct += (settled + balance) // 2
                audit.wrong += (settled - balance) // 2
                audit.delta_sum += balance
                if settled != balance:
                    dead = np.flatnonzero(pop.utility == 0)
                    if dead.size:
                        self._respawn(dead, t)

        # 2. предварительные решения
        all_active = t >= cfg.l_max
        s_pr = tf_decisions(prices, t, pop.scale, all_active=all_active)
        abstained = 0 if all_active else int(np.count_nonzero(s_pr == 0))
        audit.abstained += abstained

        # 3. торговец
        if self._merchant_fn is not None:
            self.merchant = self._merchant_fn(pop, s_pr, self.merchant, cfg)

        # 4. фильтр рекомендаций
        passive = 0
        if cfg.gated:
            s = rm_gate_arrays(s_pr, self.merchant.decision)
            passive = int(np.count_nonzero(s == 0)) - abstained
            audit.passive += passive
        else:
            s = s_pr

        # 5. постановка расчётов (только если срок внутри данных)
        if t + cfg.h < self.length:
            self.ring.push(t, s, pop.generation)
            audit.issued += int(np.count_nonzero(s))
        else:
            self.ring.clear(t)

        # 6. статистика
        if t % cfg.sample_every == 0 or t == self.length - 1 or t in self._sample_at:
            self.samples.append(sample_transient(pop, t, len(self.deaths), passive / cfg.n_tf))

    def _respawn(self, dead: np.ndarray, t: int) -> None:
        cfg = self.config
        for i in dead.tolist():
            if cfg.merchant_births:
                scale = bm_birth_scale(self.rng, self.merchant.source_scale, cfg.mutation_sigma, cfg.l_min, cfg.l_max)
            else:
                scale = spawn_uniform(self.rng, cfg.l_min, cfg.l_max)
            event, successor = kill_and_respawn(self.population.agent(i), t, scale, cfg.u_born)
            self.population.store(successor)
            self.deaths.append(event)
        self._last_death = t

    def run(self) -> SimulationResult:
        cfg = self.config
        logger.info(
            f"Старт симуляции: T={self.length}, N_TF={cfg.n_tf}, h={cfg.h}, "
            f"стратегия={cfg.strategy}, торговец={cfg.merchant_mode}, seed={cfg.seed}"
        )
        progress_every = max(self.length // 10, 1)
        for t in range(self.length):
            self.step(t)
            if t and t % progress_every == 0:
                logger.debug(f"Тик {t}/{self.length}: смертей {len(self.deaths)}")

        result = SimulationResult(
            config=cfg,
            length=self.length,
            population=self.population,
            merchant=self.merchant,
            samples=self.samples,
            deaths=self.deaths,
            audit=self.audit,
        )
        logger.info(
            f"Симуляция завершена: смертей {len(self.deaths)}, "
            f"выживших основателей {result.survivors}, ū={result.final_sample.mean_utility:.2f}"
        )
        return result


def step(world: Simulation, t: int) -> Simulation:
    """Один тик мира; возвращает тот же мир."""
    world.step(t)
    return world


def simulate(
    series: MidSeries,
    config: SimConfig,
    merchant: MerchantFn | None = None,
    sample_at: Iterable[int] = (),
) -> SimulationResult:
    """
    Прогон популяции по всему ряду цен.

    sample_at: дополнительные тики выборки средних (например, t1 для PA).
    """
    return Simulation(series, config, merchant=merchant, sample_at=sample_at).run()
