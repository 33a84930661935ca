# scalepop/engine/population.py
import numpy as np

from scalepop.core.exceptions import ContractViolation
from scalepop.stats.models import DeathEvent
from .models import AgentState


class Population:
    """
    Популяция фиксированного размера в колоночном виде (индекс = id агента).

    utility, scale, birth_tick, generation: целочисленные массивы длины n_tf.
    """

    def __init__(self, scales: np.ndarray, u_born: int):
        n = len(scales)
        self.u_born = u_born
        self.scale = np.asarray(scales, dtype=np.int64).copy()
        self.utility = np.full(n, u_born, dtype=np.int64)
        self.birth_tick = np.zeros(n, dtype=np.int64)
        self.generation = np.zeros(n, dtype=np.int64)

    def __len__(self) -> int:
        return int(self.scale.size)

    def agent(self, i: int) -> AgentState:
        return AgentState(
            id=i,
            generation=int(self.generation[i]),
            scale=int(self.scale[i]),
            utility=int(self.utility[i]),
            birth_tick=int(self.birth_tick[i]),
        )

    def store(self, agent: AgentState) -> None:
        i = agent.id
        self.generation[i] = agent.generation
        self.scale[i] = agent.scale
        self.utility[i] = agent.utility
        self.birth_tick[i] = agent.birth_tick

    def ages(self, t: int) -> np.ndarray:
        return t - self.birth_tick

    def agents(self) -> list[AgentState]:
        return [self.agent(i) for i in range(len(self))]


def kill_and_respawn(agent: AgentState, death_tick: int, birth_scale: int, u_born: int) -> tuple[DeathEvent, AgentState]:
    """
    Смерть воплощения с нулевой полезностью и рождение преемника с тем же id.

    Returns:
        (DeathEvent, AgentState): событие смерти и преемник (generation + 1,
        utility = u_born, birth_tick = death_tick, scale = birth_scale).

    Raises:
        ContractViolation: агент ещё жив (utility > 0).
    """
    if agent.utility != 0:
        raise ContractViolation(f"Агент {agent.id} (поколение {agent.generation}) жив: utility={agent.utility}")
    event = DeathEvent(
        tick=death_tick,
        lifetime=death_tick - agent.birth_tick,
        scale=agent.scale,
        agent_id=agent.id,
        generation=agent.generation,
    )
    successor = AgentState(
        id=agent.id,
        generation=agent.generation + 1,
        scale=birth_scale,
        utility=u_born,
        birth_tick=death_tick,
    )
    return event, successor
