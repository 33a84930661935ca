# scalepop/engine/settlements.py
import numpy as np

from .models import PendingSettlement


class SettlementRing:
    """
    Кольцевой буфер отложенных расчётов на h тиков вперёд.

    Слот t mod h хранит решения, выданные на тике t, вместе с поколением
    агента на момент выдачи; на тике t + h тот же слот читается и затем
    перезаписывается новыми решениями.
    """

    def __init__(self, h: int, n_agents: int):
        self.h = h
        self.decision = np.zeros((h, n_agents), dtype=np.int8)
        self.generation = np.zeros((h, n_agents), dtype=np.int64)
        self.issued = np.full(h, -1, dtype=np.int64)

    def due(self, t: int) -> tuple[np.ndarray, np.ndarray] | None:
        """Решения и поколения, срок которых наступает на тике t (выданы на t − h)."""
        slot = t % self.h
        if self.issued[slot] != t - self.h:
            return None
        return self.decision[slot], self.generation[slot]

    def push(self, t: int, decisions: np.ndarray, generations: np.ndarray) -> None:
        slot = t % self.h
        self.decision[slot] = decisions
        self.generation[slot] = generations
        self.issued[slot] = t

    def clear(self, t: int) -> None:
        """Слот тика t больше не содержит расчётов (конец данных)."""
        self.issued[t % self.h] = -1

    def pending(self) -> list[PendingSettlement]:
        """Все ещё не рассчитанные решения (s ≠ 0), по возрастанию (issued_tick, agent_id)."""
        items = []
        for slot in np.argsort(self.issued):
            issued = int(self.issued[slot])
            if issued < 0:
                continue
            for agent_id in np.flatnonzero(self.decision[slot]):
                items.append(PendingSettlement(
                    agent_id=int(agent_id),
                    generation=int(self.generation[slot, agent_id]),
                    decision=int(self.decision[slot, agent_id]),
                    issued_tick=issued,
                    due_tick=issued + self.h,
                ))
        return items
