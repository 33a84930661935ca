# scalepop/interaction/models.py
from dataclasses import dataclass
from typing import NamedTuple


class Candidate(NamedTuple):
    """Информация, которую торговец получает от TF-агента за тик."""
    id: int
    utility: float
    scale: int
    s_pr: int
    age: int | None = None  # τ_i(t); текущие режимы торговца его не используют


@dataclass(frozen=True)
class MerchantState:
    """
    Состояние торговца (M-агента).

    decision: рекомендация s_M (0 только пока ни один TF-агент не решал),
    source_agent, source_scale: агент, чьё решение принято, и «занятый» масштаб.
    """
    decision: int
    source_agent: int
    source_scale: int

    @classmethod
    def initial(cls, l_min: int, l_max: int) -> "MerchantState":
        return cls(decision=0, source_agent=-1, source_scale=(l_min + l_max) // 2)
