# scalepop/engine/models.py
from dataclasses import dataclass, replace
from typing import Literal

from pydantic import BaseModel, ConfigDict, Field, model_validator

from scalepop.core.config import DEFAULT_SIM

Strategy = Literal["independent", "bm", "rm", "bm_rm"]
MerchantMode = Literal["argmax", "weighted"]


class SimConfig(BaseModel):
    """
    Параметры одной симуляции популяции TF-агентов.

    Значения по умолчанию берутся из DEFAULT_SIM (core/config.py).
    """
    model_config = ConfigDict(frozen=True, extra="forbid")

    n_tf: int = Field(DEFAULT_SIM["n_tf"], ge=1, description="Размер популяции")
    u_born: int = Field(DEFAULT_SIM["u_born"], ge=1, description="Начальная полезность")
    h: int = Field(DEFAULT_SIM["h"], ge=1, description="Горизонт предсказания, тиков")
    l_min: int = Field(DEFAULT_SIM["l_min"], ge=1, description="Минимальный масштаб")
    l_max: int = Field(DEFAULT_SIM["l_max"], ge=1, description="Максимальный масштаб")
    strategy: Strategy = DEFAULT_SIM["strategy"]
    mutation_sigma: float = Field(DEFAULT_SIM["mutation_sigma"], gt=0, description="Дисперсия масштаба при рождении (BM)")
    merchant_mode: MerchantMode = DEFAULT_SIM["merchant_mode"]
    seed: int = Field(DEFAULT_SIM["seed"], ge=0)
    sample_every: int = Field(DEFAULT_SIM["sample_every"], ge=1, description="Шаг выборки средних, тиков")

    @model_validator(mode="after")
    def _check_scale_bounds(self) -> "SimConfig":
        if self.l_min > self.l_max:
            raise ValueError(f"l_min ({self.l_min}) не может превышать l_max ({self.l_max})")
        return self

    @property
    def interacting(self) -> bool:
        """Есть ли торговец (M-агент) в этой стратегии."""
        return self.strategy != "independent"

    @property
    def merchant_births(self) -> bool:
        return self.strategy in ("bm", "bm_rm")

    @property
    def gated(self) -> bool:
        return self.strategy in ("rm", "bm_rm")

    @property
    def midpoint_scale(self) -> int:
        return (self.l_min + self.l_max) // 2


@dataclass(frozen=True)
class AgentState:
    """Одно воплощение TF-агента: масштаб l_i фиксирован до смерти."""
    id: int
    generation: int
    scale: int
    utility: int
    birth_tick: int

    @property
    def alive(self) -> bool:
        return self.utility > 0

    def age(self, t: int) -> int:
        """Возраст τ_i(t) = t − birth_tick."""
        return t - self.birth_tick

    def with_utility(self, utility: int) -> "AgentState":
        return replace(self, utility=utility)


@dataclass(frozen=True)
class PendingSettlement:
    """Решение, ожидающее вознаграждения через h тиков."""
    agent_id: int
    generation: int
    decision: int
    issued_tick: int
    due_tick: int
