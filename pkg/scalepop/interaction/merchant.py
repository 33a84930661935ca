# scalepop/interaction/merchant.py
import logging
from typing import Sequence

import numpy as np

from scalepop.core.exceptions import ContractViolation
from .models import Candidate, MerchantState

logger = logging.getLogger(__name__)


def merchant_decide_arrays(
    utility: np.ndarray,
    scale: np.ndarray,
    s_pr: np.ndarray,
    mode: str,
    previous: MerchantState,
) -> MerchantState:
    """
    Решение торговца по срезу популяции (индекс массива = id агента).

    Кандидаты: агенты с s_pr ≠ 0. argmax: решение агента с наибольшей
    полезностью (при равенстве берётся наименьший id); weighted: sign(Σ u_i·s_pr_i),
    ноль трактуется как +1. Источник в обоих режимах: argmax-кандидат.
    Без кандидатов: решение 0, масштаб остаётся прежним.
    """
    ids = np.flatnonzero(s_pr)
    if ids.size == 0:
        return MerchantState(decision=0, source_agent=previous.source_agent, source_scale=previous.source_scale)

    best = int(ids[np.argmax(utility[ids])])
    if mode == "argmax":
        decision = int(s_pr[best])
    elif mode == "weighted":
        total = np.dot(utility[ids], s_pr[ids].astype(utility.dtype))
        decision = 1 if total >= 0 else -1
    else:
        raise ContractViolation(f"Неизвестный режим торговца: {mode}")
    return MerchantState(decision=decision, source_agent=best, source_scale=int(scale[best]))


def merchant_decide(
    candidates: Sequence[Candidate],
    mode: str = "argmax",
    previous: MerchantState | None = None,
) -> MerchantState:
    """
    Решение торговца по списку кандидатов (id, utility, scale, s_pr[, age]).

    Args:
        candidates: Агенты, принявшие предварительное решение на этом тике.
        mode: "argmax" или "weighted".
        previous: Предыдущее состояние торговца (нужно, если кандидатов нет).
    """
    if not candidates:
        if previous is None:
            raise ContractViolation("Нет кандидатов и нет предыдущего состояния торговца")
        return MerchantState(decision=0, source_agent=previous.source_agent, source_scale=previous.source_scale)

    order = sorted(candidates, key=lambda c: c.id)
    utility = np.array([c.utility for c in order])
    scale = np.array([c.scale for c in order], dtype=np.int64)
    s_pr = np.array([c.s_pr for c in order], dtype=np.int8)
    if np.any(s_pr == 0):
        raise ContractViolation("Кандидаты торговца должны иметь s_pr ∈ {−1, +1}")

    state = merchant_decide_arrays(utility, scale, s_pr, mode, previous or MerchantState(0, -1, int(scale[0])))
    # индексы массивов -> id агентов
    return MerchantState(decision=state.decision, source_agent=order[state.source_agent].id, source_scale=state.source_scale)
