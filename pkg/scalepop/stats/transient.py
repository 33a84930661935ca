# scalepop/stats/transient.py
import numpy as np

from scalepop.core.exceptions import ContractViolation
from .models import TransientSample


def sample_transient(population, t: int, deaths_so_far: int = 0, passive_fraction: float = 0.0) -> TransientSample:
    """
    Мгновенные средние на тике t.

    ū(t) = Σ u_i(t) / N_TF, τ̄(t) = Σ (t − birth_tick_i) / N_TF.

    Args:
        population: Объект с массивами utility и birth_tick (engine.Population).
        t: Текущий тик.
        deaths_so_far: Накопленное число смертей.
        passive_fraction: Доля агентов, переведённых в пассивное состояние на этом тике.
    """
    n = len(population.utility)
    return TransientSample(
        tick=t,
        mean_utility=float(np.sum(population.utility)) / n,
        mean_age=float(np.sum(t - population.birth_tick)) / n,
        deaths_so_far=deaths_so_far,
        passive_fraction=passive_fraction,
    )


def prediction_accuracy(mean_utility_at_t1: float, t1: int) -> float:
    """PA = (t₁ + ū(t₁)) / (2·t₁)."""
    if t1 < 1:
        raise ContractViolation(f"Точность предсказания не определена при t1={t1}")
    return (t1 + mean_utility_at_t1) / (2 * t1)
