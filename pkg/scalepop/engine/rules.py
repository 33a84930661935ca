# scalepop/engine/rules.py
import numpy as np


def tf_decision(p_now: float, p_lagged: float) -> int:
    """Решение трендследователя: +1 (покупка) при p(t) > p(t − l_i), иначе −1."""
    return 1 if p_now > p_lagged else -1


def tf_decisions(prices: np.ndarray, t: int, scales: np.ndarray, all_active: bool = False) -> np.ndarray:
    """
    Предварительные решения s_pr всей популяции на тике t.

    Агенты с t − l_i < 0 воздерживаются (0). all_active=True означает,
    что t ≥ max(l_i), и проверка разгона пропускается.
    """
    lag = t - scales
    if all_active:
        return (prices[t] > prices[lag]).view(np.int8) * 2 - 1
    warm = lag < 0
    lag[warm] = 0
    decisions = (prices[t] > prices[lag]).view(np.int8) * 2 - 1
    decisions[warm] = 0
    return decisions


def discretize(p_at_t: float, p_at_t_plus_h: float) -> int:
    """δp(t + h): +1 при p(t) ≤ p(t + h), иначе −1."""
    return 1 if p_at_t <= p_at_t_plus_h else -1


def settle(u: int, s: int, dp: int) -> int:
    """u_i(t + h) = u_i(t) + s_i(t)·δp(t + h)."""
    return u + s * dp


def spawn_uniform(rng: np.random.Generator, l_min: int, l_max: int) -> int:
    """Масштаб новорождённого, равномерно на [l_min, l_max] включительно (один вызов генератора)."""
    return int(rng.integers(l_min, l_max, endpoint=True))
