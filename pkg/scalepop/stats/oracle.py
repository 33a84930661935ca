# scalepop/stats/oracle.py
import logging

import numpy as np

logger = logging.getLogger(__name__)


def gamblers_ruin_lifetimes(n_runs: int, u_born: int = 10, max_steps: int = 10_000, seed: int = 0) -> tuple[np.ndarray, int]:
    """
    Независимый Монте-Карло эталон времён жизни: честное блуждание ±1
    из u_born до поглощения в нуле.

    Блуждания, не поглощённые за max_steps шагов, считаются цензурированными.

    Returns:
        (lifetimes, censored): времена поглощения и число цензурированных блужданий.
    """
    rng = np.random.default_rng(seed)
    wealth = np.full(n_runs, u_born, dtype=np.int64)
    index = np.arange(n_runs)
    lifetimes = np.zeros(n_runs, dtype=np.int64)

    for step_no in range(1, max_steps + 1):
        if index.size == 0:
            break
        wealth += rng.integers(0, 2, size=index.size, dtype=np.int64) * 2 - 1
        ruined = wealth == 0
        if ruined.any():
            lifetimes[index[ruined]] = step_no
            index = index[~ruined]
            wealth = wealth[~ruined]

    logger.debug(f"Эталон разорения: {n_runs} блужданий, цензурировано {index.size}")
    return lifetimes[lifetimes > 0], int(index.size)


def binned_deviation(sample: np.ndarray, reference: np.ndarray, bins: np.ndarray) -> float:
    """
    Максимальное по бинам отклонение долей двух выборок в единицах σ
    (двухвыборочный z-критерий для долей с объединённой оценкой).
    """
    a, _ = np.histogram(sample, bins=bins)
    b, _ = np.histogram(reference, bins=bins)
    n_a, n_b = a.sum(), b.sum()
    if n_a == 0 or n_b == 0:
        return float("inf")
    pooled = (a + b) / (n_a + n_b)
    sigma = np.sqrt(pooled * (1 - pooled) * (1 / n_a + 1 / n_b))
    mask = sigma > 0
    z = np.abs(a[mask] / n_a - b[mask] / n_b) / sigma[mask]
    return float(z.max()) if z.size else 0.0
