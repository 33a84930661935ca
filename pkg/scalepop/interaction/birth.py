# scalepop/interaction/birth.py
import math

import numpy as np


def bm_birth_scale(rng: np.random.Generator, merchant_scale: int, sigma: float, l_min: int, l_max: int) -> int:
    """
    Масштаб новорождённого в стратегии BM-TF.

    Одна гауссова выборка N(merchant_scale, sigma²), округление до целого
    и ограничение отрезком [l_min, l_max] (без перевыборки).
    """
    draw = rng.normal(merchant_scale, sigma)
    return clamp_scale(draw, l_min, l_max)


def clamp_scale(value: float, l_min: int, l_max: int) -> int:
    """Округление до ближайшего целого (половина вверх) и ограничение [l_min, l_max]."""
    return int(min(max(math.floor(value + 0.5), l_min), l_max))
