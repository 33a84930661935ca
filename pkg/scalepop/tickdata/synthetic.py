# scalepop/tickdata/synthetic.py
import logging

import numpy as np

from scalepop.core.config import SYNTH_MODELS
from scalepop.core.exceptions import EmptyInputError, TickDataError
from .models import MidSeries, TickQuotes

logger = logging.getLogger(__name__)

_MODEL_ALIASES = {
    "coin": "coin",
    "iid-coin-walk": "coin",
    "gaussian": "gaussian",
    "gaussian-walk": "gaussian",
}


def synth_series(
    length: int,
    model: str = "coin",
    step: float = 1e-4,
    p0: float = 1.0,
    seed: int = 0,
) -> MidSeries:
    """
    Синтетический ряд средних цен для тестов и калибровки.

    coin: p(t+1) = p(t) ± step с равной вероятностью (целочисленное блуждание,
    цена = p0 + step·k); gaussian: приращения step·N(0, 1).
    При фиксированном seed ряд воспроизводится бит в бит.

    Если блуждание уходит к неположительным ценам, p0 поднимается так,
    чтобы минимум ряда был равен step.
    """
    if length < 1:
        raise EmptyInputError("Длина синтетического ряда должна быть ≥ 1")
    kind = _MODEL_ALIASES.get(model)
    if kind is None:
        raise TickDataError(f"Неизвестная модель ряда '{model}', доступны: {', '.join(SYNTH_MODELS)}")
    if step <= 0:
        raise TickDataError("Шаг синтетического ряда должен быть > 0")

    rng = np.random.default_rng(seed)
    walk = np.zeros(length, dtype=np.int64 if kind == "coin" else np.float64)
    if length > 1:
        if kind == "coin":
            moves = rng.integers(0, 2, size=length - 1, dtype=np.int64) * 2 - 1
        else:
            moves = rng.standard_normal(length - 1)
        np.cumsum(moves, out=walk[1:])

    lowest = p0 + step * float(walk.min())
    if lowest <= 0:
        shifted = step * (1.0 - float(walk.min()))
        logger.warning(f"p0={p0} даёт неположительные цены, p0 поднят до {shifted}")
        p0 = shifted

    prices = p0 + step * walk
    logger.debug(f"Синтетический ряд {kind}: length={length}, step={step}, seed={seed}")
    return MidSeries(prices)


def synth_quotes(series: MidSeries, spread: float = 0.0) -> TickQuotes:
    """Котировки bid/ask с постоянным спредом вокруг ряда (mid_price восстанавливает ряд с точностью до округления)."""
    half = spread / 2.0
    bid = series.prices - half
    if np.any(bid <= 0):
        raise TickDataError(f"Спред {spread} слишком велик для ряда: bid становится ≤ 0")
    return TickQuotes(bid=bid, ask=series.prices + half)
