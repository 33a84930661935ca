# scalepop/stats/distributions.py
import logging
import math
from typing import Iterable, Sequence

import numpy as np

from scalepop.core.config import BINS_PER_DECADE
from scalepop.core.exceptions import ContractViolation, InsufficientDataError
from .models import DeathEvent, DistributionEstimate, IndexFit

logger = logging.getLogger(__name__)

MIN_FIT_BINS = 3


def log_bins(lo: float, hi: float, per_decade: int = BINS_PER_DECADE) -> np.ndarray:
    """Логарифмические границы бинов, покрывающие [lo, hi], per_decade бинов на декаду."""
    if lo <= 0 or hi < lo:
        raise ContractViolation(f"Некорректный диапазон бинов [{lo}, {hi}]")
    k0 = math.floor(math.log10(lo) * per_decade + 1e-9)
    k1 = math.ceil(math.log10(hi) * per_decade - 1e-9)
    if k1 <= k0:
        k1 = k0 + 1
    return 10.0 ** (np.arange(k0, k1 + 1) / per_decade)


def _check_edges(edges: np.ndarray) -> np.ndarray:
    edges = np.asarray(edges, dtype=np.float64)
    if edges.ndim != 1 or edges.size < 2 or np.any(np.diff(edges) <= 0):
        raise ContractViolation("Границы бинов должны строго возрастать")
    return edges


def empirical_ccdf(values: np.ndarray, x: np.ndarray | float) -> np.ndarray | float:
    """Доля значений строго больше x."""
    values = np.sort(np.asarray(values))
    if values.size == 0:
        return np.zeros_like(np.asarray(x, dtype=np.float64))
    above = values.size - np.searchsorted(values, x, side="right")
    return above / values.size


def kaplan_meier_ccdf(lifetimes: np.ndarray, censored_ages: np.ndarray, x: np.ndarray | float) -> np.ndarray:
    """
    Оценка Каплана–Мейера P(L > x) при правом цензурировании.

    Цензурированный агент в возрасте c входит в группу риска для всех t ≤ c.
    """
    events = np.sort(np.asarray(lifetimes))
    censored = np.sort(np.asarray(censored_ages))
    x = np.asarray(x, dtype=np.float64)
    if events.size == 0:
        return np.full(x.shape, 1.0 if censored.size else 0.0)

    times, died = np.unique(events, return_counts=True)
    at_risk = (events.size - np.searchsorted(events, times, side="left")) + (
        censored.size - np.searchsorted(censored, times, side="left")
    )
    survival = np.cumprod(1.0 - died / at_risk)
    idx = np.searchsorted(times, x, side="right") - 1
    return np.where(idx >= 0, survival[np.maximum(idx, 0)], 1.0)


def _as_arrays(deaths: Iterable[DeathEvent]) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    deaths = list(deaths)
    ticks = np.fromiter((d.tick for d in deaths), dtype=np.int64, count=len(deaths))
    lifetimes = np.fromiter((d.lifetime for d in deaths), dtype=np.int64, count=len(deaths))
    scales = np.fromiter((d.scale for d in deaths), dtype=np.int64, count=len(deaths))
    return ticks, lifetimes, scales


def lifetime_hist(
    deaths: Sequence[DeathEvent],
    bins: np.ndarray | None = None,
    censored_survivors: int = 0,
    censored_ages: np.ndarray | None = None,
) -> DistributionEstimate:
    """
    Распределение завершённых времён жизни на логарифмических бинах.

    Цензурированные выжившие в плотность не входят, только в поле censored.
    Дополнительно считается CCDF P(L > x) в центрах бинов: по завершённым
    временам жизни или, если переданы возрасты цензурированных агентов,
    оценкой Каплана–Мейера.
    """
    _, lifetimes, _ = _as_arrays(deaths)
    if bins is None:
        bins = log_bins(1, max(int(lifetimes.max()), 10) if lifetimes.size else 10)
    edges = _check_edges(bins)

    counts, _ = np.histogram(lifetimes, bins=edges)
    centers = np.sqrt(edges[:-1] * edges[1:])
    if censored_ages is None:
        ccdf = np.asarray(empirical_ccdf(lifetimes, centers), dtype=np.float64)
    else:
        ccdf = kaplan_meier_ccdf(lifetimes, censored_ages, centers)
    return DistributionEstimate(
        bin_edges=edges,
        counts=counts,
        densities=counts / np.diff(edges),
        centers=centers,
        ccdf=ccdf,
        censored=censored_survivors if censored_ages is None else max(censored_survivors, len(censored_ages)),
    )


def deaths_per_tick_hist(deaths: Sequence[DeathEvent], total_ticks: int) -> DistributionEstimate:
    """
    Распределение числа смертей за тик (смертности).

    Учитываются только тики хотя бы с одной смертью; бины единичные,
    центр бина равен числу смертей k.
    """
    if total_ticks < 1:
        raise ContractViolation(f"Число тиков должно быть ≥ 1, получено {total_ticks}")
    ticks, _, _ = _as_arrays(deaths)
    if ticks.size and (ticks.min() < 0 or ticks.max() >= total_ticks):
        raise ContractViolation("Тик смерти вне диапазона данных")

    _, per_tick = np.unique(ticks, return_counts=True)
    top = int(per_tick.max()) if per_tick.size else 1
    counts = np.bincount(per_tick, minlength=top + 1)[1:]
    edges = np.arange(top + 1, dtype=np.float64) + 0.5
    return DistributionEstimate(
        bin_edges=edges,
        counts=counts,
        densities=counts / np.diff(edges),
        centers=np.arange(1, top + 1, dtype=np.float64),
    )


def deaths_per_tick(deaths: Sequence[DeathEvent]) -> tuple[np.ndarray, np.ndarray]:
    """Тики со смертями и число смертей на каждом из них."""
    ticks, _, _ = _as_arrays(deaths)
    return np.unique(ticks, return_counts=True)


def lifetime_scale_hist2d(deaths: Sequence[DeathEvent], lifetime_bins: np.ndarray, scale_bins: np.ndarray) -> np.ndarray:
    """Совместные счётчики (время жизни × масштаб); по строкам бины времени жизни."""
    lifetime_bins = _check_edges(lifetime_bins)
    scale_bins = _check_edges(scale_bins)
    _, lifetimes, scales = _as_arrays(deaths)
    counts, _, _ = np.histogram2d(lifetimes, scales, bins=[lifetime_bins, scale_bins])
    return counts.astype(np.int64)


def fit_effective_index(dist: DistributionEstimate, fit_range: tuple[float, float], form: str = "density") -> IndexFit:
    """
    Эффективный индекс: наклон МНК по (log10 центра бина, log10 значения)
    на непустых бинах, центры которых лежат в fit_range.

    Args:
        dist: Оценка распределения.
        fit_range: (lo, hi) по оси значений.
        form: "density" (плотность) или "ccdf" (дополнительная функция распределения).

    Raises:
        InsufficientDataError: в диапазоне меньше трёх непустых бинов.
    """
    lo, hi = fit_range
    values = dist.densities if form == "density" else dist.ccdf
    if values is None:
        raise InsufficientDataError(f"В распределении нет формы '{form}'")
    mask = (values > 0) & (dist.centers >= lo) & (dist.centers <= hi)
    n_bins = int(np.count_nonzero(mask))
    if n_bins < MIN_FIT_BINS:
        raise InsufficientDataError(f"В диапазоне [{lo}, {hi}] {n_bins} непустых бинов, нужно ≥ {MIN_FIT_BINS}")

    x = np.log10(dist.centers[mask])
    y = np.log10(values[mask])
    slope, intercept = np.polyfit(x, y, 1)
    residual = float(np.sqrt(np.mean((slope * x + intercept - y) ** 2)))
    return IndexFit(
        effective_index=float(slope),
        fit_residual=residual,
        fit_range=(float(lo), float(hi)),
        n_bins=n_bins,
        intercept=float(intercept),
    )


def merge_distributions(*dists: DistributionEstimate) -> DistributionEstimate:
    """
    Сумма гистограмм нескольких прогонов на одинаковых бинах.

    Ассоциативна и не зависит от порядка; CCDF пересчитывается как
    взвешенная по числу событий смесь.
    """
    if not dists:
        raise ContractViolation("Нечего объединять")
    edges = dists[0].bin_edges
    for d in dists[1:]:
        if d.bin_edges.shape != edges.shape or not np.allclose(d.bin_edges, edges):
            raise ContractViolation("Объединять можно только распределения на одинаковых бинах")

    counts = np.sum([d.counts for d in dists], axis=0)
    ccdf = None
    if all(d.ccdf is not None for d in dists):
        weights = np.array([d.total for d in dists], dtype=np.float64)
        if weights.sum() > 0:
            ccdf = np.sum([w * d.ccdf for w, d in zip(weights, dists)], axis=0) / weights.sum()
        else:
            ccdf = np.zeros_like(dists[0].ccdf)
    return DistributionEstimate(
        bin_edges=edges,
        counts=counts,
        densities=counts / np.diff(edges),
        centers=dists[0].centers,
        ccdf=ccdf,
        censored=sum(d.censored for d in dists),
    )
