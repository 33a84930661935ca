# scalepop/stats/report.py
import logging
import math
from dataclasses import dataclass

import numpy as np

from scalepop.core.config import DEATHRATE_FIT_RANGES, LIFETIME_FIT_RANGES, PA_BANDS
from scalepop.core.exceptions import ConfigError, ContractViolation, InsufficientDataError
from .distributions import (
    deaths_per_tick_hist,
    fit_effective_index,
    lifetime_hist,
    lifetime_scale_hist2d,
    log_bins,
    merge_distributions,
)
from .models import DistributionEstimate, IndexFit
from .transient import prediction_accuracy

logger = logging.getLogger(__name__)

NO_BAND = (math.nan, math.nan)


@dataclass
class RunReport:
    """Все измерения одного прогона, готовые к выгрузке."""
    strategy: str
    h: int
    ticks: int
    t1: int
    mean_utility_t1: float
    pa: float
    pa_band: tuple[float, float]
    deaths: int
    survivors: int
    censored_max_age: int
    censored_in_fit_range: int
    lifetimes: DistributionEstimate
    lifetime_fit: IndexFit
    lifetime_density_fit: IndexFit
    deathrates: DistributionEstimate
    deathrate_fit: IndexFit
    hist2d: np.ndarray
    lifetime_bins: np.ndarray
    scale_bins: np.ndarray

    def summary_rows(self, audit=None) -> list[tuple[str, object]]:
        rows = [
            ("strategy", self.strategy),
            ("h", self.h),
            ("ticks", self.ticks),
            ("t1", self.t1),
            ("mean_utility_t1", self.mean_utility_t1),
            ("pa", self.pa),
            ("pa_band_lo", self.pa_band[0]),
            ("pa_band_hi", self.pa_band[1]),
            ("deaths", self.deaths),
            ("survivors", self.survivors),
            ("censored_max_age", self.censored_max_age),
            ("censored_in_fit_range", self.censored_in_fit_range),
        ]
        for name, fit in (
            ("lifetime_ccdf", self.lifetime_fit),
            ("lifetime_density", self.lifetime_density_fit),
            ("deathrate", self.deathrate_fit),
        ):
            rows += [
                (f"{name}_index", fit.effective_index),
                (f"{name}_fit_lo", fit.fit_range[0]),
                (f"{name}_fit_hi", fit.fit_range[1]),
                (f"{name}_residual", fit.fit_residual),
                (f"{name}_bins", fit.n_bins),
            ]
        if audit is not None:
            rows += [
                ("settled", audit.settled),
                ("correct", audit.correct),
                ("wrong", audit.wrong),
                ("delta_sum", audit.delta_sum),
                ("passive_agent_ticks", audit.passive),
            ]
        return rows


def _safe_fit(dist: DistributionEstimate, fit_range: tuple[float, float], form: str, label: str) -> IndexFit:
    try:
        return fit_effective_index(dist, fit_range, form=form)
    except InsufficientDataError as e:
        logger.warning(f"Индекс '{label}' не определён: {e}")
        lo, hi = fit_range
        return IndexFit(effective_index=math.nan, fit_residual=math.nan, fit_range=(float(lo), float(hi)), n_bins=0)


def _pa_sample(samples, length: int, t1: int | None):
    if t1 is None:
        return samples[-1]
    if not 1 <= t1 < length:
        raise ConfigError(f"t1={t1} вне диапазона данных [1, {length - 1}]")
    for sample in reversed(samples):
        if sample.tick == t1:
            return sample
    raise ContractViolation(f"Нет выборки средних на тике t1={t1}: передайте его в simulate(sample_at=...)")


def build_report(
    result,
    t1: int | None = None,
    lifetime_range: tuple[float, float] | None = None,
    deathrate_range: tuple[float, float] | None = None,
) -> RunReport:
    """
    Сборка измерений по результату симуляции (engine.SimulationResult).

    Args:
        result: Результат симуляции.
        t1: Тик для PA, на нём должна быть выборка средних; по умолчанию последний тик.
        lifetime_range: Диапазон аппроксимации времён жизни (по умолчанию из пресета стратегии).
        deathrate_range: Диапазон аппроксимации смертностей.

    Raises:
        ConfigError: t1 вне [1, T − 1].
    """
    config = result.config
    sample = _pa_sample(result.samples, result.length, t1)
    if sample.tick >= 1:
        pa = prediction_accuracy(sample.mean_utility, sample.tick)
    else:
        logger.warning("Ряд из одного тика: точность предсказания не определена")
        pa = math.nan

    lifetime_range = lifetime_range or LIFETIME_FIT_RANGES[config.strategy]
    deathrate_range = deathrate_range or DEATHRATE_FIT_RANGES[config.strategy]

    upper = max(result.length, config.l_max, 10)
    lifetime_bins = log_bins(1, upper)
    scale_bins = log_bins(config.l_min, max(config.l_max, config.l_min + 1))

    censored_ages = result.censored_ages
    lifetimes = lifetime_hist(result.deaths, bins=lifetime_bins, censored_ages=censored_ages)
    lifetime_fit = _safe_fit(lifetimes, lifetime_range, "ccdf", "lifetime_ccdf")
    lifetime_density_fit = _safe_fit(lifetimes, lifetime_range, "density", "lifetime_density")
    lifetimes = lifetimes.with_fit(lifetime_fit)

    deathrates = deaths_per_tick_hist(result.deaths, result.length)
    deathrate_fit = _safe_fit(deathrates, deathrate_range, "density", "deathrate")
    deathrates = deathrates.with_fit(deathrate_fit)

    report = RunReport(
        strategy=config.strategy,
        h=config.h,
        ticks=result.length,
        t1=sample.tick,
        mean_utility_t1=sample.mean_utility,
        pa=pa,
        pa_band=PA_BANDS.get(config.h, NO_BAND),
        deaths=len(result.deaths),
        survivors=result.survivors,
        censored_max_age=int(censored_ages.max()),
        censored_in_fit_range=int(np.count_nonzero(censored_ages >= lifetime_range[0])),
        lifetimes=lifetimes,
        lifetime_fit=lifetime_fit,
        lifetime_density_fit=lifetime_density_fit,
        deathrates=deathrates,
        deathrate_fit=deathrate_fit,
        hist2d=lifetime_scale_hist2d(result.deaths, lifetime_bins, scale_bins),
        lifetime_bins=lifetime_bins,
        scale_bins=scale_bins,
    )
    logger.info(
        f"PA={pa:.6f} (t1={sample.tick}), смертей {report.deaths}, "
        f"индексы: lifetime={lifetime_fit.effective_index:.3f}, deathrate={deathrate_fit.effective_index:.3f}"
    )
    if report.censored_in_fit_range:
        logger.warning(
            f"{report.censored_in_fit_range} живых агентов старше {lifetime_range[0]} тиков: "
            f"хвост CCDF оценён с цензурированием"
        )
    return report


def merge_lifetime_estimates(dists: list[DistributionEstimate], fit_range: tuple[float, float]) -> DistributionEstimate:
    """Сумма распределений времён жизни нескольких прогонов с пересчитанным индексом CCDF."""
    merged = merge_distributions(*dists)
    return merged.with_fit(_safe_fit(merged, fit_range, "ccdf", "lifetime_ccdf"))
