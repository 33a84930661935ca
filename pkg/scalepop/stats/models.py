# scalepop/stats/models.py
from dataclasses import dataclass, replace

import numpy as np


@dataclass(frozen=True)
class TransientSample:
    """Мгновенные средние популяции на тике t."""
    tick: int
    mean_utility: float
    mean_age: float
    deaths_so_far: int
    passive_fraction: float


@dataclass(frozen=True)
class DeathEvent:
    """Смерть воплощения агента: прожитые тики и его масштаб."""
    tick: int
    lifetime: int
    scale: int
    agent_id: int
    generation: int


@dataclass(frozen=True)
class IndexFit:
    """Результат МНК-аппроксимации в координатах log10–log10."""
    effective_index: float
    fit_residual: float
    fit_range: tuple[float, float]
    n_bins: int
    intercept: float = 0.0


@dataclass(frozen=True, eq=False)
class DistributionEstimate:
    """
    Гистограмма распределения: границы бинов, счётчики, плотности
    (count / ширина бина) и, при наличии, CCDF в центрах бинов.
    """
    bin_edges: np.ndarray
    counts: np.ndarray
    densities: np.ndarray
    centers: np.ndarray
    ccdf: np.ndarray | None = None
    fit_range: tuple[float, float] | None = None
    effective_index: float | None = None
    fit_residual: float | None = None
    censored: int = 0

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    def with_fit(self, fit: IndexFit) -> "DistributionEstimate":
        return replace(
            self,
            fit_range=fit.fit_range,
            effective_index=fit.effective_index,
            fit_residual=fit.fit_residual,
        )
