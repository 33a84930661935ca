from __future__ import annotations

from pathlib import Path

import pytest

from scalepop.engine import SimConfig
from scalepop.tickdata import MidSeries, synth_series


@pytest.fixture
def write_ticks(tmp_path: Path):
    """Запись CSV с котировками во временный каталог."""

    def _write(text: str, name: str = "ticks.csv") -> Path:
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return path

    return _write


@pytest.fixture
def coin_series() -> MidSeries:
    return synth_series(20_000, model="coin", seed=7)


@pytest.fixture
def make_config():
    """Небольшая конфигурация симуляции с переопределяемыми полями."""

    def _make(**overrides) -> SimConfig:
        values = dict(n_tf=50, u_born=5, h=1, l_min=1, l_max=200, seed=3, sample_every=500)
        values.update(overrides)
        return SimConfig(**values)

    return _make
