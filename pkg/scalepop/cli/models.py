# scalepop/cli/models.py
from pathlib import Path
from typing import Literal

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from scalepop.core.config import PRESETS
from scalepop.engine.models import SimConfig


class DataSource(BaseModel):
    """Источник ряда цен: тиковый файл или синтетическое блуждание."""
    model_config = ConfigDict(frozen=True, extra="forbid")

    kind: Literal["file", "synthetic"]
    path: Path | None = None
    columns: str = "ts,bid,ask"
    model: Literal["coin", "gaussian"] = "coin"
    length: int | None = Field(None, ge=1)
    step: float = Field(1e-4, gt=0)
    p0: float = Field(1.0, gt=0)
    seed: int = Field(0, ge=0)

    @model_validator(mode="after")
    def _check_kind(self) -> "DataSource":
        if self.kind == "file" and self.path is None:
            raise ValueError("для файлового источника нужен путь --data")
        if self.kind == "synthetic" and self.length is None:
            raise ValueError("для синтетического ряда нужна длина (length=N)")
        return self

    def describe(self) -> str:
        if self.kind == "file":
            return f"{self.path} [{self.columns}]"
        return f"{self.model}:length={self.length},seed={self.seed},step={self.step!r},p0={self.p0!r}"


class RunSpec(BaseModel):
    """Полностью разрешённая спецификация запуска."""
    model_config = ConfigDict(frozen=True, extra="forbid")

    data_source: DataSource
    sim: SimConfig
    t1_override: int | None = Field(None, ge=1)
    output_dir: Path
    preset: str | None = None
    lifetime_fit_range: tuple[float, float] | None = None
    deathrate_fit_range: tuple[float, float] | None = None
    xlsx: bool = False
    sweep: dict[str, list[str]] | None = None
    workers: int | None = Field(None, ge=1)

    @field_validator("preset")
    @classmethod
    def _known_preset(cls, value: str | None) -> str | None:
        if value is not None and value not in PRESETS:
            raise ValueError(f"неизвестный пресет '{value}', доступны: {', '.join(PRESETS)}")
        return value

    @field_validator("lifetime_fit_range", "deathrate_fit_range")
    @classmethod
    def _ordered_range(cls, value):
        if value is not None and not (0 < value[0] < value[1]):
            raise ValueError(f"диапазон аппроксимации должен быть 0 < LO < HI, получено {value}")
        return value
