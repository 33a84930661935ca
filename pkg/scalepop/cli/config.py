# scalepop/cli/config.py
import itertools
import logging
import os
from pathlib import Path
from typing import Any, Iterable, Mapping

from dotenv import dotenv_values
from pydantic import ValidationError

from scalepop.core import config as settings
from scalepop.core.config import DEFAULT_SIM, PRESETS
from scalepop.core.exceptions import ConfigError
from scalepop.engine.models import SimConfig
from .models import DataSource, RunSpec

logger = logging.getLogger(__name__)

CONFIG_PREFIX = "SCALEPOP_"

# имя флага -> поле SimConfig
SIM_FLAGS = {
    "h": "h",
    "n_tf": "n_tf",
    "u_born": "u_born",
    "l_min": "l_min",
    "l_max": "l_max",
    "sigma": "mutation_sigma",
    "seed": "seed",
    "sample_every": "sample_every",
    "strategy": "strategy",
    "merchant": "merchant_mode",
}
RUN_FLAGS = (
    "data", "columns", "synthetic", "preset", "t1", "fit_range",
    "deathrate_fit_range", "out", "xlsx", "sweep", "workers",
)
CONFIG_KEYS = set(SIM_FLAGS) | set(RUN_FLAGS)

# ключи, допустимые в --sweep (имя флага или поле SimConfig)
SWEEP_KEYS = {**SIM_FLAGS, **{field: field for field in SIM_FLAGS.values()}}

_SYNTH_ALIASES = {"coin": "coin", "iid-coin-walk": "coin", "gaussian": "gaussian", "gaussian-walk": "gaussian"}


def read_config_file(path: str | Path) -> dict[str, str]:
    """Чтение файла конфигурации в формате .env (ключи SCALEPOP_*)."""
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"Файл конфигурации не найден: {path}")
    values = {}
    for key, value in dotenv_values(path).items():
        name = key[len(CONFIG_PREFIX):].lower() if key.startswith(CONFIG_PREFIX) else None
        if name not in CONFIG_KEYS:
            raise ConfigError(f"Неизвестный ключ '{key}' в {path}")
        if value is None:
            raise ConfigError(f"Ключ '{key}' в {path} задан без значения")
        values[name] = value
    logger.debug(f"Прочитано {len(values)} ключей из {path}")
    return values


def parse_synthetic(text: str) -> DataSource:
    """Разбор описания вида "coin:length=1000000,seed=7[,step=...,p0=...]"."""
    model, _, rest = text.partition(":")
    kind = _SYNTH_ALIASES.get(model.strip().lower())
    if kind is None:
        raise ConfigError(f"Неизвестная модель синтетического ряда '{model}'")
    options: dict[str, Any] = {}
    for item in filter(None, (part.strip() for part in rest.split(","))):
        key, sep, value = item.partition("=")
        if not sep or key not in ("length", "seed", "step", "p0"):
            raise ConfigError(f"Неверный параметр синтетического ряда '{item}'")
        options[key] = value
    try:
        return DataSource(kind="synthetic", model=kind, **options)
    except ValidationError as e:
        raise ConfigError(f"Синтетический ряд '{text}': {_errors(e)}") from None


def parse_range(text: str | tuple) -> tuple[float, float]:
    """Разбор диапазона "LO:HI"."""
    if isinstance(text, tuple):
        return text
    lo, sep, hi = str(text).partition(":")
    try:
        if not sep:
            raise ValueError
        return float(lo), float(hi)
    except ValueError:
        raise ConfigError(f"Диапазон должен иметь вид LO:HI, получено '{text}'") from None


def parse_sweep(items: Iterable[str] | str) -> dict[str, list[str]]:
    """Разбор "h=1,100,1000" (несколько ключей через ';' или повтором флага)."""
    if isinstance(items, str):
        items = items.split(";")
    sweep: dict[str, list[str]] = {}
    for item in filter(None, (part.strip() for part in items)):
        key, sep, values = item.partition("=")
        key = key.strip().replace("-", "_")
        if not sep or key not in SWEEP_KEYS:
            raise ConfigError(f"Неверный ключ развёртки '{item}', допустимы: {', '.join(sorted(SIM_FLAGS))}")
        field = SWEEP_KEYS[key]
        values_list = [v.strip() for v in values.split(",") if v.strip()]
        if not values_list:
            raise ConfigError(f"Пустой список значений в развёртке '{item}'")
        sweep[field] = values_list
    return sweep


def sweep_combinations(sweep: Mapping[str, list[str]]) -> list[dict[str, str]]:
    keys = list(sweep)
    return [dict(zip(keys, combo)) for combo in itertools.product(*(sweep[k] for k in keys))]


def sim_with(sim: SimConfig, updates: Mapping[str, Any]) -> SimConfig:
    try:
        return SimConfig.model_validate({**sim.model_dump(), **updates})
    except ValidationError as e:
        raise ConfigError(f"Недопустимые параметры {dict(updates)}: {_errors(e)}") from None


def _errors(error: ValidationError) -> str:
    return "; ".join(
        f"{'.'.join(str(p) for p in item['loc']) or 'значение'}: {item['msg']}" for item in error.errors()
    )


def resolve_run_spec(params: Mapping[str, Any]) -> RunSpec:
    """
    Разрешение спецификации запуска по слоям:
    флаги > файл конфигурации > пресет > встроенные значения.

    Args:
        params: Значения флагов (None, если флаг не задан) и путь к файлу под ключом "config".

    Raises:
        ConfigError: неизвестный ключ, недопустимое значение или нет источника данных.
    """
    flags = {k: v for k, v in params.items() if k != "config" and v is not None and v != ()}
    file_values = read_config_file(params["config"]) if params.get("config") else {}
    layered = {**file_values, **flags}

    preset = layered.get("preset")
    sim_values: dict[str, Any] = dict(DEFAULT_SIM)
    if preset is not None:
        if preset not in PRESETS:
            raise ConfigError(f"Неизвестный пресет '{preset}', доступны: {', '.join(PRESETS)}")
        sim_values.update(PRESETS[preset])
        logger.info(f"Применён пресет {preset}")
    for flag, field in SIM_FLAGS.items():
        if flag in layered:
            sim_values[field] = layered[flag]

    data, synthetic = layered.get("data"), layered.get("synthetic")
    if data is not None and synthetic is not None:
        raise ConfigError("Укажите только один источник данных: --data или --synthetic")
    if synthetic is not None:
        source = parse_synthetic(str(synthetic))
    elif data is not None:
        source = DataSource(kind="file", path=Path(data), columns=layered.get("columns", "ts,bid,ask"))
    else:
        raise ConfigError("Не задан источник данных: --data PATH или --synthetic SPEC")

    output_dir = layered.get("out") or os.getenv("SCALEPOP_OUT") or settings.SCALEPOP_OUT
    sweep = parse_sweep(layered["sweep"]) if "sweep" in layered else None

    try:
        spec = RunSpec(
            data_source=source,
            sim=SimConfig.model_validate(sim_values),
            t1_override=layered.get("t1"),
            output_dir=Path(output_dir),
            preset=preset,
            lifetime_fit_range=parse_range(layered["fit_range"]) if "fit_range" in layered else None,
            deathrate_fit_range=(
                parse_range(layered["deathrate_fit_range"]) if "deathrate_fit_range" in layered else None
            ),
            xlsx=layered.get("xlsx", False),
            sweep=sweep,
            workers=layered.get("workers"),
        )
    except ValidationError as e:
        raise ConfigError(_errors(e)) from None

    if spec.t1_override is not None and source.kind == "synthetic" and spec.t1_override >= source.length:
        raise ConfigError(f"t1={spec.t1_override} вне диапазона данных [1, {source.length - 1}]")
    if spec.sweep:
        for combo in sweep_combinations(spec.sweep):
            sim_with(spec.sim, combo)
    return spec


def _quote(value: Any) -> str:
    text = repr(value) if isinstance(value, float) else str(value)
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def render_resolved_config(spec: RunSpec) -> str:
    """Текст разрешённой конфигурации в формате .env; пригоден для --config."""
    lines = ["# scalepop: разрешённая конфигурация запуска"]

    def put(name: str, value: Any) -> None:
        lines.append(f"{CONFIG_PREFIX}{name.upper()}={_quote(value)}")

    source = spec.data_source
    if source.kind == "file":
        put("data", source.path)
        put("columns", source.columns)
    else:
        put("synthetic", source.describe())
    if spec.preset:
        put("preset", spec.preset)
    for flag, field in SIM_FLAGS.items():
        put(flag, getattr(spec.sim, field))
    if spec.t1_override is not None:
        put("t1", spec.t1_override)
    if spec.lifetime_fit_range is not None:
        put("fit_range", f"{spec.lifetime_fit_range[0]!r}:{spec.lifetime_fit_range[1]!r}")
    if spec.deathrate_fit_range is not None:
        put("deathrate_fit_range", f"{spec.deathrate_fit_range[0]!r}:{spec.deathrate_fit_range[1]!r}")
    put("out", spec.output_dir)
    put("xlsx", int(spec.xlsx))
    if spec.sweep:
        put("sweep", ";".join(f"{k}={','.join(v)}" for k, v in spec.sweep.items()))
    if spec.workers is not None:
        put("workers", spec.workers)
    return "\n".join(lines) + "\n"
