# scalepop/cli/runner.py
import logging
import math
import os
import shutil
import tempfile
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from scalepop.core.config import LIFETIME_FIT_RANGES, PRESET_T1, SWEEP_WORKERS
from scalepop.core.exceptions import ConfigError
from scalepop.engine import simulate
from scalepop.stats import (
    DistributionEstimate,
    build_report,
    export_report_to_excel,
    merge_lifetime_estimates,
    write_merged_outputs,
    write_run_outputs,
)
from scalepop.tickdata import MidSeries, load_ticks, mid_price, synth_series
from .config import render_resolved_config, sim_with, sweep_combinations
from .models import DataSource, RunSpec

logger = logging.getLogger(__name__)

RESOLVED_CONFIG = "resolved_config.env"


@dataclass
class RunOutcome:
    """Итог прогона: код выхода, записанные файлы, строка сводки и распределение времён жизни."""
    exit_status: int
    output_dir: Path
    files: list[Path] = field(default_factory=list)
    summary: str = ""
    lifetimes: DistributionEstimate | None = None


def load_series(source: DataSource) -> MidSeries:
    """Ряд средних цен из файла котировок или синтетического блуждания."""
    if source.kind == "file":
        return mid_price(load_ticks(source.path, source.columns))
    return synth_series(source.length, model=source.model, step=source.step, p0=source.p0, seed=source.seed)


def resolve_t1(spec: RunSpec, length: int) -> int | None:
    """
    Тик для PA: явный --t1, иначе t1 пресета, если ряд достаточно длинный.

    None означает последний тик ряда.

    Raises:
        ConfigError: явный t1 ≥ T.
    """
    if spec.t1_override is not None:
        if spec.t1_override >= length:
            raise ConfigError(f"t1={spec.t1_override} вне диапазона данных [1, {length - 1}]")
        return spec.t1_override
    if spec.preset is not None:
        if PRESET_T1 < length:
            return PRESET_T1
        logger.info(f"Ряд из {length} тиков короче t1 пресета ({PRESET_T1}), PA считается на последнем тике")
    return None


def _fmt_index(value: float) -> str:
    return "nan" if math.isnan(value) else f"{value:.3f}"


def run(spec: RunSpec) -> RunOutcome:
    """
    Один прогон: данные → симуляция → статистика → файлы.

    Файлы пишутся во временный каталог рядом с output_dir и переносятся
    только после успешной записи всех; при ошибке частичные результаты удаляются.
    """
    logger.info(f"Запуск прогона: {spec.data_source.describe()} -> {spec.output_dir}")
    series = load_series(spec.data_source)
    t1 = resolve_t1(spec, series.length)
    result = simulate(series, spec.sim, sample_at=() if t1 is None else (t1,))
    report = build_report(
        result,
        t1=t1,
        lifetime_range=spec.lifetime_fit_range,
        deathrate_range=spec.deathrate_fit_range,
    )

    output_dir = spec.output_dir
    output_dir.parent.mkdir(parents=True, exist_ok=True)
    created = not output_dir.exists()
    staging = Path(tempfile.mkdtemp(prefix=f".{output_dir.name}.", dir=output_dir.parent))
    files: list[Path] = []
    try:
        staged = write_run_outputs(staging, result, report)
        if spec.xlsx:
            staged.append(export_report_to_excel(staging, result, report))
        config_path = staging / RESOLVED_CONFIG
        config_path.write_text(render_resolved_config(spec), encoding="utf-8")
        staged.append(config_path)

        output_dir.mkdir(parents=True, exist_ok=True)
        for path in staged:
            target = output_dir / path.name
            os.replace(path, target)
            files.append(target)
    except Exception:
        for path in files:
            path.unlink(missing_ok=True)
        if created and output_dir.exists() and not any(output_dir.iterdir()):
            output_dir.rmdir()
        logger.exception(f"Ошибка записи результатов в {output_dir}, частичные файлы удалены")
        raise
    finally:
        shutil.rmtree(staging, ignore_errors=True)

    summary = (
        f"PA={report.pa:.6f} survivors={report.survivors} deaths={report.deaths} "
        f"lifetime_index={_fmt_index(report.lifetime_fit.effective_index)} "
        f"deathrate_index={_fmt_index(report.deathrate_fit.effective_index)}"
    )
    logger.info(f"Прогон завершён: {summary}")
    return RunOutcome(exit_status=0, output_dir=output_dir, files=files, summary=summary, lifetimes=report.lifetimes)


def _combo_name(combo: dict[str, str]) -> str:
    return "_".join(f"{key}={value}" for key, value in combo.items())


def sweep_specs(spec: RunSpec) -> list[RunSpec]:
    """Дочерние спецификации развёртки: по подкаталогу на комбинацию значений."""
    return [
        spec.model_copy(update={
            "sim": sim_with(spec.sim, combo),
            "output_dir": spec.output_dir / _combo_name(combo),
            "sweep": None,
        })
        for combo in sweep_combinations(spec.sweep or {})
    ]


def merge_seed_replicas(spec: RunSpec, outcomes: list[RunOutcome]) -> list[Path]:
    """
    Объединение распределений времён жизни по репликам seed.

    Прогоны, отличающиеся только seed, суммируются в каталог
    `<прочие ключи>_merged` (или `merged`, если развёртка только по seed).
    """
    groups: dict[str, list[tuple[RunSpec, RunOutcome]]] = {}
    for combo, child, outcome in zip(sweep_combinations(spec.sweep or {}), sweep_specs(spec), outcomes):
        rest = _combo_name({k: v for k, v in combo.items() if k != "seed"})
        groups.setdefault(rest, []).append((child, outcome))

    written = []
    for rest, members in groups.items():
        child = members[0][0]
        fit_range = child.lifetime_fit_range or LIFETIME_FIT_RANGES[child.sim.strategy]
        merged = merge_lifetime_estimates([outcome.lifetimes for _, outcome in members], fit_range)
        target = spec.output_dir / (f"{rest}_merged" if rest else "merged")
        written += write_merged_outputs(target, merged, runs=len(members))
    return written


def run_sweep(spec: RunSpec) -> list[RunOutcome]:
    """
    Развёртка по параметрам; прогоны независимы и идут в отдельных процессах.

    Внутри прогона порядок строго последовательный. При развёртке по
    нескольким seed распределения времён жизни реплик дополнительно объединяются.
    """
    children = sweep_specs(spec)
    workers = spec.workers or SWEEP_WORKERS
    logger.info(f"Развёртка: {len(children)} прогонов, процессов: {workers or 'по числу CPU'}")
    spec.output_dir.mkdir(parents=True, exist_ok=True)
    (spec.output_dir / RESOLVED_CONFIG).write_text(render_resolved_config(spec), encoding="utf-8")
    if workers == 1:
        outcomes = [run(child) for child in children]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(run, children))

    if len((spec.sweep or {}).get("seed", [])) > 1:
        merge_seed_replicas(spec, outcomes)
    return outcomes
