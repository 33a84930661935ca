# scalepop/stats/export.py
import csv
import logging
import math
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np
import openpyxl

from .models import DeathEvent, DistributionEstimate, TransientSample
from .report import RunReport

logger = logging.getLogger(__name__)

TRANSIENT_CSV = "transient.csv"
DEATHS_CSV = "deaths.csv"
LIFETIME_CSV = "lifetime_dist.csv"
DEATHRATE_CSV = "deathrate_dist.csv"
LIFETIME_SCALE_CSV = "lifetime_scale.csv"
SUMMARY_CSV = "summary.csv"
REPORT_XLSX = "report.xlsx"


def _fmt(value) -> str:
    """Детерминированное текстовое представление значения ячейки."""
    if isinstance(value, (bool, np.bool_)):
        return str(int(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if math.isnan(value):
            return "nan"
        return repr(value)
    return str(value)


def _log10(values: np.ndarray) -> list[float]:
    with np.errstate(divide="ignore"):
        logs = np.log10(np.asarray(values, dtype=np.float64))
    return [v if np.isfinite(v) else math.nan for v in logs.tolist()]


def _write_csv(path: Path, header: Sequence[str], rows: Iterable[Sequence]) -> Path:
    with path.open("w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])
    logger.debug(f"Записан файл {path}")
    return path


def transient_table(samples: Sequence[TransientSample]) -> tuple[list[str], list[list]]:
    header = ["tick", "mean_utility", "mean_age", "deaths_cum", "passive_fraction"]
    rows = [[s.tick, s.mean_utility, s.mean_age, s.deaths_so_far, s.passive_fraction] for s in samples]
    return header, rows


def deaths_table(deaths: Sequence[DeathEvent]) -> tuple[list[str], list[list]]:
    header = ["tick", "lifetime", "scale", "agent_id", "generation"]
    rows = [[d.tick, d.lifetime, d.scale, d.agent_id, d.generation] for d in deaths]
    return header, rows


def lifetime_table(dist: DistributionEstimate) -> tuple[list[str], list[list]]:
    header = ["bin_lo", "bin_hi", "bin_center", "count", "density", "ccdf", "log10_center", "log10_density", "log10_ccdf"]
    rows = list(zip(
        dist.bin_edges[:-1].tolist(),
        dist.bin_edges[1:].tolist(),
        dist.centers.tolist(),
        dist.counts.tolist(),
        dist.densities.tolist(),
        dist.ccdf.tolist(),
        _log10(dist.centers),
        _log10(dist.densities),
        _log10(dist.ccdf),
    ))
    return header, rows


def deathrate_table(report: RunReport) -> tuple[list[str], list[list]]:
    dist = report.deathrates
    header = ["count", "ticks", "density", "log10_count", "log10_density"]
    rows = list(zip(
        dist.centers.astype(np.int64).tolist(),
        dist.counts.tolist(),
        dist.densities.tolist(),
        _log10(dist.centers),
        _log10(dist.densities),
    ))
    return header, rows


def lifetime_scale_table(report: RunReport) -> tuple[list[str], list[list]]:
    """Совместное распределение: сырые счётчики и нормированная плотность."""
    counts = report.hist2d
    lt, sc = report.lifetime_bins, report.scale_bins
    area = np.outer(np.diff(lt), np.diff(sc))
    total = counts.sum()
    density = counts / area / total if total else np.zeros_like(area)
    header = ["lifetime_lo", "lifetime_hi", "scale_lo", "scale_hi", "count", "density"]
    rows = []
    for i, j in zip(*np.nonzero(counts)):
        rows.append([lt[i], lt[i + 1], sc[j], sc[j + 1], counts[i, j], density[i, j]])
    return header, rows


def write_run_outputs(output_dir: str | Path, result, report: RunReport) -> list[Path]:
    """
    Выгрузка всех CSV прогона в output_dir.

    Returns:
        list[Path]: Записанные файлы.
    """
    output_dir = Path(output_dir)
    output_dir.mkdir(parents=True, exist_ok=True)
    tables = {
        TRANSIENT_CSV: transient_table(result.samples),
        DEATHS_CSV: deaths_table(result.deaths),
        LIFETIME_CSV: lifetime_table(report.lifetimes),
        DEATHRATE_CSV: deathrate_table(report),
        LIFETIME_SCALE_CSV: lifetime_scale_table(report),
        SUMMARY_CSV: (["metric", "value"], report.summary_rows(result.audit)),
    }
    written = [_write_csv(output_dir / name, header, rows) for name, (header, rows) in tables.items()]
    logger.info(f"Результаты прогона записаны в {output_dir} ({len(written)} файлов)")
    return written


def export_report_to_excel(output_dir: str | Path, result, report: RunReport) -> Path:
    """
    Экспорт результатов прогона в Excel: по листу на каждую таблицу.

    Таблица смертей не выгружается, если в ней больше строк, чем допускает лист.
    """
    logger.info("Начало экспорта отчёта в Excel.")
    workbook = openpyxl.Workbook()
    sheet = workbook.active
    sheet.title = "summary"
    sheet.append(["metric", "value"])
    for metric, value in report.summary_rows(result.audit):
        sheet.append([metric, value if not isinstance(value, float) or math.isfinite(value) else None])

    tables = {
        "transient": transient_table(result.samples),
        "lifetime_dist": lifetime_table(report.lifetimes),
        "deathrate_dist": deathrate_table(report),
        "lifetime_scale": lifetime_scale_table(report),
        "deaths": deaths_table(result.deaths),
    }
    for title, (header, rows) in tables.items():
        if len(rows) >= 1_048_575:
            logger.warning(f"Лист '{title}' пропущен: {len(rows)} строк не помещаются в Excel")
            continue
        ws = workbook.create_sheet(title=title)
        ws.append(header)
        for row in rows:
            ws.append([None if isinstance(v, float) and not math.isfinite(v) else v for v in row])

    path = Path(output_dir) / REPORT_XLSX
    workbook.save(path)
    logger.info(f"Экспорт отчёта завершён. Файл сохранён по пути: {path}")
    return path


def write_merged_outputs(output_dir: str | Path, lifetimes: DistributionEstimate, runs: int) -> list[Path]:
    """Выгрузка объединённого по репликам распределения времён жизни и его индекса."""
    output_dir = Path(output_dir)
    output_dir.mkdir(parents=True, exist_ok=True)
    lo, hi = lifetimes.fit_range or (math.nan, math.nan)
    summary = [
        ("runs", runs),
        ("deaths", lifetimes.total),
        ("censored", lifetimes.censored),
        ("lifetime_ccdf_index", lifetimes.effective_index if lifetimes.effective_index is not None else math.nan),
        ("lifetime_ccdf_fit_lo", lo),
        ("lifetime_ccdf_fit_hi", hi),
        ("lifetime_ccdf_residual", lifetimes.fit_residual if lifetimes.fit_residual is not None else math.nan),
    ]
    written = [
        _write_csv(output_dir / LIFETIME_CSV, *lifetime_table(lifetimes)),
        _write_csv(output_dir / SUMMARY_CSV, ["metric", "value"], summary),
    ]
    logger.info(f"Объединённое распределение {runs} прогонов записано в {output_dir}")
    return written
