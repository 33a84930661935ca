# scalepop/tickdata/loader.py
import csv
import io
import logging
import re
from pathlib import Path
from typing import Sequence

import numpy as np
import pandas as pd

from scalepop.core.exceptions import EmptyInputError, TickParseError
from .models import ColumnMap, MidSeries, TickQuote, TickQuotes

logger = logging.getLogger(__name__)

_LINE_RE = re.compile(r"line (\d+)")
_CONTENT_RE = re.compile(r"\S")


def _is_number(token: str) -> bool:
    try:
        float(token)
    except ValueError:
        return False
    return True


def _has_header(first_line: str, columns: ColumnMap) -> bool:
    """Заголовок определяется по нечисловому полю bid в первой строке."""
    fields = first_line.rstrip("\r\n").split(",")
    if len(fields) <= columns.bid:
        return False
    return not _is_number(fields[columns.bid].strip())


def _decode(raw: bytes, path: Path) -> str:
    try:
        return raw.decode("utf-8")
    except UnicodeDecodeError as e:
        line = raw.count(b"\n", 0, e.start) + 1
        raise TickParseError(line, f"недопустимая последовательность UTF-8 в {path} (байт {e.start})") from None


def _first_content_line(text: str) -> tuple[int, str] | None:
    """Номер (с нуля) и текст первой непустой строки."""
    match = _CONTENT_RE.search(text)
    if match is None:
        return None
    start = text.rfind("\n", 0, match.start()) + 1
    end = text.find("\n", start)
    return text.count("\n", 0, start), text[start:end if end >= 0 else len(text)]


def load_ticks(path: str | Path, columns: str | ColumnMap | None = None) -> TickQuotes:
    """
    Загрузка тикового файла `timestamp,bid,ask` (UTF-8, разделитель: запятая).

    Ведущие пустые строки пропускаются, заголовок ищется в первой непустой.

    Args:
        path: Путь к CSV-файлу.
        columns: Раскладка колонок ("ts,bid,ask" по умолчанию).

    Returns:
        TickQuotes: Котировки в порядке файла с последовательными tick_index.

    Raises:
        FileNotFoundError / OSError: файл недоступен.
        TickParseError: строка не разбирается или не в UTF-8 (с номером строки).
        EmptyInputError: нет ни одной валидной записи.
    """
    path = Path(path)
    columns = ColumnMap.parse(columns)
    if not path.exists():
        raise FileNotFoundError(f"Файл котировок не найден: {path}")

    text = _decode(path.read_bytes(), path)
    first = _first_content_line(text)
    if first is None:
        raise EmptyInputError(f"Файл {path} пуст")

    leading, first_line = first
    header = _has_header(first_line, columns)
    skip = leading + (1 if header else 0)
    offset = skip + 1  # номер строки файла для нулевой строки таблицы
    if header:
        logger.debug(f"В файле {path} обнаружена строка заголовка (строка {leading + 1})")

    try:
        frame = pd.read_csv(
            io.StringIO(text),
            header=None,
            skiprows=skip,
            dtype=str,
            keep_default_na=False,
            skip_blank_lines=False,
        )
    except pd.errors.EmptyDataError:
        raise EmptyInputError(f"В файле {path} нет записей после заголовка") from None
    except pd.errors.ParserError as e:
        # pandas считает строки файла, включая пропущенные
        match = _LINE_RE.search(str(e))
        raise TickParseError(int(match.group(1)) if match else 0, f"неверное число полей ({e})") from None

    if frame.shape[1] < columns.width:
        raise TickParseError(offset, f"ожидалось {columns.width} колонок, найдено {frame.shape[1]}")

    # Пустые строки пропускаются
    blank = (frame.isna() | (frame == "")).all(axis=1).to_numpy()
    lines = np.arange(len(frame)) + offset

    bid_raw = frame[columns.bid].str.strip()
    ask_raw = frame[columns.ask].str.strip()
    bid = pd.to_numeric(bid_raw, errors="coerce").to_numpy(dtype=np.float64)
    ask = pd.to_numeric(ask_raw, errors="coerce").to_numpy(dtype=np.float64)

    malformed = ~(np.isfinite(bid) & np.isfinite(ask)) & ~blank
    if malformed.any():
        i = int(np.flatnonzero(malformed)[0])
        raise TickParseError(
            int(lines[i]),
            f"не удалось разобрать bid='{bid_raw.iloc[i]}', ask='{ask_raw.iloc[i]}'",
        )

    keep = ~blank
    rejected = keep & ~((bid > 0) & (ask > 0))
    if rejected.any():
        logger.warning(
            f"Отклонено {int(rejected.sum())} записей с неположительными bid/ask "
            f"(первая на строке {int(lines[np.flatnonzero(rejected)[0]])})"
        )
        keep &= ~rejected

    if not keep.any():
        raise EmptyInputError(f"В файле {path} нет валидных котировок")

    timestamps = None
    if columns.ts is not None:
        timestamps = frame[columns.ts].to_numpy()[keep]

    quotes = TickQuotes(bid=bid[keep], ask=ask[keep], timestamps=timestamps)
    if quotes.crossed:
        logger.warning(f"В файле {path} {quotes.crossed} перевёрнутых котировок (ask < bid), приняты как есть")
    logger.info(f"Загружено {len(quotes)} котировок из {path}")
    return quotes


def save_ticks(path: str | Path, quotes: Sequence[TickQuote] | TickQuotes, header: bool = True) -> Path:
    """Запись котировок в CSV `timestamp,bid,ask`, без меток времени пишется tick_index."""
    quotes = TickQuotes.from_quotes(quotes)
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    stamps = quotes.timestamps if quotes.timestamps is not None else range(len(quotes))
    with path.open("w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        if header:
            writer.writerow(["timestamp", "bid", "ask"])
        for ts, b, a in zip(stamps, quotes.bid.tolist(), quotes.ask.tolist()):
            writer.writerow([ts, repr(b), repr(a)])
    logger.info(f"Записано {len(quotes)} котировок в {path}")
    return path


def mid_price(quotes: Sequence[TickQuote] | TickQuotes) -> MidSeries:
    """
    Средняя цена p(t) = (ask + bid) / 2 поэлементно.

    Raises:
        EmptyInputError: пустая последовательность котировок.
    """
    if len(quotes) == 0:
        raise EmptyInputError("Нет котировок для расчёта средней цены")
    quotes = TickQuotes.from_quotes(quotes)
    return MidSeries((quotes.ask + quotes.bid) / 2.0)
