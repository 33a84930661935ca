# scalepop/core/logging_setup.py
import logging
from pathlib import Path

from scalepop.core.config import LOGGING_CONFIG


def setup_logging(level: str | None = None) -> None:
    """Настройка логирования: консоль + файл в logs/."""
    handlers: list[logging.Handler] = [logging.StreamHandler()]
    log_file = LOGGING_CONFIG.get("filename")
    if log_file:
        try:
            Path(log_file).parent.mkdir(parents=True, exist_ok=True)
            handlers.append(logging.FileHandler(log_file, mode=LOGGING_CONFIG["filemode"], encoding="utf-8"))
        except OSError as e:
            # Без файла лога запуск продолжается
            logging.getLogger(__name__).warning(f"Файл лога {log_file} недоступен: {e}")

    logging.basicConfig(
        level=level or LOGGING_CONFIG["level"],
        format=LOGGING_CONFIG["format"],
        handlers=handlers,
        force=True,
    )
