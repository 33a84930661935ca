import logging
import sys

from scalepop.core.logging_setup import setup_logging
from scalepop.cli.commands import main as cli_main

logger = logging.getLogger(__name__)


def main() -> int:
    setup_logging()
    logger.info("Запуск scalepop")
    try:
        return cli_main()
    except Exception as e:
        logger.exception(f"Необработанная ошибка: {e}")
        return 1


if __name__ == "__main__":
    try:
        sys.exit(main())
    except KeyboardInterrupt:
        logger.info("Прогон остановлен вручную")
        sys.exit(130)
