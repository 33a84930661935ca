# scalepop/core/exceptions.py


class ScalePopError(Exception):
    """Базовое исключение симулятора."""


class TickDataError(ScalePopError):
    """Ошибка входных тиковых данных."""


class EmptyInputError(TickDataError):
    """Нет ни одной валидной записи / пустая последовательность."""


class TickParseError(TickDataError):
    """Строка файла не разбирается как (timestamp, bid, ask)."""

    def __init__(self, line: int, message: str):
        super().__init__(f"строка {line}: {message}")
        self.line = line


class ConfigError(ScalePopError):
    """Некорректная конфигурация запуска."""


class ContractViolation(ScalePopError):
    """Нарушено предусловие операции (например, смерть живого агента)."""


class InsufficientDataError(ScalePopError):
    """Недостаточно непустых бинов для аппроксимации."""
