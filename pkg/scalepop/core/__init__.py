from .exceptions import (
    ScalePopError,
    TickDataError,
    EmptyInputError,
    TickParseError,
    ConfigError,
    ContractViolation,
    InsufficientDataError,
)

__all__ = [
    'ScalePopError',
    'TickDataError',
    'EmptyInputError',
    'TickParseError',
    'ConfigError',
    'ContractViolation',
    'InsufficientDataError',
]
