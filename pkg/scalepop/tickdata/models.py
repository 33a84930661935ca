# scalepop/tickdata/models.py
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Sequence, overload

import numpy as np

from scalepop.core.exceptions import EmptyInputError, TickDataError

COLUMN_ROLES = ("ts", "bid", "ask")


@dataclass(frozen=True)
class TickQuote:
    """Одна котировка bid/ask; tick_index: порядковый номер в ряду (с нуля)."""
    tick_index: int
    bid: float
    ask: float

    def __post_init__(self):
        if not (self.bid > 0 and self.ask > 0):
            raise TickDataError(f"Котировка {self.tick_index}: bid и ask должны быть > 0 (bid={self.bid}, ask={self.ask})")


@dataclass(frozen=True, eq=False)
class TickQuotes(Sequence[TickQuote]):
    """
    Последовательность котировок в колоночном виде.

    Хранит bid/ask как numpy-массивы, чтобы ряды в 10⁶–10⁷ тиков не
    превращались в миллионы объектов; отдельные TickQuote создаются по запросу.
    """
    bid: np.ndarray
    ask: np.ndarray
    timestamps: np.ndarray | None = field(default=None, compare=False)

    def __post_init__(self):
        bid = np.asarray(self.bid, dtype=np.float64)
        ask = np.asarray(self.ask, dtype=np.float64)
        if bid.shape != ask.shape or bid.ndim != 1:
            raise TickDataError("bid и ask должны быть одномерными массивами одной длины")
        if bid.size and not (np.all(bid > 0) and np.all(ask > 0)):
            raise TickDataError("bid и ask должны быть > 0")
        bid.setflags(write=False)
        ask.setflags(write=False)
        object.__setattr__(self, "bid", bid)
        object.__setattr__(self, "ask", ask)

    @classmethod
    def from_quotes(cls, quotes: Sequence[TickQuote]) -> "TickQuotes":
        if isinstance(quotes, TickQuotes):
            return quotes
        indices = [q.tick_index for q in quotes]
        if any(b <= a for a, b in zip(indices, indices[1:])):
            raise TickDataError("tick_index должен строго возрастать")
        return cls(
            bid=np.fromiter((q.bid for q in quotes), dtype=np.float64, count=len(quotes)),
            ask=np.fromiter((q.ask for q in quotes), dtype=np.float64, count=len(quotes)),
        )

    def __len__(self) -> int:
        return int(self.bid.size)

    @overload
    def __getitem__(self, index: int) -> TickQuote: ...

    @overload
    def __getitem__(self, index: slice) -> "TickQuotes": ...

    def __getitem__(self, index):
        if isinstance(index, slice):
            ts = self.timestamps[index] if self.timestamps is not None else None
            return TickQuotes(bid=self.bid[index], ask=self.ask[index], timestamps=ts)
        n = len(self)
        if index < 0:
            index += n
        if not 0 <= index < n:
            raise IndexError(index)
        return TickQuote(tick_index=index, bid=float(self.bid[index]), ask=float(self.ask[index]))

    def __iter__(self) -> Iterator[TickQuote]:
        for i in range(len(self)):
            yield self[i]

    @property
    def crossed(self) -> int:
        """Количество перевёрнутых котировок (ask < bid)."""
        return int(np.count_nonzero(self.ask < self.bid))


@dataclass(frozen=True, eq=False)
class MidSeries:
    """Ряд средних цен p(t); неизменяем после создания."""
    prices: np.ndarray

    def __post_init__(self):
        prices = np.array(self.prices, dtype=np.float64)
        if prices.ndim != 1 or prices.size == 0:
            raise EmptyInputError("Ряд цен пуст")
        if not np.all(prices > 0):
            raise TickDataError("Все цены ряда должны быть > 0")
        prices.setflags(write=False)
        object.__setattr__(self, "prices", prices)

    @property
    def length(self) -> int:
        return int(self.prices.size)

    def __len__(self) -> int:
        return self.length

    def __getitem__(self, t: int) -> float:
        return float(self.prices[t])


@dataclass(frozen=True)
class ColumnMap:
    """Положение колонок ts/bid/ask в строке файла; прочие колонки игнорируются."""
    bid: int = 1
    ask: int = 2
    ts: int | None = 0
    width: int = 3

    @classmethod
    def parse(cls, spec: "str | ColumnMap | None") -> "ColumnMap":
        """
        Разбор строки вида "ts,bid,ask" / "bid,ask" / "ts,ask,bid,volume".

        Имена, отличные от ts/bid/ask, обозначают пропускаемые колонки.
        """
        if spec is None:
            return cls()
        if isinstance(spec, ColumnMap):
            return spec
        names = [name.strip().lower() for name in spec.split(",")]
        if "bid" not in names or "ask" not in names:
            raise TickDataError(f"Раскладка колонок '{spec}' должна содержать bid и ask")
        for role in COLUMN_ROLES:
            if names.count(role) > 1:
                raise TickDataError(f"Колонка '{role}' указана несколько раз в '{spec}'")
        return cls(
            bid=names.index("bid"),
            ask=names.index("ask"),
            ts=names.index("ts") if "ts" in names else None,
            width=len(names),
        )

    def render(self) -> str:
        names = ["_"] * self.width
        names[self.bid] = "bid"
        names[self.ask] = "ask"
        if self.ts is not None:
            names[self.ts] = "ts"
        return ",".join(names)
