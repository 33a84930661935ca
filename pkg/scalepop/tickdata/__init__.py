from .models import TickQuote, TickQuotes, MidSeries, ColumnMap
from .loader import load_ticks, save_ticks, mid_price
from .synthetic import synth_series, synth_quotes

__all__ = [
    'TickQuote',
    'TickQuotes',
    'MidSeries',
    'ColumnMap',
    'load_ticks',
    'save_ticks',
    'mid_price',
    'synth_series',
    'synth_quotes',
]
