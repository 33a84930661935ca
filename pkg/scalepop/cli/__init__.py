from .models import DataSource, RunSpec
from .config import resolve_run_spec, render_resolved_config, read_config_file
from .runner import RunOutcome, run, run_sweep, load_series
from .commands import cli, parse_config, main

__all__ = [
    'DataSource',
    'RunSpec',
    'resolve_run_spec',
    'render_resolved_config',
    'read_config_file',
    'RunOutcome',
    'run',
    'run_sweep',
    'load_series',
    'cli',
    'parse_config',
    'main',
]
