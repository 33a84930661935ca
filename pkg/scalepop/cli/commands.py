# scalepop/cli/commands.py
import logging
import sys
from typing import Sequence

import click

from scalepop.core.config import MERCHANT_MODES, PRESETS, STRATEGIES
from scalepop.core.exceptions import ConfigError, ScalePopError
from .config import resolve_run_spec
from .models import RunSpec
from .runner import run, run_sweep

logger = logging.getLogger(__name__)


@click.command(name="scalepop")
@click.option("--config", type=click.Path(dir_okay=False), default=None, help="Файл конфигурации (.env, ключи SCALEPOP_*).")
@click.option("--data", type=click.Path(dir_okay=False), default=None, help="CSV с котировками timestamp,bid,ask.")
@click.option("--columns", default=None, help="Раскладка колонок файла, например ts,bid,ask.")
@click.option("--synthetic", default=None, help="Синтетический ряд: coin:length=N,seed=S[,step=X,p0=Y].")
@click.option("--preset", type=click.Choice(list(PRESETS)), default=None, help="Набор параметров численного эксперимента.")
@click.option("--strategy", type=click.Choice(STRATEGIES), default=None)
@click.option("--merchant", type=click.Choice(MERCHANT_MODES), default=None, help="Режим торговца.")
@click.option("--h", "h", type=int, default=None, help="Горизонт предсказания, тиков.")
@click.option("--n-tf", type=int, default=None, help="Размер популяции.")
@click.option("--u-born", type=int, default=None, help="Полезность при рождении.")
@click.option("--l-min", type=int, default=None)
@click.option("--l-max", type=int, default=None)
@click.option("--sigma", type=float, default=None, help="Дисперсия масштаба при рождении (BM-TF).")
@click.option("--seed", type=int, default=None)
@click.option("--sample-every", type=int, default=None, help="Шаг выборки средних, тиков.")
@click.option("--t1", type=int, default=None, help="Тик для расчёта точности предсказания.")
@click.option("--fit-range", default=None, help="Диапазон аппроксимации времён жизни LO:HI.")
@click.option("--deathrate-fit-range", default=None, help="Диапазон аппроксимации смертностей LO:HI.")
@click.option("--out", type=click.Path(file_okay=False), default=None, help="Каталог результатов (иначе $SCALEPOP_OUT).")
@click.option("--xlsx/--no-xlsx", default=None, help="Дополнительно выгрузить report.xlsx.")
@click.option("--sweep", multiple=True, help="Развёртка KEY=V1,V2,... (можно повторять).")
@click.option("--workers", type=int, default=None, help="Число процессов для развёртки.")
@click.pass_context
def cli(ctx: click.Context, **params) -> None:
    """Симуляция популяции трендследователей на тиковых данных."""
    spec = _resolve(params)
    try:
        if spec.sweep:
            outcomes = run_sweep(spec)
            for outcome in outcomes:
                click.echo(f"{outcome.output_dir}: {outcome.summary}")
            status = max(outcome.exit_status for outcome in outcomes)
        else:
            outcome = run(spec)
            click.echo(outcome.summary)
            status = outcome.exit_status
    except (ScalePopError, OSError) as e:
        logger.exception(f"Прогон завершился ошибкой: {e}")
        click.echo(f"Ошибка: {e}", err=True)
        ctx.exit(1)
    ctx.exit(status)


def _resolve(params: dict) -> RunSpec:
    try:
        return resolve_run_spec(params)
    except ConfigError as e:
        raise click.UsageError(str(e)) from None


def parse_config(argv: Sequence[str], config_file: str | None = None) -> RunSpec:
    """
    Разбор аргументов командной строки (и файла конфигурации) в RunSpec без запуска.

    Raises:
        click.UsageError: неизвестный флаг, недопустимое значение, нет источника данных.
    """
    with cli.make_context("scalepop", list(argv)) as ctx:
        params = dict(ctx.params)
    if config_file is not None and params.get("config") is None:
        params["config"] = config_file
    return _resolve(params)


def main(argv: Sequence[str] | None = None) -> int:
    """Точка входа; возвращает код выхода."""
    try:
        code = cli.main(args=list(argv) if argv is not None else sys.argv[1:], standalone_mode=False)
    except click.ClickException as e:
        e.show()
        return e.exit_code
    except click.Abort:
        return 1
    return code if isinstance(code, int) else 0
