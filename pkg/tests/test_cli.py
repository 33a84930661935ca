import math
import os

import click
import openpyxl
import pytest
from click.testing import CliRunner

from scalepop.cli import cli, main, parse_config, render_resolved_config
from scalepop.cli.runner import RESOLVED_CONFIG, resolve_t1, sweep_specs
from scalepop.core.config import DEATHRATE_FIT_RANGES, DEFAULT_SIM, LIFETIME_FIT_RANGES, PRESET_T1
from scalepop.core.exceptions import ConfigError, ContractViolation
from scalepop.engine import SimConfig, simulate
from scalepop.stats import build_report, prediction_accuracy
from scalepop.tickdata import synth_series
from scalepop.stats.export import (
    DEATHRATE_CSV,
    DEATHS_CSV,
    LIFETIME_CSV,
    LIFETIME_SCALE_CSV,
    REPORT_XLSX,
    SUMMARY_CSV,
    TRANSIENT_CSV,
)

RUN_FILES = {TRANSIENT_CSV, DEATHS_CSV, LIFETIME_CSV, DEATHRATE_CSV, LIFETIME_SCALE_CSV, SUMMARY_CSV, RESOLVED_CONFIG}
SMALL_RUN = ["--synthetic", "coin:length=5000,seed=1", "--n-tf", "20", "--l-max", "300", "--u-born", "3"]


def test_flags_override_defaults(tmp_path):
    spec = parse_config(["--data", str(tmp_path / "ticks.csv"), "--h", "100", "--strategy", "bm"])

    assert spec.sim.h == 100
    assert spec.sim.strategy == "bm"
    assert spec.sim.n_tf == DEFAULT_SIM["n_tf"]
    assert spec.data_source.kind == "file"
    assert spec.data_source.columns == "ts,bid,ask"


def test_missing_data_source():
    with pytest.raises(click.UsageError):
        parse_config(["--h", "100"])


def test_two_data_sources():
    with pytest.raises(click.UsageError):
        parse_config(["--data", "ticks.csv", "--synthetic", "coin:length=10"])


def test_unknown_flag():
    with pytest.raises(click.UsageError):
        parse_config(["--data", "ticks.csv", "--bogus", "1"])


@pytest.mark.parametrize(
    "argv",
    [
        ["--h", "0"],
        ["--l-min", "500", "--l-max", "10"],
        ["--sigma", "-1"],
        ["--fit-range", "100"],
        ["--fit-range", "1000:100"],
        ["--sweep", "colour=red"],
        ["--sweep", "h=1,0"],
    ],
)
def test_invalid_values_are_usage_errors(argv):
    with pytest.raises(click.UsageError):
        parse_config(["--synthetic", "coin:length=100", *argv])


def test_invalid_synthetic_spec():
    with pytest.raises(click.UsageError):
        parse_config(["--synthetic", "levy:length=100"])
    with pytest.raises(click.UsageError):
        parse_config(["--synthetic", "coin:seed=1"])


def test_synthetic_spec_is_parsed():
    spec = parse_config(["--synthetic", "iid-coin-walk:length=1000000,seed=7"])

    source = spec.data_source
    assert (source.kind, source.model, source.length, source.seed) == ("synthetic", "coin", 1_000_000, 7)


def test_preset_then_flags(tmp_path):
    spec = parse_config(["--synthetic", "coin:length=100", "--preset", "paper-h100", "--n-tf", "10"])

    assert spec.sim.h == 100
    assert spec.sim.n_tf == 10
    assert spec.preset == "paper-h100"


def test_config_file_layer(tmp_path):
    config = tmp_path / "run.env"
    config.write_text('SCALEPOP_SYNTHETIC="coin:length=100,seed=2"\nSCALEPOP_H=10\nSCALEPOP_N_TF=20\n', encoding="utf-8")

    spec = parse_config(["--config", str(config), "--h", "5"])

    assert spec.sim.h == 5
    assert spec.sim.n_tf == 20
    assert spec.data_source.seed == 2


def test_config_file_unknown_key(tmp_path):
    config = tmp_path / "run.env"
    config.write_text("SCALEPOP_SYNTHETIC=coin:length=100\nSCALEPOP_COLOUR=red\n", encoding="utf-8")

    with pytest.raises(click.UsageError):
        parse_config(["--config", str(config)])


def test_missing_config_file(tmp_path):
    with pytest.raises(click.UsageError):
        parse_config(["--config", str(tmp_path / "absent.env")])


def test_resolved_config_reproduces_spec(tmp_path):
    spec = parse_config([
        "--synthetic", "coin:length=5000,seed=3,step=0.0002",
        "--preset", "paper-h1",
        "--strategy", "bm_rm",
        "--merchant", "weighted",
        "--sigma", "250.5",
        "--t1", "4000",
        "--fit-range", "10:1000",
        "--out", str(tmp_path / "out"),
        "--xlsx",
    ])
    config = tmp_path / RESOLVED_CONFIG
    config.write_text(render_resolved_config(spec), encoding="utf-8")

    assert parse_config(["--config", str(config)]) == spec


def test_sweep_children(tmp_path):
    spec = parse_config([*SMALL_RUN, "--out", str(tmp_path), "--sweep", "h=1,2", "--sweep", "strategy=independent,rm"])

    children = sweep_specs(spec)

    assert [child.output_dir.name for child in children] == [
        "h=1_strategy=independent",
        "h=1_strategy=rm",
        "h=2_strategy=independent",
        "h=2_strategy=rm",
    ]
    assert [(c.sim.h, c.sim.strategy) for c in children] == [(1, "independent"), (1, "rm"), (2, "independent"), (2, "rm")]
    assert all(child.sweep is None for child in children)


def test_run_writes_all_outputs(tmp_path):
    out = tmp_path / "run"

    result = CliRunner().invoke(cli, [*SMALL_RUN, "--out", str(out)])

    assert result.exit_code == 0, result.output
    assert "PA=" in result.output
    assert {p.name for p in out.iterdir()} == RUN_FILES
    summary = (out / SUMMARY_CSV).read_text(encoding="utf-8").splitlines()
    assert summary[0] == "metric,value"
    assert "strategy,independent" in summary
    transient = (out / TRANSIENT_CSV).read_text(encoding="utf-8").splitlines()
    assert transient[0] == "tick,mean_utility,mean_age,deaths_cum,passive_fraction"


def test_runs_are_byte_identical(tmp_path):
    runner = CliRunner()
    for name in ("a", "b"):
        result = runner.invoke(cli, [*SMALL_RUN, "--strategy", "bm_rm", "--sigma", "30", "--out", str(tmp_path / name)])
        assert result.exit_code == 0, result.output

    for name in RUN_FILES - {RESOLVED_CONFIG}:
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes(), name


def test_xlsx_report(tmp_path):
    out = tmp_path / "run"

    result = CliRunner().invoke(cli, [*SMALL_RUN, "--out", str(out), "--xlsx"])

    assert result.exit_code == 0, result.output
    workbook = openpyxl.load_workbook(out / REPORT_XLSX)
    assert workbook.sheetnames == ["summary", "transient", "lifetime_dist", "deathrate_dist", "lifetime_scale", "deaths"]
    assert workbook["summary"]["A1"].value == "metric"


def test_missing_data_file_leaves_no_outputs(tmp_path):
    out = tmp_path / "run"

    result = CliRunner().invoke(cli, ["--data", str(tmp_path / "absent.csv"), "--out", str(out)])

    assert result.exit_code == 1
    assert not out.exists()


def test_malformed_data_file_fails(tmp_path):
    data = tmp_path / "ticks.csv"
    data.write_text("t0,1.2,1.3\nt1,x,1.3\n", encoding="utf-8")

    result = CliRunner().invoke(cli, ["--data", str(data), "--out", str(tmp_path / "run")])

    assert result.exit_code == 1
    assert "строка 2" in result.output


def test_sweep_runs_every_combination(tmp_path):
    result = CliRunner().invoke(cli, [*SMALL_RUN, "--out", str(tmp_path), "--sweep", "h=1,3", "--workers", "1"])

    assert result.exit_code == 0, result.output
    for name in ("h=1", "h=3"):
        assert {p.name for p in (tmp_path / name).iterdir()} == RUN_FILES
    assert (tmp_path / RESOLVED_CONFIG).exists()


def test_main_returns_usage_exit_code():
    assert main(["--h", "1"]) == 2


def test_main_runs(tmp_path):
    assert main([*SMALL_RUN, "--out", str(tmp_path / "run")]) == 0


def _summary(path) -> dict[str, str]:
    return dict(line.split(",", 1) for line in path.read_text(encoding="utf-8").splitlines()[1:])


def test_pa_is_taken_at_requested_t1():
    config = SimConfig(n_tf=20, l_max=300, sample_every=1000)
    result = simulate(synth_series(5000, seed=1), config, sample_at=(1234,))

    report = build_report(result, t1=1234)

    sample = next(s for s in result.samples if s.tick == 1234)
    assert report.t1 == 1234
    assert report.pa == pytest.approx(prediction_accuracy(sample.mean_utility, 1234))


def test_t1_without_sample_is_rejected():
    result = simulate(synth_series(5000, seed=1), SimConfig(n_tf=20, l_max=300, sample_every=1000))

    with pytest.raises(ContractViolation):
        build_report(result, t1=1234)


@pytest.mark.parametrize("t1", [0, 5000, 9000])
def test_t1_outside_data_is_rejected(t1):
    result = simulate(synth_series(5000, seed=1), SimConfig(n_tf=20, l_max=300, sample_every=1000))

    with pytest.raises(ConfigError):
        build_report(result, t1=t1)


def test_synthetic_t1_beyond_length_is_usage_error():
    with pytest.raises(click.UsageError):
        parse_config(["--synthetic", "coin:length=100", "--t1", "100"])


def test_preset_t1_applies_only_to_long_series():
    preset = parse_config(["--synthetic", "coin:length=100", "--preset", "paper-h1"])
    plain = parse_config(["--synthetic", "coin:length=100"])
    explicit = parse_config(["--synthetic", "coin:length=100", "--preset", "paper-h1", "--t1", "50"])

    assert resolve_t1(preset, 100) is None
    assert resolve_t1(preset, PRESET_T1 + 1) == PRESET_T1
    assert resolve_t1(plain, PRESET_T1 + 1) is None
    assert resolve_t1(explicit, 100) == 50


def test_run_reports_t1_off_the_sampling_grid(tmp_path):
    out = tmp_path / "run"

    result = CliRunner().invoke(cli, [*SMALL_RUN, "--sample-every", "1000", "--t1", "1234", "--out", str(out)])

    assert result.exit_code == 0, result.output
    assert _summary(out / SUMMARY_CSV)["t1"] == "1234"
    ticks = [line.split(",")[0] for line in (out / TRANSIENT_CSV).read_text(encoding="utf-8").splitlines()[1:]]
    assert "1234" in ticks


def test_summary_carries_pa_band_for_h(tmp_path):
    out = tmp_path / "run"

    result = CliRunner().invoke(cli, [*SMALL_RUN, "--out", str(out)])

    assert result.exit_code == 0, result.output
    summary = _summary(out / SUMMARY_CSV)
    assert (summary["pa_band_lo"], summary["pa_band_hi"]) == ("0.52", "0.55")


def test_failed_fit_keeps_configured_range():
    config = SimConfig(n_tf=5, u_born=10_000, l_max=100, sample_every=500)
    result = simulate(synth_series(2000, seed=4), config)

    report = build_report(result)

    assert result.deaths == []
    assert math.isnan(report.lifetime_density_fit.effective_index)
    assert report.lifetime_density_fit.fit_range == LIFETIME_FIT_RANGES["independent"]
    assert math.isnan(report.deathrate_fit.effective_index)
    assert report.deathrate_fit.fit_range == DEATHRATE_FIT_RANGES["independent"]
    assert report.censored_max_age == 1999
    assert report.censored_in_fit_range == 5


def test_failed_move_removes_partial_outputs(tmp_path, monkeypatch):
    out = tmp_path / "run"
    real_replace = os.replace
    moved = []

    def replace(src, dst):
        if len(moved) == 2:
            raise OSError("нет места на диске")
        real_replace(src, dst)
        moved.append(dst)

    monkeypatch.setattr("scalepop.cli.runner.os.replace", replace)
    result = CliRunner().invoke(cli, [*SMALL_RUN, "--out", str(out)])

    assert result.exit_code == 1
    assert len(moved) == 2
    assert not out.exists()
    assert list(tmp_path.iterdir()) == []


def test_failed_write_into_existing_dir_keeps_dir_empty(tmp_path, monkeypatch):
    out = tmp_path / "run"
    out.mkdir()

    def broken(*args, **kwargs):
        raise OSError("ошибка записи")

    monkeypatch.setattr("scalepop.cli.runner.write_run_outputs", broken)
    result = CliRunner().invoke(cli, [*SMALL_RUN, "--out", str(out)])

    assert result.exit_code == 1
    assert list(out.iterdir()) == []
    assert [p.name for p in tmp_path.iterdir()] == ["run"]


def test_seed_sweep_merges_replicas(tmp_path):
    result = CliRunner().invoke(
        cli, [*SMALL_RUN, "--out", str(tmp_path), "--sweep", "h=1,2", "--sweep", "seed=1,2", "--workers", "1"]
    )

    assert result.exit_code == 0, result.output
    for h in ("1", "2"):
        merged = tmp_path / f"h={h}_merged"
        assert {p.name for p in merged.iterdir()} == {LIFETIME_CSV, SUMMARY_CSV}
        summary = _summary(merged / SUMMARY_CSV)
        assert summary["runs"] == "2"
        deaths = [int(_summary(tmp_path / f"h={h}_seed={s}" / SUMMARY_CSV)["deaths"]) for s in ("1", "2")]
        assert int(summary["deaths"]) == sum(deaths)


def test_sweep_without_seed_writes_no_merge(tmp_path):
    result = CliRunner().invoke(cli, [*SMALL_RUN, "--out", str(tmp_path), "--sweep", "h=1,2", "--workers", "1"])

    assert result.exit_code == 0, result.output
    assert not any(p.name.endswith("merged") for p in tmp_path.iterdir())
