from .models import TransientSample, DeathEvent, DistributionEstimate, IndexFit
from .transient import sample_transient, prediction_accuracy
from .distributions import (
    log_bins,
    empirical_ccdf,
    kaplan_meier_ccdf,
    lifetime_hist,
    deaths_per_tick,
    deaths_per_tick_hist,
    lifetime_scale_hist2d,
    fit_effective_index,
    merge_distributions,
)
from .oracle import gamblers_ruin_lifetimes, binned_deviation
from .report import RunReport, build_report, merge_lifetime_estimates
from .export import write_run_outputs, write_merged_outputs, export_report_to_excel

__all__ = [
    'TransientSample',
    'DeathEvent',
    'DistributionEstimate',
    'IndexFit',
    'sample_transient',
    'prediction_accuracy',
    'log_bins',
    'empirical_ccdf',
    'kaplan_meier_ccdf',
    'lifetime_hist',
    'deaths_per_tick',
    'deaths_per_tick_hist',
    'lifetime_scale_hist2d',
    'fit_effective_index',
    'merge_distributions',
    'gamblers_ruin_lifetimes',
    'binned_deviation',
    'RunReport',
    'build_report',
    'merge_lifetime_estimates',
    'write_run_outputs',
    'write_merged_outputs',
    'export_report_to_excel',
]
