from satcoop.experiments.bands import band_sweep
from satcoop.experiments.baseline import single_satellite_baseline
from satcoop.experiments.ber import ber_montecarlo, ber_vs_cluster_size, wilson_interval
from satcoop.experiments.capacity import capacity_timeseries, capacity_vs_cluster_size
from satcoop.experiments.overhead import overhead_report, overhead_table
from satcoop.experiments.results import OverheadReport, RunResult
from satcoop.experiments.visibility import visibility_timeseries

__all__ = [
    "OverheadReport",
    "RunResult",
    "band_sweep",
    "ber_montecarlo",
    "ber_vs_cluster_size",
    "capacity_timeseries",
    "capacity_vs_cluster_size",
    "overhead_report",
    "overhead_table",
    "single_satellite_baseline",
    "visibility_timeseries",
    "wilson_interval",
]
