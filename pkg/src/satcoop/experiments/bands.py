import logging
import time
from typing import Optional, Sequence

import pandas as pd

from satcoop.config.scenario import BandSection, Mode, ScenarioConfig
from satcoop.experiments.capacity import mean_rates
from satcoop.experiments.results import RunResult

logger = logging.getLogger(__name__)


def band_sweep(
    config: ScenarioConfig, bands: Optional[Sequence[BandSection]] = None, threads: int = 1
) -> RunResult:
    """Mean rate per (carrier, bandwidth) and cluster size.

    Every band sees the same shadowing states and fading draws; only the path
    loss, noise bandwidth and (optionally) receive gain change.
    """
    experiment = config.experiment
    bands = list(bands if bands is not None else experiment.bands)
    if not bands:
        raise ValueError("band_sweep needs at least one band")
    started = time.perf_counter()
    base = config.link.to_budget()
    tables = []
    for band in bands:
        link = base.with_band(band.carrier_ghz * 1e9, band.bandwidth_mhz * 1e6)
        if band.rx_gain_db is not None:
            link = link.with_rx_gain(band.rx_gain_db)
        logger.info("Band %.3g GHz / %.4g MHz", band.carrier_ghz, band.bandwidth_mhz)
        means = mean_rates(
            config,
            [Mode(experiment.band_mode)],
            [experiment.band_epsilon],
            experiment.band_L_values,
            link=link,
            threads=threads,
        )
        means.insert(0, "rx_gain_db", link.rx_gain_db)
        means.insert(0, "bandwidth_mhz", band.bandwidth_mhz)
        means.insert(0, "carrier_ghz", band.carrier_ghz)
        tables.append(means)

    table = pd.concat(tables, ignore_index=True)
    aggregates = {
        f"{carrier:g}GHz/{bandwidth:g}MHz": {
            int(L): float(rate) for L, rate in zip(group["L"], group["mean_rate_bps"])
        }
        for (carrier, bandwidth), group in table.groupby(
            ["carrier_ghz", "bandwidth_mhz"], sort=False
        )
    }
    logger.info("Band sweep finished in %.1f s", time.perf_counter() - started)
    return RunResult("band-sweep", table, aggregates)
