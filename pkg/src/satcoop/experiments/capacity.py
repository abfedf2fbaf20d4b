import logging
import time
from typing import Iterable, Optional, Sequence

import pandas as pd

from satcoop.channel.link_budget import LinkBudget
from satcoop.config.scenario import Mode, ScenarioConfig
from satcoop.detection.full_csi import DetectorResult
from satcoop.experiments.evaluator import ExperimentContext, effective_size, map_steps
from satcoop.experiments.results import RunResult
from satcoop.orbits.visibility import VisibleSatellite, select_cluster

logger = logging.getLogger(__name__)

COOPERATIVE_MODES = (Mode.FULL_CSI, Mode.PARTIAL_CSI)


def evaluate_step(
    ctx: ExperimentContext,
    step: int,
    L_values: Sequence[int],
    modes: Iterable[Mode],
    epsilons: Iterable[float],
) -> tuple[list[VisibleSatellite], dict[tuple, DetectorResult]]:
    """Detector results at one time step for every (mode, epsilon, L).

    One fading draw serves every combination: the cluster is drawn at the
    largest L and smaller clusters are its nearest members.
    """
    t = ctx.time_at(step)
    visible = ctx.visible(t)
    if not visible:
        logger.warning("No satellite visible at t=%.1f s; rate recorded as 0", t)
        return visible, {}

    cluster = select_cluster(visible, max(L_values))
    fading = ctx.simulator.fading(cluster, t, step)
    results = {}
    for epsilon in epsilons:
        channels = ctx.simulator.with_estimation_error(fading, epsilon, step)
        for mode in modes:
            for L in L_values:
                results[(Mode(mode), epsilon, L)] = ctx.evaluate(channels.head(L), mode)
    return visible, results


def _timeseries_chunk(config: ScenarioConfig, steps: list[int]) -> list[dict]:
    with ExperimentContext.build(config) as ctx:
        experiment = config.experiment
        mode = Mode(experiment.mode)
        records = []
        for step in steps:
            visible, results = evaluate_step(
                ctx, step, experiment.L_values, [mode], [experiment.epsilon]
            )
            nearest = visible[0] if visible else None
            record = {
                "step": step,
                "time_s": ctx.time_at(step),
                "visible_count": len(visible),
                "no_visible": nearest is None,
                "nearest_sat_id": nearest.sat_id if nearest else None,
                "nearest_range_km": nearest.slant_range_m / 1000.0 if nearest else None,
                "nearest_elevation_deg": nearest.elevation_deg if nearest else None,
            }
            for L in experiment.L_values:
                result = results.get((mode, experiment.epsilon, L))
                record[f"L{L}_effective"] = effective_size(L, len(visible), mode)
                record[f"L{L}_rate_bits_per_use"] = result.rate_bits_per_use if result else 0.0
                record[f"L{L}_rate_bps"] = result.rate_bits_per_sec if result else 0.0
            records.append(record)
    return records


def capacity_timeseries(config: ScenarioConfig, threads: int = 1) -> RunResult:
    """Per-step rates of the configured mode for every cluster size, with running means."""
    experiment = config.experiment
    started = time.perf_counter()
    logger.info(
        "Capacity time series: %d steps, mode %s, L=%s",
        experiment.num_steps,
        Mode(experiment.mode).value,
        experiment.L_values,
    )
    frame = pd.DataFrame(map_steps(_timeseries_chunk, config, experiment.num_steps, threads))

    columns = list(frame.columns)
    for L in experiment.L_values:
        rate = f"L{L}_rate_bps"
        frame[f"L{L}_mean_rate_bps"] = frame[rate].expanding().mean()
        columns.insert(columns.index(rate) + 1, f"L{L}_mean_rate_bps")
    frame = frame[columns]

    aggregates = {
        "mode": Mode(experiment.mode).value,
        "epsilon": experiment.epsilon,
        "mean_rate_bps": {L: float(frame[f"L{L}_rate_bps"].mean()) for L in experiment.L_values},
        "steps_without_visibility": int(frame["no_visible"].sum()),
        "min_visible": int(frame["visible_count"].min()),
    }
    logger.info("Capacity time series finished in %.1f s", time.perf_counter() - started)
    return RunResult("capacity-timeseries", frame, aggregates)


def _mean_rate_chunk(
    config: ScenarioConfig,
    steps: list[int],
    modes: Sequence[Mode],
    epsilons: Sequence[float],
    L_values: Sequence[int],
    link: Optional[LinkBudget] = None,
) -> list[dict]:
    with ExperimentContext.build(config, link) as ctx:
        records = []
        for step in steps:
            _, results = evaluate_step(ctx, step, L_values, modes, epsilons)
            for mode in modes:
                for epsilon in epsilons:
                    for L in L_values:
                        result = results.get((Mode(mode), epsilon, L))
                        records.append(
                            {
                                "step": step,
                                "mode": Mode(mode).value,
                                "epsilon": epsilon,
                                "L": L,
                                "rate_bits_per_use": result.rate_bits_per_use if result else 0.0,
                                "rate_bps": result.rate_bits_per_sec if result else 0.0,
                            }
                        )
    return records


def mean_rates(
    config: ScenarioConfig,
    modes: Sequence[Mode],
    epsilons: Sequence[float],
    L_values: Sequence[int],
    link: Optional[LinkBudget] = None,
    threads: int = 1,
) -> pd.DataFrame:
    """Time-averaged rate per (mode, epsilon, L) over the configured run."""
    records = map_steps(
        _mean_rate_chunk,
        config,
        config.experiment.num_steps,
        threads,
        modes=list(modes),
        epsilons=list(epsilons),
        L_values=list(L_values),
        link=link,
    )
    frame = pd.DataFrame(records)
    grouped = frame.groupby(["mode", "epsilon", "L"], sort=False)
    means = grouped[["rate_bits_per_use", "rate_bps"]].mean().reset_index()
    means["steps"] = grouped.size().to_numpy()
    return means.rename(
        columns={"rate_bits_per_use": "mean_rate_bits_per_use", "rate_bps": "mean_rate_bps"}
    )


def capacity_vs_cluster_size(config: ScenarioConfig, threads: int = 1) -> RunResult:
    """Mean rate against cluster size for both cooperative modes and every epsilon."""
    experiment = config.experiment
    started = time.perf_counter()
    frame = mean_rates(
        config, COOPERATIVE_MODES, experiment.epsilon_values, experiment.L_values, threads=threads
    )
    aggregates = {
        f"{mode}/eps={epsilon:g}": {
            int(L): float(rate) for L, rate in zip(group["L"], group["mean_rate_bps"])
        }
        for (mode, epsilon), group in frame.groupby(["mode", "epsilon"], sort=False)
    }
    logger.info("Capacity vs cluster size finished in %.1f s", time.perf_counter() - started)
    return RunResult("capacity-vs-l", frame, aggregates)
