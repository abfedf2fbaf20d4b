"""One satellite tracked without handover for as long as it stays in view."""

import logging
import math
from dataclasses import dataclass

import numpy as np
import pandas as pd

from satcoop.channel.states import ChannelState
from satcoop.config.scenario import Mode, ScenarioConfig
from satcoop.experiments.evaluator import ExperimentContext
from satcoop.experiments.results import RunResult
from satcoop.orbits.constellation import ConstellationArrays, orbital_period, propagate_positions
from satcoop.orbits.visibility import VisibleSatellite, ground_distance_km

logger = logging.getLogger(__name__)

PASS_SCAN_STEP_S = 1.0


@dataclass(frozen=True)
class Pass:
    sat_id: int
    rise_s: float
    set_s: float

    @property
    def duration_s(self) -> float:
        return self.set_s - self.rise_s


def _look(ctx: ExperimentContext, single: ConstellationArrays, t: float):
    position = propagate_positions(single, t)[0]
    line_of_sight = position - ctx.user.position_ecef
    slant_range = float(np.linalg.norm(line_of_sight))
    elevation = math.degrees(math.asin(float(line_of_sight @ ctx.user.up) / slant_range))
    return elevation, slant_range, position


def find_pass(
    ctx: ExperimentContext, single: ConstellationArrays, t0: float, mask_deg: float
) -> Pass:
    """Rise and set times (1 s resolution) of the pass containing ``t0``.

    Propagation runs backwards from ``t0`` to find the rise.
    """
    limit = orbital_period(float(single.semi_major_axis[0]))
    rise = t0
    while rise - t0 > -limit and _look(ctx, single, rise - PASS_SCAN_STEP_S)[0] >= mask_deg:
        rise -= PASS_SCAN_STEP_S
    set_ = t0
    while set_ - t0 < limit and _look(ctx, single, set_ + PASS_SCAN_STEP_S)[0] >= mask_deg:
        set_ += PASS_SCAN_STEP_S
    return Pass(int(single.sat_id[0]), rise, set_)


def mean_channel_power(ctx: ExperimentContext) -> float:
    process = ctx.simulator.process
    return sum(
        process.stationary_probability(state) * process.loo(state).total_power
        for state in ChannelState
    )


def large_scale_rate(ctx: ExperimentContext, slant_range_m: float) -> float:
    """Rate at the mean channel power, without fading, in bits per channel use."""
    link = ctx.link
    loss = ctx.simulator.path_loss(slant_range_m)
    snr = link.p * mean_channel_power(ctx) / (loss**2 * link.sigma2)
    return math.log2(1.0 + snr)


def single_satellite_baseline(config: ScenarioConfig) -> RunResult:
    with ExperimentContext.build(config) as ctx:
        return _track_nearest(ctx)


def _track_nearest(ctx: ExperimentContext) -> RunResult:
    """Follow the nearest satellite at the start of the run until it sets."""
    experiment = ctx.config.experiment
    mask = experiment.baseline_min_elevation_deg
    t0 = ctx.time_at(0)
    visible = ctx.visible(t0, mask)

    if not visible:
        logger.warning("No satellite above %.1f deg at the start of the run", mask)
        frame = pd.DataFrame(
            {
                "step": range(experiment.num_steps),
                "time_s": [ctx.time_at(k) for k in range(experiment.num_steps)],
                "tracked": False,
                "rate_bps": 0.0,
            }
        )
        return RunResult("baseline-single", frame, {"sat_id": None, "visibility_duration_s": 0.0})

    target = visible[0]
    single = ctx.arrays.subset(ctx.arrays.sat_id == target.sat_id)
    satellite_pass = find_pass(ctx, single, t0, mask)

    profile = []
    t = satellite_pass.rise_s
    while t <= satellite_pass.set_s:
        elevation, slant_range, position = _look(ctx, single, t)
        profile.append(
            (
                t,
                elevation,
                large_scale_rate(ctx, slant_range),
                ground_distance_km(ctx.user, position),
            )
        )
        t += PASS_SCAN_STEP_S
    times, elevations, rates, ground = (np.array(column) for column in zip(*profile))
    near_peak = times[rates >= experiment.baseline_peak_fraction * rates.max()]
    peak_window_s = float(near_peak[-1] - near_peak[0])

    records = []
    bandwidth_hz = ctx.link.bandwidth_hz
    for step in range(experiment.num_steps):
        t = ctx.time_at(step)
        elevation, slant_range, position = _look(ctx, single, t)
        tracked = satellite_pass.rise_s <= t <= satellite_pass.set_s
        record = {
            "step": step,
            "time_s": t,
            "tracked": tracked,
            "elevation_deg": elevation,
            "range_km": slant_range / 1000.0,
            "ground_distance_km": ground_distance_km(ctx.user, position),
            "mean_channel_rate_bps": 0.0,
            "rate_bps": 0.0,
        }
        if tracked:
            link_view = VisibleSatellite(target.sat_id, elevation, slant_range, target.shell)
            channels = ctx.simulator.draw_cluster([link_view], t, step, experiment.epsilon)
            record["mean_channel_rate_bps"] = bandwidth_hz * large_scale_rate(ctx, slant_range)
            record["rate_bps"] = ctx.evaluate(channels, Mode.SINGLE_SAT).rate_bits_per_sec
        records.append(record)
    frame = pd.DataFrame(records)

    aggregates = {
        "sat_id": target.sat_id,
        "rise_s": satellite_pass.rise_s,
        "set_s": satellite_pass.set_s,
        "visibility_duration_s": satellite_pass.duration_s,
        "peak_window_s": peak_window_s,
        "max_elevation_deg": float(elevations.max()),
        "min_ground_distance_km": float(ground.min()),
        "peak_mean_channel_rate_bps": float(bandwidth_hz * rates.max()),
        "mean_rate_bps": float(frame["rate_bps"].mean()),
    }
    logger.info(
        "Satellite %d in view for %.0f s, near-peak for %.0f s",
        target.sat_id,
        satellite_pass.duration_s,
        peak_window_s,
    )
    return RunResult("baseline-single", frame, aggregates)
