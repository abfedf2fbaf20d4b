import logging

import numpy as np
import pandas as pd

from satcoop.config.scenario import ScenarioConfig
from satcoop.experiments.evaluator import ExperimentContext, map_steps
from satcoop.experiments.results import RunResult
from satcoop.orbits.constellation import propagate_positions
from satcoop.orbits.visibility import ground_distance_km, visible_from_positions

logger = logging.getLogger(__name__)


def _visibility_chunk(config: ScenarioConfig, steps: list[int]) -> list[dict]:
    with ExperimentContext.build(config) as ctx:
        shells = [int(s) for s in np.unique(ctx.arrays.shell)]
        records = []
        for step in steps:
            t = ctx.time_at(step)
            positions = propagate_positions(ctx.arrays, t)
            visible = visible_from_positions(
                ctx.arrays.sat_id,
                positions,
                ctx.user,
                config.experiment.min_elevation_deg,
                ctx.arrays.shell,
            )
            record = {"step": step, "time_s": t, "visible_count": len(visible)}
            for shell in shells:
                record[f"visible_shell{shell + 1}"] = sum(1 for v in visible if v.shell == shell)
            if visible:
                nearest = visible[0]
                index = int(np.searchsorted(ctx.arrays.sat_id, nearest.sat_id))
                record.update(
                    nearest_sat_id=nearest.sat_id,
                    nearest_range_km=nearest.slant_range_m / 1000.0,
                    nearest_elevation_deg=nearest.elevation_deg,
                    nearest_ground_distance_km=ground_distance_km(ctx.user, positions[index]),
                )
            else:
                logger.warning("No satellite visible at t=%.1f s", t)
                record.update(
                    nearest_sat_id=None,
                    nearest_range_km=None,
                    nearest_elevation_deg=None,
                    nearest_ground_distance_km=None,
                )
            records.append(record)
    return records


def visibility_timeseries(config: ScenarioConfig, threads: int = 1) -> RunResult:
    """Visible-satellite counts and the nearest satellite at every step."""
    frame = pd.DataFrame(
        map_steps(_visibility_chunk, config, config.experiment.num_steps, threads)
    )
    counts = frame["visible_count"]
    aggregates = {
        "min_visible": int(counts.min()),
        "max_visible": int(counts.max()),
        "mean_visible": float(counts.mean()),
        "min_visible_time_s": float(frame.loc[counts.idxmin(), "time_s"]),
    }
    logger.info(
        "Visible satellites: min %d at t=%.0f s, mean %.2f, max %d",
        aggregates["min_visible"],
        aggregates["min_visible_time_s"],
        aggregates["mean_visible"],
        aggregates["max_visible"],
    )
    return RunResult("visibility", frame, aggregates)
