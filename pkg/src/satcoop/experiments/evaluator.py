"""Shared machinery: scenario context, per-cluster detection and the step runner."""

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from satcoop.channel.link_budget import LinkBudget
from satcoop.channel.simulator import ChannelSimulator, ClusterChannels
from satcoop.config.scenario import GroupSelection, Mode, RateEvaluation, ScenarioConfig
from satcoop.detection.full_csi import DetectorResult, FullCsiInput, detect_full
from satcoop.detection.partial_csi import detect_partial, partial_input_for_cluster
from satcoop.errors import DomainError
from satcoop.orbits.constellation import (
    ConstellationArrays,
    build_walker_constellation,
    constellation_arrays,
    propagate_positions,
)
from satcoop.orbits.visibility import GroundUser, VisibleSatellite, visible_from_positions
from satcoop.utils.cache import MomentCache
from satcoop.utils.settings import get_settings

logger = logging.getLogger(__name__)

GROUP_SHELLS = {GroupSelection.GROUP1: 0, GroupSelection.GROUP2: 1}


def select_group(arrays: ConstellationArrays, group: GroupSelection) -> ConstellationArrays:
    group = GroupSelection(group)
    if group is GroupSelection.BOTH:
        return arrays
    shell = GROUP_SHELLS[group]
    if not np.any(arrays.shell == shell):
        raise DomainError(f"group {group.value} selects shell {shell + 1}, which is not configured")
    return arrays.subset(arrays.shell == shell)


@dataclass
class ExperimentContext:
    config: ScenarioConfig
    arrays: ConstellationArrays
    user: GroundUser
    link: LinkBudget
    simulator: ChannelSimulator

    @classmethod
    def build(
        cls, config: ScenarioConfig, link: Optional[LinkBudget] = None
    ) -> "ExperimentContext":
        link = link or config.link.to_budget()
        elements = build_walker_constellation(config.constellation.to_spec())
        arrays = select_group(constellation_arrays(elements), config.experiment.group_selection)
        channel = config.channel
        simulator = ChannelSimulator(
            channel.to_process(),
            link,
            config.experiment.master_seed,
            moment_samples=channel.moment_samples,
            clamp_delta=channel.clamp_delta,
            variance_includes_fspl=channel.variance_includes_fspl,
            cache=MomentCache(get_settings().cache_dir),
        )
        return cls(config, arrays, config.user.to_user(), link, simulator)

    def __enter__(self) -> "ExperimentContext":
        return self

    def __exit__(self, *exc_info):
        self.close()

    def close(self) -> None:
        self.simulator.close()

    def time_at(self, step: int) -> float:
        experiment = self.config.experiment
        return self.arrays.epoch_s + step * experiment.time_step_s

    def visible(
        self, t: float, min_elevation_deg: Optional[float] = None
    ) -> list[VisibleSatellite]:
        if min_elevation_deg is None:
            min_elevation_deg = self.config.experiment.min_elevation_deg
        positions = propagate_positions(self.arrays, t)
        return visible_from_positions(
            self.arrays.sat_id, positions, self.user, min_elevation_deg, self.arrays.shell
        )

    def evaluate(self, channels: ClusterChannels, mode: Mode) -> DetectorResult:
        """Combining weights, MSE and rate of ``channels`` under ``mode``."""
        mode = Mode(mode)
        link = self.link
        true_h = RateEvaluation(self.config.experiment.rate_evaluation) is RateEvaluation.TRUE_H
        if mode is Mode.SINGLE_SAT:
            channels, mode = channels.head(1), Mode.FULL_CSI
        if mode is Mode.FULL_CSI:
            inp = FullCsiInput(channels.h_hat, channels.error_variances, link.p, link.sigma2)
            return detect_full(inp, link.bandwidth_hz, h_true=channels.h if true_h else None)
        inp = partial_input_for_cluster(
            channels.h_hat, channels.moments, link.p, link.sigma2, self.config.channel.clamp_delta
        )
        return detect_partial(
            inp, link.bandwidth_hz, h_true_1=channels.h[0] if true_h else None
        )


def effective_size(L: int, visible_count: int, mode: Mode) -> int:
    if Mode(mode) is Mode.SINGLE_SAT:
        return min(1, visible_count)
    return min(L, visible_count)


def map_steps(
    worker: Callable[..., list], config: ScenarioConfig, num_items: int, threads: int = 1, **kwargs
) -> list:
    """Run ``worker(config, indices, **kwargs)`` over contiguous chunks of items.

    Chunks go to worker processes when ``threads > 1``; records come back in
    index order whatever the worker count.
    """
    indices = np.arange(num_items)
    workers = max(1, min(threads, num_items))
    if workers == 1:
        return worker(config, [int(i) for i in indices], **kwargs)

    chunks = [[int(i) for i in chunk] for chunk in np.array_split(indices, workers)]
    logger.info("Running %d items in %d worker processes", num_items, workers)
    with ProcessPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(worker, config, chunk, **kwargs) for chunk in chunks]
        results = [future.result() for future in futures]
    return [record for chunk in results for record in chunk]
