"""Uncoded BPSK bit-error rate by Monte Carlo over drawn channels."""

import logging
import math
import time
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
import pandas as pd
from scipy.stats import norm

from satcoop.channel.simulator import ClusterChannels
from satcoop.config.scenario import Mode, ScenarioConfig
from satcoop.detection.partial_csi import local_normalize
from satcoop.detection.symbols import bpsk_modulate, detect_symbols
from satcoop.errors import DomainError
from satcoop.experiments.evaluator import ExperimentContext, effective_size, map_steps
from satcoop.experiments.results import RunResult
from satcoop.orbits.visibility import select_cluster
from satcoop.utils.rng import Purpose, stream

logger = logging.getLogger(__name__)

MIN_MC_SYMBOLS = 10_000


@dataclass(frozen=True)
class BerEstimate:
    errors: int
    symbols: int
    ber: float
    ci_low: float
    ci_high: float


def wilson_interval(errors: int, trials: int, confidence: float = 0.95) -> tuple[float, float]:
    if trials <= 0:
        return 0.0, 1.0
    z = norm.ppf(0.5 + confidence / 2.0)
    rate = errors / trials
    denominator = 1.0 + z**2 / trials
    center = (rate + z**2 / (2.0 * trials)) / denominator
    half = z * math.sqrt(rate * (1.0 - rate) / trials + z**2 / (4.0 * trials**2)) / denominator
    # exact at the extremes
    low = 0.0 if errors == 0 else max(center - half, 0.0)
    high = 1.0 if errors == trials else min(center + half, 1.0)
    return low, high


def estimate_from_counts(errors: int, symbols: int) -> BerEstimate:
    low, high = wilson_interval(errors, symbols)
    return BerEstimate(errors, symbols, errors / symbols if symbols else 0.0, low, high)


@dataclass(frozen=True)
class Received:
    """One coherence block as seen by the combiner."""

    weights: np.ndarray
    h: np.ndarray
    normalizer: Optional[np.ndarray] = None
    normalizer_floor: Optional[np.ndarray] = None


def block_sizes(mc_symbols: int, block_symbols: int) -> list[int]:
    full, rest = divmod(mc_symbols, block_symbols)
    return [block_symbols] * full + ([rest] if rest else [])


def count_block_errors(
    received: Received, n: int, p: float, sigma2: float, rng: np.random.Generator
) -> int:
    """Send ``n`` random BPSK symbols through one block and count bit errors.

    Noise for satellite m is the m-th slice of one (L, n) draw, so smaller
    clusters see the same noise as the leading satellites of larger ones.
    """
    bits = rng.integers(0, 2, n)
    L = len(received.h)
    noise = rng.standard_normal((L, n, 2))
    noise = math.sqrt(sigma2 / 2.0) * (noise[..., 0] + 1j * noise[..., 1])
    Y = math.sqrt(p) * received.h[:, None] * bpsk_modulate(bits)[None, :] + noise
    if received.normalizer is not None:
        Y = local_normalize(Y, received.normalizer[:, None], received.normalizer_floor[:, None])
    _, decided = detect_symbols(received.weights, Y.T)
    return int(np.count_nonzero(decided != bits))


def ber_montecarlo(
    weights_provider: Callable[[int], Received],
    mc_symbols: int,
    rng_stream: Callable[[int], np.random.Generator],
    p: float,
    sigma2: float,
    block_symbols: int = 1000,
) -> BerEstimate:
    """Error count over ``mc_symbols`` with a Wilson 95% interval.

    Symbols are sent in blocks; ``weights_provider(block)`` gives the channel
    and combiner of each block and ``rng_stream(block)`` its symbol/noise stream.
    """
    if mc_symbols < MIN_MC_SYMBOLS:
        raise DomainError(f"mc_symbols must be >= {MIN_MC_SYMBOLS}, got {mc_symbols}")
    errors = 0
    for block, n in enumerate(block_sizes(mc_symbols, block_symbols)):
        errors += count_block_errors(weights_provider(block), n, p, sigma2, rng_stream(block))
    return estimate_from_counts(errors, mc_symbols)


def received_for(ctx: ExperimentContext, channels: ClusterChannels, mode: Mode) -> Received:
    mode = Mode(mode)
    result = ctx.evaluate(channels, mode)
    if mode is Mode.SINGLE_SAT:
        return Received(result.weights, channels.h[:1])
    if mode is Mode.FULL_CSI:
        return Received(result.weights, channels.h)
    floors = ctx.config.channel.clamp_delta * np.sqrt(
        [m.e_abs_hhat_sq for m in channels.moments]
    )
    return Received(result.weights, channels.h, channels.h_hat, floors)


def sample_times(ctx: ExperimentContext) -> list[float]:
    """Midpoints of equal strata across the run."""
    experiment = ctx.config.experiment
    n = experiment.ber_time_samples
    span = experiment.num_steps * experiment.time_step_s
    return [ctx.arrays.epoch_s + (j + 0.5) * span / n for j in range(n)]


def _ber_chunk(config: ScenarioConfig, samples: list[int], rx_gain_db: float) -> list[dict]:
    link = config.link.to_budget().with_rx_gain(rx_gain_db)
    experiment = config.experiment
    coherence = config.channel.coherence_interval_s
    sizes = block_sizes(experiment.mc_symbols, experiment.ber_block_symbols)
    records = []
    with ExperimentContext.build(config, link) as ctx:
        times = sample_times(ctx)
        for j in samples:
            t = times[j]
            visible = ctx.visible(t)
            if not visible:
                logger.warning("No satellite visible at t=%.1f s; BER sample skipped", t)
                continue
            cluster = select_cluster(visible, max(experiment.L_values))
            fading = [
                ctx.simulator.fading(cluster, t + b * coherence, j, block=b)
                for b in range(len(sizes))
            ]

            def symbol_stream(block: int) -> np.random.Generator:
                return stream(experiment.master_seed, Purpose.SYMBOLS, j, block)

            for epsilon in experiment.ber_epsilon_values:
                blocks = [
                    ctx.simulator.with_estimation_error(channels, epsilon, j, block=b)
                    for b, channels in enumerate(fading)
                ]
                for mode in experiment.ber_modes:
                    for L in experiment.L_values:
                        estimate = ber_montecarlo(
                            lambda b: received_for(ctx, blocks[b].head(L), mode),
                            experiment.mc_symbols,
                            symbol_stream,
                            ctx.link.p,
                            ctx.link.sigma2,
                            experiment.ber_block_symbols,
                        )
                        records.append(
                            {
                                "sample": j,
                                "mode": Mode(mode).value,
                                "epsilon": epsilon,
                                "L": L,
                                "L_effective": effective_size(L, len(visible), mode),
                                "errors": estimate.errors,
                                "symbols": estimate.symbols,
                            }
                        )
    return records


def ber_vs_cluster_size(config: ScenarioConfig, threads: int = 1) -> RunResult:
    """BER with Wilson 95% interval per (G_R, mode, epsilon, L), pooled over time samples.

    Every mode and epsilon sees the same fading, symbols and noise, and a smaller
    cluster is the nearest part of a larger one, so the curves are paired.
    """
    experiment = config.experiment
    started = time.perf_counter()
    rows = []
    for rx_gain_db in experiment.ber_rx_gain_db:
        records = map_steps(
            _ber_chunk, config, experiment.ber_time_samples, threads, rx_gain_db=rx_gain_db
        )
        if not records:
            raise DomainError("no satellite visible at any BER time sample")
        frame = pd.DataFrame(records)
        for (mode, epsilon, L), group in frame.groupby(["mode", "epsilon", "L"], sort=False):
            estimate = estimate_from_counts(int(group["errors"].sum()), int(group["symbols"].sum()))
            rows.append(
                {
                    "mode": mode,
                    "rx_gain_db": rx_gain_db,
                    "epsilon": epsilon,
                    "L": int(L),
                    "ber": estimate.ber,
                    "ci_low": estimate.ci_low,
                    "ci_high": estimate.ci_high,
                    "errors": estimate.errors,
                    "symbols": estimate.symbols,
                    "time_samples": len(group),
                }
            )
    table = pd.DataFrame(rows)
    aggregates = {
        f"{mode}/eps={epsilon:g}/G_R={gain:g}dB": {
            int(L): float(b) for L, b in zip(group["L"], group["ber"])
        }
        for (mode, epsilon, gain), group in table.groupby(
            ["mode", "epsilon", "rx_gain_db"], sort=False
        )
    }
    logger.info("BER vs cluster size finished in %.1f s", time.perf_counter() - started)
    return RunResult("ber-vs-l", table, aggregates)
