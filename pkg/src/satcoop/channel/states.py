"""Two-state (GOOD/BAD) semi-Markov shadowing process."""

import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterator, Optional

import numpy as np

from satcoop.channel.loo import LooParams
from satcoop.errors import DomainError


class ChannelState(str, Enum):
    GOOD = "GOOD"
    BAD = "BAD"

    @property
    def other(self) -> "ChannelState":
        return ChannelState.BAD if self is ChannelState.GOOD else ChannelState.GOOD


@dataclass(frozen=True)
class SojournDistribution:
    """Log-normal sojourn time: log10(duration) ~ N(log10(median_s), sigma_log10)."""

    median_s: float
    sigma_log10: float = 0.5

    def __post_init__(self):
        if not self.median_s > 0:
            raise DomainError(f"median_s must be > 0, got {self.median_s}")
        if self.sigma_log10 < 0:
            raise DomainError(f"sigma_log10 must be >= 0, got {self.sigma_log10}")

    @property
    def mean_s(self) -> float:
        return self.median_s * math.exp(0.5 * (math.log(10.0) * self.sigma_log10) ** 2)


@dataclass(frozen=True)
class StateProcess:
    good: LooParams
    bad: LooParams
    good_sojourn: SojournDistribution
    bad_sojourn: SojournDistribution
    initial_state: Optional[ChannelState] = None

    def loo(self, state: ChannelState) -> LooParams:
        return self.good if state is ChannelState.GOOD else self.bad

    def sojourn(self, state: ChannelState) -> SojournDistribution:
        return self.good_sojourn if state is ChannelState.GOOD else self.bad_sojourn

    def stationary_probability(self, state: ChannelState) -> float:
        """Long-run fraction of time spent in ``state``."""
        good, bad = self.good_sojourn.mean_s, self.bad_sojourn.mean_s
        return (good if state is ChannelState.GOOD else bad) / (good + bad)


@dataclass(frozen=True)
class StateSegment:
    state: ChannelState
    start: float
    duration: float

    @property
    def end(self) -> float:
        return self.start + self.duration


DEFAULT_SUBURBAN = StateProcess(
    good=LooParams(m_a_db=-0.2, sigma_a_db=0.5, mp_db=-15.0),
    bad=LooParams(m_a_db=-10.0, sigma_a_db=3.0, mp_db=-20.0),
    good_sojourn=SojournDistribution(median_s=30.0, sigma_log10=0.5),
    bad_sojourn=SojournDistribution(median_s=10.0, sigma_log10=0.5),
)

PRESETS = {"default-suburban": DEFAULT_SUBURBAN}


def sample_sojourn(distribution: SojournDistribution, rng: np.random.Generator, size=None):
    return distribution.median_s * 10.0 ** (distribution.sigma_log10 * rng.standard_normal(size))


def initial_state(process: StateProcess, rng: np.random.Generator) -> ChannelState:
    # drawn even when fixed so later draws do not depend on the override
    u = rng.random()
    if process.initial_state is not None:
        return process.initial_state
    if u < process.stationary_probability(ChannelState.GOOD):
        return ChannelState.GOOD
    return ChannelState.BAD


def iter_state_segments(process: StateProcess, rng: np.random.Generator) -> Iterator[StateSegment]:
    """Endless alternating segments starting at t = 0."""
    state = initial_state(process, rng)
    start = 0.0
    while True:
        duration = float(sample_sojourn(process.sojourn(state), rng))
        yield StateSegment(state, start, duration)
        start += duration
        state = state.other


def sample_state_sequence(
    process: StateProcess, horizon: float, rng: np.random.Generator
) -> list[StateSegment]:
    """Segments tiling ``[0, horizon]``; the last one is cut at the horizon."""
    if not horizon > 0:
        raise DomainError(f"horizon must be > 0, got {horizon}")
    segments = []
    for segment in iter_state_segments(process, rng):
        if segment.end >= horizon:
            segments.append(StateSegment(segment.state, segment.start, horizon - segment.start))
            return segments
        segments.append(segment)
