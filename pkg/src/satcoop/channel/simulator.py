import bisect
import logging
from dataclasses import dataclass, replace
from typing import Optional, Sequence

import numpy as np

from satcoop.channel.link_budget import LinkBudget, fspl
from satcoop.channel.loo import draw_channel
from satcoop.channel.moments import ChannelMoments, apply_estimation_error, channel_moments
from satcoop.channel.states import ChannelState, StateProcess, iter_state_segments
from satcoop.orbits.visibility import VisibleSatellite
from satcoop.utils.cache import MomentCache
from satcoop.utils.rng import Purpose, stream

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ChannelDraw:
    sat_id: int
    h: complex
    h_hat: complex
    h_tilde: complex
    fspl: float
    state: ChannelState
    h_los: complex
    h_nlos: complex


@dataclass(frozen=True)
class ClusterChannels:
    """Channels of a cluster, nearest satellite first."""

    sat_ids: np.ndarray
    h: np.ndarray
    h_hat: np.ndarray
    h_tilde: np.ndarray
    fspl: np.ndarray
    states: tuple[ChannelState, ...]
    h_los: np.ndarray
    h_nlos: np.ndarray
    moments: tuple[ChannelMoments, ...] = ()
    epsilon: float = 0.0

    def __len__(self) -> int:
        return len(self.sat_ids)

    def __getitem__(self, i: int) -> ChannelDraw:
        return ChannelDraw(
            sat_id=int(self.sat_ids[i]),
            h=complex(self.h[i]),
            h_hat=complex(self.h_hat[i]),
            h_tilde=complex(self.h_tilde[i]),
            fspl=float(self.fspl[i]),
            state=self.states[i],
            h_los=complex(self.h_los[i]),
            h_nlos=complex(self.h_nlos[i]),
        )

    def head(self, L: int) -> "ClusterChannels":
        return replace(
            self,
            sat_ids=self.sat_ids[:L],
            h=self.h[:L],
            h_hat=self.h_hat[:L],
            h_tilde=self.h_tilde[:L],
            fspl=self.fspl[:L],
            states=self.states[:L],
            h_los=self.h_los[:L],
            h_nlos=self.h_nlos[:L],
            moments=self.moments[:L],
        )

    @property
    def error_variances(self) -> np.ndarray:
        return np.array([m.e_abs_htilde_sq for m in self.moments], dtype=float)


class _Timeline:
    """Lazily extended GOOD/BAD segments of one satellite."""

    def __init__(self, process: StateProcess, rng: np.random.Generator):
        self._segments = iter_state_segments(process, rng)
        self._starts: list[float] = []
        self._states: list[ChannelState] = []
        self._end = 0.0

    def state_at(self, t: float) -> ChannelState:
        while not self._states or self._end <= t:
            segment = next(self._segments)
            self._starts.append(segment.start)
            self._states.append(segment.state)
            self._end = segment.end
        index = max(bisect.bisect_right(self._starts, t) - 1, 0)
        return self._states[index]


class ChannelSimulator:
    """Channel draws for any (satellite, time step, coherence block).

    Every draw is taken from a stream keyed by what it is for, so results do not
    depend on call order or on which process evaluates a step.
    """

    def __init__(
        self,
        process: StateProcess,
        link: LinkBudget,
        master_seed: int,
        moment_samples: int = 100_000,
        clamp_delta: float = 1e-3,
        variance_includes_fspl: bool = True,
        cache: Optional[MomentCache] = None,
    ):
        self.process = process
        self.link = link
        self.master_seed = master_seed
        self.moment_samples = moment_samples
        self.clamp_delta = clamp_delta
        self.variance_includes_fspl = variance_includes_fspl
        self._cache = cache or MomentCache()
        self._timelines: dict[int, _Timeline] = {}
        self._unit_moments: dict[tuple[float, ChannelState], ChannelMoments] = {}

    def close(self) -> None:
        self._cache.close()

    def state_at(self, sat_id: int, t: float) -> ChannelState:
        timeline = self._timelines.get(sat_id)
        if timeline is None:
            timeline = _Timeline(self.process, stream(self.master_seed, Purpose.STATE, sat_id))
            self._timelines[sat_id] = timeline
        return timeline.state_at(t)

    def path_loss(self, slant_range_m) -> np.ndarray:
        return fspl(slant_range_m, self.link.wavelength_m)

    def moments(
        self, path_loss: float, epsilon: float, state: ChannelState = ChannelState.GOOD
    ) -> ChannelMoments:
        """Moments of a satellite in ``state`` at the given free-space path loss."""
        state = ChannelState(state)
        if self.variance_includes_fspl:
            unit = self._unit_moments.get((epsilon, state))
            if unit is None:
                key = self._moment_key(epsilon, state)
                unit = self._cache.get_or_compute(
                    key, lambda: self._compute_moments(1.0, epsilon, state)
                )
                self._unit_moments[(epsilon, state)] = unit
            return unit.scaled(path_loss)
        key = self._moment_key(epsilon, state, repr(float(path_loss)))
        return self._cache.get_or_compute(
            key, lambda: self._compute_moments(path_loss, epsilon, state)
        )

    def _moment_key(self, epsilon: float, state: ChannelState, *extra) -> str:
        return MomentCache.key(
            "channel-moments",
            repr(self.process),
            state.value,
            repr(float(epsilon)),
            repr(float(self.clamp_delta)),
            self.moment_samples,
            self.master_seed,
            self.variance_includes_fspl,
            *extra,
        )

    def _compute_moments(
        self, path_loss: float, epsilon: float, state: ChannelState
    ) -> ChannelMoments:
        logger.debug("Computing %s channel moments for epsilon=%s", state.value, epsilon)
        return channel_moments(
            self.process,
            path_loss,
            epsilon,
            self.moment_samples,
            self.clamp_delta,
            stream(self.master_seed, Purpose.MOMENTS, int(state is ChannelState.BAD)),
            variance_includes_fspl=self.variance_includes_fspl,
            state=state,
        )

    def fading(
        self, cluster: Sequence[VisibleSatellite], t: float, step: int, block: int = 0
    ) -> ClusterChannels:
        """True channels of ``cluster`` with perfect estimates."""
        sat_ids = np.array([s.sat_id for s in cluster], dtype=np.int64)
        path_loss = np.atleast_1d(self.path_loss([s.slant_range_m for s in cluster]))
        states, h, h_los, h_nlos = [], [], [], []
        for sat_id, loss in zip(sat_ids, path_loss):
            state = self.state_at(int(sat_id), t)
            rng = stream(self.master_seed, Purpose.FADING, int(sat_id), step, block)
            coefficient, los, nlos = draw_channel(self.process.loo(state), loss, rng)
            states.append(state)
            h.append(coefficient)
            h_los.append(los)
            h_nlos.append(nlos)
        h = np.array(h, dtype=complex)
        return ClusterChannels(
            sat_ids=sat_ids,
            h=h,
            h_hat=h.copy(),
            h_tilde=np.zeros_like(h),
            fspl=path_loss,
            states=tuple(states),
            h_los=np.array(h_los, dtype=complex),
            h_nlos=np.array(h_nlos, dtype=complex),
        )

    def with_estimation_error(
        self, channels: ClusterChannels, epsilon: float, step: int, block: int = 0
    ) -> ClusterChannels:
        """Attach estimates with error variance epsilon^2 * var(h) and the moments behind them."""
        moments = tuple(
            self.moments(loss, epsilon, state)
            for loss, state in zip(channels.fspl, channels.states)
        )
        h_hat = np.empty_like(channels.h)
        h_tilde = np.empty_like(channels.h)
        for i, (sat_id, m) in enumerate(zip(channels.sat_ids, moments)):
            rng = stream(self.master_seed, Purpose.ESTIMATION, int(sat_id), step, block)
            h_hat[i], h_tilde[i] = apply_estimation_error(channels.h[i], m.var_h, epsilon, rng)
        return replace(channels, h_hat=h_hat, h_tilde=h_tilde, moments=moments, epsilon=epsilon)

    def draw_cluster(
        self,
        cluster: Sequence[VisibleSatellite],
        t: float,
        step: int,
        epsilon: float,
        block: int = 0,
    ) -> ClusterChannels:
        channels = self.fading(cluster, t, step, block)
        return self.with_estimation_error(channels, epsilon, step, block)
