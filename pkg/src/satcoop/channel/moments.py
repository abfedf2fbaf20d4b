import logging
import math
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from satcoop.channel.loo import draw_channel
from satcoop.channel.states import ChannelState, StateProcess
from satcoop.errors import DomainError
from satcoop.utils.rng import complex_normal

logger = logging.getLogger(__name__)

MIN_MOMENT_SAMPLES = 10_000


@dataclass(frozen=True)
class ChannelMoments:
    """Long-term statistics a satellite shares in the partial-CSI case."""

    var_h: float
    e_abs_hhat_sq: float
    e_abs_htilde_sq: float
    e_inv_hhat_sq: float
    epsilon: float
    mean_h: complex = 0j

    def __post_init__(self):
        for name in ("var_h", "e_abs_hhat_sq", "e_abs_htilde_sq", "e_inv_hhat_sq", "epsilon"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value >= 0):
                raise DomainError(f"{name} must be finite and >= 0, got {value}")

    def scaled(self, fspl: float) -> "ChannelMoments":
        """Moments of h / fspl given the moments of h."""
        gain = 1.0 / fspl**2
        return replace(
            self,
            var_h=self.var_h * gain,
            e_abs_hhat_sq=self.e_abs_hhat_sq * gain,
            e_abs_htilde_sq=self.e_abs_htilde_sq * gain,
            e_inv_hhat_sq=self.e_inv_hhat_sq / gain,
            mean_h=self.mean_h / fspl,
        )


def apply_estimation_error(h, var_h, epsilon: float, rng: np.random.Generator):
    """Return ``(h_hat, h_tilde)`` with h_tilde ~ CN(0, epsilon^2 * var_h).

    The unit normals are always drawn, so two calls on equal streams with
    different ``epsilon`` give scaled copies of the same error.
    """
    if epsilon < 0 or np.any(np.asarray(var_h) < 0):
        raise DomainError(f"epsilon and var_h must be >= 0, got {epsilon}, {var_h}")
    h = np.asarray(h, dtype=complex)
    h_tilde = epsilon * np.sqrt(var_h) * complex_normal(rng, h.shape)
    h_hat = h + h_tilde
    if h.ndim == 0:
        return complex(h_hat), complex(h_tilde)
    return h_hat, h_tilde


def draw_stationary_channels(process: StateProcess, fspl: float, num_samples: int, rng):
    """Channel draws over the stationary GOOD/BAD mixture."""
    good = rng.random(num_samples) < process.stationary_probability(ChannelState.GOOD)
    h_good, los_good, _ = draw_channel(process.good, fspl, rng, num_samples)
    h_bad, los_bad, _ = draw_channel(process.bad, fspl, rng, num_samples)
    h = np.where(good, h_good, h_bad)
    h_los = np.where(good, los_good, los_bad)
    return h, h_los


def channel_moments(
    process: StateProcess,
    fspl: float,
    epsilon: float,
    num_samples: int,
    clamp_delta: float,
    rng: np.random.Generator,
    variance_includes_fspl: bool = True,
    state: Optional[ChannelState] = None,
) -> ChannelMoments:
    """Monte Carlo long-term moments of a satellite's channel and its estimate.

    Statistics are over the Loo fading of ``state``, or over the stationary
    GOOD/BAD mixture when no state is given.

    var(h) is taken around the mean of h rotated onto its line-of-sight phase,
    the frame in which a receiver tracking the direct path sees the channel.
    |h_hat| is clamped below at ``clamp_delta * rms(h_hat)`` before inversion;
    without the clamp E|1/h_hat|^2 is unbounded for Gaussian errors.

    With ``variance_includes_fspl=False`` var(h) is the small-scale variance
    only, and the error added to h/fspl keeps that (unscaled) variance.
    """
    if num_samples < MIN_MOMENT_SAMPLES:
        raise DomainError(f"num_samples must be >= {MIN_MOMENT_SAMPLES}, got {num_samples}")
    if not clamp_delta > 0:
        raise DomainError(f"clamp_delta must be > 0, got {clamp_delta}")
    if epsilon < 0:
        raise DomainError(f"epsilon must be >= 0, got {epsilon}")

    if state is None:
        g, g_los = draw_stationary_channels(process, 1.0, num_samples, rng)
    else:
        loo = process.loo(ChannelState(state))
        g, g_los, _ = draw_channel(loo, 1.0, rng, num_samples)
    g_ref = g * np.exp(-1j * np.angle(g_los))
    mean_g = complex(np.mean(g_ref))
    var_g = float(np.mean(np.abs(g_ref - mean_g) ** 2))

    h, mean_h = g_ref / fspl, mean_g / fspl
    var_h = var_g / fspl**2 if variance_includes_fspl else var_g
    h_hat, _ = apply_estimation_error(h, var_h, epsilon, rng)

    abs_sq = np.abs(h_hat) ** 2
    e_abs_hhat_sq = float(np.mean(abs_sq))
    floor = clamp_delta**2 * e_abs_hhat_sq
    clamped = np.count_nonzero(abs_sq < floor)
    if clamped:
        logger.debug("Clamped %d of %d channel estimates before inversion", clamped, num_samples)
    e_inv_hhat_sq = float(np.mean(1.0 / np.maximum(abs_sq, floor)))

    return ChannelMoments(
        var_h=var_h,
        e_abs_hhat_sq=e_abs_hhat_sq,
        e_abs_htilde_sq=epsilon**2 * var_h,
        e_inv_hhat_sq=e_inv_hhat_sq,
        epsilon=epsilon,
        mean_h=mean_h,
    )
