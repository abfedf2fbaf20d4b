"""Loo fading: log-normal line-of-sight amplitude plus Rayleigh multipath."""

import math
from dataclasses import dataclass

import numpy as np

from satcoop.errors import DomainError
from satcoop.utils.rng import complex_normal

_DB_TO_NEPER_POWER = math.log(10.0) / 10.0


@dataclass(frozen=True)
class LooParams:
    m_a_db: float
    sigma_a_db: float
    mp_db: float

    def __post_init__(self):
        if self.sigma_a_db < 0:
            raise DomainError(f"sigma_a_db must be >= 0, got {self.sigma_a_db}")

    @property
    def los_power(self) -> float:
        """E|h_los|^2 of the log-normal amplitude."""
        mean = _DB_TO_NEPER_POWER * self.m_a_db
        spread = _DB_TO_NEPER_POWER * self.sigma_a_db
        return math.exp(mean + 0.5 * spread**2)

    @property
    def mp(self) -> float:
        return 10.0 ** (self.mp_db / 10.0)

    @property
    def k_factor(self) -> float:
        return math.inf if self.mp == 0 else self.los_power / self.mp

    @property
    def total_power(self) -> float:
        return self.los_power + self.mp


def sample_loo(params: LooParams, rng: np.random.Generator, size=None):
    """Draw ``(h_los, h_nlos)`` with independent uniform phases."""
    amplitude_db = rng.normal(params.m_a_db, params.sigma_a_db, size)
    los_phase = rng.uniform(0.0, 2.0 * np.pi, size)
    h_los = 10.0 ** (amplitude_db / 20.0) * np.exp(1j * los_phase)
    h_nlos = math.sqrt(params.mp) * complex_normal(rng, size)
    return h_los, h_nlos


def channel_coefficient(fspl, K, h_los, h_nlos):
    """h = (sqrt(K/(K+1)) * h_los + sqrt(1/(K+1)) * h_nlos) / fspl."""
    fspl_arr = np.asarray(fspl, dtype=float)
    K_arr = np.asarray(K, dtype=float)
    if np.any(~(fspl_arr > 0)):
        raise DomainError(f"fspl must be > 0, got {fspl}")
    if np.any(K_arr < 0):
        raise DomainError(f"K must be >= 0, got {K}")

    finite = np.isfinite(K_arr)
    los_weight = np.sqrt(np.divide(K_arr, K_arr + 1.0, out=np.ones_like(K_arr), where=finite))
    nlos_weight = np.sqrt(np.divide(1.0, K_arr + 1.0, out=np.zeros_like(K_arr), where=finite))
    h = (los_weight * np.asarray(h_los) + nlos_weight * np.asarray(h_nlos)) / fspl_arr
    return complex(h) if np.ndim(h) == 0 else h


def draw_channel(params: LooParams, fspl, rng: np.random.Generator, size=None):
    """One Loo draw turned into a channel coefficient.

    Components are scaled to unit RMS, weighted by K, and the state's absolute
    power E|h_los|^2 + MP is restored, so E|h * fspl|^2 equals that power.
    Returns ``(h, h_los, h_nlos)``.
    """
    h_los, h_nlos = sample_loo(params, rng, size)
    los_unit = h_los / math.sqrt(params.los_power)
    nlos_unit = h_nlos / math.sqrt(params.mp) if params.mp > 0 else np.zeros_like(h_nlos)
    h = math.sqrt(params.total_power) * channel_coefficient(
        fspl, params.k_factor, los_unit, nlos_unit
    )
    return h, h_los, h_nlos
