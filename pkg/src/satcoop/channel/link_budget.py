from dataclasses import dataclass, replace

import numpy as np

from satcoop.errors import DomainError

BOLTZMANN = 1.380649e-23  # J/K
SPEED_OF_LIGHT = 299_792_458.0  # m/s


def db_to_linear(value_db: float) -> float:
    return 10.0 ** (value_db / 10.0)


@dataclass(frozen=True)
class LinkBudget:
    power_dbw: float
    tx_gain_db: float
    rx_gain_db: float
    carrier_hz: float
    bandwidth_hz: float
    noise_temperature_k: float = 290.0

    def __post_init__(self):
        for name in ("carrier_hz", "bandwidth_hz", "noise_temperature_k"):
            if not getattr(self, name) > 0:
                raise DomainError(f"{name} must be > 0, got {getattr(self, name)}")

    @property
    def p(self) -> float:
        """Effective transmit power P_T * G_T * G_R in watts."""
        return db_to_linear(self.power_dbw + self.tx_gain_db + self.rx_gain_db)

    @property
    def sigma2(self) -> float:
        return noise_power(self.noise_temperature_k, self.bandwidth_hz)

    @property
    def wavelength_m(self) -> float:
        return SPEED_OF_LIGHT / self.carrier_hz

    def with_band(self, carrier_hz: float, bandwidth_hz: float) -> "LinkBudget":
        return replace(self, carrier_hz=carrier_hz, bandwidth_hz=bandwidth_hz)

    def with_rx_gain(self, rx_gain_db: float) -> "LinkBudget":
        return replace(self, rx_gain_db=rx_gain_db)


def fspl(d, wavelength):
    """Amplitude-domain free-space path loss 4*pi*d/lambda.

    Accepts scalars or arrays of distances.
    """
    d_arr = np.asarray(d, dtype=float)
    if np.any(~(d_arr > 0)) or not wavelength > 0:
        raise DomainError(
            f"fspl needs positive distance and wavelength, got d={d}, lambda={wavelength}"
        )
    loss = 4.0 * np.pi * d_arr / wavelength
    return float(loss) if loss.ndim == 0 else loss


def noise_power(noise_temperature_k: float, bandwidth_hz: float) -> float:
    if not noise_temperature_k > 0 or not bandwidth_hz > 0:
        raise DomainError(
            f"noise power needs positive temperature and bandwidth, "
            f"got T={noise_temperature_k}, BW={bandwidth_hz}"
        )
    return BOLTZMANN * noise_temperature_k * bandwidth_hz
