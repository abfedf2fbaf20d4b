"""Walker shells on circular orbits around a spherical, rotating Earth."""

import math
from dataclasses import dataclass

import numpy as np

from satcoop.errors import DomainError

EARTH_RADIUS_M = 6_371_000.0
MU_EARTH = 3.986004418e14  # m^3/s^2
EARTH_ROTATION_RATE = 7.2921159e-5  # rad/s

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class ShellSpec:
    altitude_m: float
    inclination_deg: float
    num_planes: int
    sats_per_plane: int
    raan_spread_deg: float = 360.0
    phasing_step_deg: float = 0.0

    def __post_init__(self):
        if self.num_planes <= 0:
            raise DomainError(f"num_planes must be > 0, got {self.num_planes}")
        if self.sats_per_plane <= 0:
            raise DomainError(f"sats_per_plane must be > 0, got {self.sats_per_plane}")
        if not 0.0 < self.inclination_deg < 180.0:
            raise DomainError(f"inclination_deg must be in (0, 180), got {self.inclination_deg}")
        if self.altitude_m <= 0.0:
            raise DomainError(f"altitude_m must be > 0, got {self.altitude_m}")
        if not 0.0 < self.raan_spread_deg <= 360.0:
            raise DomainError(f"raan_spread_deg must be in (0, 360], got {self.raan_spread_deg}")

    @property
    def size(self) -> int:
        return self.num_planes * self.sats_per_plane

    @property
    def raan_spacing_deg(self) -> float:
        return self.raan_spread_deg / self.num_planes


@dataclass(frozen=True)
class ConstellationSpec:
    shells: tuple[ShellSpec, ...]
    epoch_s: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "shells", tuple(self.shells))
        if not self.shells:
            raise DomainError("shells must contain at least one shell")

    @property
    def size(self) -> int:
        return sum(shell.size for shell in self.shells)


@dataclass(frozen=True)
class OrbitalElements:
    sat_id: int
    semi_major_axis: float
    inclination: float
    raan: float
    true_anomaly_at_epoch: float
    shell: int = 0
    epoch_s: float = 0.0

    @property
    def mean_motion(self) -> float:
        return math.sqrt(MU_EARTH / self.semi_major_axis**3)


@dataclass(frozen=True)
class SatelliteState:
    sat_id: int
    position_ecef: np.ndarray
    time: float
    shell: int = 0


def orbital_period(semi_major_axis: float) -> float:
    return TWO_PI * math.sqrt(semi_major_axis**3 / MU_EARTH)


def build_walker_constellation(spec: ConstellationSpec) -> list[OrbitalElements]:
    """Elements for every satellite, shell by shell, plane by plane.

    Plane j has RAAN j * raan_spread / num_planes; satellite k of plane j starts
    at true anomaly k * 360 / sats_per_plane + j * phasing_step. Satellite ids run
    consecutively across shells in that order.
    """
    elements = []
    sat_id = 0
    for shell_index, shell in enumerate(spec.shells):
        a = EARTH_RADIUS_M + shell.altitude_m
        inclination = math.radians(shell.inclination_deg)
        slot_deg = 360.0 / shell.sats_per_plane
        for j in range(shell.num_planes):
            raan = math.radians(j * shell.raan_spacing_deg) % TWO_PI
            for k in range(shell.sats_per_plane):
                anomaly = math.radians(k * slot_deg + j * shell.phasing_step_deg) % TWO_PI
                elements.append(
                    OrbitalElements(
                        sat_id=sat_id,
                        semi_major_axis=a,
                        inclination=inclination,
                        raan=raan,
                        true_anomaly_at_epoch=anomaly,
                        shell=shell_index,
                        epoch_s=spec.epoch_s,
                    )
                )
                sat_id += 1
    return elements


def _ecef(a, inclination, raan, anomaly, earth_angle):
    cos_u, sin_u = np.cos(anomaly), np.sin(anomaly)
    cos_o, sin_o = np.cos(raan), np.sin(raan)
    cos_i, sin_i = np.cos(inclination), np.sin(inclination)

    x = a * (cos_o * cos_u - sin_o * sin_u * cos_i)
    y = a * (sin_o * cos_u + cos_o * sin_u * cos_i)
    z = a * (sin_u * sin_i)

    # inertial -> Earth-fixed: rotate by -earth_angle about the polar axis
    cos_e, sin_e = np.cos(earth_angle), np.sin(earth_angle)
    return np.stack([cos_e * x + sin_e * y, -sin_e * x + cos_e * y, z], axis=-1)


def propagate(
    elements: OrbitalElements, t: float, earth_rotation: bool = True
) -> SatelliteState:
    """Earth-fixed position at time ``t`` (seconds; may precede the epoch)."""
    dt = t - elements.epoch_s
    anomaly = elements.true_anomaly_at_epoch + elements.mean_motion * dt
    earth_angle = EARTH_ROTATION_RATE * dt if earth_rotation else 0.0
    position = _ecef(
        elements.semi_major_axis, elements.inclination, elements.raan, anomaly, earth_angle
    )
    return SatelliteState(
        sat_id=elements.sat_id, position_ecef=position, time=t, shell=elements.shell
    )


@dataclass(frozen=True)
class ConstellationArrays:
    """Column form of a constellation, one entry per satellite."""

    sat_id: np.ndarray
    shell: np.ndarray
    semi_major_axis: np.ndarray
    inclination: np.ndarray
    raan: np.ndarray
    true_anomaly_at_epoch: np.ndarray
    mean_motion: np.ndarray
    epoch_s: float = 0.0

    def __len__(self) -> int:
        return len(self.sat_id)

    def subset(self, mask: np.ndarray) -> "ConstellationArrays":
        return ConstellationArrays(
            sat_id=self.sat_id[mask],
            shell=self.shell[mask],
            semi_major_axis=self.semi_major_axis[mask],
            inclination=self.inclination[mask],
            raan=self.raan[mask],
            true_anomaly_at_epoch=self.true_anomaly_at_epoch[mask],
            mean_motion=self.mean_motion[mask],
            epoch_s=self.epoch_s,
        )


def constellation_arrays(elements: list[OrbitalElements]) -> ConstellationArrays:
    a = np.array([e.semi_major_axis for e in elements], dtype=float)
    return ConstellationArrays(
        sat_id=np.array([e.sat_id for e in elements], dtype=np.int64),
        shell=np.array([e.shell for e in elements], dtype=np.int64),
        semi_major_axis=a,
        inclination=np.array([e.inclination for e in elements], dtype=float),
        raan=np.array([e.raan for e in elements], dtype=float),
        true_anomaly_at_epoch=np.array([e.true_anomaly_at_epoch for e in elements], dtype=float),
        mean_motion=np.sqrt(MU_EARTH / a**3),
        epoch_s=elements[0].epoch_s if elements else 0.0,
    )


def propagate_positions(
    arrays: ConstellationArrays, t: float, earth_rotation: bool = True
) -> np.ndarray:
    """(N, 3) Earth-fixed positions of every satellite in ``arrays`` at ``t``."""
    dt = t - arrays.epoch_s
    anomaly = arrays.true_anomaly_at_epoch + arrays.mean_motion * dt
    earth_angle = EARTH_ROTATION_RATE * dt if earth_rotation else 0.0
    return _ecef(arrays.semi_major_axis, arrays.inclination, arrays.raan, anomaly, earth_angle)
