import logging
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from geopy.distance import great_circle

from satcoop.errors import DomainError, NoVisibleSatelliteError
from satcoop.orbits.constellation import EARTH_RADIUS_M, SatelliteState

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class GroundUser:
    latitude_deg: float
    longitude_deg: float
    altitude_m: float = 0.0

    def __post_init__(self):
        if not -90.0 <= self.latitude_deg <= 90.0:
            raise DomainError(f"latitude_deg must be in [-90, 90], got {self.latitude_deg}")
        if not -180.0 <= self.longitude_deg <= 180.0:
            raise DomainError(f"longitude_deg must be in [-180, 180], got {self.longitude_deg}")

    @property
    def up(self) -> np.ndarray:
        lat = math.radians(self.latitude_deg)
        lon = math.radians(self.longitude_deg)
        return np.array(
            [math.cos(lat) * math.cos(lon), math.cos(lat) * math.sin(lon), math.sin(lat)]
        )

    @property
    def position_ecef(self) -> np.ndarray:
        return (EARTH_RADIUS_M + self.altitude_m) * self.up


@dataclass(frozen=True)
class VisibleSatellite:
    sat_id: int
    elevation_deg: float
    slant_range_m: float
    shell: int = 0


def _elevations_and_ranges(user: GroundUser, positions: np.ndarray):
    line_of_sight = np.atleast_2d(positions) - user.position_ecef
    ranges = np.linalg.norm(line_of_sight, axis=1)
    sine = np.clip(line_of_sight @ user.up / ranges, -1.0, 1.0)
    return np.degrees(np.arcsin(sine)), ranges


def elevation_and_range(user: GroundUser, sat: SatelliteState) -> tuple[float, float]:
    """Elevation above the user's local horizon (degrees) and slant range (m)."""
    elevation, ranges = _elevations_and_ranges(user, sat.position_ecef)
    return float(elevation[0]), float(ranges[0])


def visible_from_positions(
    sat_ids: np.ndarray,
    positions: np.ndarray,
    user: GroundUser,
    min_elevation_deg: float,
    shells: np.ndarray | None = None,
) -> list[VisibleSatellite]:
    """Column-wise form of :func:`visible_set`."""
    _check_mask(min_elevation_deg)
    if len(sat_ids) == 0:
        return []
    elevation, ranges = _elevations_and_ranges(user, positions)
    shells = np.zeros(len(sat_ids), dtype=np.int64) if shells is None else shells
    above = np.flatnonzero(elevation >= min_elevation_deg)
    # nearest first, equal ranges broken by ascending sat_id
    order = above[np.lexsort((sat_ids[above], ranges[above]))]
    return [
        VisibleSatellite(
            sat_id=int(sat_ids[i]),
            elevation_deg=float(elevation[i]),
            slant_range_m=float(ranges[i]),
            shell=int(shells[i]),
        )
        for i in order
    ]


def visible_set(
    states: Sequence[SatelliteState], user: GroundUser, min_elevation_deg: float
) -> list[VisibleSatellite]:
    _check_mask(min_elevation_deg)
    if not states:
        return []
    return visible_from_positions(
        np.array([s.sat_id for s in states], dtype=np.int64),
        np.array([s.position_ecef for s in states], dtype=float),
        user,
        min_elevation_deg,
        shells=np.array([s.shell for s in states], dtype=np.int64),
    )


def select_cluster(visible: Iterable[VisibleSatellite], L: int) -> list[VisibleSatellite]:
    """The ``L`` nearest visible satellites; satellite 1 is the nearest."""
    if L < 1:
        raise DomainError(f"cluster size L must be >= 1, got {L}")
    visible = list(visible)
    if not visible:
        raise NoVisibleSatelliteError("no satellite visible")
    if L > len(visible):
        logger.warning("Requested cluster of %d but only %d satellites visible", L, len(visible))
    return visible[:L]


def ground_distance_km(user: GroundUser, position_ecef: np.ndarray) -> float:
    """Great-circle distance from the user to the sub-satellite point."""
    x, y, z = position_ecef
    sub_lat = math.degrees(math.atan2(z, math.hypot(x, y)))
    sub_lon = math.degrees(math.atan2(y, x))
    return great_circle(
        (user.latitude_deg, user.longitude_deg),
        (sub_lat, sub_lon),
        radius=EARTH_RADIUS_M / 1000.0,
    ).km


def _check_mask(min_elevation_deg: float):
    if not 0.0 <= min_elevation_deg < 90.0:
        raise DomainError(f"min_elevation must be in [0, 90), got {min_elevation_deg}")
