from satcoop.orbits.constellation import (
    EARTH_RADIUS_M,
    ConstellationArrays,
    ConstellationSpec,
    OrbitalElements,
    SatelliteState,
    ShellSpec,
    build_walker_constellation,
    constellation_arrays,
    orbital_period,
    propagate,
    propagate_positions,
)
from satcoop.orbits.visibility import (
    GroundUser,
    VisibleSatellite,
    elevation_and_range,
    ground_distance_km,
    select_cluster,
    visible_from_positions,
    visible_set,
)

__all__ = [
    "EARTH_RADIUS_M",
    "ConstellationArrays",
    "ConstellationSpec",
    "GroundUser",
    "OrbitalElements",
    "SatelliteState",
    "ShellSpec",
    "VisibleSatellite",
    "build_walker_constellation",
    "constellation_arrays",
    "elevation_and_range",
    "ground_distance_km",
    "orbital_period",
    "propagate",
    "propagate_positions",
    "select_cluster",
    "visible_from_positions",
    "visible_set",
]
