"""
Constellation geometry: Test Suite.

 Group 1: Walker shells
   1.  Shipped constellation has 2 x 22 x 72 satellites with consecutive ids
   2.  Plane RAANs are spread evenly, in-plane phasing follows the step
   3.  A one-satellite shell sits at RAAN 0, anomaly 0
   4.  Invalid shell parameters raise DomainError naming the field

 Group 2: Propagation
   5.  Radius stays at R + h
   6.  One orbital period returns to the start with rotation disabled
   7.  Negative times propagate backwards
   8.  Vectorised and per-satellite propagation agree

 Group 3: Elevation, range and visibility
   9.  Zenith, antipode and horizon geometry
  10.  Elevation is unchanged when user and satellite rotate together
  11.  Visible list is sorted by range with ties broken by sat_id
  12.  Mask outside [0, 90) is rejected
  13.  Cluster selection truncates, clamps with a warning, and errors when empty
  14.  Ground distance to the sub-satellite point

 Group 4: Shipped scenario
  15.  About 28 satellites above 30 deg over London on average, never fewer than 24
"""

import logging
import math

import numpy as np
import pytest

from satcoop.errors import DomainError, NoVisibleSatelliteError
from satcoop.experiments.visibility import visibility_timeseries
from satcoop.orbits.constellation import (
    EARTH_RADIUS_M,
    MU_EARTH,
    ConstellationSpec,
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
    visible_set,
)

# ── Shared fixtures ───────────────────────────────────────────────────────────

ALTITUDE_M = 550_000.0
A = EARTH_RADIUS_M + ALTITUDE_M


def _state(position, sat_id=0):
    return SatelliteState(sat_id=sat_id, position_ecef=np.asarray(position, dtype=float), time=0.0)


@pytest.fixture
def equator_user():
    return GroundUser(0.0, 0.0)


@pytest.fixture
def shipped_elements(baseline_config):
    return build_walker_constellation(baseline_config.constellation.to_spec())


@pytest.fixture
def single_shell():
    spec = ConstellationSpec(shells=(ShellSpec(ALTITUDE_M, 53.0, 4, 6, phasing_step_deg=5.0),))
    return build_walker_constellation(spec)


# ── Group 1: Walker shells ────────────────────────────────────────────────────


def test_shipped_constellation_size_and_ids(shipped_elements):
    assert len(shipped_elements) == 3168
    assert [e.sat_id for e in shipped_elements] == list(range(3168))
    assert sum(1 for e in shipped_elements if e.shell == 0) == 1584
    assert shipped_elements[1584].shell == 1


def test_raan_spacing_and_phasing(shipped_elements):
    plane_1 = shipped_elements[72]
    assert plane_1.raan == pytest.approx(math.radians(360.0 / 22))
    assert plane_1.true_anomaly_at_epoch == pytest.approx(math.radians(1.1364))
    assert shipped_elements[1].true_anomaly_at_epoch == pytest.approx(math.radians(5.0))
    raans = {round(e.raan, 12) for e in shipped_elements if e.shell == 0}
    assert len(raans) == 22


def test_single_satellite_shell():
    spec = ConstellationSpec(shells=(ShellSpec(ALTITUDE_M, 53.0, 1, 1),))
    (only,) = build_walker_constellation(spec)
    assert only.raan == 0.0
    assert only.true_anomaly_at_epoch == 0.0
    assert only.semi_major_axis == A


@pytest.mark.parametrize(
    "field, kwargs",
    [
        ("num_planes", dict(num_planes=0, sats_per_plane=1)),
        ("sats_per_plane", dict(num_planes=1, sats_per_plane=-3)),
        ("inclination_deg", dict(num_planes=1, sats_per_plane=1, inclination_deg=180.0)),
    ],
)
def test_invalid_shell_is_rejected(field, kwargs):
    params = dict(altitude_m=ALTITUDE_M, inclination_deg=53.0)
    params.update(kwargs)
    with pytest.raises(DomainError, match=field):
        ShellSpec(**params)


# ── Group 2: Propagation ──────────────────────────────────────────────────────


def test_orbital_period_of_550_km_shell():
    period = orbital_period(A)
    assert period == pytest.approx(2 * math.pi * math.sqrt(A**3 / MU_EARTH), rel=1e-12)
    assert 5720.0 < period < 5740.0


def test_radius_is_constant(single_shell):
    for element in single_shell:
        for t in (0.0, 17.0, 1000.0, 5999.0):
            radius = np.linalg.norm(propagate(element, t).position_ecef)
            assert abs(radius - A) < 1e-3


def test_periodicity_without_earth_rotation(single_shell):
    period = orbital_period(A)
    for element in single_shell:
        start = propagate(element, 0.0, earth_rotation=False).position_ecef
        later = propagate(element, period, earth_rotation=False).position_ecef
        assert np.linalg.norm(later - start) < 1e-3


def test_backward_propagation(single_shell):
    period = orbital_period(A)
    element = single_shell[3]
    before = propagate(element, -period, earth_rotation=False).position_ecef
    now = propagate(element, 0.0, earth_rotation=False).position_ecef
    assert np.linalg.norm(before - now) < 1e-3


def test_epoch_position_ignores_rotation_flag(single_shell):
    element = single_shell[0]
    rotating = propagate(element, 0.0).position_ecef
    fixed = propagate(element, 0.0, earth_rotation=False).position_ecef
    np.testing.assert_allclose(rotating, fixed)
    np.testing.assert_allclose(rotating, [A, 0.0, 0.0], atol=1e-6)


def test_vectorised_propagation_matches(single_shell):
    arrays = constellation_arrays(single_shell)
    positions = propagate_positions(arrays, 1234.5)
    for element, position in zip(single_shell, positions):
        np.testing.assert_allclose(position, propagate(element, 1234.5).position_ecef, atol=1e-6)


# ── Group 3: Elevation, range and visibility ──────────────────────────────────


def test_zenith(equator_user):
    elevation, slant = elevation_and_range(equator_user, _state([A, 0.0, 0.0]))
    assert elevation == pytest.approx(90.0)
    assert slant == pytest.approx(ALTITUDE_M)


def test_antipode(equator_user):
    elevation, slant = elevation_and_range(equator_user, _state([-A, 0.0, 0.0]))
    assert elevation == pytest.approx(-90.0)
    assert slant == pytest.approx(2 * EARTH_RADIUS_M + ALTITUDE_M)


def test_horizon(equator_user):
    tangent = math.sqrt(A**2 - EARTH_RADIUS_M**2)
    elevation, slant = elevation_and_range(equator_user, _state([EARTH_RADIUS_M, tangent, 0.0]))
    assert elevation == pytest.approx(0.0, abs=1e-6)
    assert slant == pytest.approx(tangent)


def test_rotation_consistency():
    theta = math.radians(25.0)
    rotation = np.array(
        [
            [math.cos(theta), -math.sin(theta), 0.0],
            [math.sin(theta), math.cos(theta), 0.0],
            [0.0, 0.0, 1.0],
        ]
    )
    position = np.array([4.0e6, 2.5e6, 4.9e6])
    before = elevation_and_range(GroundUser(40.0, 10.0), _state(position))
    after = elevation_and_range(GroundUser(40.0, 35.0), _state(rotation @ position))
    assert after[0] == pytest.approx(before[0], abs=1e-9)
    assert after[1] == pytest.approx(before[1], rel=1e-12)


def test_visible_set_sorted_with_tie_break(equator_user):
    states = [
        _state([A, 0.0, 0.0], sat_id=9),
        _state([A * math.cos(0.05), A * math.sin(0.05), 0.0], sat_id=7),
        _state([A * math.cos(0.05), A * math.sin(0.05), 0.0], sat_id=3),
        _state([-A, 0.0, 0.0], sat_id=1),
    ]
    visible = visible_set(states, equator_user, 30.0)
    assert [v.sat_id for v in visible] == [9, 3, 7]
    ranges = [v.slant_range_m for v in visible]
    assert ranges == sorted(ranges)
    assert all(v.elevation_deg >= 30.0 for v in visible)


def test_visible_set_empty_inputs(equator_user):
    assert visible_set([], equator_user, 30.0) == []
    assert visible_set([_state([-A, 0.0, 0.0])], equator_user, 0.0) == []


@pytest.mark.parametrize("mask", [-1.0, 90.0])
def test_mask_out_of_range(equator_user, mask):
    with pytest.raises(DomainError):
        visible_set([_state([A, 0.0, 0.0])], equator_user, mask)


def test_select_cluster(caplog):
    visible = [VisibleSatellite(i, 60.0, 600e3 + i) for i in range(28)]
    assert [v.sat_id for v in select_cluster(visible, 12)] == list(range(12))

    with caplog.at_level(logging.WARNING):
        clamped = select_cluster(visible, 40)
    assert len(clamped) == 28
    assert "only 28" in caplog.text

    with pytest.raises(NoVisibleSatelliteError, match="no satellite visible"):
        select_cluster([], 4)
    with pytest.raises(DomainError):
        select_cluster(visible, 0)


def test_ground_distance(equator_user):
    assert ground_distance_km(equator_user, np.array([A, 0.0, 0.0])) == pytest.approx(0.0, abs=1e-9)
    one_degree = np.array([A * math.cos(math.radians(1)), A * math.sin(math.radians(1)), 0.0])
    expected = EARTH_RADIUS_M / 1000.0 * math.radians(1.0)
    assert ground_distance_km(equator_user, one_degree) == pytest.approx(expected, rel=1e-9)


def test_ground_user_validation():
    with pytest.raises(DomainError, match="latitude"):
        GroundUser(91.0, 0.0)


# ── Group 4: Shipped scenario ───────────────────────────────────────────────────


@pytest.mark.slow
def test_shipped_visibility_over_london(baseline_config):
    result = visibility_timeseries(baseline_config)
    assert len(result) == 6000
    aggregates = result.aggregates
    # Earth rotation carries London between the aligned shells' ground tracks
    assert aggregates["mean_visible"] >= 28
    assert aggregates["min_visible"] == 24
    assert aggregates["max_visible"] <= 32
    worst = result.records.set_index("time_s").loc[aggregates["min_visible_time_s"]]
    assert worst["visible_count"] == 24
    both = result.records["visible_shell1"] + result.records["visible_shell2"]
    assert (both == result.records["visible_count"]).all()
