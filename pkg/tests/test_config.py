"""
Scenario configuration: Test Suite.

 Group 1: Shipped scenario
   1.  london-two-shell loads with the expected constellation, user and link
   2.  paper-baseline names the same shipped scenario
   3.  Channel preset values fill in, per-key overrides win

 Group 2: Validation errors
   4.  An empty file lists every missing required key
   5.  Out-of-range values are reported with their section path
   6.  A key with the wrong unit suffix names the expected key
   7.  YAML syntax errors carry the line number
   8.  Unknown presets and extra keys are rejected

 Group 3: Normalisation and provenance
   9.  Cluster sizes are sorted and deduplicated
  10.  Dumped scenarios reload to the same config and hash
  11.  Every default applied is logged
"""

import logging

import pytest
import yaml

from satcoop.config.loader import (
    config_hash,
    dump_scenario,
    load_yaml,
    resolve_scenario_path,
    validate_config,
)
from satcoop.config.scenario import GroupSelection, Mode
from satcoop.errors import ConfigError

# ── Shared fixtures ───────────────────────────────────────────────────────────


@pytest.fixture
def raw_scenario():
    return load_yaml(resolve_scenario_path("london-two-shell"))


def _errors(source):
    with pytest.raises(ConfigError) as info:
        validate_config(source)
    return info.value.messages


# ── Group 1: Shipped scenario ─────────────────────────────────────────────────


def test_shipped_baseline(baseline_config):
    shells = baseline_config.constellation.shells
    assert [s.altitude_km for s in shells] == [550, 540]
    assert [s.num_planes * s.sats_per_plane for s in shells] == [1584, 1584]
    assert baseline_config.user.latitude_deg == pytest.approx(51.4880572)

    link = baseline_config.link.to_budget()
    assert link.p == pytest.approx(6309.57, rel=1e-5)
    assert link.sigma2 == pytest.approx(2.00194e-12, rel=1e-4)

    experiment = baseline_config.experiment
    assert experiment.num_steps == 6000
    assert experiment.mode is Mode.FULL_CSI
    assert experiment.group_selection is GroupSelection.BOTH
    assert experiment.L_values[-1] == 28


def test_scenario_alias(baseline_config):
    assert resolve_scenario_path("paper-baseline") == resolve_scenario_path("london-two-shell")
    assert validate_config("paper-baseline") == baseline_config


def test_channel_preset_and_override(raw_scenario):
    default = validate_config(raw_scenario).channel
    assert default.good.m_a_db == pytest.approx(-0.2)
    assert default.bad.sigma_a_db == pytest.approx(3.0)
    assert default.bad.sojourn_median_s == pytest.approx(10.0)

    raw_scenario["channel"] = {"preset": "default-suburban", "good": {"mp_db": -12.0}}
    channel = validate_config(raw_scenario).channel
    assert channel.good.mp_db == -12.0
    assert channel.good.m_a_db == pytest.approx(-0.2)


# ── Group 2: Validation errors ────────────────────────────────────────────────


def test_empty_file_lists_required_keys(tmp_path):
    path = tmp_path / "empty.yaml"
    path.write_text("", encoding="utf-8")
    text = "\n".join(_errors(path))
    for key in (
        "[constellation].shells",
        "[user].latitude_deg",
        "[link].power_dbw",
        "[link].bandwidth_mhz",
        "[experiment].duration_s",
    ):
        assert key in text


def test_out_of_range_value_names_its_path(raw_scenario):
    raw_scenario["link"]["bandwidth_mhz"] = -1
    raw_scenario["constellation"]["shells"][1]["num_planes"] = 0
    messages = _errors(raw_scenario)
    assert any(m.startswith("[link].bandwidth_mhz:") for m in messages)
    assert any(m.startswith("[constellation].shells.1.num_planes:") for m in messages)


def test_unit_suffix_mismatch(raw_scenario):
    raw_scenario["link"]["bandwidth_hz"] = raw_scenario["link"].pop("bandwidth_mhz")
    messages = _errors(raw_scenario)
    assert any(
        "unit suffix mismatch: got 'bandwidth_hz', expected 'bandwidth_mhz'" in m for m in messages
    )


def test_yaml_error_has_line_number(tmp_path):
    path = tmp_path / "broken.yaml"
    path.write_text("user:\n  latitude_deg: 51\n  longitude_deg: x: y\n", encoding="utf-8")
    (message,) = _errors(path)
    assert message.startswith(f"{path}:3: parse error")


def test_missing_file():
    (message,) = _errors("no-such-scenario")
    assert "no such scenario" in message


def test_unknown_preset_and_extra_key(raw_scenario):
    raw_scenario["channel"] = {"preset": "lunar"}
    raw_scenario["experiment"]["colour"] = "blue"
    text = "\n".join(_errors(raw_scenario))
    assert "unknown channel preset 'lunar'" in text
    assert "[experiment].colour" in text


# ── Group 3: Normalisation and provenance ─────────────────────────────────────


def test_cluster_sizes_sorted_and_unique(raw_scenario):
    raw_scenario["experiment"]["L_values"] = [12, 1, 4, 12]
    assert validate_config(raw_scenario).experiment.L_values == [1, 4, 12]


def test_dump_round_trip(baseline_config):
    reloaded = validate_config(yaml.safe_load(dump_scenario(baseline_config)))
    assert reloaded == baseline_config
    assert config_hash(reloaded) == config_hash(baseline_config)
    reseeded = baseline_config.with_experiment(master_seed=1)
    assert config_hash(reseeded) != config_hash(baseline_config)


def test_defaults_are_logged(raw_scenario, caplog):
    with caplog.at_level(logging.INFO, logger="satcoop.config.loader"):
        validate_config(raw_scenario)
    assert "default applied: [experiment].mc_symbols = 100000" in caplog.text
    assert "default applied: [channel].clamp_delta = 0.001" in caplog.text
    assert "default applied: [experiment].ber_modes = ['FULL_CSI', 'PARTIAL_CSI']" in caplog.text
    assert "default applied: [link].power_dbw" not in caplog.text
