"""Scenario file schema.

Every physical key carries its unit in its name; the sections convert to the
SI-unit domain objects used by the simulator.
"""

from enum import Enum
from typing import Any, Optional

from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    NonNegativeFloat,
    NonNegativeInt,
    PositiveFloat,
    PositiveInt,
    field_validator,
    model_validator,
)

from satcoop.channel.link_budget import LinkBudget
from satcoop.channel.loo import LooParams
from satcoop.channel.states import PRESETS, ChannelState, SojournDistribution, StateProcess
from satcoop.orbits.constellation import ConstellationSpec, ShellSpec
from satcoop.orbits.visibility import GroundUser

UNIT_SUFFIXES = ("_dbw", "_ghz", "_mhz", "_km", "_ms", "_db", "_hz", "_deg", "_m", "_s", "_k")


def unit_stem(key: str) -> Optional[str]:
    for suffix in UNIT_SUFFIXES:
        if key.endswith(suffix) and len(key) > len(suffix):
            return key[: -len(suffix)]
    return None


class Section(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    @model_validator(mode="before")
    @classmethod
    def _check_unit_suffixes(cls, data: Any) -> Any:
        if not isinstance(data, dict):
            return data
        known = {unit_stem(name): name for name in cls.model_fields if unit_stem(name)}
        for key in data:
            if key in cls.model_fields:
                continue
            expected = known.get(unit_stem(key) or "")
            if expected is not None:
                raise ValueError(f"unit suffix mismatch: got '{key}', expected '{expected}'")
        return data


class Mode(str, Enum):
    FULL_CSI = "FULL_CSI"
    PARTIAL_CSI = "PARTIAL_CSI"
    SINGLE_SAT = "SINGLE_SAT"


class GroupSelection(str, Enum):
    GROUP1 = "GROUP1"
    GROUP2 = "GROUP2"
    BOTH = "BOTH"


class RateEvaluation(str, Enum):
    TRUE_H = "true-h"
    ESTIMATED_H = "estimated-h"


class ShellSection(Section):
    altitude_km: PositiveFloat
    inclination_deg: float = Field(gt=0, lt=180)
    num_planes: PositiveInt
    sats_per_plane: PositiveInt
    raan_spread_deg: float = Field(default=360.0, gt=0, le=360)
    phasing_step_deg: float = 0.0

    def to_spec(self) -> ShellSpec:
        return ShellSpec(
            altitude_m=self.altitude_km * 1000.0,
            inclination_deg=self.inclination_deg,
            num_planes=self.num_planes,
            sats_per_plane=self.sats_per_plane,
            raan_spread_deg=self.raan_spread_deg,
            phasing_step_deg=self.phasing_step_deg,
        )


class ConstellationSection(Section):
    shells: list[ShellSection] = Field(min_length=1)
    epoch_s: float = 0.0

    def to_spec(self) -> ConstellationSpec:
        shells = tuple(s.to_spec() for s in self.shells)
        return ConstellationSpec(shells=shells, epoch_s=self.epoch_s)


class UserSection(Section):
    latitude_deg: float = Field(ge=-90, le=90)
    longitude_deg: float = Field(ge=-180, le=180)
    altitude_m: float = 0.0

    def to_user(self) -> GroundUser:
        return GroundUser(self.latitude_deg, self.longitude_deg, self.altitude_m)


class LinkSection(Section):
    power_dbw: float
    tx_gain_db: float
    rx_gain_db: float
    carrier_ghz: PositiveFloat
    bandwidth_mhz: PositiveFloat
    noise_temperature_k: PositiveFloat = 290.0

    def to_budget(self) -> LinkBudget:
        return LinkBudget(
            power_dbw=self.power_dbw,
            tx_gain_db=self.tx_gain_db,
            rx_gain_db=self.rx_gain_db,
            carrier_hz=self.carrier_ghz * 1e9,
            bandwidth_hz=self.bandwidth_mhz * 1e6,
            noise_temperature_k=self.noise_temperature_k,
        )


class StateSection(Section):
    m_a_db: float
    sigma_a_db: NonNegativeFloat
    mp_db: float
    sojourn_median_s: PositiveFloat
    sojourn_sigma_log10: NonNegativeFloat

    def to_loo(self) -> LooParams:
        return LooParams(m_a_db=self.m_a_db, sigma_a_db=self.sigma_a_db, mp_db=self.mp_db)

    def to_sojourn(self) -> SojournDistribution:
        return SojournDistribution(self.sojourn_median_s, self.sojourn_sigma_log10)


def preset_tables(name: str) -> dict[str, dict[str, float]]:
    process = PRESETS[name]
    return {
        state.value.lower(): {
            "m_a_db": process.loo(state).m_a_db,
            "sigma_a_db": process.loo(state).sigma_a_db,
            "mp_db": process.loo(state).mp_db,
            "sojourn_median_s": process.sojourn(state).median_s,
            "sojourn_sigma_log10": process.sojourn(state).sigma_log10,
        }
        for state in ChannelState
    }


class ChannelSection(Section):
    preset: Optional[str] = "default-suburban"
    good: StateSection
    bad: StateSection
    initial_state: Optional[ChannelState] = None
    coherence_interval_ms: PositiveFloat = 1.0
    moment_samples: int = Field(default=100_000, ge=10_000)
    clamp_delta: PositiveFloat = 1e-3
    variance_includes_fspl: bool = True

    @model_validator(mode="before")
    @classmethod
    def _merge_preset(cls, data: Any) -> Any:
        if not isinstance(data, dict):
            return data
        name = data.get("preset", "default-suburban")
        if name is None:
            return data
        if name not in PRESETS:
            raise ValueError(f"unknown channel preset '{name}'; known: {', '.join(PRESETS)}")
        merged = dict(data)
        for state, table in preset_tables(name).items():
            override = data.get(state) or {}
            merged[state] = {**table, **override} if isinstance(override, dict) else override
        return merged

    def to_process(self) -> StateProcess:
        return StateProcess(
            good=self.good.to_loo(),
            bad=self.bad.to_loo(),
            good_sojourn=self.good.to_sojourn(),
            bad_sojourn=self.bad.to_sojourn(),
            initial_state=self.initial_state,
        )

    @property
    def coherence_interval_s(self) -> float:
        return self.coherence_interval_ms / 1000.0


class BandSection(Section):
    carrier_ghz: PositiveFloat
    bandwidth_mhz: PositiveFloat
    rx_gain_db: Optional[float] = None


DEFAULT_BANDS = [
    BandSection(carrier_ghz=2.0, bandwidth_mhz=100.0),
    BandSection(carrier_ghz=6.0, bandwidth_mhz=500.0),
    BandSection(carrier_ghz=8.0, bandwidth_mhz=500.0),
    BandSection(carrier_ghz=14.0, bandwidth_mhz=500.0),
    BandSection(carrier_ghz=30.0, bandwidth_mhz=1000.0),
]


class ExperimentSection(Section):
    duration_s: PositiveFloat
    time_step_s: PositiveFloat = 1.0
    min_elevation_deg: float = Field(default=30.0, ge=0, lt=90)
    master_seed: NonNegativeInt = 42
    mode: Mode = Mode.FULL_CSI
    group_selection: GroupSelection = GroupSelection.BOTH
    rate_evaluation: RateEvaluation = RateEvaluation.TRUE_H
    L_values: list[PositiveInt] = Field(
        default_factory=lambda: [1, 2, 4, 8, 12, 14, 16, 20, 24, 28], min_length=1
    )
    epsilon: NonNegativeFloat = 3.0
    epsilon_values: list[NonNegativeFloat] = Field(
        default_factory=lambda: [0.0, 3.0, 5.0], min_length=1
    )
    mc_symbols: int = Field(default=100_000, ge=10_000)
    ber_block_symbols: PositiveInt = 1000
    ber_time_samples: PositiveInt = 20
    ber_modes: list[Mode] = Field(
        default_factory=lambda: [Mode.FULL_CSI, Mode.PARTIAL_CSI], min_length=1
    )
    ber_epsilon_values: list[NonNegativeFloat] = Field(
        default_factory=lambda: [0.0, 3.0], min_length=1
    )
    ber_rx_gain_db: list[float] = Field(default_factory=lambda: [35.0, 20.0], min_length=1)
    bands: list[BandSection] = Field(default_factory=lambda: list(DEFAULT_BANDS), min_length=1)
    band_L_values: list[PositiveInt] = Field(default_factory=lambda: [1, 14, 28], min_length=1)
    band_epsilon: NonNegativeFloat = 3.0
    band_mode: Mode = Mode.PARTIAL_CSI
    baseline_min_elevation_deg: float = Field(default=25.0, ge=0, lt=90)
    baseline_peak_fraction: float = Field(default=0.95, gt=0, le=1)
    overhead_L: PositiveInt = 12

    @field_validator("L_values", "band_L_values")
    @classmethod
    def _sorted_unique(cls, values: list[int]) -> list[int]:
        return sorted(set(values))

    @model_validator(mode="after")
    def _check_step(self):
        if self.time_step_s > self.duration_s:
            raise ValueError("time_step_s must not exceed duration_s")
        return self

    @property
    def num_steps(self) -> int:
        return max(int(round(self.duration_s / self.time_step_s)), 1)


class ScenarioConfig(Section):
    constellation: ConstellationSection
    user: UserSection
    link: LinkSection
    channel: ChannelSection = Field(default_factory=lambda: ChannelSection())
    experiment: ExperimentSection

    def with_experiment(self, **updates) -> "ScenarioConfig":
        experiment = self.experiment.model_copy(update=updates)
        return self.model_copy(update={"experiment": experiment})

    def with_channel(self, **updates) -> "ScenarioConfig":
        return self.model_copy(update={"channel": self.channel.model_copy(update=updates)})

    def with_link(self, **updates) -> "ScenarioConfig":
        return self.model_copy(update={"link": self.link.model_copy(update=updates)})


SECTIONS = ("constellation", "user", "link", "channel", "experiment")
