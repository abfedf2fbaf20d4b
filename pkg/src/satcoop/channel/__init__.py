from satcoop.channel.link_budget import LinkBudget, db_to_linear, fspl, noise_power
from satcoop.channel.loo import LooParams, channel_coefficient, draw_channel, sample_loo
from satcoop.channel.moments import ChannelMoments, apply_estimation_error, channel_moments
from satcoop.channel.simulator import ChannelDraw, ChannelSimulator, ClusterChannels
from satcoop.channel.states import (
    DEFAULT_SUBURBAN,
    PRESETS,
    ChannelState,
    SojournDistribution,
    StateProcess,
    StateSegment,
    sample_sojourn,
    sample_state_sequence,
)

__all__ = [
    "DEFAULT_SUBURBAN",
    "PRESETS",
    "ChannelDraw",
    "ChannelMoments",
    "ChannelSimulator",
    "ChannelState",
    "ClusterChannels",
    "LinkBudget",
    "LooParams",
    "SojournDistribution",
    "StateProcess",
    "StateSegment",
    "apply_estimation_error",
    "channel_coefficient",
    "channel_moments",
    "db_to_linear",
    "draw_channel",
    "fspl",
    "noise_power",
    "sample_loo",
    "sample_sojourn",
    "sample_state_sequence",
]
