from satcoop.config.loader import config_hash, dump_scenario, validate_config
from satcoop.config.scenario import GroupSelection, Mode, RateEvaluation, ScenarioConfig

__all__ = [
    "GroupSelection",
    "Mode",
    "RateEvaluation",
    "ScenarioConfig",
    "config_hash",
    "dump_scenario",
    "validate_config",
]
