import hashlib
import logging
from importlib import resources
from pathlib import Path
from typing import Any, Union

import yaml
from pydantic import BaseModel, ValidationError

from satcoop.config.scenario import SECTIONS, ScenarioConfig
from satcoop.errors import ConfigError

logger = logging.getLogger(__name__)

SCENARIO_PACKAGE = "satcoop.scenarios"
SCENARIO_ALIASES = {"paper-baseline": "london-two-shell"}


def resolve_scenario_path(name_or_path: Union[str, Path]) -> Path:
    """A file path, or the name of a scenario shipped with the package."""
    path = Path(name_or_path)
    if path.exists():
        return path
    name = SCENARIO_ALIASES.get(str(name_or_path), str(name_or_path))
    shipped = resources.files(SCENARIO_PACKAGE).joinpath(f"{name}.yaml")
    if shipped.is_file():
        return Path(str(shipped))
    raise ConfigError([f"{name_or_path}: no such scenario file or shipped scenario"])


def load_yaml(path: Path) -> dict[str, Any]:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError([f"{path}: cannot read scenario file: {exc.strerror}"]) from exc
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        where = f"{path}:{mark.line + 1}" if mark is not None else str(path)
        problem = getattr(exc, "problem", None) or str(exc)
        raise ConfigError([f"{where}: parse error: {problem}"]) from exc
    if data is None:
        return {}
    if not isinstance(data, dict):
        raise ConfigError([f"{path}: scenario must be a mapping of sections"])
    return data


def format_location(loc: tuple) -> str:
    if not loc:
        return "[scenario]"
    head, *rest = loc
    return ".".join([f"[{head}]", *(str(part) for part in rest)])


def parse_scenario(data: dict[str, Any]) -> ScenarioConfig:
    """Validate a raw scenario mapping, collecting every error before failing."""
    data = dict(data)
    for section in SECTIONS:
        if data.get(section) is None:
            data[section] = {}
    try:
        config = ScenarioConfig.model_validate(data)
    except ValidationError as exc:
        raise ConfigError(
            f"{format_location(error['loc'])}: {error['msg']}" for error in exc.errors()
        ) from exc
    log_provenance(config, data)
    return config


def validate_config(source: Union[str, Path, dict[str, Any]]) -> ScenarioConfig:
    if isinstance(source, dict):
        return parse_scenario(source)
    path = resolve_scenario_path(source)
    logger.info("Loading scenario %s", path)
    return parse_scenario(load_yaml(path))


def log_provenance(config: ScenarioConfig, raw: dict[str, Any]) -> list[str]:
    """Log ``default applied: <path> = <value>`` for every value not in ``raw``."""
    lines = []
    for name in SECTIONS:
        _walk(getattr(config, name), raw.get(name) or {}, [f"[{name}]"], lines)
    for line in lines:
        logger.info(line)
    return lines


def _walk(model: BaseModel, raw: Any, path: list[str], lines: list[str]):
    raw = raw if isinstance(raw, dict) else {}
    for name in type(model).model_fields:
        value = getattr(model, name)
        field_path = path + [name]
        if isinstance(value, BaseModel):
            _walk(value, raw.get(name), field_path, lines)
        elif name not in raw:
            shown = value.value if hasattr(value, "value") else value
            if isinstance(shown, list):
                shown = [_plain(v) for v in shown]
            lines.append(f"default applied: {'.'.join(field_path)} = {shown}")


def _plain(value: Any) -> Any:
    if isinstance(value, BaseModel):
        return value.model_dump(mode="json")
    return getattr(value, "value", value)


def dump_scenario(config: ScenarioConfig) -> str:
    return yaml.safe_dump(config.model_dump(mode="json"), sort_keys=False)


def config_hash(config: ScenarioConfig) -> str:
    return hashlib.sha256(dump_scenario(config).encode()).hexdigest()
