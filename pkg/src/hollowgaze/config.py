"""JSON run configuration with strict key checking."""
from __future__ import annotations

import json
from dataclasses import dataclass, fields
from pathlib import Path

from .constraints import DeploymentScenario
from .exceptions import ConfigError, HollowGazeError
from .percept import PRESET_SCALES, FusionParams, ObserverProfile
from .templates import TemplateConfig

RUN_KEYS = {"template", "scenario", "fusion", "output_dir"}


@dataclass(frozen=True)
class RunConfig:
    template: TemplateConfig = TemplateConfig()
    scenario: DeploymentScenario | None = None
    fusion: FusionParams | None = None
    output_dir: str = "out"


def _reject_unknown(data: dict, allowed, where: str):
    if not isinstance(data, dict):
        raise ConfigError(f"{where}: expected a JSON object")
    unknown = sorted(set(data) - set(allowed))
    if unknown:
        raise ConfigError(f"{where}: unknown keys: {', '.join(unknown)}")


def parse_observer(value) -> ObserverProfile:
    if isinstance(value, str):
        if value not in PRESET_SCALES:
            raise ConfigError(f"observer: unknown preset {value!r}")
        return ObserverProfile.preset(value)
    _reject_unknown(value, {"name", "prior_scale"}, "observer")
    name = value.get("name", "custom")
    scale = value.get("prior_scale", PRESET_SCALES.get(name))
    if scale is None:
        raise ConfigError(f"observer {name!r} needs an explicit prior_scale")
    return ObserverProfile(name, float(scale))


def parse_scenario(data: dict) -> DeploymentScenario:
    allowed = {f.name for f in fields(DeploymentScenario)}
    _reject_unknown(data, allowed, "scenario")
    kwargs = dict(data)
    if "observer" in kwargs:
        kwargs["observer"] = parse_observer(kwargs["observer"])
    if "binocular" in kwargs and not isinstance(kwargs["binocular"], bool):
        raise ConfigError("scenario.binocular must be true or false")
    try:
        return DeploymentScenario(**kwargs)
    except HollowGazeError as exc:
        raise ConfigError(f"scenario: {exc}") from None


def parse_fusion(data: dict) -> FusionParams:
    _reject_unknown(data, {f.name for f in fields(FusionParams)}, "fusion")
    try:
        return FusionParams(**data)
    except HollowGazeError as exc:
        raise ConfigError(f"fusion: {exc}") from None


def parse_run_config(data: dict) -> RunConfig:
    _reject_unknown(data, RUN_KEYS, "config")
    template = TemplateConfig.from_dict(data.get("template", {}))
    scenario = parse_scenario(data["scenario"]) if data.get("scenario") is not None else None
    fusion = parse_fusion(data["fusion"]) if data.get("fusion") is not None else None
    output_dir = data.get("output_dir", "out")
    if not isinstance(output_dir, str):
        raise ConfigError("output_dir must be a string")
    return RunConfig(template, scenario, fusion, output_dir)


def load_json(path) -> dict:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON ({exc})") from None


def load_run_config(path) -> RunConfig:
    return parse_run_config(load_json(path))
