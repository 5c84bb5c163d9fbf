"""Run configuration: a flat YAML mapping of documented keys."""

from __future__ import annotations

from dataclasses import dataclass, field, fields, replace
from pathlib import Path
from typing import Any

import yaml

from .corpus import STYLE_BITS
from .models import ModelConfig
from .noise import NoiseSpec

NOISE_KEYS = ("zeta", "drop_p", "scale_dist", "clamp")
PATH_KEYS = ("corpus", "labels", "checkpoint", "report_dir")
MODEL_KEYS = tuple(f.name for f in fields(ModelConfig) if f.name != "noise")
RUN_KEYS = ("seed", "style_attr", "k", "preset", "max_vocab")
ALL_KEYS = frozenset(MODEL_KEYS + NOISE_KEYS + PATH_KEYS + RUN_KEYS)
PRESETS = ("desk", "full")


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    model: ModelConfig = field(default_factory=ModelConfig.desk)
    seed: int | None = None
    corpus: Path | None = None
    labels: Path | None = None
    checkpoint: Path | None = None
    report_dir: Path | None = None
    style_attr: str = "decision"
    k: float = 2.0
    max_vocab: int = 25_000

    @property
    def noise(self) -> NoiseSpec:
        return self.model.noise

    def with_overrides(self, **overrides: Any) -> RunConfig:
        """Apply command-line overrides; ``None`` values are ignored."""
        overrides = {k: v for k, v in overrides.items() if v is not None}
        cfg = self
        noise_kw = {k: overrides.pop(k) for k in list(overrides) if k in NOISE_KEYS}
        model_kw = {k: overrides.pop(k) for k in list(overrides) if k in MODEL_KEYS}
        if "seed" in overrides:
            noise_kw["seed"] = overrides["seed"]
        try:
            model = replace(cfg.model, **model_kw)
            if noise_kw:
                model = model.with_noise(**noise_kw)
        except (TypeError, ValueError) as exc:
            raise ConfigError(str(exc)) from exc
        for key in PATH_KEYS:
            if key in overrides:
                overrides[key] = Path(overrides[key])
        cfg = replace(cfg, model=model, **overrides)
        validate_style_attr(cfg.style_attr)
        return cfg


def validate_style_attr(style_attr: str) -> None:
    if style_attr != "label" and style_attr not in STYLE_BITS:
        raise ConfigError(f"style_attr must be 'label' or one of {sorted(STYLE_BITS)}, got {style_attr!r}")


def parse_config(text: str, source: str = "<config>") -> RunConfig:
    """Parse a flat key/value YAML document. Unknown keys are errors."""
    try:
        node = yaml.compose(text)
    except yaml.MarkedYAMLError as exc:
        mark = exc.problem_mark
        where = f"{source}:{mark.line + 1}" if mark is not None else source
        raise ConfigError(f"{where}: {exc.problem}") from None
    if node is None:
        return RunConfig()
    if not isinstance(node, yaml.MappingNode):
        raise ConfigError(f"{source}:1: expected a key/value mapping")
    lines: dict[str, int] = {}
    for key_node, value_node in node.value:
        key = key_node.value
        line = key_node.start_mark.line + 1
        if key not in ALL_KEYS:
            raise ConfigError(f"{source}:{line}: unknown key {key!r}")
        if key in lines:
            raise ConfigError(f"{source}:{line}: duplicate key {key!r}")
        if not isinstance(value_node, (yaml.ScalarNode, yaml.SequenceNode)):
            raise ConfigError(f"{source}:{line}: {key!r} must be a plain value")
        lines[key] = line
    raw = yaml.safe_load(text)

    preset = raw.pop("preset", "desk")
    if preset not in PRESETS:
        raise ConfigError(f"{source}:{lines['preset']}: preset must be one of {PRESETS}")
    base = RunConfig(model=ModelConfig.desk() if preset == "desk" else ModelConfig())
    for key, value in raw.items():
        try:
            base = base.with_overrides(**{key: value})
        except (ConfigError, TypeError) as exc:
            raise ConfigError(f"{source}:{lines[key]}: {key}: {exc}") from None
    return base


def load_config(path: str | Path) -> RunConfig:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    cfg = parse_config(text, str(path))
    # relative paths resolve against the config file's directory
    for key in PATH_KEYS:
        value = getattr(cfg, key)
        if value is not None and not value.is_absolute():
            cfg = replace(cfg, **{key: path.parent / value})
    return cfg
