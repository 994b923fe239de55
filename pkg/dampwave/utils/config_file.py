"""
Sectioned key = value config files
"""
import configparser
from pathlib import Path
from typing import Any, Optional

from pydantic import ValidationError

from dampwave.errors import ConfigError, PersistenceError
from dampwave.models.params import ExperimentConfig


def parse_config_text(text: str, source: str = "<string>") -> dict[str, dict[str, Any]]:
    """Sections become nested dicts; empty values mean "use the default" """
    parser = configparser.ConfigParser(
        interpolation=None,
        default_section="__none__",
        inline_comment_prefixes=("#",),
        strict=True,
    )
    try:
        parser.read_string(text, source=source)
    except configparser.Error as e:
        raise ConfigError(f"Cannot parse {source}: {e}") from e
    return {
        section: {key: value for key, value in parser.items(section) if value.strip() != ""}
        for section in parser.sections()
    }


def build_config(raw: dict[str, dict[str, Any]], seed: Optional[int] = None, out_dir: Optional[str] = None) -> ExperimentConfig:
    """Apply CLI overrides and validate"""
    raw = {section: dict(values) for section, values in raw.items()}
    if seed is not None:
        raw.setdefault("run", {})["seed"] = seed
    if out_dir is not None:
        raw.setdefault("run", {})["output_dir"] = out_dir
    try:
        return ExperimentConfig.model_validate(raw)
    except ValidationError as e:
        raise ConfigError(f"Invalid configuration: {e}", {"errors": e.errors(include_url=False)}) from e


def load_config(path: str, seed: Optional[int] = None, out_dir: Optional[str] = None) -> ExperimentConfig:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise PersistenceError(f"Cannot read config {path}: {e}") from e
    return build_config(parse_config_text(text, source=str(path)), seed=seed, out_dir=out_dir)
