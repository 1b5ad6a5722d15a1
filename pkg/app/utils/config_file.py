"""
Scenario files: flat ``key = value`` lines, ``#`` comments, blank lines ignored.

Keys are the field names of NetworkConfig and PowerModel.
"""
import logging
from pathlib import Path
from typing import Any, Dict, Tuple, Union

from pydantic import ValidationError

from app.core.errors import ConfigFileError
from app.schemas.network import NetworkConfig, PowerModel

logger = logging.getLogger(__name__)

NETWORK_KEYS = frozenset(NetworkConfig.model_fields)
POWER_KEYS = frozenset(PowerModel.model_fields)
TRUE_WORDS = {"true", "yes", "on", "1"}
FALSE_WORDS = {"false", "no", "off", "0"}
NONE_WORDS = {"none", "null", ""}


def _parse_value(key: str, raw: str, model: type) -> Any:
    annotation = str(model.model_fields[key].annotation)
    text = raw.strip()
    if text.lower() in NONE_WORDS and "Optional" in annotation:
        return None
    if "bool" in annotation:
        lowered = text.lower()
        if lowered in TRUE_WORDS:
            return True
        if lowered in FALSE_WORDS:
            return False
        raise ValueError(f"'{text}' is not a boolean")
    if "int" in annotation:
        value = float(text)
        if not value.is_integer():
            raise ValueError(f"'{text}' is not an integer")
        return int(value)
    return float(text)


def parse_config_text(text: str, source: str = "<config>") -> Tuple[NetworkConfig, PowerModel]:
    network: Dict[str, Any] = {}
    power: Dict[str, Any] = {}
    first_line: Dict[str, int] = {}

    for line_number, line in enumerate(text.splitlines(), start=1):
        content = line.split("#", 1)[0].strip()
        if not content:
            continue
        if "=" not in content:
            raise ConfigFileError("expected 'key = value'", line_number, source)
        key, raw = (part.strip() for part in content.split("=", 1))
        if not key:
            raise ConfigFileError("missing key before '='", line_number, source)
        if key in first_line:
            raise ConfigFileError(f"duplicate key '{key}' (first set on line {first_line[key]})", line_number, source)

        if key in NETWORK_KEYS:
            target, model = network, NetworkConfig
        elif key in POWER_KEYS:
            target, model = power, PowerModel
        else:
            raise ConfigFileError(f"unknown key '{key}'", line_number, source)

        try:
            target[key] = _parse_value(key, raw, model)
        except ValueError as exc:
            raise ConfigFileError(f"invalid value for '{key}': {exc}", line_number, source) from exc
        first_line[key] = line_number

    try:
        cfg = NetworkConfig(**network)
        pm = PowerModel(**power)
    except ValidationError as exc:
        # point at the first offending key when pydantic names one
        fields = [str(error["loc"][0]) for error in exc.errors() if error.get("loc")]
        line_number = next((first_line[f] for f in fields if f in first_line), None)
        message = "; ".join(error["msg"] for error in exc.errors())
        raise ConfigFileError(message, line_number, source) from exc

    logger.debug(f"Parsed {len(first_line)} keys from {source}")
    return cfg, pm


def parse_config_file(path: Union[str, Path]) -> Tuple[NetworkConfig, PowerModel]:
    """Read a scenario file into (NetworkConfig, PowerModel)"""
    target = Path(path)
    try:
        text = target.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigFileError(f"cannot read config: {exc.strerror or exc}", None, str(target)) from exc
    return parse_config_text(text, str(target))


__all__ = ["parse_config_file", "parse_config_text"]
