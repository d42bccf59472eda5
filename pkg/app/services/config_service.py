"""Reading run configs from TOML."""

import re
import sys
from pathlib import Path
from typing import List, Optional, Sequence, Union

import logfire
from pydantic import ValidationError

if sys.version_info >= (3, 11):
    import tomllib
else:  # pragma: no cover
    import tomli as tomllib

from app.core.exceptions import ConfigError
from app.models.schemas.run_config import RunConfig

_SECTION = re.compile(r"^\s*\[([^\]]+)\]\s*(#.*)?$")


def _locate(text: str, loc: Sequence[Union[str, int]]) -> Optional[int]:
    """1-based line of the key at ``loc`` (or of its section), if present."""
    if not loc:
        return None
    section, key = str(loc[0]), str(loc[1]) if len(loc) > 1 else None
    current = None
    section_line = None
    for number, line in enumerate(text.splitlines(), start=1):
        header = _SECTION.match(line)
        if header:
            current = header.group(1).strip()
            if current == section:
                section_line = number
            continue
        if current == section and key is not None:
            if re.match(rf"^\s*{re.escape(key)}\s*=", line):
                return number
    return section_line


def _diagnostics(
    text: str, error: ValidationError, prefix: Sequence[str] = ()
) -> List[str]:
    lines = []
    for item in error.errors():
        loc = [*prefix, *item["loc"]]
        field = ".".join(str(part) for part in loc) or "<root>"
        line = _locate(text, loc)
        where = f"line {line}: " if line is not None else ""
        lines.append(f"{where}{field}: {item['msg']}")
    return lines


class ConfigService:
    """Parses run configs; structural problems become ConfigError."""

    def parse(self, text: str, source: str = "<string>") -> RunConfig:
        try:
            data = tomllib.loads(text)
        except tomllib.TOMLDecodeError as exc:
            raise ConfigError(f"{source}: not valid TOML", [str(exc)]) from exc
        try:
            config = RunConfig.model_validate(data)
        except ValidationError as exc:
            raise ConfigError(
                f"{source}: config does not match the schema", _diagnostics(text, exc)
            ) from exc
        # Tolerance overrides are range-checked here so they report like schema errors
        try:
            config.tolerances()
        except ValidationError as exc:
            raise ConfigError(
                f"{source}: invalid [run] override", _diagnostics(text, exc, ("run",))
            ) from exc
        return config

    def load(self, path: Union[str, Path]) -> RunConfig:
        path = Path(path)
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc.strerror}") from exc
        config = self.parse(text, str(path))
        logfire.debug("Loaded run config", path=str(path), risk=config.risk.kind)
        return config


config_service = ConfigService()
