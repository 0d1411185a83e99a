"""Run configuration: nested YAML/JSON with ${VAR} environment interpolation.

Secrets (endpoint credentials) belong in environment variables referenced as
"${NAME}" inside string values; they are resolved at load time but the file's
own bytes are what gets hashed into run manifests, so resolved secrets never
land on disk.  `redacted()` restores the placeholder form for display.
"""

from __future__ import annotations

import hashlib
import json
import os
import re
from dataclasses import dataclass, field
from pathlib import Path

import yaml

_ENV_PATTERN = re.compile(r"\$\{([A-Za-z_][A-Za-z0-9_]*)\}")
_MISSING = object()


class ConfigError(ValueError):
    """Invalid, unparseable, or incomplete run configuration."""


def interpolate(text: str, env=None) -> str:
    env = os.environ if env is None else env

    def sub(match):
        name = match.group(1)
        if name not in env:
            raise ConfigError(f"environment variable {name} is not set "
                              f"(referenced as ${{{name}}})")
        return env[name]

    return _ENV_PATTERN.sub(sub, text)


@dataclass
class RunConfig:
    data: dict
    path: Path
    digest: str  # sha256 of the raw file bytes, placeholders unresolved
    # dotted path -> original placeholder text, for redacted display
    raw_values: dict = field(default_factory=dict)

    def get(self, dotted: str, default=_MISSING):
        node = self.data
        for part in dotted.split("."):
            if not isinstance(node, dict) or part not in node:
                if default is _MISSING:
                    raise ConfigError(f"missing config key {dotted!r}")
                return default
            node = node[part]
        return node

    def require_path(self, dotted: str) -> Path:
        value = Path(str(self.get(dotted)))
        if not value.exists():
            raise ConfigError(f"{dotted}: path does not exist: {value}")
        return value

    def redacted(self) -> dict:
        """The resolved tree with env-derived strings back in ${VAR} form."""
        blob = json.loads(json.dumps(self.data))
        for dotted, raw in self.raw_values.items():
            node = blob
            parts = dotted.split(".")
            for part in parts[:-1]:
                node = node[int(part)] if isinstance(node, list) else node[part]
            last = parts[-1]
            if isinstance(node, list):
                node[int(last)] = raw
            else:
                node[last] = raw
        return blob


def _walk(node, prefix: str, raw_values: dict, env):
    if isinstance(node, dict):
        return {k: _walk(v, f"{prefix}.{k}" if prefix else k, raw_values, env)
                for k, v in node.items()}
    if isinstance(node, list):
        return [_walk(v, f"{prefix}.{i}", raw_values, env)
                for i, v in enumerate(node)]
    if isinstance(node, str) and _ENV_PATTERN.search(node):
        raw_values[prefix] = node
        return interpolate(node, env)
    return node


def load_config(path, env=None) -> RunConfig:
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"config file not found: {path}")
    raw = path.read_bytes()
    try:
        if path.suffix in (".yaml", ".yml"):
            data = yaml.safe_load(raw.decode("utf-8"))
        else:
            data = json.loads(raw.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError, yaml.YAMLError) as exc:
        raise ConfigError(f"cannot parse {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: top level must be an object")
    raw_values: dict = {}
    resolved = _walk(data, "", raw_values, env)
    return RunConfig(data=resolved, path=path,
                     digest=hashlib.sha256(raw).hexdigest(),
                     raw_values=raw_values)
