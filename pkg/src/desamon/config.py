"""Runtime configuration from a key-value file plus environment overrides.

Precedence, lowest to highest: built-in defaults, config file, environment
(``DESAMON_*``), explicit overrides from CLI flags.  Unknown file keys are
rejected so typos fail loudly instead of silently using defaults.
"""

from __future__ import annotations

import os
import secrets
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping

from desamon.errors import ConfigError
from desamon.kvtext import is_quoted, parse_kv_document, unquote

DEFAULT_LISTEN = "127.0.0.1:8765"
DEFAULT_PHOTO_MAX_BYTES = 10 * 1024 * 1024
DEFAULT_TOKEN_TTL_HOURS = 8

# config-file key → attribute
_FILE_KEYS = {
    "storage.path": "storage_path",
    "photos.dir": "photo_dir",
    "photos.max_bytes": "photo_max_bytes",
    "server.listen": "listen",
    "auth.token_key": "token_key",
    "auth.token_ttl_hours": "token_ttl_hours",
}

_ENV_KEYS = {
    "DESAMON_STORAGE_PATH": "storage_path",
    "DESAMON_PHOTOS_DIR": "photo_dir",
    "DESAMON_PHOTOS_MAX_BYTES": "photo_max_bytes",
    "DESAMON_LISTEN": "listen",
    "DESAMON_TOKEN_KEY": "token_key",
    "DESAMON_TOKEN_TTL_HOURS": "token_ttl_hours",
}

_INT_FIELDS = {"photo_max_bytes", "token_ttl_hours"}


@dataclass(frozen=True, slots=True)
class AppConfig:
    storage_path: Path
    photo_dir: Path
    token_key: bytes
    listen: str = DEFAULT_LISTEN
    photo_max_bytes: int = DEFAULT_PHOTO_MAX_BYTES
    token_ttl_hours: int = DEFAULT_TOKEN_TTL_HOURS

    @property
    def host(self) -> str:
        return split_listen(self.listen)[0]

    @property
    def port(self) -> int:
        return split_listen(self.listen)[1]


def split_listen(listen: str) -> tuple[str, int]:
    host, sep, port_text = listen.rpartition(":")
    if not sep or not host:
        raise ConfigError(f"listen address must be host:port, got {listen!r}")
    try:
        port = int(port_text)
    except ValueError:
        raise ConfigError(f"listen port must be an integer, got {port_text!r}") from None
    if not 0 < port < 65536:
        raise ConfigError(f"listen port out of range: {port}")
    return host, port


def load_config(
    config_path: str | Path | None = None,
    env: Mapping[str, str] | None = None,
    overrides: Mapping[str, str] | None = None,
) -> AppConfig:
    env = os.environ if env is None else env
    values: dict[str, str] = {}

    if config_path is not None:
        try:
            text = Path(config_path).read_text(encoding="utf-8")
        except OSError as exc:
            raise ConfigError(f"cannot read config file {config_path}: {exc}") from exc
        for key, raw in parse_kv_document(text).items():
            if key not in _FILE_KEYS:
                raise ConfigError(f"unknown configuration key: {key}")
            values[_FILE_KEYS[key]] = unquote(raw) if is_quoted(raw) else raw

    for env_key, field in _ENV_KEYS.items():
        if env_key in env:
            values[field] = env[env_key]

    if overrides:
        for field, value in overrides.items():
            if field not in _FILE_KEYS.values():
                raise ConfigError(f"unknown configuration field: {field}")
            values[field] = value

    storage_path = Path(values.get("storage_path", "desamon.db"))
    # "beside the store" default keeps everything under one directory
    photo_dir = Path(values["photo_dir"]) if "photo_dir" in values else Path(
        str(storage_path) + ".photos"
    )

    if "token_key" in values:
        token_key = values["token_key"].encode("utf-8")
        if not token_key:
            raise ConfigError("auth.token_key must not be empty")
    else:
        # ephemeral key: sessions will not survive a restart, fine for dev
        token_key = secrets.token_bytes(32)

    return AppConfig(
        storage_path=storage_path,
        photo_dir=photo_dir,
        token_key=token_key,
        listen=_validated_listen(values.get("listen", DEFAULT_LISTEN)),
        photo_max_bytes=_positive_int(values, "photo_max_bytes", DEFAULT_PHOTO_MAX_BYTES),
        token_ttl_hours=_positive_int(values, "token_ttl_hours", DEFAULT_TOKEN_TTL_HOURS),
    )


def _validated_listen(listen: str) -> str:
    split_listen(listen)
    return listen


def _positive_int(values: Mapping[str, str], field: str, default: int) -> int:
    if field not in values:
        return default
    raw = values[field]
    try:
        parsed = int(raw)
    except (TypeError, ValueError):
        raise ConfigError(f"{field} must be an integer, got {raw!r}") from None
    if parsed <= 0:
        raise ConfigError(f"{field} must be positive, got {parsed}")
    return parsed
