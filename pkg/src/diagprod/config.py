"""Experiment configuration files (JSON or TOML).

A config is a flat table of option values, optionally with one sub-table per
subcommand; sub-table values override top-level ones. Keys use the long
option names with dashes or underscores, e.g. ``radius-budget = 8``.
"""

from __future__ import annotations

import json
import os
import sys
import tempfile
from pathlib import Path

import numpy as np

if sys.version_info >= (3, 11):
    import tomllib
else:  # pragma: no cover - exercised on 3.10 only
    import tomli as tomllib

SCHEMA_VERSION = 1


class ConfigError(ValueError):
    pass


def load_config(path) -> dict:
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {p}: {exc}") from exc
    try:
        if p.suffix.lower() == ".toml":
            data = tomllib.loads(text)
        else:
            data = json.loads(text)
    except (ValueError, tomllib.TOMLDecodeError) as exc:
        raise ConfigError(f"cannot parse config {p}: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError("config must be a table")
    version = data.get("schema", SCHEMA_VERSION)
    if version != SCHEMA_VERSION:
        raise ConfigError(f"config schema {version} is not supported (expected {SCHEMA_VERSION})")
    return data


def options_for(config: dict, command: str, subcommands) -> dict:
    """Flatten the top level and the ``command`` section into argparse dests."""
    out = {}
    for k, v in config.items():
        if k == "schema" or (k in subcommands and isinstance(v, dict)):
            continue
        out[k.replace("-", "_")] = v
    for k, v in config.get(command, {}).items():
        out[k.replace("-", "_")] = v
    return out


def atomic_write(path, data: str | bytes) -> None:
    """Write through a temporary file in the same directory, then rename."""
    p = Path(path)
    p.parent.mkdir(parents=True, exist_ok=True)
    mode = "wb" if isinstance(data, bytes) else "w"
    fd, tmp = tempfile.mkstemp(dir=p.parent, prefix=f".{p.name}.")
    try:
        with os.fdopen(fd, mode) as fh:
            fh.write(data)
        os.replace(tmp, p)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def derive_seed(master: int, trial: int) -> int:
    """Seed of trial i under master seed m: the first word of SeedSequence([m, i])."""
    return int(np.random.SeedSequence([master, trial]).generate_state(1)[0])
