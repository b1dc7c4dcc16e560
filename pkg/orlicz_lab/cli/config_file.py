"""Flat ``key = value`` configuration files.

Blank lines and ``#`` comments are ignored. Keys use the long flag name with
dashes or underscores (``n-r`` and ``n_r`` are the same key). Flags given on
the command line override the file.
"""
import argparse
from pathlib import Path
from typing import Dict

from orlicz_lab.core.exceptions import ConfigurationError


def read_config(path: str) -> Dict[str, str]:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigurationError(f"cannot read config file {path}: {exc}") from exc

    entries: Dict[str, str] = {}
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigurationError(f"{path}:{number}: expected key = value")
        key, value = (part.strip() for part in line.split("=", 1))
        if not key:
            raise ConfigurationError(f"{path}:{number}: empty key")
        key = key.replace("-", "_")
        if key in entries:
            raise ConfigurationError(f"{path}:{number}: duplicate key {key!r}")
        entries[key] = value
    return entries


def apply_config(parser: argparse.ArgumentParser, entries: Dict[str, str]) -> None:
    """Install config values as parser defaults, rejecting unknown keys.

    String defaults go through each argument's ``type`` when parsing, so
    values are validated exactly like flags.
    """
    known = {action.dest: action for action in parser._actions if action.dest != "help"}
    unknown = sorted(set(entries) - set(known) - {"config"})
    if unknown:
        raise ConfigurationError(f"unknown config keys {unknown}")

    defaults = {}
    for key, value in entries.items():
        if key == "config":
            continue
        action = known[key]
        if isinstance(action, (argparse._StoreTrueAction, argparse._StoreFalseAction)):
            lowered = value.lower()
            if lowered not in ("true", "false", "1", "0", "yes", "no"):
                raise ConfigurationError(f"config key {key!r} expects a boolean, got {value!r}")
            defaults[key] = lowered in ("true", "1", "yes")
        else:
            if action.choices is not None and value not in [str(c) for c in action.choices]:
                raise ConfigurationError(f"config key {key!r}: {value!r} not in {list(action.choices)}")
            defaults[key] = value
    parser.set_defaults(**defaults)
