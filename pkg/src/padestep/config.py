"""Flat TOML run configuration feeding click's default_map."""

import logging
import tomllib
from pathlib import Path
from typing import Any

import click

logger = logging.getLogger(__name__)

ALIASES = {"m": "order", "pf": "p_f"}


def normalize_key(key: str) -> str:
    """Map a flag-style key to its option name: ``rho-inf`` -> ``rho_inf``, ``M`` -> ``order``."""
    name = key.strip().lstrip("-").replace("-", "_")
    return ALIASES.get(name.lower(), name)


def load_config(path: str | Path, allowed: set[str] | None = None) -> dict[str, Any]:
    """Read a flat table of option values. Nested tables and unknown keys are rejected."""
    path = Path(path)
    try:
        with path.open("rb") as fh:
            raw = tomllib.load(fh)
    except OSError as exc:
        raise click.BadParameter(f"cannot read {path}: {exc}", param_hint="--config") from exc
    except tomllib.TOMLDecodeError as exc:
        raise click.BadParameter(f"{path} is not valid TOML: {exc}", param_hint="--config") from exc

    values: dict[str, Any] = {}
    for key, value in raw.items():
        if isinstance(value, dict):
            raise click.BadParameter(
                f"nested table {key!r} is not supported", param_hint="--config"
            )
        name = normalize_key(key)
        if allowed is not None and name not in allowed:
            raise click.BadParameter(
                f"unknown key {key!r}; expected one of {sorted(allowed)}", param_hint="--config"
            )
        values[name] = value
    logger.debug("loaded %d settings from %s", len(values), path)
    return values


def config_callback(ctx: click.Context, param: click.Parameter, value: str | None) -> None:
    """Eager --config callback: later options fall back to the file's values."""
    if value is None:
        return
    allowed = {p.name for p in ctx.command.params if p.name and p.name != "config"}
    ctx.default_map = {**(ctx.default_map or {}), **load_config(value, allowed)}
