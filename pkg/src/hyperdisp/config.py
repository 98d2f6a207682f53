"""Flat ``key = value`` text format shared by config files and run manifests."""

from __future__ import annotations

from pathlib import Path

from .errors import ConfigError


def format_value(value) -> str:
    if value is None:
        return "none"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        # repr round-trips exactly through float()
        return repr(value)
    return str(value)


def parse_text(text: str, source: str = "<text>") -> dict[str, str]:
    """Parse ``key = value`` lines; ``#`` starts a comment, blank lines are ignored."""
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{lineno}: expected 'key = value', got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if not key:
            raise ConfigError(f"{source}:{lineno}: empty key")
        out[key] = value
    return out


def read_config(path) -> dict[str, str]:
    path = Path(path)
    return parse_text(path.read_text(), str(path))


def parse_assignments(items) -> dict[str, str]:
    """``--set key=value`` pairs from the command line."""
    out = {}
    for item in items or ():
        if "=" not in item:
            raise ConfigError(f"override {item!r} must look like key=value")
        key, value = (part.strip() for part in item.split("=", 1))
        out[key] = value
    return out


def dump_text(flat: dict) -> str:
    return "".join(f"{k} = {format_value(v)}\n" for k, v in flat.items())


def write_config(path, flat: dict):
    Path(path).write_text(dump_text(flat))
