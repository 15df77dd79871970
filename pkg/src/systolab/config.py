"""Runtime settings: flat key=value config files and environment variables."""

from __future__ import annotations

import os
from dataclasses import dataclass, fields, replace
from pathlib import Path

DEFAULT_SWEEP_PRECISION = 256
DEFAULT_FIELD_PRECISION = 128
ENV_PREC = "SYSTOLAB_PREC"
ENV_THREADS = "SYSTOLAB_THREADS"


class ConfigError(ValueError):
    """Malformed config file or environment value."""


@dataclass(frozen=True)
class Settings:
    """Metric and envelope constants; the defaults are all 1."""

    c1: float = 1.0
    c2: float = 1.0
    gamma_n: float = 1.0
    metric_c: float = 1.0


def parse_config(text: str, base: Settings | None = None) -> Settings:
    """Parse ``key = value`` lines; ``#`` starts a comment.

    Raises:
        ConfigError: on unknown keys, missing ``=``, or non-positive values.
    """
    known = {f.name for f in fields(Settings)}
    values: dict[str, float] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key=value")
        key, val = (s.strip() for s in line.split("=", 1))
        if key not in known:
            raise ConfigError(f"line {lineno}: unknown key {key!r} (known: {', '.join(sorted(known))})")
        try:
            num = float(val)
        except ValueError:
            raise ConfigError(f"line {lineno}: {key} needs a number, got {val!r}") from None
        if not num > 0:
            raise ConfigError(f"line {lineno}: {key} must be positive")
        values[key] = num
    return replace(base or Settings(), **values)


def load_config(path: str | os.PathLike | None) -> Settings:
    """Settings from a file, or defaults when ``path`` is None."""
    if path is None:
        return Settings()
    return parse_config(Path(path).read_text())


def _env_int(name: str, default: int, minimum: int) -> int:
    raw = os.environ.get(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        val = int(raw)
    except ValueError:
        raise ConfigError(f"{name} must be an integer, got {raw!r}") from None
    if val < minimum:
        raise ConfigError(f"{name} must be >= {minimum}")
    return val


def env_precision(default: int) -> int:
    """Precision in bits from SYSTOLAB_PREC, else ``default``."""
    return _env_int(ENV_PREC, default, 32)


def env_threads(default: int = 1) -> int:
    """Worker count from SYSTOLAB_THREADS, else ``default``."""
    return _env_int(ENV_THREADS, default, 1)
