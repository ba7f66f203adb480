"""Runtime and device configuration.

Two environment variables are honoured:

* ``CQ_VERBOSITY`` overrides the verbosity argument of any lifecycle call.
* ``CQ_SEED`` seeds the device RNG when no explicit seed is given.

Device parameters may also come from a plain text file of ``key value``
lines (blank lines and ``#`` comments are ignored)::

    max_channels 8
    C6 5420.0
    C3 3.7
    trotter_step_ns 0.1
    default_nsamples 64
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field

from .errors import ConfigError

ENV_VERBOSITY = "CQ_VERBOSITY"
ENV_SEED = "CQ_SEED"


@dataclass
class DeviceConfig:
    """Analogue-extension parameters of the simulated device.

    Units: interaction coefficients are rad/ns scaled by micrometre powers
    (``c6``: rad/ns * um^6, ``c3``: rad/ns * um^3).
    """

    max_channels: int = 8
    c6: float = 5420.0
    c3: float = 3.7
    trotter_step_ns: float = 0.1
    default_nsamples: int = 64

    @classmethod
    def from_file(cls, path: str) -> "DeviceConfig":
        cfg = cls()
        setters = {
            "max_channels": ("max_channels", int),
            "C6": ("c6", float),
            "C3": ("c3", float),
            "trotter_step_ns": ("trotter_step_ns", float),
            "default_nsamples": ("default_nsamples", int),
        }
        try:
            with open(path, "r", encoding="utf-8") as fh:
                lines = fh.readlines()
        except OSError as exc:
            raise ConfigError(f"cannot read device config {path!r}: {exc}") from exc
        for lineno, raw in enumerate(lines, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            if len(parts) != 2:
                raise ConfigError(f"{path}:{lineno}: expected 'key value', got {line!r}")
            key, value = parts
            if key not in setters:
                raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
            attr, conv = setters[key]
            try:
                setattr(cfg, attr, conv(value))
            except ValueError as exc:
                raise ConfigError(f"{path}:{lineno}: bad value for {key}: {value!r}") from exc
        cfg.validate()
        return cfg

    def validate(self) -> None:
        if self.max_channels < 1:
            raise ConfigError("max_channels must be >= 1")
        if self.trotter_step_ns <= 0:
            raise ConfigError("trotter_step_ns must be > 0")
        if self.default_nsamples < 2:
            raise ConfigError("default_nsamples must be >= 2")


@dataclass
class RuntimeConfig:
    """Host-side knobs fixed at cq_init time."""

    max_qubits: int = 24
    num_backends: int = 1
    inline_device: bool = False
    debug_undefined_state: bool = False
    exact_evolution_max_qubits: int = 10
    device: DeviceConfig = field(default_factory=DeviceConfig)


def resolve_verbosity(arg: int) -> int:
    """Effective verbosity: CQ_VERBOSITY wins over the argument when set."""
    raw = os.environ.get(ENV_VERBOSITY)
    if raw is not None:
        try:
            arg = int(raw)
        except ValueError as exc:
            raise ConfigError(f"{ENV_VERBOSITY} must be an integer, got {raw!r}") from exc
    if not isinstance(arg, int) or isinstance(arg, bool) or arg < 0:
        raise ConfigError(f"verbosity must be a non-negative integer, got {arg!r}")
    return arg


def resolve_seed(arg: int | None) -> int | None:
    """Effective seed: explicit argument first, CQ_SEED as the fallback."""
    if arg is not None:
        if not isinstance(arg, int) or isinstance(arg, bool) or arg < 0:
            raise ConfigError(f"seed must be a non-negative integer, got {arg!r}")
        return arg
    raw = os.environ.get(ENV_SEED)
    if raw is None:
        return None
    try:
        seed = int(raw)
    except ValueError as exc:
        raise ConfigError(f"{ENV_SEED} must be an integer, got {raw!r}") from exc
    if seed < 0:
        raise ConfigError(f"{ENV_SEED} must be non-negative, got {seed}")
    return seed
