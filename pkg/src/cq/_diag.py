"""Verbosity-gated diagnostics. All output goes to stderr."""

from __future__ import annotations

import sys

_verbosity = 0


def set_verbosity(level: int) -> None:
    global _verbosity
    _verbosity = level


def verbosity() -> int:
    return _verbosity


def log(level: int, message: str) -> None:
    """Emit *message* when the active verbosity is at least *level*."""
    if _verbosity >= level:
        print(f"[cq] {message}", file=sys.stderr)
