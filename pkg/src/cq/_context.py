"""Thread-local kernel execution context.

Device-only operations (gates, measurements, analogue ops) resolve their
register through the context installed by the device while it runs a kernel
shot. Calling them anywhere else raises HostContextError; calling host-only
operations from inside a kernel raises DeviceContextError.
"""

from __future__ import annotations

import threading

from .errors import DeviceContextError, HostContextError

_tls = threading.local()


class KernelContext:
    """Per-shot state the device exposes to a running kernel."""

    def __init__(self, device, staging, shot: int, run_tag: object):
        self.device = device
        self.staging = staging
        self.shot = shot
        self.run_tag = run_tag
        self.channels: list = []  # shot-scoped analogue channels


def push(ctx: KernelContext) -> None:
    _tls.ctx = ctx


def pop() -> None:
    _tls.ctx = None


def current() -> KernelContext | None:
    return getattr(_tls, "ctx", None)


def require_device() -> KernelContext:
    ctx = current()
    if ctx is None:
        raise HostContextError("device-only operation called outside a kernel")
    return ctx


def require_host(what: str) -> None:
    if current() is not None:
        raise DeviceContextError(f"{what} is host-only and cannot run inside a kernel")
