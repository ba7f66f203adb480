"""The executor family: named offload entry points over one execute operation.

Sixteen executors cover every combination of four orthogonal letters:

* ``s`` / ``a``  synchronous (returns after completion) or asynchronous
  (returns immediately; track progress through the handle),
* ``m``          multi-shot (adds an nshots argument),
* ``p``          parameterised kernel (adds a parameter pack right after
  the kernel argument),
* ``b``          explicit backend id (appended after the shot arguments).

Every variant validates and dispatches through ``execute``. Result buffers
are caller-owned mutable sequences with at least nmeasure * nshots entries;
shot k owns entries [k * nmeasure, (k+1) * nmeasure) and unwritten entries
read -1. For an asynchronous run the buffer contents are unspecified until
sync_qrun, wait_qrun or halt_qrun synchronises them.

For a fixed seed an a-variant followed by wait_qrun writes exactly the same
buffer as its s-variant twin, because both consume the same device RNG
stream in the same order.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from enum import Enum
from typing import Any, Sequence

import numpy as np

from . import _context
from .core import (
    Environment,
    ParamQuantumKernel,
    QuantumKernel,
    current_env,
)
from .device import ControlOp, OpCode, RunRequest
from .errors import (
    BufferTooSmallError,
    InvalidHandleError,
    SizeMismatchError,
    UnknownKeyError,
    WrongKernelKindError,
)
from .handles import CSTATE_INVALID, QubitHandle


class ExecStatus(Enum):
    IDLE = "idle"          # handle never bound to an execution
    PENDING = "pending"
    RUNNING = "running"
    DONE = "done"
    HALTED = "halted"
    FAILED = "failed"


_TERMINAL = (ExecStatus.DONE, ExecStatus.HALTED, ExecStatus.FAILED)


@dataclass
class ExecRequest:
    """One offload request, fully resolved by the host."""

    kernel: Any
    parameterised: bool
    params: Any
    qr: QubitHandle
    nqubits: int
    results: Any
    nmeasure: int
    nshots: int
    backend: int
    asynchronous: bool


class ExecHandle:
    """Tracks one execution: status, progress, halt flag, result binding.

    A handle may be constructed by the caller or returned fresh by an
    a-variant executor. Once its status is terminal it can be passed to
    another executor call, which fully resets it.
    """

    def __init__(self):
        self._cond = threading.Condition()
        self._status = ExecStatus.IDLE
        self._shots_completed = 0
        self._halt = False
        self._staged: list[list[int]] = []
        self._error = None
        self._results = None
        self._nmeasure = 0
        self._nshots = 0

    # -- host-facing views ----------------------------------------------------

    @property
    def status(self) -> ExecStatus:
        with self._cond:
            return self._status

    @property
    def shots_completed(self) -> int:
        with self._cond:
            return self._shots_completed

    @property
    def error(self):
        with self._cond:
            return self._error

    def is_terminal(self) -> bool:
        with self._cond:
            return self._status in _TERMINAL

    # -- binding and device-side transitions -----------------------------------

    def _bind(self, results, nmeasure: int, nshots: int) -> None:
        with self._cond:
            if self._status not in (ExecStatus.IDLE, *_TERMINAL):
                raise InvalidHandleError(
                    f"handle is {self._status.value}; reuse requires a terminal status"
                )
            self._status = ExecStatus.PENDING
            self._shots_completed = 0
            self._halt = False
            self._staged = []
            self._error = None
            self._results = results
            self._nmeasure = nmeasure
            self._nshots = nshots

    def _begin_running(self) -> None:
        with self._cond:
            self._status = ExecStatus.RUNNING
            self._cond.notify_all()

    def _halt_requested(self) -> bool:
        with self._cond:
            return self._halt

    def _request_halt(self) -> None:
        with self._cond:
            self._halt = True

    def _stage_shot(self, outcomes: list[int]) -> None:
        with self._cond:
            self._staged.append(outcomes)
            self._shots_completed += 1
            self._cond.notify_all()

    def _finish(self, halted: bool, error) -> None:
        with self._cond:
            if error is not None:
                self._status = ExecStatus.FAILED
                self._error = error
            elif halted and self._shots_completed < self._nshots:
                self._status = ExecStatus.HALTED
            else:
                self._status = ExecStatus.DONE
            self._write_buffer()
            self._cond.notify_all()

    def _wait_terminal(self) -> None:
        with self._cond:
            self._cond.wait_for(lambda: self._status in _TERMINAL)

    # -- buffer synchronisation (all callers hold self._cond) -------------------

    def _write_buffer(self) -> int:
        """Write every row: completed shots padded with -1, the rest sentinel."""
        buf, nm = self._results, self._nmeasure
        done = self._shots_completed
        for k in range(self._nshots):
            row = self._staged[k] if k < done else []
            for j in range(nm):
                buf[k * nm + j] = row[j] if j < len(row) else CSTATE_INVALID
        return done

    def _require_bound(self) -> None:
        if self._status is ExecStatus.IDLE:
            raise InvalidHandleError("handle was never bound to an execution")


def result_buffer(nmeasure: int, nshots: int = 1) -> np.ndarray:
    """Convenience allocator: an int16 buffer pre-filled with the -1 sentinel."""
    return np.full(max(nmeasure * nshots, 0), CSTATE_INVALID, dtype=np.int16)


def _validate(env: Environment, req: ExecRequest) -> int:
    expect = ParamQuantumKernel if req.parameterised else QuantumKernel
    if not isinstance(req.kernel, expect) or type(req.kernel) is not expect:
        raise WrongKernelKindError(
            f"executor expects a {expect.__name__}, got {type(req.kernel).__name__}"
        )
    table = env.param_kernels if req.parameterised else env.plain_kernels
    key = table.key_of(req.kernel)
    if key is None:
        raise UnknownKeyError(f"kernel {req.kernel!r} is not registered")
    if not isinstance(req.qr, QubitHandle):
        raise InvalidHandleError(f"not a qubit handle: {req.qr!r}")
    info = env.registers.get(req.qr.registry_index)
    if info is None or not info.alive:
        raise InvalidHandleError(f"register {req.qr.registry_index} is not allocated")
    if req.qr.offset + req.qr.n > info.nqubits:
        raise InvalidHandleError("handle extends past its register")
    if info.backend != req.backend:
        raise InvalidHandleError(
            f"register lives on backend {info.backend}, executor targets {req.backend}"
        )
    if req.nqubits != req.qr.n:
        raise SizeMismatchError(f"nqubits={req.nqubits} but handle spans {req.qr.n}")
    if req.nshots < 1:
        raise ValueError(f"nshots must be >= 1, got {req.nshots}")
    if req.nmeasure < 0:
        raise ValueError(f"nmeasure must be >= 0, got {req.nmeasure}")
    needed = req.nmeasure * req.nshots
    if req.results is None or not hasattr(req.results, "__setitem__") \
            or len(req.results) < needed:
        have = "none" if req.results is None else len(req.results)
        raise BufferTooSmallError(
            f"result buffer needs >= {needed} entries, got {have}"
        )
    return key


def execute(req: ExecRequest, handle: ExecHandle | None = None) -> ExecHandle:
    """Validate *req*, enqueue it on its backend and return the bound handle.

    Synchronous requests block until the handle is terminal and re-raise any
    kernel failure. A busy backend queues the request FIFO behind the work
    already enqueued.
    """
    _context.require_host("execute")
    env = current_env()
    dev = env.device_for(req.backend)
    key = _validate(env, req)
    if handle is None:
        handle = ExecHandle()
    handle._bind(req.results, req.nmeasure, req.nshots)
    env.track_execution(req.qr.registry_index)
    env.live_handles.append(handle)
    opcode = OpCode.RUN_PARAM_KERNEL if req.parameterised else OpCode.RUN_KERNEL
    run = RunRequest(handle=handle, key=key, parameterised=req.parameterised,
                     qr=req.qr, nqubits=req.nqubits, nmeasure=req.nmeasure,
                     nshots=req.nshots, params=req.params)
    dev.enqueue(ControlOp(opcode, run))
    if not req.asynchronous:
        wait_qrun(handle)
    return handle


def sync_qrun(h: ExecHandle) -> int:
    """Snapshot completed shots into the result buffer; returns their count.

    Does not block and does not guarantee completion: rows of shots that have
    not finished read as -1 sentinels.
    """
    if not isinstance(h, ExecHandle):
        raise InvalidHandleError(f"not an execution handle: {h!r}")
    with h._cond:
        h._require_bound()
        return h._write_buffer()


def wait_qrun(h: ExecHandle) -> ExecStatus:
    """Block until the execution is terminal, synchronise, and report.

    A failed execution re-raises its kernel error (shot index attached).
    """
    if not isinstance(h, ExecHandle):
        raise InvalidHandleError(f"not an execution handle: {h!r}")
    with h._cond:
        h._require_bound()
        h._cond.wait_for(lambda: h._status in _TERMINAL)
        h._write_buffer()
        if h._status is ExecStatus.FAILED:
            raise h._error
        return h._status


def halt_qrun(h: ExecHandle) -> ExecStatus:
    """Ask the device to stop at the next shot boundary, then wait.

    Halting an already-terminal handle is a no-op that reports its status.
    Shots completed before the halt take effect stay synchronised.
    """
    if not isinstance(h, ExecHandle):
        raise InvalidHandleError(f"not an execution handle: {h!r}")
    with h._cond:
        h._require_bound()
    h._request_halt()
    return wait_qrun(h)


# -- the sixteen named executors ----------------------------------------------


def _run(kernel, params, parameterised, qr, nqubits, results, nmeasure,
         nshots, backend, asynchronous, handle=None) -> ExecHandle:
    req = ExecRequest(kernel=kernel, parameterised=parameterised, params=params,
                      qr=qr, nqubits=nqubits, results=results, nmeasure=nmeasure,
                      nshots=nshots, backend=backend, asynchronous=asynchronous)
    return execute(req, handle)


def s_qrun(kernel, qr, nqubits, results, nmeasure):
    """Run one shot synchronously on the default backend."""
    return _run(kernel, None, False, qr, nqubits, results, nmeasure, 1, 0, False)


def a_qrun(kernel, qr, nqubits, results, nmeasure, handle=None):
    """Launch one shot asynchronously on the default backend."""
    return _run(kernel, None, False, qr, nqubits, results, nmeasure, 1, 0, True,
                handle)


def sm_qrun(kernel, qr, nqubits, results, nmeasure, nshots):
    """Run nshots shots synchronously."""
    return _run(kernel, None, False, qr, nqubits, results, nmeasure, nshots, 0,
                False)


def am_qrun(kernel, qr, nqubits, results, nmeasure, nshots, handle=None):
    """Launch nshots shots asynchronously."""
    return _run(kernel, None, False, qr, nqubits, results, nmeasure, nshots, 0,
                True, handle)


def sb_qrun(kernel, qr, nqubits, results, nmeasure, backend):
    """Run one shot synchronously on an explicit backend."""
    return _run(kernel, None, False, qr, nqubits, results, nmeasure, 1, backend,
                False)


def ab_qrun(kernel, qr, nqubits, results, nmeasure, backend, handle=None):
    """Launch one shot asynchronously on an explicit backend."""
    return _run(kernel, None, False, qr, nqubits, results, nmeasure, 1, backend,
                True, handle)


def smb_qrun(kernel, qr, nqubits, results, nmeasure, nshots, backend):
    """Run nshots shots synchronously on an explicit backend."""
    return _run(kernel, None, False, qr, nqubits, results, nmeasure, nshots,
                backend, False)


def amb_qrun(kernel, qr, nqubits, results, nmeasure, nshots, backend, handle=None):
    """Launch nshots shots asynchronously on an explicit backend."""
    return _run(kernel, None, False, qr, nqubits, results, nmeasure, nshots,
                backend, True, handle)


def sp_qrun(kernel, params, qr, nqubits, results, nmeasure):
    """Run one parameterised shot synchronously."""
    return _run(kernel, params, True, qr, nqubits, results, nmeasure, 1, 0, False)


def ap_qrun(kernel, params, qr, nqubits, results, nmeasure, handle=None):
    """Launch one parameterised shot asynchronously."""
    return _run(kernel, params, True, qr, nqubits, results, nmeasure, 1, 0, True,
                handle)


def smp_qrun(kernel, params, qr, nqubits, results, nmeasure, nshots):
    """Run nshots parameterised shots synchronously."""
    return _run(kernel, params, True, qr, nqubits, results, nmeasure, nshots, 0,
                False)


def amp_qrun(kernel, params, qr, nqubits, results, nmeasure, nshots, handle=None):
    """Launch nshots parameterised shots asynchronously."""
    return _run(kernel, params, True, qr, nqubits, results, nmeasure, nshots, 0,
                True, handle)


def spb_qrun(kernel, params, qr, nqubits, results, nmeasure, backend):
    """Run one parameterised shot synchronously on an explicit backend."""
    return _run(kernel, params, True, qr, nqubits, results, nmeasure, 1, backend,
                False)


def apb_qrun(kernel, params, qr, nqubits, results, nmeasure, backend, handle=None):
    """Launch one parameterised shot asynchronously on an explicit backend."""
    return _run(kernel, params, True, qr, nqubits, results, nmeasure, 1, backend,
                True, handle)


def smpb_qrun(kernel, params, qr, nqubits, results, nmeasure, nshots, backend):
    """Run nshots parameterised shots synchronously on an explicit backend."""
    return _run(kernel, params, True, qr, nqubits, results, nmeasure, nshots,
                backend, False)


def ampb_qrun(kernel, params, qr, nqubits, results, nmeasure, nshots, backend,
              handle=None):
    """Launch nshots parameterised shots asynchronously on an explicit backend."""
    return _run(kernel, params, True, qr, nqubits, results, nmeasure, nshots,
                backend, True, handle)
