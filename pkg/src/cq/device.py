"""Simulated quantum device: control queue, dispatch loop, state registry.

The device is the only place where register states live and change. The host
talks to it exclusively through a FIFO queue of small integer-opcode records;
the device context drains the queue in order and runs exactly one kernel at a
time. Shutdown is itself an opcode, so every previously enqueued operation
completes before the device stops (drain-then-stop).

A device normally runs on its own thread. In inline mode (a debugging aid)
each operation executes synchronously at enqueue time on the caller's thread;
for a fixed seed both modes produce identical observable results because they
consume the same RNG stream in the same order.
"""

from __future__ import annotations

import queue
import threading
from dataclasses import dataclass, field
from enum import IntEnum
from typing import Any, Callable

import numpy as np

from . import _context, _diag
from .config import RuntimeConfig
from .errors import (
    CQError,
    DeviceDownError,
    DeviceStartFailureError,
    InvalidHandleError,
    KernelError,
    StagingOverflowError,
    UnknownKeyError,
)
from .handles import QubitHandle
from .sim import SimState


class OpCode(IntEnum):
    """Control-queue opcodes. Values index the dispatch table."""

    ALLOC = 0
    DEALLOC = 1
    RUN_KERNEL = 2
    RUN_PARAM_KERNEL = 3
    SET_ANALOG_MODE = 4
    SHUTDOWN = 5
    NOOP = 6  # diagnostic probe, used by the test suite to count dispatches


@dataclass
class ControlOp:
    opcode: int
    payload: Any = None


class Reply:
    """One-shot mailbox for operations that need a synchronous answer."""

    def __init__(self):
        self._event = threading.Event()
        self.error: BaseException | None = None
        self.value: Any = None

    def finish(self, value: Any = None, error: BaseException | None = None) -> None:
        self.value = value
        self.error = error
        self._event.set()

    def wait(self) -> Any:
        self._event.wait()
        if self.error is not None:
            raise self.error
        return self.value


@dataclass
class AllocRequest:
    index: int
    nqubits: int
    reply: Reply


@dataclass
class DeallocRequest:
    index: int
    reply: Reply


@dataclass
class RunRequest:
    handle: Any  # ExecHandle; duck-typed to keep this module self-contained
    key: int
    parameterised: bool
    qr: QubitHandle
    nqubits: int
    nmeasure: int
    nshots: int
    params: Any = None


@dataclass
class NoopRequest:
    sink: list
    value: Any = None
    reply: Reply | None = None


@dataclass
class MeasurementRecord:
    """One recorded outcome, synchronised or device-local."""

    outcome: int
    registry_index: int
    qubit: int
    synchronised: bool
    shot: int


class StagingBuffer:
    """Device-side staging for one shot's synchronised outcomes.

    Capacity is the execution's nmeasure; pushing past it is a
    StagingOverflowError, which fails the shot.
    """

    def __init__(self, capacity: int):
        self.capacity = capacity
        self.outcomes: list[int] = []

    def push(self, outcome: int) -> None:
        if len(self.outcomes) >= self.capacity:
            raise StagingOverflowError(
                f"shot staged more than nmeasure={self.capacity} synchronised outcomes"
            )
        self.outcomes.append(outcome)

    def __len__(self) -> int:
        return len(self.outcomes)

    def __iter__(self):
        return iter(self.outcomes)


@dataclass
class RegisterState:
    """A live allocation on the device plus its analogue bookkeeping."""

    sim: SimState
    nqubits: int
    analog_enabled: bool = False
    positions: np.ndarray | None = None
    positions_version: int = 0
    channels: list = field(default_factory=list)
    _couplings: dict = field(default_factory=dict)

    def set_positions(self, pos: np.ndarray) -> None:
        self.positions = pos
        self.positions_version += 1
        self._couplings.clear()


class Device:
    """One simulated backend: queue, dispatch loop, register states."""

    def __init__(self, backend_id: int, seed_seq: np.random.SeedSequence,
                 cfg: RuntimeConfig,
                 kernel_lookup: Callable[[bool, int], Any],
                 exec_done: Callable[[int], None]):
        self.backend_id = backend_id
        measure_seq, undef_seq = seed_seq.spawn(2)
        self.rng = np.random.Generator(np.random.PCG64(measure_seq))
        self.undef_rng = np.random.Generator(np.random.PCG64(undef_seq))
        self.cfg = cfg
        self.kernel_lookup = kernel_lookup
        self.exec_done = exec_done
        self.registry: dict[int, RegisterState] = {}
        self.analog_mode = None
        self.measurement_log: list[MeasurementRecord] = []
        self.protocol_errors: list[str] = []
        self.gate_log: list | None = None
        self.inline = cfg.inline_device
        self._queue: queue.SimpleQueue = queue.SimpleQueue()
        self._accepting = False
        self._thread: threading.Thread | None = None
        self._ready = threading.Event()
        self._dispatch = {
            OpCode.ALLOC: self._op_alloc,
            OpCode.DEALLOC: self._op_dealloc,
            OpCode.RUN_KERNEL: self._op_run,
            OpCode.RUN_PARAM_KERNEL: self._op_run,
            OpCode.SET_ANALOG_MODE: self._op_set_mode,
            OpCode.SHUTDOWN: self._op_shutdown,
            OpCode.NOOP: self._op_noop,
        }

    # -- lifecycle ----------------------------------------------------------

    def start(self) -> None:
        self._accepting = True
        if self.inline:
            return
        self._thread = threading.Thread(
            target=self._loop, name=f"cq-device-{self.backend_id}", daemon=True
        )
        self._thread.start()
        if not self._ready.wait(timeout=10.0):
            raise DeviceStartFailureError(
                f"device {self.backend_id} did not come up"
            )
        _diag.log(2, f"device {self.backend_id} started")

    def enqueue(self, op: ControlOp) -> None:
        """Append one control op. Returns immediately in threaded mode."""
        if not self._accepting:
            raise DeviceDownError(f"device {self.backend_id} is shut down")
        if op.opcode == OpCode.SHUTDOWN:
            self._accepting = False
        if self.inline:
            self._process(op)
        else:
            self._queue.put(op)

    def join(self) -> None:
        if self._thread is not None:
            self._thread.join()
            self._thread = None

    def _loop(self) -> None:
        self._ready.set()
        while True:
            op = self._queue.get()
            if not self._process(op):
                break
        _diag.log(2, f"device {self.backend_id} stopped")

    def _process(self, op: ControlOp) -> bool:
        handler = self._dispatch.get(op.opcode)
        if handler is None:
            self.protocol_errors.append(f"unknown opcode {op.opcode!r}")
            _diag.log(1, f"device {self.backend_id}: unknown opcode {op.opcode!r}")
            return True
        try:
            return handler(op.payload) is not False
        except Exception as exc:  # fault isolation: the loop must survive
            self.protocol_errors.append(f"opcode {op.opcode}: {exc}")
            _diag.log(1, f"device {self.backend_id}: op failed: {exc}")
            return True

    # -- opcode handlers ----------------------------------------------------

    def _op_alloc(self, req: AllocRequest) -> None:
        try:
            sim = SimState(req.nqubits, rng=self.rng)
            if self.cfg.debug_undefined_state:
                raw = self.undef_rng.normal(size=2**req.nqubits) \
                    + 1j * self.undef_rng.normal(size=2**req.nqubits)
                sim.amp = raw / np.linalg.norm(raw)
            self.registry[req.index] = RegisterState(sim=sim, nqubits=req.nqubits)
            _diag.log(2, f"device {self.backend_id}: alloc reg {req.index} "
                         f"({req.nqubits} qubit(s))")
            req.reply.finish()
        except Exception as exc:
            req.reply.finish(error=exc)

    def _op_dealloc(self, req: DeallocRequest) -> None:
        try:
            state = self.registry.pop(req.index, None)
            if state is None:
                raise InvalidHandleError(f"register {req.index} is not allocated")
            for ch in state.channels:
                ch.alive = False
            _diag.log(2, f"device {self.backend_id}: dealloc reg {req.index}")
            req.reply.finish()
        except Exception as exc:
            req.reply.finish(error=exc)

    def _op_set_mode(self, mode) -> None:
        self.analog_mode = mode
        _diag.log(2, f"device {self.backend_id}: analogue mode {mode}")

    def _op_noop(self, req: NoopRequest) -> None:
        req.sink.append(req.value)
        if req.reply is not None:
            req.reply.finish()

    def _op_shutdown(self, _payload) -> bool:
        for state in self.registry.values():
            for ch in state.channels:
                ch.alive = False
        self.registry.clear()
        return False

    def _op_run(self, req: RunRequest) -> None:
        h = req.handle
        h._begin_running()
        error: CQError | None = None
        halted = False
        kernel = self.kernel_lookup(req.parameterised, req.key)
        if kernel is None:
            error = UnknownKeyError(f"no kernel registered under key {req.key}")
        else:
            for shot in range(req.nshots):
                if h._halt_requested():
                    halted = True
                    break
                try:
                    self._run_shot(kernel, req, shot)
                except KernelError as exc:
                    exc.shot = shot
                    error = exc
                    break
                except CQError as exc:
                    error = KernelError(f"kernel failed: {exc}", shot=shot)
                    error.__cause__ = exc
                    break
                except Exception as exc:
                    error = KernelError(f"kernel raised {type(exc).__name__}: {exc}",
                                        shot=shot)
                    error.__cause__ = exc
                    break
        self.exec_done(req.qr.registry_index)
        h._finish(halted=halted, error=error)

    def _run_shot(self, kernel, req: RunRequest, shot: int) -> None:
        staging = StagingBuffer(req.nmeasure)
        ctx = _context.KernelContext(self, staging, shot, run_tag=(id(req.handle), shot))
        _context.push(ctx)
        try:
            if req.parameterised:
                status = kernel(req.nqubits, req.qr, staging, req.params)
            else:
                status = kernel(req.nqubits, req.qr, staging)
        finally:
            _context.pop()
            for ch in ctx.channels:
                ch.alive = False
                state = self.registry.get(ch.registry_index)
                if state is not None and ch in state.channels:
                    state.channels.remove(ch)
        if status not in (None, 0):
            raise KernelError(f"kernel returned status {status}", shot=shot)
        h = req.handle
        h._stage_shot(list(staging))
        if _diag.verbosity() >= 3:
            self._dump_state(req.qr.registry_index)

    def _dump_state(self, registry_index: int) -> None:
        state = self.registry.get(registry_index)
        if state is None:
            return
        for i, a in enumerate(state.sim.amp):
            _diag.log(3, f"{i}: {a.real:.17g} {a.imag:.17g}")

    # -- helpers used by device-side operations ------------------------------

    def register_state(self, registry_index: int) -> RegisterState:
        state = self.registry.get(registry_index)
        if state is None:
            raise InvalidHandleError(f"register {registry_index} is not allocated")
        return state

    def log_measurement(self, rec: MeasurementRecord) -> None:
        self.measurement_log.append(rec)

    def log_gate(self, run_tag, kind, qubits) -> None:
        if self.gate_log is not None:
            self.gate_log.append((run_tag, kind, tuple(qubits)))
