"""Host-side lifecycle, resource handles and kernel registration.

The host opens a runtime environment with cq_init, allocates registers,
registers kernels, offloads them through the executor family and tears
everything down with cq_finalise. Registry and lifecycle calls are host-only
and expect external serialisation: a single host thread is the supported
pattern, mirroring one control process driving one device.

Kernels are written as plain functions and marked with the ``qkern`` or
``pqkern`` decorator. Registration never runs a kernel body: register_qkern
invokes the kernel with a registration sink, and the decorator wrapper
records the kernel's identity and returns before touching any quantum state.
"""

from __future__ import annotations

import functools
import threading
from dataclasses import dataclass
from typing import Any, Callable

import numpy as np

from . import _context, _diag
from .config import DeviceConfig, RuntimeConfig, resolve_seed, resolve_verbosity
from .device import AllocRequest, ControlOp, DeallocRequest, Device, OpCode, Reply
from .errors import (
    AlreadyInitialisedError,
    InvalidHandleError,
    NotInitialisedError,
    RegistryFullError,
    TooManyQubitsError,
    UnknownBackendError,
    WrongKernelKindError,
)
from .handles import QubitHandle

REGISTRY_CAP = 4096


class RegistrationSink:
    """Collector passed to a kernel during the registration probe."""

    def __init__(self):
        self.kernel = None

    def record(self, kernel) -> None:
        self.kernel = kernel


class QuantumKernel:
    """A device-executable kernel entry point (no parameter pack)."""

    parameterised = False

    def __init__(self, fn: Callable):
        self._fn = fn
        functools.update_wrapper(self, fn)

    def __call__(self, nqubits, qreg, creg, registration=None):
        if registration is not None:
            registration.record(self)
            return 0
        _context.require_device()
        return self._fn(nqubits, qreg, creg)

    def __repr__(self):
        return f"<qkern {self.__name__}>"


class ParamQuantumKernel(QuantumKernel):
    """A device-executable kernel that also takes an opaque parameter pack."""

    parameterised = True

    def __call__(self, nqubits, qreg, creg, params=None, registration=None):
        if registration is not None:
            registration.record(self)
            return 0
        _context.require_device()
        return self._fn(nqubits, qreg, creg, params)

    def __repr__(self):
        return f"<pqkern {self.__name__}>"


def qkern(fn: Callable) -> QuantumKernel:
    """Mark ``fn(nqubits, qreg, creg)`` as a quantum kernel."""
    return QuantumKernel(fn)


def pqkern(fn: Callable) -> ParamQuantumKernel:
    """Mark ``fn(nqubits, qreg, creg, params)`` as a parameterised kernel."""
    return ParamQuantumKernel(fn)


class KernelRegistry:
    """Dense-keyed, registration-ordered, idempotent kernel table.

    Keys start at 0 and grow by one per distinct kernel; identity is
    reference equality of the registered entry point. The same table object
    is shared by host and device, standing in for the pair of mirrored maps
    a host/device message protocol would keep.
    """

    def __init__(self, kind: str):
        self.kind = kind
        self._kernels: list = []
        self._keys: dict[int, int] = {}

    def register(self, kernel) -> int:
        key = self._keys.get(id(kernel))
        if key is not None:
            return key
        if len(self._kernels) >= REGISTRY_CAP:
            raise RegistryFullError(f"{self.kind} registry is full ({REGISTRY_CAP})")
        key = len(self._kernels)
        self._kernels.append(kernel)
        self._keys[id(kernel)] = key
        return key

    def lookup(self, key: int):
        if isinstance(key, int) and 0 <= key < len(self._kernels):
            return self._kernels[key]
        return None

    def key_of(self, kernel) -> int | None:
        return self._keys.get(id(kernel))

    def __len__(self) -> int:
        return len(self._kernels)


@dataclass
class RegisterInfo:
    backend: int
    nqubits: int
    alive: bool = True
    in_flight: int = 0


class Environment:
    """Everything cq_init brings up and cq_finalise tears down."""

    def __init__(self, verbosity: int, seed: int | None, cfg: RuntimeConfig):
        self.verbosity = verbosity
        self.seed = seed
        self.cfg = cfg
        self.seed_seq = np.random.SeedSequence(seed)
        self.plain_kernels = KernelRegistry("qkern")
        self.param_kernels = KernelRegistry("pqkern")
        self.registers: dict[int, RegisterInfo] = {}
        self._next_register = 0
        self._reg_lock = threading.Lock()
        self.live_handles: list = []  # ExecHandles bound since init
        backend_seqs = self.seed_seq.spawn(cfg.num_backends)
        self.devices = [
            Device(i, backend_seqs[i], cfg,
                   kernel_lookup=self._kernel_lookup,
                   exec_done=self._exec_done)
            for i in range(cfg.num_backends)
        ]

    def _kernel_lookup(self, parameterised: bool, key: int):
        table = self.param_kernels if parameterised else self.plain_kernels
        return table.lookup(key)

    def _exec_done(self, registry_index: int) -> None:
        with self._reg_lock:
            info = self.registers.get(registry_index)
            if info is not None and info.in_flight > 0:
                info.in_flight -= 1

    def track_execution(self, registry_index: int) -> None:
        with self._reg_lock:
            self.registers[registry_index].in_flight += 1

    def device_for(self, backend: int) -> Device:
        if not isinstance(backend, int) or isinstance(backend, bool) \
                or not 0 <= backend < len(self.devices):
            raise UnknownBackendError(f"no backend {backend!r} "
                                      f"(configured: {len(self.devices)})")
        return self.devices[backend]


_env: Environment | None = None


def current_env() -> Environment:
    if _env is None:
        raise NotInitialisedError("runtime is not initialised; call cq_init first")
    return _env


def is_initialised() -> bool:
    return _env is not None


def cq_init(verbosity: int = 0, *, seed: int | None = None, num_backends: int = 1,
            max_qubits: int = 24, inline_device: bool = False,
            debug_undefined_state: bool = False,
            config: str | DeviceConfig | None = None) -> None:
    """Bring up the runtime: seed the RNG and start the device context(s).

    ``CQ_VERBOSITY`` overrides *verbosity*; ``CQ_SEED`` supplies the seed when
    *seed* is None. *config* takes a device-parameter file path or a ready
    DeviceConfig.
    """
    global _env
    _context.require_host("cq_init")
    if _env is not None:
        raise AlreadyInitialisedError("cq_init called twice; call cq_finalise first")
    verbosity = resolve_verbosity(verbosity)
    seed = resolve_seed(seed)
    if num_backends < 1:
        raise UnknownBackendError(f"num_backends must be >= 1, got {num_backends}")
    if isinstance(config, str):
        dev_cfg = DeviceConfig.from_file(config)
    elif isinstance(config, DeviceConfig):
        dev_cfg = config
    else:
        dev_cfg = DeviceConfig()
    cfg = RuntimeConfig(max_qubits=max_qubits, num_backends=num_backends,
                        inline_device=inline_device,
                        debug_undefined_state=debug_undefined_state,
                        device=dev_cfg)
    _diag.set_verbosity(verbosity)
    env = Environment(verbosity, seed, cfg)
    try:
        for dev in env.devices:
            dev.start()
    except Exception:
        for dev in env.devices:
            if dev._accepting:
                dev.enqueue(ControlOp(OpCode.SHUTDOWN))
        raise
    _env = env
    _diag.log(1, f"runtime up: {num_backends} backend(s), seed={seed}")
    _diag.log(2, f"config: {cfg}")


def cq_finalise(verbosity: int = 0) -> None:
    """Tear the runtime down, halting any execution still in flight."""
    global _env
    _context.require_host("cq_finalise")
    env = current_env()
    verbosity = resolve_verbosity(verbosity)
    _diag.set_verbosity(verbosity)
    pending = [h for h in env.live_handles if not h.is_terminal()]
    if pending:
        _diag.log(1, f"cq_finalise: halting {len(pending)} in-flight execution(s)")
        for h in pending:
            h._request_halt()
    for dev in env.devices:
        dev.enqueue(ControlOp(OpCode.SHUTDOWN))
    for dev in env.devices:
        dev.join()
    for h in pending:
        h._wait_terminal()
    env.registers.clear()
    env.live_handles.clear()
    _env = None
    _diag.log(1, "runtime down")


def alloc_qureg(nqubits: int, backend: int = 0) -> QubitHandle:
    """Allocate an ``nqubits``-qubit register on a backend; contents undefined."""
    _context.require_host("alloc_qureg")
    env = current_env()
    if not isinstance(nqubits, int) or isinstance(nqubits, bool) \
            or not 1 <= nqubits <= env.cfg.max_qubits:
        raise TooManyQubitsError(
            f"register size must be in [1, {env.cfg.max_qubits}], got {nqubits!r}"
        )
    dev = env.device_for(backend)
    index = env._next_register
    env._next_register += 1
    reply = Reply()
    dev.enqueue(ControlOp(OpCode.ALLOC, AllocRequest(index, nqubits, reply)))
    reply.wait()
    env.registers[index] = RegisterInfo(backend=backend, nqubits=nqubits)
    return QubitHandle(index, 0, nqubits)


def alloc_qubit(backend: int = 0) -> QubitHandle:
    """Single-qubit specialisation of alloc_qureg."""
    return alloc_qureg(1, backend)


def _root_info(h: QubitHandle) -> RegisterInfo:
    env = current_env()
    if not isinstance(h, QubitHandle):
        raise InvalidHandleError(f"not a qubit handle: {h!r}")
    info = env.registers.get(h.registry_index)
    if info is None or not info.alive:
        raise InvalidHandleError(f"register {h.registry_index} is not allocated")
    if h.offset != 0 or h.n != info.nqubits:
        raise InvalidHandleError(
            "only the root handle of an allocation can be freed (got a sub-view)"
        )
    return info


def free_qureg(h: QubitHandle) -> None:
    """Release a register. Only root handles are freeable, and only once."""
    _context.require_host("free_qureg")
    env = current_env()
    info = _root_info(h)
    with env._reg_lock:
        if info.in_flight > 0:
            raise InvalidHandleError(
                f"register {h.registry_index} has an execution in flight"
            )
        info.alive = False
    dev = env.device_for(info.backend)
    reply = Reply()
    dev.enqueue(ControlOp(OpCode.DEALLOC, DeallocRequest(h.registry_index, reply)))
    reply.wait()


def free_qubit(h: QubitHandle) -> None:
    """Single-qubit specialisation of free_qureg."""
    if isinstance(h, QubitHandle) and h.n != 1:
        raise InvalidHandleError(f"free_qubit expects a 1-qubit handle, got n={h.n}")
    free_qureg(h)


def _register(kernel, table: KernelRegistry, expect: type) -> int:
    _context.require_host("kernel registration")
    current_env()
    if not isinstance(kernel, expect) or type(kernel) is not expect:
        raise WrongKernelKindError(
            f"expected a {expect.__name__} entry point, got {type(kernel).__name__}"
        )
    sink = RegistrationSink()
    kernel(0, None, None, registration=sink)
    if sink.kernel is not kernel:
        raise WrongKernelKindError(
            f"{kernel!r} did not answer the registration probe"
        )
    key = table.register(kernel)
    _diag.log(2, f"registered {kernel!r} as {table.kind} key {key}")
    return key


def register_qkern(kernel) -> int:
    """Register a plain kernel; returns its dense integer key (idempotent)."""
    env = current_env()
    return _register(kernel, env.plain_kernels, QuantumKernel)


def register_pqkern(kernel) -> int:
    """Register a parameterised kernel; returns its dense integer key."""
    env = current_env()
    return _register(kernel, env.param_kernels, ParamQuantumKernel)
