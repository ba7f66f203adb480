"""Gate operations available inside kernels.

Each public function applies one gate of the standard set to qubit handles;
all of them funnel through apply_gate, which resolves handles against the
executing device's register table. These are device-only operations: calling
them outside a kernel raises HostContextError.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import _context
from .errors import DuplicateQubitError, InvalidHandleError
from .handles import QubitHandle
from .sim import GateKind


@dataclass(frozen=True)
class Gate:
    """One gate instance: kind, real parameters, and its qubit handles."""

    kind: GateKind
    qubits: tuple[QubitHandle, ...]
    params: tuple[float, ...] = field(default_factory=tuple)


def _resolve(q) -> QubitHandle:
    if not isinstance(q, QubitHandle):
        raise InvalidHandleError(f"not a qubit handle: {q!r}")
    if q.n != 1:
        raise InvalidHandleError(f"gates address single qubits, got an n={q.n} view")
    return q


def apply_gate(gate: Gate) -> None:
    """Apply one gate on the executing device (unified dispatch point)."""
    ctx = _context.require_device()
    qubits = [_resolve(q) for q in gate.qubits]
    index = qubits[0].registry_index
    if any(q.registry_index != index for q in qubits):
        raise InvalidHandleError("gate qubits must come from one register")
    offsets = [q.offset for q in qubits]
    if len(set(offsets)) != len(offsets):
        raise DuplicateQubitError(f"duplicate qubit in {gate.kind.value} gate")
    state = ctx.device.register_state(index)
    state.sim.apply(gate.kind, offsets, gate.params)
    ctx.device.log_gate(ctx.run_tag, gate.kind, offsets)


def _one(kind: GateKind, q, *params: float) -> None:
    apply_gate(Gate(kind, (q,), tuple(params)))


def _two(kind: GateKind, a, b, *params: float) -> None:
    apply_gate(Gate(kind, (a, b), tuple(params)))


def id(q):  # noqa: A001 - the gate set names it id
    """Identity (explicit no-op)."""
    _one(GateKind.ID, q)


def x(q):
    """Pauli X."""
    _one(GateKind.X, q)


def y(q):
    """Pauli Y."""
    _one(GateKind.Y, q)


def z(q):
    """Pauli Z."""
    _one(GateKind.Z, q)


def hadamard(q):
    """Hadamard."""
    _one(GateKind.H, q)


h = hadamard


def s(q):
    """Phase gate S = sqrt(Z)."""
    _one(GateKind.S, q)


def sdg(q):
    """S dagger."""
    _one(GateKind.SDG, q)


def t(q):
    """T = fourth root of Z."""
    _one(GateKind.T, q)


def tdg(q):
    """T dagger."""
    _one(GateKind.TDG, q)


def sx(q):
    """Square root of X."""
    _one(GateKind.SX, q)


def rx(q, theta: float):
    """Rotation about X by theta."""
    _one(GateKind.RX, q, theta)


def ry(q, theta: float):
    """Rotation about Y by theta."""
    _one(GateKind.RY, q, theta)


def rz(q, theta: float):
    """Rotation about Z by theta."""
    _one(GateKind.RZ, q, theta)


def phase(q, lam: float):
    """Phase gate diag(1, e^{i lam})."""
    _one(GateKind.P, q, lam)


p = phase


def u(q, theta: float, phi: float, lam: float):
    """Generic single-qubit rotation U(theta, phi, lam)."""
    _one(GateKind.U, q, theta, phi, lam)


def cx(ctrl, target):
    """Controlled X."""
    _two(GateKind.CX, ctrl, target)


def cy(ctrl, target):
    """Controlled Y."""
    _two(GateKind.CY, ctrl, target)


def cz(ctrl, target):
    """Controlled Z."""
    _two(GateKind.CZ, ctrl, target)


def ch(ctrl, target):
    """Controlled Hadamard."""
    _two(GateKind.CH, ctrl, target)


def cphase(ctrl, target, lam: float):
    """Controlled phase."""
    _two(GateKind.CP, ctrl, target, lam)


cp = cphase


def crx(ctrl, target, theta: float):
    """Controlled X rotation."""
    _two(GateKind.CRX, ctrl, target, theta)


def cry(ctrl, target, theta: float):
    """Controlled Y rotation."""
    _two(GateKind.CRY, ctrl, target, theta)


def crz(ctrl, target, theta: float):
    """Controlled Z rotation."""
    _two(GateKind.CRZ, ctrl, target, theta)


def cu(ctrl, target, theta: float, phi: float, lam: float, gamma: float):
    """Controlled U with an extra global phase gamma on the target block."""
    _two(GateKind.CU, ctrl, target, theta, phi, lam, gamma)


def swap(a, b):
    """Exchange two qubits."""
    _two(GateKind.SWAP, a, b)


def ccx(ctrl0, ctrl1, target):
    """Toffoli."""
    apply_gate(Gate(GateKind.CCX, (ctrl0, ctrl1, target)))


def cswap(ctrl, a, b):
    """Fredkin (controlled swap)."""
    apply_gate(Gate(GateKind.CSWAP, (ctrl, a, b)))
