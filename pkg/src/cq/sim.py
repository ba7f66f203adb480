"""Dense statevector simulation engine.

Basis convention is little-endian throughout: qubit ``i`` is bit ``i`` of the
basis-state index, so amplitude index 5 (0b101) has qubits 0 and 2 in |1>.
The same rule applies to the sub-index of a multi-qubit gate matrix: the
first qubit in a gate's qubit tuple is the least significant bit. Under this
convention ``[h(q0), cx(q0, q1)]`` applied to |00> yields amplitudes
(1/sqrt(2), 0, 0, 1/sqrt(2)).

The engine applies gates by tensor contraction. ``build_unitary_oracle``
constructs the dense circuit matrix by an independent per-column embedding
and exists purely so tests can cross-check the contraction path against
brute force on small registers.
"""

from __future__ import annotations

import math
from enum import Enum
from functools import lru_cache, reduce
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    DuplicateQubitError,
    DuplicateTargetError,
    InvalidCStateError,
    StateOutOfRangeError,
    TargetOutOfRangeError,
    TooLargeError,
)

NORM_TOL = 1e-10

_SQ2 = 1.0 / math.sqrt(2.0)


class GateKind(Enum):
    """The supported gate set (OpenQASM standard-library names)."""

    ID = "id"
    X = "x"
    Y = "y"
    Z = "z"
    H = "h"
    S = "s"
    SDG = "sdg"
    T = "t"
    TDG = "tdg"
    SX = "sx"
    RX = "rx"
    RY = "ry"
    RZ = "rz"
    P = "p"
    U = "u"
    CX = "cx"
    CY = "cy"
    CZ = "cz"
    CH = "ch"
    CP = "cp"
    CRX = "crx"
    CRY = "cry"
    CRZ = "crz"
    CU = "cu"
    SWAP = "swap"
    CCX = "ccx"
    CSWAP = "cswap"


GATE_NQUBITS = {
    GateKind.ID: 1, GateKind.X: 1, GateKind.Y: 1, GateKind.Z: 1,
    GateKind.H: 1, GateKind.S: 1, GateKind.SDG: 1, GateKind.T: 1,
    GateKind.TDG: 1, GateKind.SX: 1, GateKind.RX: 1, GateKind.RY: 1,
    GateKind.RZ: 1, GateKind.P: 1, GateKind.U: 1,
    GateKind.CX: 2, GateKind.CY: 2, GateKind.CZ: 2, GateKind.CH: 2,
    GateKind.CP: 2, GateKind.CRX: 2, GateKind.CRY: 2, GateKind.CRZ: 2,
    GateKind.CU: 2, GateKind.SWAP: 2,
    GateKind.CCX: 3, GateKind.CSWAP: 3,
}

GATE_NPARAMS = {
    GateKind.RX: 1, GateKind.RY: 1, GateKind.RZ: 1, GateKind.P: 1,
    GateKind.U: 3, GateKind.CP: 1, GateKind.CRX: 1, GateKind.CRY: 1,
    GateKind.CRZ: 1, GateKind.CU: 4,
}


def _u_matrix(theta: float, phi: float, lam: float) -> np.ndarray:
    c, s = math.cos(theta / 2.0), math.sin(theta / 2.0)
    return np.array(
        [
            [c, -np.exp(1j * lam) * s],
            [np.exp(1j * phi) * s, np.exp(1j * (phi + lam)) * c],
        ],
        dtype=complex,
    )


_FIXED_1Q = {
    GateKind.ID: np.eye(2, dtype=complex),
    GateKind.X: np.array([[0, 1], [1, 0]], dtype=complex),
    GateKind.Y: np.array([[0, -1j], [1j, 0]], dtype=complex),
    GateKind.Z: np.array([[1, 0], [0, -1]], dtype=complex),
    GateKind.H: np.array([[_SQ2, _SQ2], [_SQ2, -_SQ2]], dtype=complex),
    GateKind.S: np.array([[1, 0], [0, 1j]], dtype=complex),
    GateKind.SDG: np.array([[1, 0], [0, -1j]], dtype=complex),
    GateKind.T: np.array([[1, 0], [0, np.exp(1j * math.pi / 4)]], dtype=complex),
    GateKind.TDG: np.array([[1, 0], [0, np.exp(-1j * math.pi / 4)]], dtype=complex),
    GateKind.SX: 0.5 * np.array([[1 + 1j, 1 - 1j], [1 - 1j, 1 + 1j]], dtype=complex),
}


def _controlled(u: np.ndarray) -> np.ndarray:
    """4x4 controlled-u with control = sub-bit 0, target = sub-bit 1."""
    m = np.eye(4, dtype=complex)
    m[1, 1] = u[0, 0]
    m[1, 3] = u[0, 1]
    m[3, 1] = u[1, 0]
    m[3, 3] = u[1, 1]
    return m


def _param_matrix(kind: GateKind, params: tuple[float, ...]) -> np.ndarray:
    theta = params[0] if params else 0.0
    if kind is GateKind.RX:
        c, s = math.cos(theta / 2), math.sin(theta / 2)
        return np.array([[c, -1j * s], [-1j * s, c]], dtype=complex)
    if kind is GateKind.RY:
        c, s = math.cos(theta / 2), math.sin(theta / 2)
        return np.array([[c, -s], [s, c]], dtype=complex)
    if kind is GateKind.RZ:
        return np.array(
            [[np.exp(-1j * theta / 2), 0], [0, np.exp(1j * theta / 2)]], dtype=complex
        )
    if kind is GateKind.P:
        return np.array([[1, 0], [0, np.exp(1j * theta)]], dtype=complex)
    if kind is GateKind.U:
        return _u_matrix(*params)
    raise ValueError(f"not a parameterised single-qubit kind: {kind}")


@lru_cache(maxsize=4096)
def gate_matrix(kind: GateKind, params: tuple[float, ...] = ()) -> np.ndarray:
    """Unitary for *kind*, in the little-endian sub-index convention."""
    expected = GATE_NPARAMS.get(kind, 0)
    if len(params) != expected:
        raise ValueError(f"{kind.value} takes {expected} parameter(s), got {len(params)}")
    if kind in _FIXED_1Q:
        return _FIXED_1Q[kind]
    if kind in (GateKind.RX, GateKind.RY, GateKind.RZ, GateKind.P, GateKind.U):
        return _param_matrix(kind, params)
    if kind is GateKind.CX:
        return _controlled(_FIXED_1Q[GateKind.X])
    if kind is GateKind.CY:
        return _controlled(_FIXED_1Q[GateKind.Y])
    if kind is GateKind.CZ:
        return _controlled(_FIXED_1Q[GateKind.Z])
    if kind is GateKind.CH:
        return _controlled(_FIXED_1Q[GateKind.H])
    if kind is GateKind.CP:
        return _controlled(_param_matrix(GateKind.P, params))
    if kind is GateKind.CRX:
        return _controlled(_param_matrix(GateKind.RX, params))
    if kind is GateKind.CRY:
        return _controlled(_param_matrix(GateKind.RY, params))
    if kind is GateKind.CRZ:
        return _controlled(_param_matrix(GateKind.RZ, params))
    if kind is GateKind.CU:
        theta, phi, lam, gamma = params
        return _controlled(np.exp(1j * gamma) * _u_matrix(theta, phi, lam))
    if kind is GateKind.SWAP:
        m = np.eye(4, dtype=complex)
        m[[1, 2]] = m[[2, 1]]
        return m
    if kind is GateKind.CCX:
        # controls = sub-bits 0 and 1, target = sub-bit 2
        m = np.eye(8, dtype=complex)
        m[[3, 7]] = m[[7, 3]]
        return m
    if kind is GateKind.CSWAP:
        # control = sub-bit 0, swapped pair = sub-bits 1 and 2
        m = np.eye(8, dtype=complex)
        m[[3, 5]] = m[[5, 3]]
        return m
    raise ValueError(f"unknown gate kind: {kind!r}")


def apply_matrix(state: np.ndarray, mat: np.ndarray, qubits: Sequence[int]) -> np.ndarray:
    """Apply a 2^k x 2^k unitary to the given qubits of a 2^n statevector."""
    n = state.size.bit_length() - 1
    k = len(qubits)
    mr = mat.reshape([2] * (2 * k))
    st = state.reshape([2] * n)
    # matrix input axis k+j carries gate bit (k-1-j), i.e. qubit qubits[k-1-j]
    in_axes = [n - 1 - qubits[k - 1 - j] for j in range(k)]
    out = np.tensordot(mr, st, axes=(list(range(k, 2 * k)), in_axes))
    perm = [0] * n
    for j in range(k):
        perm[in_axes[j]] = j
    rest = [a for a in range(n) if a not in in_axes]
    for pos, a in enumerate(rest):
        perm[a] = k + pos
    return np.transpose(out, perm).reshape(-1)


class SimState:
    """Statevector of an ``n``-qubit register plus its sampling RNG."""

    def __init__(self, n: int, rng: np.random.Generator | None = None,
                 amplitudes: np.ndarray | None = None):
        self.n = n
        self.rng = rng if rng is not None else np.random.default_rng()
        if amplitudes is None:
            self.amp = np.zeros(2**n, dtype=complex)
            self.amp[0] = 1.0
        else:
            self.amp = np.asarray(amplitudes, dtype=complex).reshape(2**n).copy()

    def copy(self) -> "SimState":
        return SimState(self.n, self.rng, self.amp)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amp))

    def set_basis_state(self, index: int) -> None:
        if not 0 <= index < 2**self.n:
            raise StateOutOfRangeError(
                f"basis state {index} does not fit in {self.n} qubit(s)"
            )
        self.amp.fill(0.0)
        self.amp[index] = 1.0

    def apply(self, kind: GateKind, qubits: Sequence[int],
              params: tuple[float, ...] = ()) -> None:
        if len(set(qubits)) != len(qubits):
            raise DuplicateQubitError(f"duplicate qubit in {kind.value} gate: {qubits}")
        for q in qubits:
            if not 0 <= q < self.n:
                raise TargetOutOfRangeError(f"qubit {q} outside {self.n}-qubit state")
        if len(qubits) != GATE_NQUBITS[kind]:
            raise ValueError(
                f"{kind.value} acts on {GATE_NQUBITS[kind]} qubit(s), got {len(qubits)}"
            )
        self.amp = apply_matrix(self.amp, gate_matrix(kind, tuple(params)), list(qubits))

    def _check_target(self, qubit: int) -> None:
        if not 0 <= qubit < self.n:
            raise TargetOutOfRangeError(f"qubit {qubit} outside {self.n}-qubit state")

    def probability_one(self, qubit: int) -> float:
        self._check_target(qubit)
        st = self.amp.reshape([2] * self.n)
        axis = self.n - 1 - qubit
        other = tuple(a for a in range(self.n) if a != axis)
        probs = np.sum(np.abs(st) ** 2, axis=other)
        return float(probs[1])

    def measure_one(self, qubit: int) -> int:
        """Projective measurement with collapse; consumes one RNG draw."""
        p1 = self.probability_one(qubit)
        outcome = 1 if self.rng.random() < p1 else 0
        st = self.amp.reshape([2] * self.n)
        axis = self.n - 1 - qubit
        idx = [slice(None)] * self.n
        idx[axis] = 1 - outcome
        st[tuple(idx)] = 0.0
        p = p1 if outcome == 1 else 1.0 - p1
        self.amp = (st / math.sqrt(max(p, 1e-300))).reshape(-1)
        return outcome

    def measure(self, targets: Sequence[int]) -> list[int]:
        """Measure targets in order, each from the state conditioned so far."""
        if len(set(targets)) != len(targets):
            raise DuplicateTargetError(f"duplicate measurement target in {targets}")
        return [self.measure_one(q) for q in targets]

    def set_qubit(self, qubit: int, value: int) -> None:
        """Force one qubit to a definite value (measure, flip if needed)."""
        if value not in (0, 1) or isinstance(value, bool):
            raise InvalidCStateError(f"cstate must be 0 or 1, got {value!r}")
        if self.measure_one(qubit) != value:
            self.apply(GateKind.X, [qubit])

    def probabilities(self, targets: Sequence[int] | None = None) -> np.ndarray:
        """Joint outcome distribution over *targets* (little-endian order)."""
        if targets is None:
            targets = list(range(self.n))
        if len(set(targets)) != len(targets):
            raise DuplicateTargetError(f"duplicate target in {targets}")
        for q in targets:
            self._check_target(q)
        pr = np.abs(self.amp.reshape([2] * self.n)) ** 2
        keep = [self.n - 1 - t for t in targets]
        other = tuple(a for a in range(self.n) if a not in keep)
        marg = pr.sum(axis=other) if other else pr
        # axes of marg follow ascending axis order, i.e. descending qubit
        qs_desc = sorted(targets, reverse=True)
        desired = [targets[len(targets) - 1 - j] for j in range(len(targets))]
        perm = [qs_desc.index(q) for q in desired]
        return np.transpose(marg, perm).reshape(-1)

    def sample(self, targets: Sequence[int], shots: int) -> np.ndarray:
        """Sample outcomes without collapsing. Shot-major, one int per target."""
        probs = self.probabilities(targets)
        probs = probs / probs.sum()
        draws = self.rng.choice(probs.size, size=shots, p=probs)
        k = len(targets)
        out = np.empty(shots * k, dtype=np.int16)
        for i in range(k):
            out[i::k] = (draws >> i) & 1
        return out


def build_unitary_oracle(gates: Iterable[tuple[GateKind, Sequence[int], tuple]],
                         n: int) -> np.ndarray:
    """Dense circuit unitary via per-column embedding (brute force, n <= 6).

    Deliberately avoids the tensor-contraction path so it can stand as an
    independent reference in equivalence tests. An empty circuit yields the
    identity.
    """
    if n > 6:
        raise TooLargeError(f"dense oracle limited to 6 qubits, requested {n}")
    dim = 2**n
    unitary = np.eye(dim, dtype=complex)
    for kind, qubits, params in gates:
        m = gate_matrix(kind, tuple(params))
        k = len(qubits)
        qmask = 0
        for q in qubits:
            qmask |= 1 << q
        g = np.zeros((dim, dim), dtype=complex)
        for col in range(dim):
            sub_in = 0
            for i, q in enumerate(qubits):
                sub_in |= ((col >> q) & 1) << i
            base = col & ~qmask
            for sub_out in range(2**k):
                row = base
                for i, q in enumerate(qubits):
                    row |= ((sub_out >> i) & 1) << q
                g[row, col] = m[sub_out, sub_in]
        unitary = g @ unitary
    return unitary
