"""Independent reference implementations the tests compare the engine to.

Everything here is deliberately written with a different algorithm than the
package: gates embed by explicit basis-state index surgery (no tensor
contraction), Hamiltonians assemble via np.kron over literal Pauli matrices,
and time evolution goes through scipy's expm. Keep it that way; these checks
are only worth something while the two routes stay separate.
"""

import math

import numpy as np
from scipy.linalg import expm

SQ2 = 1.0 / math.sqrt(2.0)

I2 = np.eye(2, dtype=complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)
NUM_OP = np.array([[0, 0], [0, 1]], dtype=complex)  # |1><1|
SIGMA_PLUS = np.array([[0, 0], [1, 0]], dtype=complex)   # |1><0|
SIGMA_MINUS = np.array([[0, 1], [0, 0]], dtype=complex)  # |0><1|


# -- gate references ------------------------------------------------------------


def rx_ref(theta):
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    return np.array([[c, -1j * s], [-1j * s, c]])


def ry_ref(theta):
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    return np.array([[c, -s], [s, c]], dtype=complex)


def rz_ref(theta):
    return np.array([[np.exp(-1j * theta / 2), 0], [0, np.exp(1j * theta / 2)]])


def p_ref(theta):
    return np.array([[1, 0], [0, np.exp(1j * theta)]])


def u_ref(theta, phi, lam):
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    return np.array([
        [c, -np.exp(1j * lam) * s],
        [np.exp(1j * phi) * s, np.exp(1j * (phi + lam)) * c],
    ])


def controlled_ref(u):
    """4x4 controlled-u, sub-index bit 0 = control, bit 1 = target."""
    m = np.eye(4, dtype=complex)
    m[1, 1], m[1, 3] = u[0, 0], u[0, 1]
    m[3, 1], m[3, 3] = u[1, 0], u[1, 1]
    return m


FIXED_1Q = {
    "id": I2.copy(),
    "x": PAULI_X.copy(),
    "y": PAULI_Y.copy(),
    "z": PAULI_Z.copy(),
    "h": np.array([[SQ2, SQ2], [SQ2, -SQ2]], dtype=complex),
    "s": np.array([[1, 0], [0, 1j]], dtype=complex),
    "sdg": np.array([[1, 0], [0, -1j]], dtype=complex),
    "t": np.array([[1, 0], [0, np.exp(1j * math.pi / 4)]]),
    "tdg": np.array([[1, 0], [0, np.exp(-1j * math.pi / 4)]]),
    "sx": 0.5 * np.array([[1 + 1j, 1 - 1j], [1 - 1j, 1 + 1j]]),
}

SWAP_REF = np.array([[1, 0, 0, 0],
                     [0, 0, 1, 0],
                     [0, 1, 0, 0],
                     [0, 0, 0, 1]], dtype=complex)


def embed_gate(u: np.ndarray, qubits, n: int) -> np.ndarray:
    """Expand a k-qubit gate to the full 2^n space by index surgery.

    qubits[b] is the register qubit holding sub-index bit b. Works one
    column at a time, no reshaping.
    """
    k = len(qubits)
    dim = 1 << n
    full = np.zeros((dim, dim), dtype=complex)
    for col in range(dim):
        sub = 0
        for b, q in enumerate(qubits):
            sub |= ((col >> q) & 1) << b
        base = col
        for q in qubits:
            base &= ~(1 << q)
        for subrow in range(1 << k):
            row = base
            for b, q in enumerate(qubits):
                row |= ((subrow >> b) & 1) << q
            full[row, col] = u[subrow, sub]
    return full


def circuit_unitary(gates, n: int) -> np.ndarray:
    """Product of embedded gate matrices, application order left to right.

    gates: iterable of (matrix, qubit tuple).
    """
    acc = np.eye(1 << n, dtype=complex)
    for u, qubits in gates:
        acc = embed_gate(u, qubits, n) @ acc
    return acc


def dft_matrix(n_qubits: int) -> np.ndarray:
    """The unitary the QFT circuit must equal: F[j,k] = w^(jk)/sqrt(N)."""
    dim = 1 << n_qubits
    w = np.exp(2j * math.pi / dim)
    j, k = np.meshgrid(np.arange(dim), np.arange(dim), indexing="ij")
    return w ** (j * k) / math.sqrt(dim)


# -- measurement reference -------------------------------------------------------


def measure_ref(amps: np.ndarray, n: int, targets, rng) -> tuple[list, np.ndarray]:
    """Sequential conditional collapse, one rng.random() draw per target.

    Mirrors the documented sampling rule (outcome 1 iff draw < P(1)) against
    plain-index probability sums, so the engine and this reference consume
    identical RNG streams.
    """
    amps = amps.astype(complex).copy()
    outcomes = []
    for q in targets:
        p1 = sum(abs(amps[i]) ** 2 for i in range(len(amps)) if (i >> q) & 1)
        outcome = 1 if rng.random() < p1 else 0
        for i in range(len(amps)):
            if ((i >> q) & 1) != outcome:
                amps[i] = 0.0
        amps /= np.linalg.norm(amps)
        outcomes.append(outcome)
    return outcomes, amps


# -- analogue references ---------------------------------------------------------


def kron_site(op: np.ndarray, site: int, n: int) -> np.ndarray:
    """op on one site, identity elsewhere; site 0 = least significant bit."""
    acc = np.eye(1, dtype=complex)
    for q in range(n):
        factor = op if q == site else I2
        acc = np.kron(factor, acc)
    return acc


def kron_pair(op_i: np.ndarray, i: int, op_j: np.ndarray, j: int, n: int) -> np.ndarray:
    return kron_site(op_i, i, n) @ kron_site(op_j, j, n)


def hamiltonian_ref(n: int, mode: str, targets, omega: float, phi: float,
                    delta: float, coupling: np.ndarray) -> np.ndarray:
    """ISING or XY Hamiltonian, assembled operator by operator via kron."""
    dim = 1 << n
    ham = np.zeros((dim, dim), dtype=complex)
    for q in targets:
        drive = (omega / 2) * (math.cos(phi) * PAULI_X - math.sin(phi) * PAULI_Y)
        ham += kron_site(drive, q, n)
        ham -= delta * kron_site(NUM_OP, q, n)
    for i in range(n):
        for j in range(i + 1, n):
            if mode == "ising":
                ham += coupling[i, j] * kron_pair(NUM_OP, i, NUM_OP, j, n)
            else:
                hop = kron_pair(SIGMA_PLUS, i, SIGMA_MINUS, j, n)
                ham += coupling[i, j] * (hop + hop.conj().T)
    return ham


def coupling_ref(positions: np.ndarray, coeff: float, power: int) -> np.ndarray:
    n = len(positions)
    mat = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            r = float(np.linalg.norm(np.asarray(positions[i], dtype=float)
                                     - np.asarray(positions[j], dtype=float)))
            mat[i, j] = mat[j, i] = coeff / r**power
    return mat


def evolve_ref(state: np.ndarray, ham: np.ndarray, dt: float) -> np.ndarray:
    return expm(-1j * ham * dt) @ state


def pulse_segments_ref(duration: float, amplitude, phase, detuning):
    """(dt, omega[], phi[], delta[]) with segment values = endpoint means."""
    amplitude = np.asarray(amplitude, dtype=float)
    phase = np.asarray(phase, dtype=float)
    detuning = (np.zeros_like(amplitude) if detuning is None
                else np.asarray(detuning, dtype=float))
    dt = duration / (len(amplitude) - 1)
    mean = lambda a: 0.5 * (a[:-1] + a[1:])  # noqa: E731
    return dt, mean(amplitude), mean(phase), mean(detuning)


def rabi_ref(omega: float, t: float) -> float:
    """P(1) for resonant constant drive from |0>: the exact 2x2 model."""
    u = expm(-1j * (omega / 2) * PAULI_X * t)
    return float(abs(u[1, 0]) ** 2)


# -- graph reference -------------------------------------------------------------


def maxcut_bruteforce(edges, n: int) -> int:
    best = 0
    for mask in range(1 << n):
        cut = sum(1 for i, j in edges if ((mask >> i) & 1) != ((mask >> j) & 1))
        best = max(best, cut)
    return best
