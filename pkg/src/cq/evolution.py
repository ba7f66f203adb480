"""Hamiltonian construction and time evolution for the analogue modes.

Both modes share the drive and detuning terms on the driven qubits:

    H_drive = sum_i  Omega/2 * (cos(phi) X_i - sin(phi) Y_i)  -  delta * n_i

ISING adds a diagonal pair term  sum_{i<j} V_ij n_i n_j  with V_ij = C6/r^6;
XY adds the flip-flop term  sum_{i<j} J_ij (s+_i s-_j + s-_i s+_j)  with
J_ij = C3/r^3. n = |1><1|. Matrices are built with index-bit arithmetic (the
test oracle builds its own via Kronecker products).

Evolution over a piecewise-constant segment is exact through an eigenbasis
propagator up to a configurable register size, and second-order symmetric
Trotter above it.
"""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np

from .sim import apply_matrix

ISING = 0
XY = 1


def drive_matrix(omega: float, phi: float) -> np.ndarray:
    return 0.5 * omega * np.array(
        [[0.0, math.cos(phi) + 1j * math.sin(phi)],
         [math.cos(phi) - 1j * math.sin(phi), 0.0]],
        dtype=complex,
    )


def _bits(n: int) -> np.ndarray:
    return (np.arange(1 << n)[:, None] >> np.arange(n)) & 1


def diagonal_terms(n: int, mode: int, targets: Sequence[int], delta: float,
                   coupling: np.ndarray) -> np.ndarray:
    """Diagonal of H: detuning on the driven qubits plus ISING interactions."""
    bits = _bits(n)
    diag = np.zeros(1 << n)
    if mode == ISING and coupling is not None:
        diag += 0.5 * np.einsum("si,ij,sj->s", bits, coupling, bits)
    if delta != 0.0 and targets:
        diag -= delta * bits[:, list(targets)].sum(axis=1)
    return diag


def build_hamiltonian(n: int, mode: int, targets: Sequence[int], omega: float,
                      phi: float, delta: float, coupling: np.ndarray) -> np.ndarray:
    """Dense 2^n x 2^n Hamiltonian for one piecewise-constant segment."""
    dim = 1 << n
    ham = np.diag(diagonal_terms(n, mode, targets, delta, coupling)).astype(complex)
    if omega != 0.0:
        d = drive_matrix(omega, phi)
        idx = np.arange(dim)
        for i in targets:
            s0 = idx[(idx >> i) & 1 == 0]
            s1 = s0 + (1 << i)
            ham[s0, s1] += d[0, 1]
            ham[s1, s0] += d[1, 0]
    if mode == XY and coupling is not None:
        idx = np.arange(dim)
        for i in range(n):
            for j in range(i + 1, n):
                strength = coupling[i, j]
                if strength == 0.0:
                    continue
                s10 = idx[((idx >> i) & 1 == 1) & ((idx >> j) & 1 == 0)]
                s01 = s10 - (1 << i) + (1 << j)
                ham[s01, s10] += strength
                ham[s10, s01] += strength
    return ham


def evolve_exact(state: np.ndarray, ham: np.ndarray, dt: float) -> np.ndarray:
    """Propagate by exp(-i H dt) through the eigenbasis of H."""
    if not np.any(ham):
        return state
    w, v = np.linalg.eigh(ham)
    return v @ (np.exp(-1j * w * dt) * (v.conj().T @ state))


def _term_list(n: int, mode: int, targets: Sequence[int], omega: float,
               phi: float, delta: float, coupling: np.ndarray) -> list:
    """Split H into cheaply exponentiated terms for Trotterisation."""
    terms: list = []
    diag = diagonal_terms(n, mode, targets, delta, coupling)
    if np.any(diag):
        terms.append(("diag", diag))
    if omega != 0.0:
        d = drive_matrix(omega, phi)
        for i in targets:
            terms.append(("mat", d, (i,)))
    if mode == XY and coupling is not None:
        flip = np.zeros((4, 4), dtype=complex)
        for i in range(n):
            for j in range(i + 1, n):
                strength = coupling[i, j]
                if strength == 0.0:
                    continue
                pair = flip.copy()
                pair[1, 2] = pair[2, 1] = strength
                terms.append(("mat", pair, (i, j)))
    return terms


def _apply_term(state: np.ndarray, term, dt: float) -> np.ndarray:
    kind = term[0]
    if kind == "diag":
        return state * np.exp(-1j * term[1] * dt)
    _, mat, qubits = term
    w, v = np.linalg.eigh(mat)
    small = v @ np.diag(np.exp(-1j * w * dt)) @ v.conj().T
    return apply_matrix(state, small, list(qubits))


def evolve_trotter(state: np.ndarray, n: int, mode: int, targets: Sequence[int],
                   omega: float, phi: float, delta: float, coupling: np.ndarray,
                   dt: float, step: float) -> np.ndarray:
    """Second-order symmetric Trotter evolution for large registers."""
    terms = _term_list(n, mode, targets, omega, phi, delta, coupling)
    if not terms:
        return state
    nsub = max(1, math.ceil(dt / step))
    h = dt / nsub
    for _ in range(nsub):
        for term in terms:
            state = _apply_term(state, term, h / 2.0)
        for term in reversed(terms):
            state = _apply_term(state, term, h / 2.0)
    return state


def evolve_segment(state: np.ndarray, n: int, mode: int, targets: Sequence[int],
                   omega: float, phi: float, delta: float, coupling: np.ndarray,
                   dt: float, exact_max_qubits: int, trotter_step: float) -> np.ndarray:
    if dt == 0.0:
        return state
    if n <= exact_max_qubits:
        ham = build_hamiltonian(n, mode, targets, omega, phi, delta, coupling)
        return evolve_exact(state, ham, dt)
    return evolve_trotter(state, n, mode, targets, omega, phi, delta, coupling,
                          dt, trotter_step)
