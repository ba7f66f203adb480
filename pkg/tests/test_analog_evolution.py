"""Analogue-mode physics against matrix-exponential references.

Hamiltonian assembly and propagation are context-free functions, so most of
this file never touches the runtime. The last section drives the same physics
through kernels to cover the play/delay plumbing end to end.
"""

import math

import numpy as np
import pytest

import cq
from conftest import run_on_device
from cq.analog import AnalogMode, ChannelType
from cq.evolution import (
    ISING,
    XY,
    build_hamiltonian,
    drive_matrix,
    evolve_exact,
    evolve_segment,
    evolve_trotter,
)

from oracles import (
    PAULI_X,
    PAULI_Y,
    coupling_ref,
    evolve_ref,
    hamiltonian_ref,
    rabi_ref,
)


def _random_setup(rng, n):
    positions = rng.uniform(0, 20, size=(n, 3))
    while True:  # keep atoms apart so couplings stay moderate
        d = np.linalg.norm(positions[:, None] - positions[None, :], axis=-1)
        np.fill_diagonal(d, np.inf)
        if d.min() > 3.0:
            break
        positions = rng.uniform(0, 20, size=(n, 3))
    k = rng.integers(1, n + 1)
    targets = sorted(rng.choice(n, size=k, replace=False).tolist())
    omega = rng.uniform(-0.5, 0.5)
    phi = rng.uniform(0, 2 * math.pi)
    delta = rng.uniform(-0.5, 0.5)
    return positions, targets, omega, phi, delta


@pytest.mark.parametrize("mode,coeff,power", [(ISING, 5420.0, 6), (XY, 3.7, 3)])
def test_hamiltonian_matches_reference(mode, coeff, power):
    rng = np.random.default_rng(8)
    for _ in range(40):
        n = int(rng.integers(1, 5))
        positions, targets, omega, phi, delta = _random_setup(rng, n)
        coupling = coupling_ref(positions, coeff, power)
        ham = build_hamiltonian(n, mode, targets, omega, phi, delta, coupling)
        ref = hamiltonian_ref(n, "ising" if mode == ISING else "xy",
                              targets, omega, phi, delta, coupling)
        assert np.max(np.abs(ham - ref)) < 1e-12
        assert np.max(np.abs(ham - ham.conj().T)) < 1e-12


def test_drive_matrix_formula():
    for omega, phi in [(0.3, 0.0), (1.0, 1.2), (-0.4, 4.0)]:
        ref = (omega / 2) * (math.cos(phi) * PAULI_X - math.sin(phi) * PAULI_Y)
        assert np.allclose(drive_matrix(omega, phi), ref, atol=1e-15)


def test_evolve_exact_matches_expm():
    rng = np.random.default_rng(9)
    for _ in range(20):
        n = int(rng.integers(1, 4))
        positions, targets, omega, phi, delta = _random_setup(rng, n)
        coupling = coupling_ref(positions, 5420.0, 6)
        ham = build_hamiltonian(n, ISING, targets, omega, phi, delta, coupling)
        state = rng.normal(size=1 << n) + 1j * rng.normal(size=1 << n)
        state /= np.linalg.norm(state)
        dt = rng.uniform(0.1, 5.0)
        out = evolve_exact(state.copy(), ham, dt)
        ref = evolve_ref(state, ham, dt)
        assert np.max(np.abs(out - ref)) < 1e-10
        assert abs(np.linalg.norm(out) - 1) < 1e-10


@pytest.mark.parametrize("mode,coeff,power", [(ISING, 5420.0, 6), (XY, 3.7, 3)])
def test_trotter_converges_to_exact(mode, coeff, power):
    rng = np.random.default_rng(10)
    for _ in range(6):
        n = 3
        positions, targets, omega, phi, delta = _random_setup(rng, n)
        coupling = coupling_ref(positions, coeff, power)
        state = rng.normal(size=8) + 1j * rng.normal(size=8)
        state /= np.linalg.norm(state)
        ham = build_hamiltonian(n, mode, targets, omega, phi, delta, coupling)
        ref = evolve_ref(state, ham, 1.0)
        out = evolve_trotter(state.copy(), n, mode, targets, omega, phi, delta,
                             coupling, dt=1.0, step=0.002)
        assert np.max(np.abs(out - ref)) < 1e-5
        assert abs(np.linalg.norm(out) - 1) < 1e-8


def test_segment_dispatch_exact_vs_trotter():
    rng = np.random.default_rng(11)
    positions, targets, omega, phi, delta = _random_setup(rng, 2)
    coupling = coupling_ref(positions, 5420.0, 6)
    state = np.zeros(4, dtype=complex)
    state[0] = 1.0
    args = (2, ISING, targets, omega, phi, delta, coupling)
    exact = evolve_segment(state.copy(), *args, dt=2.0,
                           exact_max_qubits=10, trotter_step=0.1)
    trotter = evolve_segment(state.copy(), *args, dt=2.0,
                             exact_max_qubits=0, trotter_step=0.001)
    assert np.max(np.abs(exact - trotter)) < 1e-5
    same = evolve_segment(state.copy(), *args, dt=0.0,
                          exact_max_qubits=10, trotter_step=0.1)
    assert np.array_equal(same, state)


def test_detuning_only_is_a_phase():
    delta, t = 0.7, 2.3
    ham = build_hamiltonian(1, ISING, [0], 0.0, 0.0, delta, None)
    plus = np.array([1.0, 1.0], dtype=complex) / math.sqrt(2)
    out = evolve_exact(plus, ham, t)
    ratio = out[1] / out[0]
    assert abs(ratio - np.exp(1j * delta * t)) < 1e-12


def test_xy_conserves_excitation_number():
    rng = np.random.default_rng(12)
    positions, targets, omega, phi, delta = _random_setup(rng, 3)
    coupling = coupling_ref(positions, 3.7, 3)
    # drive off: the flip-flop term moves excitations without creating any
    ham = build_hamiltonian(3, XY, targets, 0.0, 0.0, delta, coupling)
    state = np.zeros(8, dtype=complex)
    state[0b011] = 1.0
    out = evolve_ref(state, ham, 4.0)
    for idx in range(8):
        if bin(idx).count("1") != 2:
            assert abs(out[idx]) < 1e-12
    assert abs(np.linalg.norm(out) - 1) < 1e-12


def test_modes_produce_different_dynamics():
    positions = np.array([[0, 0, 0], [4.0, 0, 0]])
    state = np.array([0.5, 0.5, 0.5, 0.5], dtype=complex)
    hi = build_hamiltonian(2, ISING, [0, 1], 0.1, 0.0, 0.0,
                           coupling_ref(positions, 5420.0, 6))
    hx = build_hamiltonian(2, XY, [0, 1], 0.1, 0.0, 0.0,
                           coupling_ref(positions, 3.7, 3))
    assert np.max(np.abs(evolve_ref(state, hi, 3.0)
                         - evolve_ref(state, hx, 3.0))) > 1e-3


# -- the same physics through the kernel API ---------------------------------------


def _constant_pulse(duration, value, detuning=None):
    p = cq.init_pulse(duration, nsamples=2)
    cq.waveform_fill(p, "custom", [value, value])
    if detuning is not None:
        cq.waveform_fill(p, "custom", [detuning, detuning], component="detuning")
    return p


def test_rabi_through_kernel():
    omega = 0.08
    for frac in (0.25, 0.5, 1.0, 1.7):
        t = frac * math.pi / omega

        def body(nqubits, qreg, t=t):
            cq.set_qureg(qreg, 0, nqubits)
            cq.enable_analog_qreg(qreg)
            ch = cq.get_channel(ChannelType.GLOBAL, qreg)
            p = _constant_pulse(t, omega)
            cq.play(ch, p)
            cq.free_pulse(p)
            return float(cq.probabilities(qreg)[1])

        p1, _ = run_on_device(body, analog=AnalogMode.ISING)
        assert abs(p1 - rabi_ref(omega, t)) < 1e-9


def test_blockade_suppresses_double_excitation():
    omega = 0.02  # far below the 4um interaction of ~1.32 rad/ns

    def body(nqubits, qreg):
        cq.set_qureg(qreg, 0, nqubits)
        cq.enable_analog_qreg(qreg)
        cq.set_qubit_pos([[0, 0, 0], [4.0, 0, 0]], qreg)
        ch = cq.get_channel(ChannelType.GLOBAL, qreg)
        # pi pulse at the sqrt(2)-enhanced collective Rabi frequency
        p = _constant_pulse(math.pi / (math.sqrt(2) * omega), omega)
        cq.play(ch, p)
        cq.free_pulse(p)
        return cq.probabilities(qreg).copy()

    probs, _ = run_on_device(body, nqubits=2, analog=AnalogMode.ISING)
    assert probs[3] < 0.05
    assert probs[1] + probs[2] > 0.9


def test_interaction_acts_during_delay():
    # |11> under ISING picks up phase exp(-i V t) with V = C6 / r^6
    def phase_at(r):
        def body(nqubits, qreg):
            cq.set_qureg(qreg, 3, nqubits)
            cq.enable_analog_qreg(qreg)
            cq.set_qubit_pos([[0, 0, 0], [r, 0, 0]], qreg)
            ch = cq.get_channel(ChannelType.GLOBAL, qreg)
            cq.delay(ch, 0.01)
            return cq.amplitudes(qreg).copy()

        amps, _ = run_on_device(body, nqubits=2, analog=AnalogMode.ISING)
        assert abs(abs(amps[3]) - 1) < 1e-12
        return -np.angle(amps[3])

    v4 = phase_at(4.0) / 0.01
    v2 = phase_at(2.0) / 0.01
    assert v4 == pytest.approx(5420.0 / 4.0**6, rel=1e-9)
    assert v2 / v4 == pytest.approx(64.0, rel=1e-9)


def test_xy_swap_through_kernel():
    r = 2.0
    j = 3.7 / r**3

    def body(nqubits, qreg):
        cq.set_qureg(qreg, 1, nqubits)  # excitation on qubit 0
        cq.enable_analog_qreg(qreg)
        cq.set_qubit_pos([[0, 0, 0], [r, 0, 0]], qreg)
        ch = cq.get_channel(ChannelType.GLOBAL, qreg)
        cq.delay(ch, math.pi / (2 * j))
        return cq.probabilities(qreg).copy()

    probs, _ = run_on_device(body, nqubits=2, analog=AnalogMode.XY)
    assert probs[2] == pytest.approx(1.0, abs=1e-9)  # moved to qubit 1


def test_equal_segments_merge_losslessly():
    # a 6-sample constant pulse collapses to one segment internally; the
    # result must match the 2-sample version bit for bit
    def body_for(nsamples):
        def body(nqubits, qreg):
            cq.set_qureg(qreg, 0, nqubits)
            cq.enable_analog_qreg(qreg)
            ch = cq.get_channel(ChannelType.GLOBAL, qreg)
            p = cq.init_pulse(20.0, nsamples=nsamples)
            cq.waveform_fill(p, "custom", [0.11] * nsamples)
            cq.play(ch, p)
            cq.free_pulse(p)
            return cq.amplitudes(qreg).copy()
        return body

    a, _ = run_on_device(body_for(2), nqubits=2, analog=AnalogMode.ISING)
    b, _ = run_on_device(body_for(6), nqubits=2, analog=AnalogMode.ISING)
    assert np.array_equal(a, b)


def test_random_programs_match_expm():
    """Sequential play/delay programs vs a straight matrix-exponential replay."""
    rng = np.random.default_rng(13)
    for trial in range(30):
        n = int(rng.integers(1, 4))
        mode = AnalogMode(int(rng.integers(0, 2)))
        coeff, power = (5420.0, 6) if mode == AnalogMode.ISING else (3.7, 3)
        positions, _, _, _, _ = _random_setup(rng, n)
        ops = []
        for _ in range(int(rng.integers(1, 5))):
            if rng.random() < 0.3:
                ops.append(("delay", float(rng.uniform(0, 3.0))))
            else:
                nsamples = int(rng.integers(2, 6))
                ops.append((
                    "play",
                    "local" if (n > 1 and rng.random() < 0.4) else "global",
                    int(rng.integers(0, n)),
                    float(rng.uniform(0.5, 4.0)),
                    rng.uniform(-0.4, 0.4, nsamples).tolist(),
                    rng.uniform(0, 2 * math.pi, nsamples).tolist(),
                    rng.uniform(-0.3, 0.3, nsamples).tolist(),
                ))

        def body(nqubits, qreg, ops=ops, positions=positions):
            cq.set_qureg(qreg, 0, nqubits)
            cq.enable_analog_qreg(qreg)
            cq.set_qubit_pos(positions, qreg)
            chans = {"global": cq.get_channel(ChannelType.GLOBAL, qreg)}
            for op in ops:
                if op[0] == "delay":
                    cq.delay(chans["global"], op[1])
                    continue
                _, kind, target, duration, amp, phase, det = op
                if kind == "local" and kind not in chans:
                    chans["local"] = cq.get_channel(
                        ChannelType.LOCAL, qreg, target=qreg[target])
                ch = chans[kind]
                if kind == "local":
                    cq.retarget_channel(ch, qreg[target])
                p = cq.init_pulse(duration, nsamples=len(amp))
                cq.waveform_fill(p, "custom", amp)
                cq.waveform_fill(p, "custom", phase, component="phase")
                cq.waveform_fill(p, "custom", det, component="detuning")
                cq.play(ch, p)
                cq.free_pulse(p)
            return cq.amplitudes(qreg).copy()

        amps, _ = run_on_device(body, nqubits=n, analog=mode)

        # replay with the oracle
        coupling = coupling_ref(positions, coeff, power)
        mode_str = "ising" if mode == AnalogMode.ISING else "xy"
        state = np.zeros(1 << n, dtype=complex)
        state[0] = 1.0
        for op in ops:
            if op[0] == "delay":
                ham = hamiltonian_ref(n, mode_str, [], 0.0, 0.0, 0.0, coupling)
                state = evolve_ref(state, ham, op[1])
                continue
            _, kind, target, duration, amp, phase, det = op
            targets = list(range(n)) if kind == "global" else [target]
            dt = duration / (len(amp) - 1)
            for k in range(len(amp) - 1):
                ham = hamiltonian_ref(
                    n, mode_str, targets,
                    0.5 * (amp[k] + amp[k + 1]),
                    0.5 * (phase[k] + phase[k + 1]),
                    0.5 * (det[k] + det[k + 1]),
                    coupling,
                )
                state = evolve_ref(state, ham, dt)

        assert np.max(np.abs(amps - state)) < 1e-6, f"trial {trial}"
