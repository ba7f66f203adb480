"""Stock quantum kernels: QFT, Bell pair and friends.

The circuit bodies are plain device routines so user kernels can reuse them;
the decorated entry points below just add state preparation and measurement.
The KERNELS table maps entry-point names to kernel objects for hosts that
look kernels up by string (the foreign-binding shim does).
"""

import math

from .analog import (
    ChannelType,
    capture,
    enable_analog_qreg,
    free_pulse,
    get_channel,
    init_pulse,
    play,
    set_qubit_pos,
    waveform_fill,
)
from .core import pqkern, qkern
from .gates import cphase, cx, hadamard, swap
from .measurement import measure_qureg, probabilities, set_qureg


def full_qft_circuit(qr, nqubits: int) -> None:
    """Quantum Fourier transform on qr[0..nqubits), qubit 0 least significant.

    Controlled-phase ladder from the top qubit down, then a swap network to
    restore ascending bit order.
    """
    for j in range(nqubits - 1, -1, -1):
        hadamard(qr[j])
        for k in range(j - 1, -1, -1):
            cphase(qr[k], qr[j], math.pi / 2 ** (j - k))
    for i in range(nqubits // 2):
        swap(qr[i], qr[nqubits - 1 - i])


@qkern
def zero_init_full_qft(nqubits, qreg, creg):
    set_qureg(qreg, 0, nqubits)
    full_qft_circuit(qreg, nqubits)
    measure_qureg(qreg, nqubits)
    return 0


@qkern
def bell_pair(nqubits, qreg, creg):
    """Prepare (|00> + |11>)/sqrt(2) on the first two qubits, measure both."""
    set_qureg(qreg, 0, nqubits)
    hadamard(qreg[0])
    cx(qreg[0], qreg[1])
    measure_qureg(qreg, nqubits)
    return 0


@qkern
def ground_state(nqubits, qreg, creg):
    set_qureg(qreg, 0, nqubits)
    measure_qureg(qreg, nqubits)
    return 0


@pqkern
def phased_qft(nqubits, qreg, creg, params):
    """QFT preceded by per-qubit phase rotations taken from the param pack."""
    set_qureg(qreg, 0, nqubits)
    for i in range(nqubits):
        hadamard(qreg[i])
        cphase(qreg[i], qreg[(i + 1) % nqubits], float(params[i % len(params)]))
    full_qft_circuit(qreg, nqubits)
    measure_qureg(qreg, nqubits)
    return 0


@pqkern
def rabi_point(nqubits, qreg, creg, params):
    """Constant drive for params["t"] ns, P(1) appended to params["out"].

    One point of a Rabi flop. Run with nmeasure = 0; the probability is a
    simulator diagnostic, not a sampled outcome.
    """
    set_qureg(qreg, 0, nqubits)
    enable_analog_qreg(qreg)
    ch = get_channel(ChannelType.GLOBAL, qreg)
    t = float(params["t"])
    if t > 0:
        omega = float(params["omega"])
        p = init_pulse(t, 2)
        waveform_fill(p, "custom", [omega, omega])
        play(ch, p)
        free_pulse(p)
    params["out"].append(float(probabilities(qreg)[1]))
    return 0


@pqkern
def anneal_capture(nqubits, qreg, creg, params):
    """Annealing schedule on a placed register, captured bit patterns out.

    Blackman drive envelope peaking at params["omega"], detuning ramped
    linearly from params["delta0"] to params["delta1"] over
    params["duration"] ns. Captures params["shots"] samples of every qubit
    into params["out"] without collapsing the state.
    """
    set_qureg(qreg, 0, nqubits)
    enable_analog_qreg(qreg)
    set_qubit_pos(params["positions"], qreg)
    ch = get_channel(ChannelType.GLOBAL, qreg)
    p = init_pulse(float(params["duration"]), params.get("nsamples"))
    waveform_fill(p, "blackman", float(params["omega"]))
    waveform_fill(p, "interpolated",
                  [float(params["delta0"]), float(params["delta1"])],
                  component="detuning")
    params["out"].append(capture(ch, p, int(params["shots"])))
    free_pulse(p)
    return 0


KERNELS = {
    "zero_init_full_qft": zero_init_full_qft,
    "bell_pair": bell_pair,
    "ground_state": ground_state,
    "phased_qft": phased_qft,
    "rabi_point": rabi_point,
    "anneal_capture": anneal_capture,
}
