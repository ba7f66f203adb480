"""Pulse-level analogue extension: modes, channels, pulses and evolution ops.

Units are ns for time, rad/ns for angular quantities (amplitude, detuning)
and micrometres for positions. A pulse stores nsamples >= 2 sample points;
sample k sits at time k * duration / (nsamples - 1) and the evolution treats
every quantity as piecewise-constant between neighbouring samples, at the
mean of the two endpoint values.

Time model: plays and delays evolve the register sequentially in call order,
and the register's interaction terms are always on; the drive and detuning
of a play act only on the channel's targets. Channel clocks are per-channel
bookkeeping; barrier aligns them by issuing the implicit catch-up delays.
Overlapping un-barriered plays on different channels are not composed into a
simultaneous drive, they simply execute one after the other.

Channels are kernel-scoped: the device releases any channel a shot created
when that shot ends.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum
from typing import Sequence

import numpy as np

from . import _context, core
from .errors import (
    ChannelLimitError,
    CoincidentQubitsError,
    EmptyChannelListError,
    GlobalChannelError,
    InvalidHandleError,
    InvalidPulseError,
    MissingTargetError,
    MixedRegistersError,
    ModeNotEnabledError,
    NegativeDelayError,
    NonPositiveDurationError,
    ShotsZeroError,
    SizeMismatchError,
    TargetOutOfRegisterError,
    UnknownModeError,
)
from .evolution import ISING, XY, evolve_segment
from .handles import QubitHandle
from .waveforms import waveform_samples

DEFAULT_SPACING_UM = 10.0


class AnalogMode(IntEnum):
    ISING = ISING
    XY = XY


class ChannelType(IntEnum):
    GLOBAL = 0
    LOCAL = 1


@dataclass
class Channel:
    """A drive line on one register: GLOBAL hits every qubit, LOCAL one."""

    addressing: ChannelType
    registry_index: int
    target_offset: int | None = None
    clock: float = 0.0
    alive: bool = True


class Pulse:
    """Sampled drive envelope: amplitude and phase, plus optional detuning."""

    def __init__(self, duration: float, nsamples: int):
        self.duration = float(duration)
        self.nsamples = int(nsamples)
        self.amplitude = np.zeros(self.nsamples)
        self.phase = np.zeros(self.nsamples)
        self.detuning: np.ndarray | None = None
        self.alive = True

    def sample_times(self) -> np.ndarray:
        return np.linspace(0.0, self.duration, self.nsamples)

    def segment_values(self) -> tuple[float, np.ndarray, np.ndarray, np.ndarray]:
        """(dt, omega[], phi[], delta[]) for the piecewise-constant segments."""
        dt = self.duration / (self.nsamples - 1)
        mid = lambda a: 0.5 * (a[:-1] + a[1:])  # noqa: E731
        det = self.detuning if self.detuning is not None else np.zeros(self.nsamples)
        return dt, mid(self.amplitude), mid(self.phase), mid(det)


def init_pulse(duration: float, nsamples: int | None = None) -> Pulse:
    """Create a zero-filled pulse. Context-free: usable on host or device."""
    if not isinstance(duration, (int, float)) or not duration > 0:
        raise NonPositiveDurationError(f"duration must be > 0 ns, got {duration!r}")
    if nsamples is None:
        nsamples = (core._env.cfg.device.default_nsamples
                    if core._env is not None else 64)
    if not isinstance(nsamples, int) or isinstance(nsamples, bool) or nsamples < 2:
        raise InvalidPulseError(f"nsamples must be an int >= 2, got {nsamples!r}")
    return Pulse(duration, nsamples)


def free_pulse(p: Pulse) -> None:
    """Invalidate a pulse; further use (or a second free) is an error."""
    _check_pulse(p)
    p.alive = False


def resample_pulse(p: Pulse, nsamples: int) -> None:
    """Re-grid the pulse in place, linearly interpolating existing samples."""
    _check_pulse(p)
    if not isinstance(nsamples, int) or isinstance(nsamples, bool) or nsamples < 2:
        raise InvalidPulseError(f"nsamples must be an int >= 2, got {nsamples!r}")
    old = np.linspace(0.0, 1.0, p.nsamples)
    new = np.linspace(0.0, 1.0, nsamples)
    p.amplitude = np.interp(new, old, p.amplitude)
    p.phase = np.interp(new, old, p.phase)
    if p.detuning is not None:
        p.detuning = np.interp(new, old, p.detuning)
    p.nsamples = nsamples


def _check_pulse(p: Pulse) -> Pulse:
    if not isinstance(p, Pulse) or not p.alive:
        raise InvalidPulseError(f"pulse is freed or not a pulse: {p!r}")
    return p


_COMPONENTS = ("amplitude", "phase", "detuning")


def waveform_fill(p: Pulse, kind: str, *params, component: str = "amplitude") -> None:
    """Fill one pulse component (amplitude by default) with a waveform."""
    _check_pulse(p)
    if component not in _COMPONENTS:
        raise InvalidPulseError(
            f"component must be one of {_COMPONENTS}, got {component!r}"
        )
    samples = waveform_samples(kind, p.nsamples, p.duration, *params)
    setattr(p, component, samples)


# -- mode and register enablement ----------------------------------------------


def enable_analog_mode(mode, backend: int = 0) -> None:
    """Select the analogue Hamiltonian family on a backend (host operation).

    May be called again to replace the mode; the latest call wins.
    """
    _context.require_host("enable_analog_mode")
    env = core.current_env()
    try:
        mode = AnalogMode(mode)
    except ValueError:
        raise UnknownModeError(f"unknown analogue mode {mode!r}") from None
    dev = env.device_for(backend)
    from .device import ControlOp, OpCode

    dev.enqueue(ControlOp(OpCode.SET_ANALOG_MODE, mode))


def _device_register(qr):
    ctx = _context.require_device()
    if not isinstance(qr, QubitHandle):
        raise InvalidHandleError(f"not a qubit handle: {qr!r}")
    return ctx, ctx.device.register_state(qr.registry_index)


def enable_analog_qreg(qr) -> None:
    """Mark a register analogue-capable under the device's current mode."""
    ctx, state = _device_register(qr)
    if ctx.device.analog_mode is None:
        raise ModeNotEnabledError("no analogue mode enabled on this device")
    state.analog_enabled = True
    if state.positions is None:
        chain = np.zeros((state.nqubits, 3))
        chain[:, 0] = DEFAULT_SPACING_UM * np.arange(state.nqubits)
        state.set_positions(chain)


def disable_analog_qreg(qr) -> None:
    """Leave analogue operation; channels on the register are invalidated."""
    ctx, state = _device_register(qr)
    state.analog_enabled = False
    for ch in state.channels:
        ch.alive = False
    state.channels.clear()


def set_qubit_pos(positions, qr) -> None:
    """Place the register's qubits; flat [x0 y0 z0 x1 ...] or (n, 3), in um."""
    ctx, state = _device_register(qr)
    pos = np.asarray(positions, dtype=float)
    if pos.size != 3 * state.nqubits:
        raise SizeMismatchError(
            f"need {3 * state.nqubits} coordinates for {state.nqubits} qubit(s), "
            f"got {pos.size}"
        )
    pos = pos.reshape(state.nqubits, 3)
    for i in range(state.nqubits):
        for j in range(i + 1, state.nqubits):
            if np.allclose(pos[i], pos[j], atol=1e-12):
                raise CoincidentQubitsError(f"qubits {i} and {j} share a position")
    state.set_positions(pos)


def _coupling(device, state, mode: AnalogMode) -> np.ndarray:
    key = (int(mode), state.positions_version)
    cached = state._couplings.get(key)
    if cached is not None:
        return cached
    n = state.nqubits
    mat = np.zeros((n, n))
    coeff = device.cfg.device.c6 if mode == AnalogMode.ISING else device.cfg.device.c3
    power = 6 if mode == AnalogMode.ISING else 3
    for i in range(n):
        for j in range(i + 1, n):
            r = float(np.linalg.norm(state.positions[i] - state.positions[j]))
            mat[i, j] = mat[j, i] = coeff / r**power
    state._couplings[key] = mat
    return mat


# -- channels -------------------------------------------------------------------


def get_channel(ctype, qr, target=None) -> Channel:
    """Open a drive channel on a register; LOCAL channels need a target."""
    ctx, state = _device_register(qr)
    if not state.analog_enabled:
        raise ModeNotEnabledError("register is not analogue-enabled")
    try:
        ctype = ChannelType(ctype)
    except ValueError:
        raise UnknownModeError(f"unknown channel type {ctype!r}") from None
    target_offset = None
    if ctype == ChannelType.LOCAL:
        if target is None:
            raise MissingTargetError("LOCAL channel needs a target qubit")
        if not isinstance(target, QubitHandle) or target.n != 1:
            raise InvalidHandleError(f"target must be a single-qubit handle: {target!r}")
        if target.registry_index != qr.registry_index \
                or not 0 <= target.offset < state.nqubits:
            raise TargetOutOfRegisterError(
                "LOCAL target must belong to the channel's register"
            )
        target_offset = target.offset
    elif target is not None:
        raise ValueError("GLOBAL channels take no target")
    if len(state.channels) >= ctx.device.cfg.device.max_channels:
        raise ChannelLimitError(
            f"register already holds {len(state.channels)} channel(s) "
            f"(limit {ctx.device.cfg.device.max_channels})"
        )
    ch = Channel(addressing=ctype, registry_index=qr.registry_index,
                 target_offset=target_offset)
    state.channels.append(ch)
    ctx.channels.append(ch)
    return ch


def retarget_channel(ch: Channel, target) -> None:
    """Point a LOCAL channel at another qubit of its register."""
    ctx = _context.require_device()
    _check_channel(ctx, ch)
    if ch.addressing == ChannelType.GLOBAL:
        raise GlobalChannelError("GLOBAL channels cannot be retargeted")
    state = ctx.device.register_state(ch.registry_index)
    if not isinstance(target, QubitHandle) or target.n != 1 \
            or target.registry_index != ch.registry_index \
            or not 0 <= target.offset < state.nqubits:
        raise TargetOutOfRegisterError(
            "retarget needs a single-qubit handle inside the channel's register"
        )
    ch.target_offset = target.offset


def _check_channel(ctx, ch) -> Channel:
    if not isinstance(ch, Channel) or not ch.alive:
        raise ModeNotEnabledError(f"channel is closed or not a channel: {ch!r}")
    return ch


def _targets(state, ch: Channel) -> list[int]:
    if ch.addressing == ChannelType.GLOBAL:
        return list(range(state.nqubits))
    return [ch.target_offset]


# -- evolution ops ---------------------------------------------------------------


def _evolve(device, state, mode: AnalogMode, targets: Sequence[int],
            segments) -> None:
    cfg = device.cfg
    coupling = _coupling(device, state, mode)
    amp = state.sim.amp
    dt, omegas, phis, deltas = segments
    k = 0
    nseg = len(omegas)
    while k < nseg:
        # merge runs of identical segment values into one longer segment
        j = k + 1
        while j < nseg and omegas[j] == omegas[k] and phis[j] == phis[k] \
                and deltas[j] == deltas[k]:
            j += 1
        amp = evolve_segment(
            amp, state.nqubits, int(mode), targets,
            float(omegas[k]), float(phis[k]), float(deltas[k]), coupling,
            dt * (j - k), cfg.exact_evolution_max_qubits,
            cfg.device.trotter_step_ns,
        )
        k = j
    state.sim.amp = amp


def _play_common(ch: Channel, p: Pulse):
    ctx = _context.require_device()
    _check_channel(ctx, ch)
    _check_pulse(p)
    device = ctx.device
    if device.analog_mode is None:
        raise ModeNotEnabledError("no analogue mode enabled on this device")
    state = device.register_state(ch.registry_index)
    if not state.analog_enabled:
        raise ModeNotEnabledError("register is not analogue-enabled")
    return ctx, device, state


def play(ch: Channel, p: Pulse) -> None:
    """Drive the channel's targets with the pulse and advance its clock."""
    ctx, device, state = _play_common(ch, p)
    _evolve(device, state, device.analog_mode, _targets(state, ch),
            p.segment_values())
    ch.clock += p.duration


def capture(ch: Channel, p: Pulse, shots: int) -> np.ndarray:
    """Play the pulse, then sample the channel's targets without collapsing.

    Returns a flat int16 array, shot-major, one entry per targeted qubit.
    """
    if not isinstance(shots, int) or isinstance(shots, bool) or shots < 1:
        raise ShotsZeroError(f"capture needs shots >= 1, got {shots!r}")
    ctx, device, state = _play_common(ch, p)
    targets = _targets(state, ch)
    _evolve(device, state, device.analog_mode, targets, p.segment_values())
    ch.clock += p.duration
    return state.sim.sample(targets, shots)


def delay(ch: Channel, dt: float) -> None:
    """Idle the channel: free evolution under the interaction terms alone."""
    ctx = _context.require_device()
    _check_channel(ctx, ch)
    if not isinstance(dt, (int, float)) or dt < 0:
        raise NegativeDelayError(f"delay must be >= 0 ns, got {dt!r}")
    device = ctx.device
    if device.analog_mode is None:
        raise ModeNotEnabledError("no analogue mode enabled on this device")
    state = device.register_state(ch.registry_index)
    if not state.analog_enabled:
        raise ModeNotEnabledError("register is not analogue-enabled")
    if dt > 0:
        _evolve(device, state, device.analog_mode, _targets(state, ch),
                (float(dt), np.zeros(1), np.zeros(1), np.zeros(1)))
    ch.clock += dt


def barrier(channels: Sequence[Channel]) -> None:
    """Align channel clocks to their maximum via implicit catch-up delays."""
    ctx = _context.require_device()
    if not channels:
        raise EmptyChannelListError("barrier needs at least one channel")
    for ch in channels:
        _check_channel(ctx, ch)
    indices = {ch.registry_index for ch in channels}
    if len(indices) != 1:
        raise MixedRegistersError("barrier channels must share one register")
    top = max(ch.clock for ch in channels)
    for ch in channels:
        gap = top - ch.clock
        if gap > 0:
            delay(ch, gap)
        ch.clock = top
