"""State preparation, measurement and simulator diagnostics (device-only).

measure-family calls are synchronised: outcomes land in the shot's staging
buffer in call order and are copied to the host result buffer at the next
synchronisation point. dmeasure-family calls record to a device-local log
only and never count against nmeasure. Both collapse the state; capture in
the analogue extension is the only sampling path that does not.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from . import _context
from .device import MeasurementRecord
from .errors import (
    DuplicateTargetError,
    InvalidCStateError,
    InvalidHandleError,
    SizeMismatchError,
    StateOutOfRangeError,
    TargetOutOfRangeError,
)
from .handles import QubitHandle


def _resolve(qr):
    ctx = _context.require_device()
    if not isinstance(qr, QubitHandle):
        raise InvalidHandleError(f"not a qubit handle: {qr!r}")
    state = ctx.device.register_state(qr.registry_index)
    if qr.offset + qr.n > state.nqubits:
        raise InvalidHandleError("handle extends past its register")
    return ctx, state


def _check_targets(qr, targets: Sequence[int]) -> list[int]:
    out = []
    for t in targets:
        if not isinstance(t, int) or isinstance(t, bool) or not 0 <= t < qr.n:
            raise TargetOutOfRangeError(
                f"target {t!r} outside the {qr.n}-qubit handle"
            )
        out.append(qr.offset + t)
    if len(set(out)) != len(out):
        raise DuplicateTargetError(f"duplicate measurement target in {targets}")
    return out


def set_qubit(q, value: int) -> None:
    """Force one qubit to |value>. On entangled states this measures first
    and flips when the outcome disagrees, so it consumes one RNG draw."""
    ctx, state = _resolve(q)
    if q.n != 1:
        raise SizeMismatchError(f"set_qubit takes a single qubit, got n={q.n}")
    if not isinstance(value, int) or isinstance(value, bool) or value not in (0, 1):
        raise InvalidCStateError(f"cstate must be 0 or 1, got {value!r}")
    state.sim.set_qubit(q.offset, value)


def set_qureg(qr, state_index: int, nqubits: int) -> None:
    """Prepare the register in the computational basis state *state_index*."""
    ctx, state = _resolve(qr)
    if nqubits != qr.n:
        raise SizeMismatchError(f"nqubits={nqubits} but handle spans {qr.n}")
    if not isinstance(state_index, int) or isinstance(state_index, bool) \
            or not 0 <= state_index < 2**nqubits:
        raise StateOutOfRangeError(
            f"state {state_index!r} does not fit in {nqubits} qubit(s)"
        )
    if qr.offset == 0 and qr.n == state.nqubits:
        state.sim.set_basis_state(state_index)
    else:
        # a view inside a larger register: reset qubit by qubit
        for i in range(qr.n):
            state.sim.set_qubit(qr.offset + i, (state_index >> i) & 1)


def set_qureg_cstate(qr, values: Sequence[int], nqubits: int) -> None:
    """Prepare the register from per-qubit classical values (qubit i gets
    values[i])."""
    ctx, state = _resolve(qr)
    if nqubits != qr.n or len(values) != nqubits:
        raise SizeMismatchError(
            f"expected {qr.n} values for this handle, got {len(values)}"
        )
    index = 0
    for i, v in enumerate(values):
        if not isinstance(v, (int, np.integer)) or isinstance(v, bool) \
                or v not in (0, 1):
            raise InvalidCStateError(f"cstate must be 0 or 1, got {v!r}")
        index |= int(v) << i
    set_qureg(qr, index, nqubits)


def _measure(qr, nqubits: int, targets: Sequence[int], synchronised: bool) -> list[int]:
    ctx, state = _resolve(qr)
    if nqubits != qr.n:
        raise SizeMismatchError(f"nqubits={nqubits} but handle spans {qr.n}")
    offsets = _check_targets(qr, targets)
    outcomes = []
    for t, off in zip(targets, offsets):
        outcome = state.sim.measure_one(off)
        if synchronised:
            ctx.staging.push(outcome)
        ctx.device.log_measurement(MeasurementRecord(
            outcome=outcome, registry_index=qr.registry_index, qubit=off,
            synchronised=synchronised, shot=ctx.shot,
        ))
        outcomes.append(outcome)
    return outcomes


def measure(qr, nqubits: int, targets: Sequence[int]) -> list[int]:
    """Measure targets in order; outcomes are synchronised to the host."""
    return _measure(qr, nqubits, targets, synchronised=True)


def measure_qubit(q) -> int:
    """Measure a single qubit (synchronised)."""
    if isinstance(q, QubitHandle) and q.n != 1:
        raise SizeMismatchError(f"measure_qubit takes a single qubit, got n={q.n}")
    return _measure(q, 1, [0], synchronised=True)[0]


def measure_qureg(qr, nqubits: int) -> list[int]:
    """Measure every qubit of the register in order (synchronised)."""
    return _measure(qr, nqubits, list(range(qr.n if isinstance(qr, QubitHandle) else 0)),
                    synchronised=True)


def dmeasure(qr, nqubits: int, targets: Sequence[int]) -> list[int]:
    """Measure targets, recording device-locally only (not synchronised)."""
    return _measure(qr, nqubits, targets, synchronised=False)


def dmeasure_qubit(q) -> int:
    """Device-local single-qubit measurement."""
    if isinstance(q, QubitHandle) and q.n != 1:
        raise SizeMismatchError(f"dmeasure_qubit takes a single qubit, got n={q.n}")
    return _measure(q, 1, [0], synchronised=False)[0]


def dmeasure_qureg(qr, nqubits: int) -> list[int]:
    """Device-local measurement of the whole register."""
    return _measure(qr, nqubits, list(range(qr.n if isinstance(qr, QubitHandle) else 0)),
                    synchronised=False)


# -- simulator diagnostics ----------------------------------------------------


def probabilities(qr) -> np.ndarray:
    """Joint outcome distribution over the handle's qubits, little-endian.

    Simulator privilege: reads amplitudes without collapsing. Useful for
    exact checks where sampling noise would swamp the quantity of interest.
    """
    ctx, state = _resolve(qr)
    return state.sim.probabilities([qr.offset + i for i in range(qr.n)])


def amplitudes(qr) -> np.ndarray:
    """Copy of the full statevector backing this handle's register."""
    ctx, state = _resolve(qr)
    return state.sim.amp.copy()
